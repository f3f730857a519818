"""Sets of k-spaces pairwise meeting in exactly a point: verification,
sunflowers, and the rich/poor point and line structure of a SCID."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations

from . import bounds
from .errors import ParamError, ScidForgeError
from .geom import (Subspace, enumerate_subspaces, meet, point_mask, points_of,
                   subspace_from_rows, subspaces_of, theta)
from .gf import FieldCtx, field_from_dict


class MixedParameters(ParamError):
    pass


class NotVerified(ScidForgeError):
    pass


class InvalidScid(ScidForgeError):
    pass


class CannotPlace(ScidForgeError):
    pass


class IsSunflower(ScidForgeError):
    pass


class LemmaInconsistency(ScidForgeError):
    """A proven counting bound failed on a concrete SCID: an implementation bug."""


@dataclass(frozen=True)
class Scid:
    ctx: FieldCtx
    n: int
    k: int
    blocks: tuple[Subspace, ...]
    verified: bool = False

    def __len__(self):
        return len(self.blocks)


def make_scid(ctx: FieldCtx, n: int, k: int, blocks) -> Scid:
    blocks = tuple(blocks)
    for b in blocks:
        if b.ctx != ctx or b.n != n or b.dim != k:
            raise MixedParameters(f"block {b} does not match (q={ctx.q}, n={n}, k={k})")
    if len(set(blocks)) != len(blocks):
        raise InvalidScid("blocks are not pairwise distinct")
    return Scid(ctx, n, k, blocks)


@dataclass(frozen=True)
class Verification:
    valid: bool
    pair: tuple[int, int] | None = None
    meet_dim: int | None = None


def verify_scid(candidate: Scid) -> Verification:
    """Valid iff every unordered pair of blocks meets in exactly a point."""
    for b in candidate.blocks:
        if b.ctx != candidate.ctx or b.n != candidate.n or b.dim != candidate.k:
            raise MixedParameters(f"block {b} disagrees with the SCID parameters")
    for i, j in combinations(range(len(candidate.blocks)), 2):
        m = meet(candidate.blocks[i], candidate.blocks[j])
        if m.dim != 0:
            return Verification(False, (i, j), m.dim)
    return Verification(True)


def verified(candidate: Scid) -> Scid:
    """Return the SCID marked verified, or raise InvalidScid."""
    if candidate.verified:
        return candidate
    res = verify_scid(candidate)
    if not res.valid:
        i, j = res.pair
        raise InvalidScid(f"blocks {i} and {j} meet in dimension {res.meet_dim}")
    return replace(candidate, verified=True)


def _require_verified(scid: Scid):
    if not scid.verified:
        raise NotVerified("run verify_scid first")


def is_sunflower(scid: Scid) -> tuple[bool, Subspace | None]:
    _require_verified(scid)
    blocks = scid.blocks
    if len(blocks) <= 1:
        return True, None
    center = meet(blocks[0], blocks[1])
    if all(b.contains(center) for b in blocks[2:]):
        return True, center
    return False, None


def build_sunflower(ctx: FieldCtx, n: int, k: int, center: Subspace, count: int) -> Scid:
    """Greedily collect k-spaces through center that pairwise meet only there."""
    if n < 2 * k:
        raise ParamError(f"need n >= 2k for a sunflower of {k}-spaces, got n={n}")
    if center.dim != 0:
        raise ParamError("center must be a point")
    chosen: list[Subspace] = []
    if count > 0:
        for cand in enumerate_subspaces(ctx, n, k):
            if not cand.contains(center):
                continue
            if all(meet(cand, b) == center for b in chosen):
                chosen.append(cand)
                if len(chosen) == count:
                    break
    if len(chosen) < count:
        raise CannotPlace(f"placed only {len(chosen)} of {count} blocks")
    return verified(make_scid(ctx, n, k, chosen))


# --- point and line structure ---------------------------------------------------------

def _block_masks(scid: Scid) -> list[int]:
    return [point_mask(b) for b in scid.blocks]


def _point_counts(scid: Scid) -> dict[Subspace, int]:
    counts: dict[Subspace, int] = {}
    for b in scid.blocks:
        for p in points_of(b):
            counts[p] = counts.get(p, 0) + 1
    return counts


def blocks_through_point(scid: Scid, point: Subspace) -> int:
    _require_verified(scid)
    count = sum(1 for b in scid.blocks if b.contains(point))
    if count > theta(scid.k, scid.ctx.q) and not is_sunflower(scid)[0]:
        raise LemmaInconsistency(f"{count} blocks through a point of a non-sunflower")
    return count


def _threshold_c(scid: Scid, c) -> Fraction:
    return (1 - Fraction(c)) * theta(scid.k, scid.ctx.q)


def rich_points(scid: Scid, c) -> set[Subspace]:
    """Points lying on more than (1 - c) theta_k blocks."""
    _require_verified(scid)
    limit = _threshold_c(scid, c)
    return {p for p, m in _point_counts(scid).items() if m > limit}


def _lines_with_richness(scid: Scid, rich: set[Subspace]):
    # every line of L_S lies in exactly one block
    for idx, b in enumerate(scid.blocks):
        for line in subspaces_of(b, 1):
            yield idx, line, sum(1 for p in points_of(line) if p in rich)


def rich_lines(scid: Scid, c, d) -> set[Subspace]:
    """Lines inside blocks carrying more than (1 - d)(q + 1) c-rich points."""
    _require_verified(scid)
    rich = rich_points(scid, c)
    limit = (1 - Fraction(d)) * (scid.ctx.q + 1)
    return {line for _, line, m in _lines_with_richness(scid, rich) if m > limit}


@dataclass
class DiagnosticReport:
    size: int
    s: Fraction
    c: float
    d: float
    rich_point_count_per_block: list[int]
    r0: Fraction
    rich_line_count_per_block: list[int]
    min_rich_lines: Fraction
    poor_line_count_per_block: list[int]
    poor_line_bound: Fraction
    empirical_rich_line_avg: Fraction
    f_s: Fraction
    vacuous: bool
    f_applies: bool
    below_theorem_range: bool
    violations: list[str] = field(default_factory=list)

    @property
    def lemma_violated(self) -> bool:
        return bool(self.violations)

    def to_dict(self) -> dict:
        return {
            "size": self.size, "s": float(self.s), "s_exact": str(self.s),
            "c": self.c, "d": self.d,
            "rich_point_count_per_block": self.rich_point_count_per_block,
            "r0": float(self.r0),
            "rich_line_count_per_block": self.rich_line_count_per_block,
            "min_rich_lines": float(self.min_rich_lines),
            "poor_line_count_per_block": self.poor_line_count_per_block,
            "poor_line_bound": float(self.poor_line_bound),
            "empirical_rich_line_avg": float(self.empirical_rich_line_avg),
            "f_s": float(self.f_s),
            "vacuous": self.vacuous, "f_applies": self.f_applies,
            "below_theorem_range": self.below_theorem_range,
            "lemma_violated": self.lemma_violated, "violations": self.violations,
        }


def diagnostic_report(scid: Scid, c: float, d: float) -> DiagnosticReport:
    """Measured rich/poor structure next to the counting lower bounds it must obey."""
    _require_verified(scid)
    if not (0 < c < 1 and 0 < d < 1):
        raise bounds.ParamOutOfRange(f"need 0 < c, d < 1, got c={c}, d={d}")
    if is_sunflower(scid)[0]:
        raise IsSunflower("the counting bounds assume a non-sunflower SCID")
    q, k = scid.ctx.q, scid.k
    th = theta(k, q)
    s = 1 - Fraction(len(scid), th * th)
    cf, df = Fraction(c), Fraction(d)

    rich = rich_points(scid, c)
    masks = _block_masks(scid)
    rich_mask = 0
    for p in rich:
        rich_mask |= point_mask(p)
    r_per_block = [bin(m & rich_mask).count("1") for m in masks]

    line_limit = (1 - df) * (q + 1)
    rich_per_block = [0] * len(scid)
    poor_per_block = [0] * len(scid)
    rich_line_masks = []
    for idx, line, m in _lines_with_richness(scid, rich):
        if m > line_limit:
            rich_per_block[idx] += 1
            rich_line_masks.append(point_mask(line) & rich_mask)
        else:
            poor_per_block[idx] += 1

    total = 0
    pairs = 0
    for a, b in combinations(masks, 2):
        pairs += 1
        only_a, only_b = a & ~b, b & ~a
        total += sum(1 for lm in rich_line_masks if lm & only_a and lm & only_b)
    rho = Fraction(total, pairs)

    r0 = bounds.eval_r0(q, k, s, cf)
    min_lines = bounds.eval_min_rich_lines(q, k, s, cf, df)
    beta = bounds.eval_poor_line_bound(q, k, s, cf, df)
    f_s = bounds.eval_f(q, k, s, cf, df)
    vacuous = bounds.is_vacuous(s, cf, df)
    f_applies = bounds.f_bound_applies(q, k, s, cf, df)

    violations = []
    if max(_point_counts(scid).values()) > th:
        violations.append("a point lies on more than theta_k blocks")
    for i, r in enumerate(r_per_block):
        if r < r0:
            violations.append(f"block {i}: {r} rich points < r0 = {float(r0):.6g}")
    if not vacuous:
        for i, (nr, npoor) in enumerate(zip(rich_per_block, poor_per_block)):
            if nr < min_lines:
                violations.append(f"block {i}: {nr} rich lines < {float(min_lines):.6g}")
            if npoor > beta:
                violations.append(f"block {i}: {npoor} poor lines > {float(beta):.6g}")
    if f_applies and rho < f_s:
        violations.append(f"rich-line average {float(rho):.6g} < f(s) = {float(f_s):.6g}")

    return DiagnosticReport(
        size=len(scid), s=s, c=c, d=d,
        rich_point_count_per_block=r_per_block, r0=r0,
        rich_line_count_per_block=rich_per_block, min_rich_lines=min_lines,
        poor_line_count_per_block=poor_per_block, poor_line_bound=beta,
        empirical_rich_line_avg=rho, f_s=f_s, vacuous=vacuous, f_applies=f_applies,
        below_theorem_range=k < 3, violations=violations)


# --- interchange format ---------------------------------------------------------------

def scid_to_dict(scid: Scid) -> dict:
    blocks = sorted(scid.blocks, key=lambda b: b.rows)
    return {"field": scid.ctx.to_dict(), "n": scid.n, "k": scid.k,
            "blocks": [b.to_rows() for b in blocks]}


def scid_from_dict(doc: dict) -> Scid:
    ctx = field_from_dict(doc["field"])
    n, k = int(doc["n"]), int(doc["k"])
    blocks = [subspace_from_rows(ctx, n, rows) for rows in doc["blocks"]]
    return make_scid(ctx, n, k, blocks)


def dump_scid(scid: Scid) -> str:
    return json.dumps(scid_to_dict(scid))


def load_scid(path) -> Scid:
    with open(path) as fh:
        return scid_from_dict(json.load(fh))


def plane_lines(ctx: FieldCtx, n: int = 2) -> Scid:
    """All lines of the plane x_3 = ... = x_n = 0: a non-sunflower (2,1)-SCID."""
    plane = subspace_from_rows(ctx, n, [[int(i == j) for j in range(n + 1)] for i in range(3)])
    return verified(make_scid(ctx, n, 1, subspaces_of(plane, 1)))
