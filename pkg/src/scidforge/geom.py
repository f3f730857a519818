"""Projective geometry PG(n, q): canonical subspaces, meet/join, enumeration.

A subspace is stored by its reduced row echelon basis (pivots equal to 1,
pivot columns zero elsewhere), which is unique per row space, so equality and
hashing are structural.  The empty subspace has projective dimension -1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence

from .errors import ParamError, ScidForgeError
from .gf import FieldCtx

ENUM_LIMIT = 10**7

Row = tuple[int, ...]


class KOutOfRange(ParamError):
    pass


class DimensionMismatch(ParamError):
    pass


class AmbientMismatch(ParamError):
    pass


class TooManySubspaces(ScidForgeError):
    pass


class EmptySubspace(ParamError):
    pass


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of GF(q)^n."""
    if k < 0 or k > n:
        raise KOutOfRange(f"k={k} outside [0, {n}]")
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def theta(n: int, q: int) -> int:
    """Number of points of PG(n, q); theta(-1) = 0."""
    if n < -1:
        raise ParamError(f"theta undefined for n={n}")
    return (q ** (n + 1) - 1) // (q - 1)


def rref(ctx: FieldCtx, rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Reduced row echelon form over ctx, zero rows dropped."""
    m = [list(r) for r in rows]
    if not m:
        return []
    ncols = len(m[0])
    out: list[list[int]] = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        row = m[r]
        if row[col] != 1:
            f = ctx.inv(row[col])
            row = m[r] = [ctx.mul(f, x) for x in row]
        for i in range(len(m)):
            if i != r and m[i][col]:
                f = m[i][col]
                m[i] = [ctx.sub(x, ctx.mul(f, y)) for x, y in zip(m[i], row)]
        r += 1
        if r == len(m):
            break
    out = m[:r]
    return out


@dataclass(frozen=True)
class Subspace:
    ctx: FieldCtx
    n: int
    rows: tuple[Row, ...]

    @property
    def dim(self) -> int:
        return len(self.rows) - 1

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(r) if x) for r in self.rows)

    def __lt__(self, other: "Subspace") -> bool:
        return (self.dim, self.rows) < (other.dim, other.rows)

    def to_rows(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def contains(self, other: "Subspace") -> bool:
        return join(self, other).dim == self.dim

    def __repr__(self):
        return f"Subspace(n={self.n}, dim={self.dim}, rows={[list(r) for r in self.rows]})"


def subspace_from_rows(ctx: FieldCtx, n: int, rows: Sequence[Sequence[int]]) -> Subspace:
    for r in rows:
        if len(r) != n + 1:
            raise DimensionMismatch(f"row {list(r)} has {len(r)} coordinates, expected {n + 1}")
        for x in r:
            if not 0 <= int(x) < ctx.q:
                raise ParamError(f"entry {x} is not an element of GF({ctx.q})")
    basis = rref(ctx, [[int(x) for x in r] for r in rows])
    return Subspace(ctx, n, tuple(tuple(r) for r in basis))


def empty_subspace(ctx: FieldCtx, n: int) -> Subspace:
    return Subspace(ctx, n, ())


def whole_space(ctx: FieldCtx, n: int) -> Subspace:
    return Subspace(ctx, n, tuple(tuple(int(i == j) for j in range(n + 1)) for i in range(n + 1)))


def _check_same(a: Subspace, b: Subspace):
    if a.n != b.n or a.ctx != b.ctx:
        raise AmbientMismatch("subspaces live in different ambient spaces")


def join(a: Subspace, b: Subspace) -> Subspace:
    _check_same(a, b)
    if not b.rows:
        return a
    if not a.rows:
        return b
    return Subspace(a.ctx, a.n, tuple(tuple(r) for r in rref(a.ctx, a.rows + b.rows)))


def perp(a: Subspace) -> Subspace:
    """Orthogonal complement under the standard dot product (a kernel basis)."""
    ctx, ncols = a.ctx, a.n + 1
    pivots = a.pivots
    free = [j for j in range(ncols) if j not in pivots]
    vecs = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, p in zip(a.rows, pivots):
            v[p] = ctx.neg(row[f])
        vecs.append(v)
    return Subspace(ctx, a.n, tuple(tuple(r) for r in rref(ctx, vecs)))


def meet(a: Subspace, b: Subspace) -> Subspace:
    _check_same(a, b)
    if a == b:
        return a
    return perp(join(perp(a), perp(b)))


def _enumerate_rref(ctx: FieldCtx, ncols: int, nrows: int) -> Iterator[tuple[Row, ...]]:
    # Rows are produced one at a time in lexicographic order: a later pivot
    # means more leading zeros, so pivots are tried right to left.  Columns
    # stay available as future pivots only while every earlier row is zero there.
    q = ctx.q

    def rec(prefix: list[Row], allowed: list[int]) -> Iterator[tuple[Row, ...]]:
        remaining = nrows - len(prefix)
        if remaining == 0:
            yield tuple(prefix)
            return
        for idx in range(len(allowed) - remaining, -1, -1):
            c = allowed[idx]
            free = list(range(c + 1, ncols))
            for values in product(range(q), repeat=len(free)):
                row = [0] * ncols
                row[c] = 1
                for j, v in zip(free, values):
                    row[j] = v
                nxt = [j for j in allowed[idx + 1:] if row[j] == 0]
                if len(nxt) < remaining - 1:
                    continue
                prefix.append(tuple(row))
                yield from rec(prefix, nxt)
                prefix.pop()

    yield from rec([], list(range(ncols)))


def enumerate_subspaces(ctx: FieldCtx, n: int, d: int) -> Iterator[Subspace]:
    """All d-subspaces of PG(n, q), each once, in lexicographic order of bases."""
    if not -1 <= d <= n:
        raise KOutOfRange(f"d={d} outside [-1, {n}]")
    count = gaussian_binomial(n + 1, d + 1, ctx.q)
    if count > ENUM_LIMIT:
        raise TooManySubspaces(f"{count} subspaces exceed the limit {ENUM_LIMIT}")
    for rows in _enumerate_rref(ctx, n + 1, d + 1):
        yield Subspace(ctx, n, rows)


@lru_cache(maxsize=None)
def _local_points(ctx: FieldCtx, d: int) -> tuple[Row, ...]:
    return tuple(s.rows[0] for s in enumerate_subspaces(ctx, d, 0))


def points_of(s: Subspace) -> list[Subspace]:
    """All points of s.  Coordinates on the RREF basis keep points normalized."""
    if not s.rows:
        raise EmptySubspace("the empty subspace has no points")
    ctx = s.ctx
    out = []
    for coords in _local_points(ctx, s.dim):
        vec = [0] * (s.n + 1)
        for a, row in zip(coords, s.rows):
            if a:
                vec = [ctx.add(x, ctx.mul(a, y)) for x, y in zip(vec, row)]
        out.append(Subspace(ctx, s.n, (tuple(vec),)))
    return out


def subspaces_of(s: Subspace, d: int) -> list[Subspace]:
    """All d-subspaces contained in s."""
    ctx = s.ctx
    out = []
    for local in enumerate_subspaces(ctx, s.dim, d):
        vecs = []
        for coords in local.rows:
            vec = [0] * (s.n + 1)
            for a, row in zip(coords, s.rows):
                if a:
                    vec = [ctx.add(x, ctx.mul(a, y)) for x, y in zip(vec, row)]
            vecs.append(vec)
        out.append(subspace_from_rows(ctx, s.n, vecs))
    return out


@lru_cache(maxsize=None)
def point_index(ctx: FieldCtx, n: int) -> dict[Row, int]:
    """Map from normalized point coordinates to the point's enumeration index."""
    return {p.rows[0]: i for i, p in enumerate(enumerate_subspaces(ctx, n, 0))}


def point_mask(s: Subspace) -> int:
    """Bitmask over the enumeration indices of the points of s."""
    if not s.rows:
        return 0
    index = point_index(s.ctx, s.n)
    mask = 0
    for p in points_of(s):
        mask |= 1 << index[p.rows[0]]
    return mask
