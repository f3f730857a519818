"""Per-(q, k) choice of the rich-point parameters (c, d) minimizing the bound on 1 - s."""

from __future__ import annotations

from dataclasses import dataclass

from .bounds import MIN_Q, ParamOutOfRange, eval_B_exact_form, eval_c_q, eval_F_q, quadratic_roots
from .errors import ScidForgeError


MAX_ITERATIONS = 100_000


class NoFeasiblePoint(ScidForgeError):
    pass


def bound_from_cd(q: int, k: int, c: float, d: float) -> float | None:
    """Upper bound on 1 - s from the per-k quadratic at (c, d), or None if unusable.

    Unusable means B <= 0, no real roots, a large root G <= 1 (the branch
    1 - s >= G is then not excluded), or s = 1 - F not below cd.
    """
    if not (0 < c < 1 and 0 < d < 1) or k < 3:
        raise ParamOutOfRange(f"need 0 < c, d < 1 and k >= 3; got c={c}, d={d}, k={k}")
    B = eval_B_exact_form(q, k, c, d)
    if B <= 0:
        return None
    cd = c * d
    roots = quadratic_roots(B, cd, 1 / q ** (k - 2))
    if roots is None or roots.G <= 1 or 1 - roots.F >= cd:
        return None
    return roots.F


@dataclass
class OptResult:
    q: int
    k: int
    c_star: float
    d_star: float
    bound: float
    iterations: int
    valid: bool
    default_bound: float | None = None
    F_q: float | None = None

    def to_dict(self) -> dict:
        return {"q": self.q, "k": self.k, "c": self.c_star, "d": self.d_star,
                "bound": self.bound, "default_bound": self.default_bound, "F_q": self.F_q}


def _key(value, c, d):
    return (value, c, d)


def optimize_cd(q: int, k: int, coarse_step: float = 0.01, tol: float = 1e-9) -> OptResult:
    """Coarse grid over (0,1)^2, then compass search with step halving until step < tol.

    The default point (c_q, c_q) joins the grid candidates, so the result is
    never worse than the closed-form parameters.
    """
    if q < MIN_Q or k < 3:
        raise ParamOutOfRange(f"need q >= {MIN_Q} and k >= 3, got q={q}, k={k}")
    if not 0 < coarse_step < 0.5 or tol <= 0:
        raise ParamOutOfRange(f"bad step {coarse_step} or tol {tol}")

    steps = int(round(1 / coarse_step))
    grid = [i * coarse_step for i in range(1, steps) if 0 < i * coarse_step < 1]
    c_default = eval_c_q(q)
    default_bound = bound_from_cd(q, k, c_default, c_default)

    best = None
    candidates = [(c, d) for c in grid for d in grid] + [(c_default, c_default)]
    for c, d in candidates:
        value = bound_from_cd(q, k, c, d)
        if value is not None and (best is None or _key(value, c, d) < best):
            best = _key(value, c, d)
    if best is None:
        raise NoFeasiblePoint(f"no feasible (c, d) on the grid for q={q}, k={k}")

    value, c, d = best
    h = coarse_step
    iterations = 0
    while h >= tol and iterations < MAX_ITERATIONS:
        iterations += 1
        moved = None
        for dc, dd in ((-h, 0.0), (h, 0.0), (0.0, -h), (0.0, h)):
            nc, nd = c + dc, d + dd
            if not (0 < nc < 1 and 0 < nd < 1):
                continue
            nv = bound_from_cd(q, k, nc, nd)
            if nv is not None and _key(nv, nc, nd) < (moved or best):
                moved = _key(nv, nc, nd)
        if moved is not None and moved[0] < value:
            best = moved
            value, c, d = moved
        else:
            h /= 2
    return OptResult(q, k, c, d, value, iterations, True, default_bound, eval_F_q(q))
