"""Closed-form sunflower bounds for (k+1,1)-SCIDs and their ingredients.

Integer bounds are exact.  Real-valued quantities are doubles; the sixth root
t = q^(1/6) is exact whenever q is a perfect sixth power.  The rich/poor
evaluators accept Fractions as well as floats so that callers comparing
against measured integer counts can stay exact.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal

from .errors import ParamError
from .geom import theta


class BadParams(ParamError):
    pass


class QTooSmall(ParamError):
    pass


class ParamOutOfRange(ParamError):
    pass


MIN_Q = 7
TABLE1_EXPONENTS = (4, 6, 8, 10, 12, 14, 16, 18, 20)


# --- integer bounds -------------------------------------------------------------

def sunflower_bound_classical(q: int, k: int, t: int = 0) -> int:
    """M^2 + M + 1, M = (q^(k+1) - q^(t+1)) / (q - 1).

    A (k+1, t+1)-SCID with more elements than this is a sunflower.
    """
    if not 0 <= t < k or q < 2:
        raise BadParams(f"need 0 <= t < k and q >= 2, got q={q}, k={k}, t={t}")
    m = (q ** (k + 1) - q ** (t + 1)) // (q - 1)
    return m * m + m + 1


@dataclass(frozen=True)
class ComparatorBound:
    value: int
    applicable: bool


def sunflower_bound_comparator(q: int, k: int) -> ComparatorBound:
    """M^2 + M - q^k with M = (q^(k+1) - q) / (q - 1); the theorem needs k >= 4."""
    m = (q ** (k + 1) - q) // (q - 1)
    return ComparatorBound(m * m + m - q**k, k >= 4)


def classical_density(q: int, k: int) -> float:
    th = theta(k, q)
    return 1 - 1 / th + 1 / th**2


# --- sixth roots ------------------------------------------------------------------

def _int_sixth_root(q) -> int | None:
    if isinstance(q, float):
        if not q.is_integer():
            return None
        q = int(q)
    if not isinstance(q, int) or q < 0:
        return None
    m = round(q ** (1 / 6))
    for cand in (m - 1, m, m + 1):
        if cand >= 0 and cand**6 == q:
            return cand
    return None


def sixth_root(q) -> float:
    """q^(1/6): exact for perfect sixth powers, otherwise one Newton correction."""
    m = _int_sixth_root(q)
    if m is not None:
        return float(m)
    q = float(q)
    t = q ** (1 / 6)
    return t - (t**6 - q) / (6 * t**5)


# --- the quadratic bound ------------------------------------------------------------

def eval_c_q(q) -> float:
    """Default parameter c(q) = d(q) = 1 - q^(-1/6) - q^(-1/3)/2."""
    if q < MIN_Q:
        raise QTooSmall(f"c_q needs q >= {MIN_Q}, got {q}")
    t = sixth_root(q)
    return 1 - 1 / t - 1 / (2 * t * t)


def _B(q, c, d, inv_block):
    return (1 - d) * (1 - c) * (1 - c - inv_block) ** 2 * (1 - d - d / q) * (1 - d - (1 + d) / q) * q


def eval_B(q, c: float, d: float) -> float:
    """B(q, c, d) with the 1/q^3 weakening valid for k >= 3.  May be negative."""
    return _B(q, c, d, 1 / q**3)


def eval_B_exact_form(q: int, k: int, c: float, d: float) -> float:
    """B with 1/theta_k in place of 1/q^3 (the sharper per-k form)."""
    if k < 3:
        raise BadParams(f"exact form needs k >= 3, got {k}")
    return _B(q, c, d, 1 / theta(k, q))


@dataclass(frozen=True)
class Roots:
    F: float
    G: float
    discriminant: float


def quadratic_discriminant(B: float, cd: float, eps: float) -> float:
    b = eps - B / cd
    return b * b - 4 * B * (1 / cd - 1)


def quadratic_roots(B: float, cd: float, eps: float) -> Roots | None:
    """Roots of x^2 + (eps - B/cd) x + B (1/cd - 1), with x standing for 1 - s.

    None when the discriminant is negative.  The larger-magnitude root is taken
    first and the other one recovered from the product, which avoids the
    cancellation that otherwise swamps the small root at large q.
    """
    if B <= 0:
        raise BadParams(f"B must be positive, got {B}")
    if not 0 < cd < 1 or eps <= 0:
        raise BadParams(f"need 0 < cd < 1 and eps > 0, got cd={cd}, eps={eps}")
    b = eps - B / cd
    c0 = B * (1 / cd - 1)
    disc = b * b - 4 * c0
    if disc < 0:
        return None
    big = -(b + math.copysign(math.sqrt(disc), b)) / 2
    small = c0 / big if big else 0.0
    lo, hi = sorted((small, big))
    return Roots(lo, hi, disc)


def _default_roots(q) -> Roots | None:
    c = eval_c_q(q)
    return quadratic_roots(eval_B(q, c, c), c * c, 1 / q)


def eval_F_q(q) -> float | None:
    roots = _default_roots(q)
    return None if roots is None else roots.F


def eval_G_q(q) -> float | None:
    roots = _default_roots(q)
    return None if roots is None else roots.G


def asymptotic_bound(q) -> float:
    """2 q^(-1/6) + 4 q^(-1/3) - 5 q^(-1/2)."""
    if q < 2:
        raise BadParams(f"q must be >= 2, got {q}")
    t = sixth_root(q)
    return 2 / t + 4 / t**2 - 5 / t**3


def lemma_b_lower_bounds(q) -> tuple[float, float]:
    """The two closed-form lower bounds on B_q, in terms of t = q^(1/6)."""
    t = sixth_root(q)
    h = 1 + 1 / (2 * t)
    first = h**2 * (h - 1 / t**4) ** 2 * (h - 1 / t**5) * (h - 2 / t**5)
    second = h**2 * (1 + 1 / (3 * t)) ** 2
    return first, second


# --- per-block counting bounds ----------------------------------------------------

def _check_scd(s, c, d=None):
    if not 0 < c < 1 or (d is not None and not 0 < d < 1) or not 0 <= s < 1:
        raise ParamOutOfRange(f"need 0 <= s < 1 and 0 < c, d < 1; got s={s}, c={c}, d={d}")


def is_vacuous(s, c, d) -> bool:
    """True when s >= cd, where the rich-line bounds say nothing."""
    return s >= c * d


def eval_r0(q: int, k: int, s, c):
    """Lower bound (1 - s/c) theta_k on the c-rich points of a block."""
    _check_scd(s, c)
    return (1 - s / c) * theta(k, q)


def eval_min_rich_lines(q: int, k: int, s, c, d):
    """Lower bound on the (c,d)-rich lines inside one block."""
    _check_scd(s, c, d)
    return theta(k, q) * theta(k - 1, q) * (1 - s / (c * d)) / (q + 1)


def eval_poor_line_bound(q: int, k: int, s, c, d):
    """Upper bound on the poor lines inside one block."""
    _check_scd(s, c, d)
    return s * theta(k, q) * theta(k - 1, q) / (c * d * (q + 1))


def eval_f(q: int, k: int, s, c, d):
    """Lower bound on the average number of rich lines joining two blocks."""
    _check_scd(s, c, d)
    tk, tk1 = theta(k, q), theta(k - 1, q)
    return (tk * tk1 * q * (1 - d) / (1 - s) * (1 - s / (c * d))
            * (1 - c - 1 / tk) ** 2 * (1 - d - d / q))


def f_bound_applies(q: int, k: int, s, c, d) -> bool:
    """Whether every factor of the counting argument behind eval_f is non-negative.

    The squared factor hides a sign: with (1-c) theta_k < 1 the product can be
    positive although the underlying count is only bounded by zero.
    """
    return (not is_vacuous(s, c, d) and (1 - c) * theta(k, q) >= 1
            and (1 - d) * q >= d)


# --- the main inequality -------------------------------------------------------------

@dataclass(frozen=True)
class InequalityCheck:
    holds: bool
    slack: float
    lhs: float
    rhs: float


def check_main_inequality(q: int, k: int, c: float, d: float, s: float,
                          form: str = "weakened") -> InequalityCheck:
    """(1 - s/(cd)) B <= (1-s)^2 + (1-s) eps, for the weakened or exact form."""
    if not (0 < s < 1 and 0 < c < 1 and 0 < d < 1) or k < 3:
        raise ParamOutOfRange(f"need 0 < s, c, d < 1 and k >= 3; got s={s}, c={c}, d={d}, k={k}")
    if form == "weakened":
        B, eps = eval_B(q, c, d), 1 / q
    elif form == "exact":
        B, eps = eval_B_exact_form(q, k, c, d), 1 / q ** (k - 2)
    else:
        raise BadParams(f"unknown form {form!r}")
    lhs = (1 - s / (c * d)) * B
    rhs = (1 - s) ** 2 + (1 - s) * eps
    return InequalityCheck(lhs <= rhs, rhs - lhs, lhs, rhs)


# --- reports --------------------------------------------------------------------------

@dataclass
class BoundReport:
    q: int
    k: int
    t: int
    classical: int
    comparator: int
    comparator_applicable: bool
    classical_density: float
    c_q: float | None = None
    B_q: float | None = None
    discriminant: float | None = None
    F_q: float | None = None
    G_q: float | None = None
    asymptotic: float | None = None
    improvement_flags: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def bound_report(q: int, k: int, t: int = 0) -> BoundReport:
    comp = sunflower_bound_comparator(q, k)
    rep = BoundReport(q=q, k=k, t=t, classical=sunflower_bound_classical(q, k, t),
                      comparator=comp.value, comparator_applicable=comp.applicable,
                      classical_density=classical_density(q, k),
                      asymptotic=asymptotic_bound(q))
    density = rep.classical_density
    rep.improvement_flags["asymptotic_below_classical"] = rep.asymptotic < density
    if q >= MIN_Q:
        c = eval_c_q(q)
        rep.c_q = c
        rep.B_q = eval_B(q, c, c)
        rep.discriminant = quadratic_discriminant(rep.B_q, c * c, 1 / q)
        roots = quadratic_roots(rep.B_q, c * c, 1 / q) if rep.B_q > 0 else None
        if roots is not None:
            rep.F_q, rep.G_q = roots.F, roots.G
            rep.improvement_flags["F_q_below_classical"] = roots.F < density
    return rep


def round8(x: float) -> str:
    """Half-even rounding of the exact binary value to 8 decimals."""
    return format(Decimal(x).quantize(Decimal("1e-8"), rounding=ROUND_HALF_EVEN), "f")


@dataclass(frozen=True)
class Table1Row:
    exponent: int
    q: int
    F_q: str
    asymptotic: str


def table1() -> list[Table1Row]:
    rows = []
    for e in TABLE1_EXPONENTS:
        q = 2**e
        rows.append(Table1Row(e, q, round8(eval_F_q(q)), round8(asymptotic_bound(q))))
    return rows


def table1_csv() -> str:
    lines = ["q,F_q,asymptotic"]
    lines += [f"2^{r.exponent},{r.F_q},{r.asymptotic}" for r in table1()]
    return "\n".join(lines) + "\n"
