"""Exact certificates that the polynomial inequalities behind the F_q bound hold
for every t = q^(1/6) >= 7^(1/6).

Each inequality is assembled from its factored form as a polynomial in
u = 1/t, then turned into a polynomial in t by multiplying with t^deg.  For
t > 0 that multiplication preserves the sign, so a sign claim on the tail is
settled by isolating every real root with Sturm sequences and checking that
none of them reaches 7^(1/6).  The boundary is never approximated: interval
endpoints are compared with 7 through their sixth powers.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ParamError
from .ratpoly import RatPoly, count_roots, isolate_roots, refine, sign, square_free, sturm_sequence

NAMES = ("lemmaB1", "lemmaB2", "onderwortel", "boundonG", "maintheorem_final")
STRICT = {"lemmaB1": True, "lemmaB2": True, "onderwortel": False, "boundonG": True,
          "maintheorem_final": False}
TAIL_SIXTH_POWER = 7
REFINE_LIMIT = 400

# Human-readable factored forms, in t; hashed into each certificate.
FACTORED_SOURCES = {
    "B_q": "(1+1/(2t))^2 (1+1/(2t)-1/t^17)^2 (1+1/(2t)-1/t^5+1/t^6+1/(2t^7)) "
           "(1+1/(2t)-2/t^5+1/t^6+1/(2t^7))",
    "lemmaB1": "B_q - (1+1/(2t))^2 (1+1/(2t)-1/t^4)^2 (1+1/(2t)-1/t^5) (1+1/(2t)-2/t^5) > 0",
    "lemmaB2": "B_q - (1+1/(2t))^2 (1+1/(3t))^2 > 0",
    "onderwortel": "(1+1/(2t))^2 (1+1/(3t))^2 - 2 (1-1/t)^2 (4/t-1/t^3) >= 0",
    "boundonG": "(1+1/(2t))^2 (1+1/(3t))^2 - (1+1/t^6) > 0",
    "maintheorem_final": "(1+1/(2t))^2 (1+1/(2t)-1/t^4)^2 (1+1/(2t)-1/t^5) (1+1/(2t)-2/t^5) "
                         "(1/(4t^4)+4/t^2-4/t^3) - (1-1/t-1/(2t^2))^2 (a^2 + a/t^6) >= 0, "
                         "a = 2/t+4/t^2-5/t^3",
}

# The expansion of the final inequality as printed, coefficients of t^-4 .. t^-24.
PRINTED_MAINTHEOREM = tuple(Fraction(x) for x in (
    "157/4", "95/4", "-2165/16", "173/8", "1411/64", "383/64", "1313/256", "69/2",
    "1177/32", "-37/8", "-3315/128", "-219/8", "-1631/64", "3/32", "557/32", "151/16",
    "293/32", "-1/8", "-11/2", "-3/2", "1/8"))
PRINTED_LOWEST_POWER = 4


class UnknownInequality(ParamError):
    pass


U = RatPoly.var()  # u = 1/t


def _h() -> RatPoly:
    return 1 + U / 2


def b_q_factored() -> RatPoly:
    """B_q at q = t^6 and c = d = c_q, as a polynomial in u = 1/t."""
    h = _h()
    return (h**2 * (h - U**17) ** 2 * (h - U**5 + U**6 + U**7 / 2)
            * (h - 2 * U**5 + U**6 + U**7 / 2))


def b_q_from_definition() -> RatPoly:
    """B_q expanded straight from (1-c)^2 (1-c-1/q^3)^2 (1-c-c/q)(1-c-(1+c)/q) q."""
    c = 1 - U - U**2 / 2
    inv_q = U**6
    product = ((1 - c) ** 2 * (1 - c - inv_q**3) ** 2 * (1 - c - c * inv_q)
               * (1 - c - (1 + c) * inv_q))
    return product.shift_down(6)  # the trailing factor q = u^-6


def lemma_b1_rhs() -> RatPoly:
    h = _h()
    return h**2 * (h - U**4) ** 2 * (h - U**5) * (h - 2 * U**5)


def lemma_b2_rhs() -> RatPoly:
    return _h() ** 2 * (1 + U / 3) ** 2


def maintheorem_sides() -> tuple[RatPoly, RatPoly]:
    """The two sides of the sufficient inequality, in u."""
    a = 2 * U + 4 * U**2 - 5 * U**3
    lhs = lemma_b1_rhs() * (U**4 / 4 + 4 * U**2 - 4 * U**3)
    rhs = (1 - U - U**2 / 2) ** 2 * (a**2 + U**6 * a)
    return lhs, rhs


def inequality_in_u(name: str) -> RatPoly:
    """Claimed-larger side minus claimed-smaller side, as a polynomial in u = 1/t."""
    if name == "lemmaB1":
        return b_q_factored() - lemma_b1_rhs()
    if name == "lemmaB2":
        return b_q_factored() - lemma_b2_rhs()
    if name == "onderwortel":
        return lemma_b2_rhs() - 2 * (1 - U) ** 2 * (4 * U - U**3)
    if name == "boundonG":
        return lemma_b2_rhs() - (1 + U**6)
    if name == "maintheorem_final":
        lhs, rhs = maintheorem_sides()
        return lhs - rhs
    raise UnknownInequality(f"unknown inequality {name!r}; expected one of {NAMES}")


def build_inequality_poly(name: str) -> RatPoly:
    """The inequality times t^D (D = degree in 1/t), as a polynomial in t."""
    pu = inequality_in_u(name)
    return pu.reversed(pu.degree)


def transcription_mismatches() -> list[dict]:
    """Coefficients of the independently expanded final inequality that differ
    from the printed expansion."""
    pu = inequality_in_u("maintheorem_final")
    out = []
    top = PRINTED_LOWEST_POWER + len(PRINTED_MAINTHEOREM) - 1
    for power in range(0, max(pu.degree, top) + 1):
        ours = pu.coeffs[power] if power < len(pu.coeffs) else Fraction(0)
        idx = power - PRINTED_LOWEST_POWER
        printed = PRINTED_MAINTHEOREM[idx] if 0 <= idx < len(PRINTED_MAINTHEOREM) else Fraction(0)
        if ours != printed:
            out.append({"power": -power, "expanded": str(ours), "printed": str(printed)})
    return out


def printed_maintheorem_value(t: float) -> float:
    """The printed sum evaluated in double precision."""
    return sum(float(c) * t ** -(PRINTED_LOWEST_POWER + i) for i, c in enumerate(PRINTED_MAINTHEOREM))


# --- certification -------------------------------------------------------------------

def below_tail(x: Fraction) -> bool:
    return x**6 < TAIL_SIXTH_POWER


@dataclass
class Certificate:
    name: str
    claim: str
    polynomial: RatPoly
    isolating_intervals: list[tuple[Fraction, Fraction]]
    verdict: str
    witnesses: list[tuple[Fraction, int]]
    sturm_count: int
    boundary_root: bool = False
    source_sha256: str = ""
    diagnostics: list[dict] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.verdict == "certified"

    def to_dict(self) -> dict:
        num, den = self.polynomial.integer_form()
        return {
            "name": self.name,
            "claim": self.claim,
            "poly_num": [str(c) for c in num],
            "poly_den": str(den),
            "roots": [[str(a.numerator), str(a.denominator), str(b.numerator), str(b.denominator)]
                      for a, b in self.isolating_intervals],
            "verdict": self.verdict,
            "witnesses": [{"t": [str(t.numerator), str(t.denominator)], "sign": s}
                          for t, s in self.witnesses],
            "sturm_count": self.sturm_count,
            "boundary_root": self.boundary_root,
            "source_sha256": self.source_sha256,
            "transcription_diagnostics": self.diagnostics,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _source_hash(name: str) -> str:
    text = FACTORED_SOURCES[name]
    if name.startswith("lemmaB"):
        text = FACTORED_SOURCES["B_q"] + "\n" + text
    return hashlib.sha256(text.encode()).hexdigest()


def certify_tail_sign(name: str) -> Certificate:
    """Prove (or refute) the sign claim of the named inequality for all t >= 7^(1/6)."""
    if name not in NAMES:
        raise UnknownInequality(f"unknown inequality {name!r}; expected one of {NAMES}")
    strict = STRICT[name]
    poly = build_inequality_poly(name)
    sf = square_free(poly)
    seq = sturm_sequence(sf)
    lower = Fraction(1)
    intervals = isolate_roots(poly, lower)
    sturm_total = count_roots(seq, lower, max((b for _, b in intervals), default=lower))
    if sf(lower) == 0:
        sturm_total += 1

    # 7^(1/6) is a root iff the irreducible t^6 - 7 divides the polynomial
    boundary_root = (poly % (RatPoly.var() ** 6 - TAIL_SIXTH_POWER)).is_zero()

    tail_root = False
    decided = []
    for a, b in intervals:
        for _ in range(REFINE_LIMIT):
            if below_tail(b):
                break
            if not below_tail(a) and a != b:
                tail_root = True  # root in (a, b] with a >= 7^(1/6)
                break
            if a == b:
                tail_root = not below_tail(a)
                break
            a, b = refine(seq, a, b)
        else:
            if not boundary_root:
                tail_root = True
        decided.append((a, b))

    top = max((b for _, b in decided), default=lower)
    probe = max(top + 1, Fraction(2))
    witnesses = [(probe, sign(poly(probe))), (Fraction(2), sign(poly(Fraction(2))))]
    ok = not tail_root and all(s > 0 for _, s in witnesses)
    if boundary_root and strict:
        ok = False
    diagnostics = transcription_mismatches() if name == "maintheorem_final" else []
    return Certificate(
        name=name, claim=">0" if strict else ">=0", polynomial=poly,
        isolating_intervals=decided, verdict="certified" if ok else "refuted",
        witnesses=witnesses, sturm_count=sturm_total, boundary_root=boundary_root,
        source_sha256=_source_hash(name), diagnostics=diagnostics)


def certify_all() -> list[Certificate]:
    return [certify_tail_sign(name) for name in NAMES]
