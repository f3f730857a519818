"""Univariate polynomials with exact rational coefficients, and Sturm-sequence
real root isolation."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable

from .errors import ParamError


class ZeroPolynomial(ParamError):
    pass


class RatPoly:
    """Coefficients ascending by degree; trailing zeros stripped."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, c) -> "RatPoly":
        return cls([c])

    @classmethod
    def var(cls) -> "RatPoly":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __repr__(self):
        return f"RatPoly({[str(c) for c in self.coeffs]})"

    def __eq__(self, other):
        if not isinstance(other, RatPoly):
            other = RatPoly.const(other)
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    @staticmethod
    def _lift(x) -> "RatPoly":
        return x if isinstance(x, RatPoly) else RatPoly.const(x)

    def __add__(self, other):
        other = self._lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return RatPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return RatPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        if not self.coeffs or not other.coeffs:
            return RatPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return RatPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        scalar = Fraction(scalar)
        return RatPoly(c / scalar for c in self.coeffs)

    def __pow__(self, n: int):
        result, base = RatPoly.const(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __call__(self, x):
        """Horner evaluation; exact for int/Fraction x, double precision for float x."""
        if isinstance(x, float):
            acc = 0.0
            for c in reversed(self.coeffs):
                acc = acc * x + float(c)
            return acc
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def divmod(self, other: "RatPoly") -> tuple["RatPoly", "RatPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        quot = [Fraction(0)] * max(0, len(rem) - dq)
        lc = other.lc
        for i in range(len(rem) - 1, dq - 1, -1):
            f = rem[i] / lc
            if f:
                quot[i - dq] = f
                for j, c in enumerate(other.coeffs):
                    rem[i - dq + j] -= f * c
        return RatPoly(quot), RatPoly(rem[:dq])

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def derivative(self) -> "RatPoly":
        return RatPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def monic(self) -> "RatPoly":
        return self / self.lc if self.coeffs else self

    def primitive(self) -> "RatPoly":
        """Positive rational multiple with coprime integer coefficients."""
        if not self.coeffs:
            return self
        num, den = self.integer_form()
        g = 0
        for c in num:
            g = gcd(g, c)
        return RatPoly(Fraction(c, g) for c in num)

    def integer_form(self) -> tuple[list[int], int]:
        """(numerators, D) with D > 0 minimal such that D * self has integer coefficients."""
        den = 1
        for c in self.coeffs:
            den = lcm(den, c.denominator)
        return [int(c * den) for c in self.coeffs], den

    def reversed(self, degree: int | None = None) -> "RatPoly":
        """x^degree * p(1/x); degree defaults to deg p."""
        degree = self.degree if degree is None else degree
        cs = list(self.coeffs) + [Fraction(0)] * (degree + 1 - len(self.coeffs))
        return RatPoly(reversed(cs))

    def low_degree(self) -> int:
        """Smallest exponent with a nonzero coefficient."""
        return next(i for i, c in enumerate(self.coeffs) if c)

    def shift_down(self, k: int) -> "RatPoly":
        """Exact division by x^k."""
        if any(self.coeffs[:k]):
            raise ParamError(f"not divisible by x^{k}")
        return RatPoly(self.coeffs[k:])


def poly_gcd(a: RatPoly, b: RatPoly) -> RatPoly:
    while not b.is_zero():
        a, b = b, (a % b).primitive()
    return a.monic()


def square_free(p: RatPoly) -> RatPoly:
    if p.is_zero():
        raise ZeroPolynomial("zero polynomial")
    g = poly_gcd(p, p.derivative())
    return (p // g).primitive() if g.degree > 0 else p.primitive()


def sturm_sequence(p: RatPoly) -> list[RatPoly]:
    # scaling remainders by positive constants keeps every sign, so each one is
    # replaced by its primitive part to hold coefficient growth down
    seq = [p, p.derivative().primitive()]
    while True:
        r = seq[-2] % seq[-1]
        if r.is_zero():
            return seq
        seq.append((-r).primitive())


def sign(x) -> int:
    return (x > 0) - (x < 0)


def sign_variations(seq: list[RatPoly], x) -> int:
    signs = [sign(p(x)) for p in seq]
    signs = [s for s in signs if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(seq: list[RatPoly], a, b) -> int:
    """Distinct real roots in (a, b] of the square-free seq[0]."""
    return sign_variations(seq, a) - sign_variations(seq, b)


def cauchy_bound(p: RatPoly) -> Fraction:
    lc = abs(p.lc)
    return 1 + max((abs(c) / lc for c in p.coeffs[:-1]), default=Fraction(0))


def isolate_roots(p: RatPoly, lower, upper=None) -> list[tuple[Fraction, Fraction]]:
    """Disjoint rational intervals [a, b], each holding exactly one real root in [lower, upper].

    Intervals are half-open (a, b] except a degenerate [r, r] for a root at
    ``lower`` itself.  ``upper=None`` means +infinity (Cauchy bound).
    """
    if p.is_zero():
        raise ZeroPolynomial("cannot isolate roots of the zero polynomial")
    sf = square_free(p)
    lower = Fraction(lower)
    upper = cauchy_bound(sf) if upper is None else Fraction(upper)
    out: list[tuple[Fraction, Fraction]] = []
    if sf.degree < 1 or upper < lower:
        return out
    seq = sturm_sequence(sf)
    if sf(lower) == 0:
        out.append((lower, lower))
    stack = [(lower, upper)]
    found = []
    while stack:
        a, b = stack.pop()
        n = count_roots(seq, a, b)
        if n == 0:
            continue
        if n == 1:
            found.append((a, b))
            continue
        m = (a + b) / 2
        stack.append((m, b))
        stack.append((a, m))
    return out + sorted(found)


def refine(seq: list[RatPoly], a: Fraction, b: Fraction) -> tuple[Fraction, Fraction]:
    """Halve an isolating interval (a, b], keeping the half that holds the root."""
    m = (a + b) / 2
    return (a, m) if count_roots(seq, a, m) == 1 else (m, b)
