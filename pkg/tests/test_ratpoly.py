import random
from fractions import Fraction

import pytest
import sympy

from scidforge.ratpoly import (
    RatPoly, ZeroPolynomial, cauchy_bound, count_roots, isolate_roots, poly_gcd, square_free,
    sturm_sequence,
)

T = RatPoly.var()


def to_sympy(p):
    x = sympy.Symbol("x")
    return sympy.Poly(sum(sympy.Rational(c.numerator, c.denominator) * x**i
                          for i, c in enumerate(p.coeffs)), x, domain="QQ")


def random_poly(rng, deg):
    return RatPoly(Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(deg + 1))


def test_sqrt2():
    (a, b), = isolate_roots(T**2 - 2, 0)
    assert a * a < 2 <= b * b
    lo, hi = Fraction(7, 5), Fraction(3, 2)
    assert lo * lo < 2 < hi * hi


def test_no_real_roots():
    assert isolate_roots(T**2 + 1, 0) == []


def test_double_root():
    (a, b), = isolate_roots((T - 1) ** 2, 0)
    assert a < 1 <= b


def test_root_at_lower_end():
    roots = isolate_roots(T * (T - 3), 0)
    assert roots[0] == (0, 0)
    assert roots[1][0] < 3 <= roots[1][1]


def test_zero_polynomial():
    with pytest.raises(ZeroPolynomial):
        isolate_roots(RatPoly(), 0)


def test_arithmetic_against_sympy():
    rng = random.Random(3)
    for _ in range(40):
        a, b = random_poly(rng, rng.randint(0, 6)), random_poly(rng, rng.randint(1, 5))
        if b.is_zero():
            continue
        sa, sb = to_sympy(a), to_sympy(b)
        assert to_sympy(a * b) == sa * sb
        assert to_sympy(a + b) == sa + sb
        q, r = a.divmod(b)
        sq, sr = sa.div(sb)
        assert to_sympy(q) == sq and to_sympy(r) == sr


def test_gcd_and_square_free():
    p = (T - 1) ** 3 * (T + 2) * (T**2 + 1)
    assert square_free(p).monic() == ((T - 1) * (T + 2) * (T**2 + 1)).monic()
    assert poly_gcd(p, p.derivative()) == ((T - 1) ** 2).monic()


def test_root_counts_against_sympy():
    rng = random.Random(11)
    for _ in range(30):
        p = random_poly(rng, rng.randint(1, 8))
        if p.degree < 1:
            continue
        expected = sorted(float(r) for r in sympy.real_roots(to_sympy(p)) if r >= -5)
        expected = sorted(set(expected))
        intervals = isolate_roots(p, -5)
        assert len(intervals) == len(expected)
        for (a, b), r in zip(intervals, expected):
            assert float(a) <= r <= float(b)


def test_cauchy_bound_contains_roots():
    p = (T - 7) * (T + 11) * (T - Fraction(1, 3))
    bound = cauchy_bound(p)
    assert bound > 11
    seq = sturm_sequence(square_free(p))
    assert count_roots(seq, -bound, bound) == 3


def test_reversed_and_shift():
    p = RatPoly([1, 2, 3])
    assert p.reversed() == RatPoly([3, 2, 1])
    assert p.reversed(4) == RatPoly([0, 0, 3, 2, 1])
    assert RatPoly([0, 0, 5]).shift_down(2) == RatPoly([5])
    assert p(Fraction(1, 2)) == Fraction(1) + 1 + Fraction(3, 4)
    assert p(0.5) == 2.75


def test_integer_form():
    p = RatPoly([Fraction(1, 2), Fraction(-2, 3), 4])
    nums, den = p.integer_form()
    assert den == 6 and nums == [3, -4, 24]
