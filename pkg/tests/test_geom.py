import itertools
import random

import pytest

from scidforge.geom import (
    DimensionMismatch, empty_subspace, enumerate_subspaces, gaussian_binomial, join, meet,
    perp, point_mask, points_of, subspace_from_rows, subspaces_of, theta, whole_space,
)
from scidforge.gf import field_for_q


def _brute_subspace_count(n, k, q):
    """Count k-dim subspaces of GF(q)^n (q prime) by collecting distinct spans."""
    vectors = list(itertools.product(range(q), repeat=n))

    def span(basis):
        out = set()
        for coeffs in itertools.product(range(q), repeat=len(basis)):
            out.add(tuple(sum(c * b[i] for c, b in zip(coeffs, basis)) % q for i in range(n)))
        return frozenset(out)

    seen = set()
    for basis in itertools.combinations(vectors, k):
        s = span(basis)
        if len(s) == q**k:
            seen.add(s)
    return len(seen)


def test_gaussian_examples():
    assert gaussian_binomial(4, 2, 2) == 35
    assert gaussian_binomial(5, 3, 2) == 155
    assert gaussian_binomial(7, 0, 3) == 1


@pytest.mark.parametrize("n,k,q", [(4, 2, 2), (3, 1, 3), (3, 2, 2), (4, 1, 2), (2, 1, 3)])
def test_gaussian_matches_brute_force(n, k, q):
    assert gaussian_binomial(n, k, q) == _brute_subspace_count(n, k, q)


def test_theta_examples():
    assert theta(3, 2) == 15
    assert theta(0, 5) == 1
    assert theta(4, 2) == 31


def test_canonicalize_examples():
    ctx = field_for_q(2)
    line = subspace_from_rows(ctx, 3, [[1, 0, 0, 0], [0, 1, 0, 0]])
    assert line.to_rows() == [[1, 0, 0, 0], [0, 1, 0, 0]]
    plane_ctx = subspace_from_rows(ctx, 2, [[1, 1, 0], [1, 0, 1], [0, 1, 1]])
    assert plane_ctx.dim == 1
    assert plane_ctx.to_rows() == [[1, 0, 1], [0, 1, 1]]
    empty = subspace_from_rows(ctx, 2, [])
    assert empty.dim == -1


def test_meet_examples():
    ctx = field_for_q(3)
    lines = list(enumerate_subspaces(ctx, 2, 1))
    for a, b in itertools.combinations(lines, 2):
        assert meet(a, b).dim == 0
    assert meet(lines[0], lines[0]) == lines[0]
    ctx2 = field_for_q(2)
    a = subspace_from_rows(ctx2, 3, [[1, 0, 0, 0], [0, 1, 0, 0]])
    b = subspace_from_rows(ctx2, 3, [[0, 0, 1, 0], [0, 0, 0, 1]])
    assert meet(a, b).dim == -1


def test_join_examples():
    ctx = field_for_q(2)
    p1 = subspace_from_rows(ctx, 2, [[1, 0, 0]])
    p2 = subspace_from_rows(ctx, 2, [[0, 1, 0]])
    line = join(p1, p2)
    assert line.dim == 1 and line.contains(p1) and line.contains(p2)
    assert join(line, empty_subspace(ctx, 2)) == line
    a = subspace_from_rows(ctx, 4, [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0]])
    b = subspace_from_rows(ctx, 4, [[1, 0, 0, 0, 0], [0, 0, 1, 1, 0]])
    assert meet(a, b).dim == 0
    assert join(a, b).dim == 2


def test_mismatched_ambient_rejected():
    ctx = field_for_q(2)
    with pytest.raises(DimensionMismatch):
        subspace_from_rows(ctx, 2, [[1, 0, 0, 0]])


def test_enumerate_examples():
    assert len(list(enumerate_subspaces(field_for_q(2), 2, 1))) == 7
    assert len(list(enumerate_subspaces(field_for_q(2), 3, 1))) == 35
    assert len(list(enumerate_subspaces(field_for_q(3), 2, 0))) == 13


@pytest.mark.parametrize("q", [2, 3])
@pytest.mark.parametrize("n", [0, 1, 2, 3, 4])
def test_enumeration_counts(q, n):
    ctx = field_for_q(q)
    for d in range(-1, n + 1):
        subs = list(enumerate_subspaces(ctx, n, d))
        assert len(subs) == gaussian_binomial(n + 1, d + 1, q)
        assert len(set(subs)) == len(subs)
        assert subs == sorted(subs)
        assert all(s.dim == d for s in subs)


def test_enumeration_count_gf4():
    ctx = field_for_q(4)
    for d in range(4):
        assert sum(1 for _ in enumerate_subspaces(ctx, 3, d)) == gaussian_binomial(4, d + 1, 4)


def test_points_of_examples():
    ctx2 = field_for_q(2)
    line = subspace_from_rows(ctx2, 4, [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0]])
    assert len(points_of(line)) == 3
    ctx3 = field_for_q(3)
    plane = subspace_from_rows(ctx3, 3, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]])
    assert len(points_of(plane)) == 13
    pt = subspace_from_rows(ctx3, 3, [[0, 1, 2, 0]])
    assert points_of(pt) == [pt]


def _random_subspace(rng, ctx, n):
    d = rng.randrange(-1, n + 1)
    rows = [[rng.randrange(ctx.q) for _ in range(n + 1)] for _ in range(d + 1)]
    return subspace_from_rows(ctx, n, rows)


@pytest.mark.parametrize("q,n", [(2, 4), (3, 3)])
def test_dimension_law(q, n):
    ctx = field_for_q(q)
    rng = random.Random(q * 100 + n)
    for _ in range(1000):
        a, b = _random_subspace(rng, ctx, n), _random_subspace(rng, ctx, n)
        m, j = meet(a, b), join(a, b)
        assert a.dim + b.dim == m.dim + j.dim
        assert a.contains(m) and b.contains(m)
        assert j.contains(a) and j.contains(b)
        assert point_mask(m) == point_mask(a) & point_mask(b)


def _random_invertible(rng, ctx, size):
    while True:
        mat = [[rng.randrange(ctx.q) for _ in range(size)] for _ in range(size)]
        if subspace_from_rows(ctx, size - 1, mat).dim == size - 1:
            return mat


@pytest.mark.parametrize("q,n", [(2, 4), (3, 3), (4, 3), (5, 2)])
def test_canonicity_under_basis_change(q, n):
    ctx = field_for_q(q)
    rng = random.Random(q + n)
    for _ in range(100):
        s = _random_subspace(rng, ctx, n)
        if s.dim < 0:
            continue
        basis = s.to_rows()
        size = len(basis)
        mat = _random_invertible(rng, ctx, size)
        new_rows = []
        for r in mat:
            row = [0] * (n + 1)
            for coef, brow in zip(r, basis):
                for i in range(n + 1):
                    row[i] = ctx.add(row[i], ctx.mul(coef, brow[i]))
            new_rows.append(row)
        rng.shuffle(new_rows)
        assert subspace_from_rows(ctx, n, new_rows) == s


@pytest.mark.parametrize("q,n", [(2, 3), (2, 4), (3, 3), (4, 2)])
def test_duality(q, n):
    ctx = field_for_q(q)
    hyperplanes = list(enumerate_subspaces(ctx, n, n - 1))
    assert len(hyperplanes) == theta(n, q)
    points = list(enumerate_subspaces(ctx, n, 0))
    assert sorted(perp(h) for h in hyperplanes) == points
    for s in list(enumerate_subspaces(ctx, n, 1))[:20]:
        assert perp(perp(s)) == s
        assert perp(s).dim == n - 1 - s.dim


def test_whole_space_and_subspaces_of():
    ctx = field_for_q(2)
    whole = whole_space(ctx, 3)
    assert whole.dim == 3
    assert sorted(subspaces_of(whole, 1)) == list(enumerate_subspaces(ctx, 3, 1))
    plane = subspace_from_rows(ctx, 3, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]])
    assert len(subspaces_of(plane, 1)) == 7
