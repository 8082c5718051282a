"""Sparse exact elimination: rank, reduction, and span solving."""

import random
from fractions import Fraction

from qhopf.field import Q, S, rf
from qhopf.linear import GaussianBasis, solve_in_span, vec_axpy

q, s = Q, S


def test_rank_and_dependence():
    basis = GaussianBasis(priority=lambda c: c)
    assert basis.add({0: rf(1), 1: q}) == 0
    assert basis.add({1: rf(2)}) == 1
    # dependent on the first two
    assert basis.add({0: rf(3), 1: 3 * q + 2}) is None
    assert basis.rank == 2
    assert basis.pivot_columns() == [0, 1]


def test_reduce_residual():
    basis = GaussianBasis(priority=lambda c: c)
    basis.add({0: rf(1), 2: q})
    res = basis.reduce({0: q, 1: rf(1)})
    assert set(res) == {1, 2}
    assert res[1] == 1
    assert res[2] == -(q * q)


def test_priority_controls_pivot_choice():
    # eliminate column 9 first: the surviving free column is 0
    basis = GaussianBasis(priority=lambda c: -c)
    basis.add({0: rf(1), 9: rf(1)})
    assert list(basis.pivots) == [9]
    res = basis.reduce({9: rf(5)})
    assert set(res) == {0}


def test_solve_in_span_exact():
    v1 = {"x": rf(1), "y": q}
    v2 = {"y": rf(1) - q}
    target = {"x": rf(2), "y": rf(1) + q}
    sol = solve_in_span([v1, v2], target, priority=lambda c: c)
    assert sol is not None
    check = {}
    vec_axpy(check, sol[0], v1)
    vec_axpy(check, sol[1], v2)
    assert check == target


def test_solve_in_span_unsolvable():
    assert solve_in_span([{"x": rf(1)}], {"y": rf(1)}, priority=lambda c: c) is None


def test_solve_in_span_dependent_vectors():
    v1 = {"x": rf(1)}
    v2 = {"x": rf(2)}
    v3 = {"y": s}
    sol = solve_in_span([v1, v2, v3], {"x": rf(3), "y": s * s}, priority=lambda c: c)
    assert sol is not None
    assert sol[0] + 2 * sol[1] == 3
    assert sol[2] == s


def test_random_consistency():
    rng = random.Random(52)
    for _ in range(10):
        vectors = []
        for _ in range(4):
            vectors.append(
                {j: rf(Fraction(rng.randrange(-2, 3))) + q * rng.randrange(-1, 2) for j in range(3)}
            )
        coeffs = [rf(rng.randrange(-2, 3)) for _ in range(4)]
        target = {}
        for c, v in zip(coeffs, vectors):
            vec_axpy(target, c, v)
        sol = solve_in_span(vectors, dict(target), priority=lambda c: c)
        assert sol is not None
        got = {}
        for c, v in zip(sol, vectors):
            vec_axpy(got, c, v)
        assert got == target
