from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gptlab.rational import coordinates, fmt, nullspace, primitive, q, rank, row_basis, rref, solve, vec
from oracles import sympy_rank

small = st.integers(-5, 5)
matrices = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=1, max_size=5))


def test_q_parses_strings_and_refuses_floats():
    assert q("3/6") == Fraction(1, 2)
    assert q(" -4 ") == -4
    with pytest.raises(TypeError):
        q(0.5)
    with pytest.raises(TypeError):
        q(True)


def test_fmt_drops_unit_denominator():
    assert fmt(Fraction(4, 2)) == "2"
    assert fmt(Fraction(-2, 6)) == "-1/3"


def test_rank_examples():
    assert rank([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == 3
    assert rank([[0, 0], [0, 0]]) == 0
    assert rank([]) == 0


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_rank_matches_sympy(m):
    assert rank(m) == sympy_rank(m)


@settings(max_examples=100, deadline=None)
@given(matrices, st.randoms(use_true_random=False), st.integers(1, 7))
def test_rank_invariant_under_permutation_and_scaling(m, rnd, c):
    rows = [list(r) for r in m]
    rnd.shuffle(rows)
    rows = [[Fraction(c, 3) * x for x in r] for r in rows]
    assert rank(rows) == rank(m)


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_nullspace_is_complementary(m):
    n = len(m[0])
    ns = nullspace(m, n)
    assert len(ns) == n - rank(m)
    for v in ns:
        assert all(sum(Fraction(a) * b for a, b in zip(r, v)) == 0 for r in m)


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_row_basis_spans(m):
    idx = row_basis(m)
    assert len(idx) == rank(m)
    assert rank([m[i] for i in idx]) == rank(m)


def test_rref_and_solve():
    R, pivots = rref([[2, 4], [1, 3]])
    assert R == [[1, 0], [0, 1]] and pivots == [0, 1]
    assert solve([[1, 1], [1, -1]], [2, 0]) == vec([1, 1])
    assert solve([[1, 1], [1, 1]], [1, 2]) is None


def test_coordinates_and_primitive():
    assert coordinates([[1, 0], [1, 1]], [3, 2]) == vec([1, 2])
    assert coordinates([[1, 0]], [0, 1]) is None
    assert primitive([Fraction(2, 3), Fraction(4, 3)]) == (1, 2)
