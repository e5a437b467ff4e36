from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bvhochschild.scalars import (
    QQ, PrimeField, SpanTracker, invert, kernel_basis, mat_mul, mat_vec,
    parse_field, rank, rref, solve, vec_is_zero,
)

F5 = PrimeField(5)


def q(rows):
    return [[Fraction(x) for x in row] for row in rows]


def test_parse_field():
    assert parse_field("Q") is QQ
    assert parse_field("Fp 7").p == 7
    assert parse_field("Fp:11").p == 11
    assert parse_field("F13").p == 13
    with pytest.raises(ValueError):
        parse_field("Fp 6")
    with pytest.raises(ValueError):
        parse_field("R")


def test_prime_field_arithmetic():
    assert F5.add(3, 4) == 2
    assert F5.inv(2) == 3
    assert F5.of(Fraction(1, 2)) == 3
    assert F5.parse("-1/2") == F5.neg(3) == 2
    with pytest.raises(ZeroDivisionError):
        F5.of(Fraction(1, 5))


def test_rref_known():
    red, pivots = rref(QQ, q([[1, 2], [2, 4]]))
    assert pivots == [0]
    assert red[0] == [1, 2]
    assert red[1] == [0, 0]


def test_rank_and_kernel_oracle():
    m = q([[1, 2], [2, 4]])
    assert rank(QQ, m) == 1
    ker = kernel_basis(QQ, m)
    assert ker == [[Fraction(-2), Fraction(1)]]
    assert all(vec_is_zero(QQ, mat_vec(QQ, m, v)) for v in ker)


def test_solve_oracle():
    m = q([[1, 1], [0, 0]])
    assert solve(QQ, m, [Fraction(3), Fraction(0)]) == [3, 0]
    assert solve(QQ, m, [Fraction(3), Fraction(1)]) is None


def test_solve_empty_system():
    assert solve(QQ, [], [], ncols=3) == [0, 0, 0]


def test_invert_oracle():
    m = q([[0, 1], [1, 0]])
    assert invert(QQ, m) == q([[0, 1], [1, 0]])
    assert invert(QQ, q([[1, 2], [2, 4]])) is None
    m3 = q([[2, 1, 0], [1, 1, 0], [0, 3, 1]])
    inv3 = invert(QQ, m3)
    assert mat_mul(QQ, m3, inv3) == q([[1, 0, 0], [0, 1, 0], [0, 0, 1]])


def test_bareiss_zero_multiplier_rows():
    # regression: skipping the zero-multiplier row below the pivot breaks
    # the exactness of the fraction-free division later on
    m = q([[3, 1, 1], [0, 5, 1], [2, 1, 1]])
    red, pivots = rref(QQ, m)
    assert pivots == [0, 1, 2]
    assert invert(QQ, m) is not None


def test_span_tracker():
    t = SpanTracker(QQ)
    assert t.add([Fraction(1), Fraction(2)])
    assert not t.add([Fraction(2), Fraction(4)])
    assert t.contains([Fraction(-3), Fraction(-6)])
    assert t.add([Fraction(0), Fraction(1)])
    assert t.rank == 2


entries = st.integers(min_value=-9, max_value=9)


@st.composite
def matrices(draw, max_dim=5):
    nrows = draw(st.integers(1, max_dim))
    ncols = draw(st.integers(1, max_dim))
    return [[Fraction(draw(entries)) for _ in range(ncols)]
            for _ in range(nrows)]


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_nullity_and_kernel_membership(m):
    ncols = len(m[0])
    ker = kernel_basis(QQ, m)
    assert rank(QQ, m) + len(ker) == ncols
    for v in ker:
        assert vec_is_zero(QQ, mat_vec(QQ, m, v))


@settings(max_examples=60, deadline=None)
@given(matrices(), st.lists(entries, min_size=5, max_size=5))
def test_solve_finds_consistent_solutions(m, xs):
    x = [Fraction(c) for c in xs[:len(m[0])]]
    b = mat_vec(QQ, m, x)
    got = solve(QQ, m, b)
    assert got is not None
    assert mat_vec(QQ, m, got) == b


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_mod_p_is_at_most_rational_rank(m):
    mp = [[F5.of(x) for x in row] for row in m]
    assert rank(F5, mp) <= rank(QQ, m)


@settings(max_examples=40, deadline=None)
@given(matrices(max_dim=4))
def test_rref_is_projection(m):
    red, pivots = rref(QQ, m)
    again, pivots2 = rref(QQ, red)
    assert pivots == pivots2
    assert [row for row in again] == [row for row in red]
