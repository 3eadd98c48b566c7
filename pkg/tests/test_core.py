from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import rank_mod, rank_q
from polyfunctors.fields import GF, QQ, FieldMismatch, parse_field
from polyfunctors.linalg import Matrix, solve_linear

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=6)


def matrices(elements=rationals, max_side=5):
    return st.integers(1, max_side).flatmap(
        lambda r: st.integers(1, max_side).flatmap(
            lambda c: st.lists(st.lists(elements, min_size=c, max_size=c), min_size=r, max_size=r)))


def test_rank_examples():
    assert Matrix.zeros(QQ, 3, 3).rank() == 0
    assert Matrix.identity(QQ, 4).rank() == 4
    assert Matrix.from_rows(QQ, [[1, 2], [2, 4]]).rank() == 1


def test_solve_examples():
    b = (Fraction(3), Fraction(-1, 2), Fraction(7))
    assert solve_linear(Matrix.identity(QQ, 3), b) == b
    assert solve_linear(Matrix.from_rows(QQ, [[1, 1]]), [2]) == (2, 0)
    assert solve_linear(Matrix.from_rows(QQ, [[1], [1]]), [1, 2]) is None


def test_mixed_fields_rejected():
    with pytest.raises(FieldMismatch):
        Matrix.identity(QQ, 2) @ Matrix.identity(GF(5), 2)


def test_field_parsing_and_formatting():
    assert parse_field("q") is QQ
    f = parse_field("fp:7")
    assert f == GF(7) and f(-1) == 6 and f.format(3) == "3 mod 7"
    assert f.parse("3 mod 7") == 3
    assert QQ.parse("-4/6") == Fraction(-2, 3) and QQ.format(Fraction(-2, 3)) == "-2/3"
    with pytest.raises(ValueError):
        GF(6)
    with pytest.raises(ZeroDivisionError):
        GF(5).inv(0)


@given(matrices())
def test_rank_matches_oracle_and_transpose(rows):
    m = Matrix.from_rows(QQ, rows)
    assert m.rank() == rank_q(rows) == m.transpose().rank()


@given(matrices(st.integers(-6, 6)))
def test_modular_rank_bounded_by_rational_rank(rows):
    m = Matrix.from_rows(GF(3), rows)
    assert m.rank() == rank_mod(rows, 3) <= rank_q(rows)


@given(matrices(), st.data())
def test_solutions_are_exact(rows, data):
    m = Matrix.from_rows(QQ, rows)
    rhs = data.draw(st.lists(rationals, min_size=m.nrows, max_size=m.nrows))
    x = solve_linear(m, rhs)
    if x is None:
        augmented = [r + [b] for r, b in zip(rows, rhs)]
        assert rank_q(augmented) > rank_q(rows)
    else:
        assert m.apply(x) == tuple(rhs)


@given(matrices())
def test_nullspace_is_kernel(rows):
    m = Matrix.from_rows(QQ, rows)
    kernel = m.nullspace()
    assert len(kernel) == m.ncols - m.rank()
    assert all(not any(m.apply(v)) for v in kernel)
