"""Exact scalar and matrix layer: determinant, rank, kernel, serialization."""

from __future__ import annotations

import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entangle_minors import (
    BandedFamily,
    ExactMatrix,
    ShapeError,
    as_scalar,
    build,
    format_scalar,
)

from conftest import cofactor_det, matrices, random_matrix, square_matrices


def test_scalar_coercion_and_format():
    assert as_scalar("3/6") == Fraction(1, 2)
    assert as_scalar(-7) == Fraction(-7)
    assert format_scalar(Fraction(10, 4)) == "5/2"
    assert format_scalar(Fraction(-8, 2)) == "-4"
    with pytest.raises(TypeError):
        as_scalar(0.5)


def test_matrix_shape_validation():
    with pytest.raises(ShapeError):
        ExactMatrix([[1, 2], [3]])
    with pytest.raises(ShapeError):
        ExactMatrix([])


def test_det_examples():
    assert ExactMatrix([[-3]]).det() == -3
    assert ExactMatrix.identity(4).det() == 1
    assert build(BandedFamily("D", 3, 1, 2)).det() == 6
    with pytest.raises(ShapeError):
        ExactMatrix([[1, 2, 3], [4, 5, 6]]).det()


def test_det_against_cofactor_oracle():
    rng = random.Random(1105)
    for _ in range(40):
        m = random_matrix(rng, 4, 4)
        assert m.det() == cofactor_det(m)


@settings(max_examples=40, deadline=None)
@given(square_matrices(max_n=4))
def test_det_transpose_invariant(m):
    assert m.det() == m.transpose().det()


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=1, max_value=3).flatmap(lambda n: st.tuples(matrices(n, n), matrices(n, n))))
def test_det_multiplicative(pair):
    m, n = pair
    assert (m @ n).det() == m.det() * n.det()


def test_det_multiplicative_up_to_six():
    rng = random.Random(7)
    for n in range(1, 7):
        m1 = random_matrix(rng, n, n)
        m2 = random_matrix(rng, n, n)
        assert (m1 @ m2).det() == m1.det() * m2.det()


def test_rank_examples():
    assert ExactMatrix.zeros(3, 4).rank() == 0
    e10_5 = build(BandedFamily("E", 2, 1, 10)).delete_rows({5})
    assert e10_5.rank() == 9
    assert ExactMatrix.identity(5).rank() == 5


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=1, max_value=4).flatmap(lambda n: matrices(n + 1, n)))
def test_rank_kernel_duality(m):
    kernel = m.kernel_vector()
    if m.rank() == m.cols:
        assert kernel is None
    else:
        assert kernel is not None
        assert any(x != 0 for x in kernel)
        assert all(x == 0 for x in m.mul_vector(kernel))


def test_kernel_examples():
    assert ExactMatrix.identity(3).kernel_vector() is None
    assert ExactMatrix([[1, 1], [2, 2]]).kernel_vector() == (1, -1)
    e10_5 = build(BandedFamily("E", 2, 1, 10)).delete_rows({5})
    kernel = e10_5.kernel_vector()
    assert kernel is not None and any(x != 0 for x in kernel)
    assert all(x == 0 for x in e10_5.mul_vector(kernel))


def test_delete_rows_contract():
    m = ExactMatrix([[1, 2], [3, 4], [5, 6]])
    assert m.delete_rows(()) == m
    assert m.delete_rows({2}) == ExactMatrix([[1, 2], [5, 6]])
    with pytest.raises(ValueError):
        m.delete_rows([1, 1])
    with pytest.raises(ValueError):
        m.delete_rows({0})
    with pytest.raises(ValueError):
        m.delete_rows({4})
    with pytest.raises(ShapeError):
        m.delete_rows({1, 2, 3})


def test_row_deletion_preserves_order():
    m = ExactMatrix([[i] for i in range(1, 8)])
    left = m.delete_rows({2, 5})
    assert [left[i, 0] for i in range(5)] == [1, 3, 4, 6, 7]


def test_serialization_round_trip():
    m = ExactMatrix([["1/2", "-3"], ["0", "7/3"]])
    payload = m.to_json()
    assert payload == {
        "rows": 2,
        "cols": 2,
        "entries": [["1/2", "-3"], ["0", "7/3"]],
    }
    assert ExactMatrix.from_json(payload) == m
    assert ExactMatrix.from_json(json.dumps(payload)) == m
    with pytest.raises(ShapeError):
        ExactMatrix.from_json({"rows": 3, "cols": 2, "entries": [["1", "2"]]})


def test_matmul_and_arithmetic():
    a = ExactMatrix([[1, 2], [3, 4]])
    b = ExactMatrix([[0, 1], [1, 0]])
    assert a @ b == ExactMatrix([[2, 1], [4, 3]])
    assert a + b == ExactMatrix([[1, 3], [4, 4]])
    assert 2 * a == ExactMatrix([[2, 4], [6, 8]])
    with pytest.raises(ShapeError):
        a @ ExactMatrix([[1, 2, 3]])


def test_det_sign_under_row_swap():
    rng = random.Random(42)
    m = random_matrix(rng, 5, 5)
    rows = [list(r) for r in m.row_tuples()]
    rows[0], rows[3] = rows[3], rows[0]
    assert ExactMatrix(rows).det() == -m.det()
