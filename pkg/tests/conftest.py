"""Shared oracles and strategies for the test suite.

The oracles here are deliberately independent of the library's
elimination code paths: determinants by cofactor expansion, ranks by
checking all square submatrices.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from hypothesis import strategies as st

from entangle_minors import ExactMatrix

rationals = st.fractions(min_value=-6, max_value=6, max_denominator=4)


def matrices(rows: int, cols: int):
    return st.lists(
        st.lists(rationals, min_size=cols, max_size=cols),
        min_size=rows,
        max_size=rows,
    ).map(ExactMatrix)


def square_matrices(max_n: int = 4):
    return st.integers(min_value=1, max_value=max_n).flatmap(
        lambda n: matrices(n, n)
    )


def cofactor_det(matrix: ExactMatrix) -> Fraction:
    """Determinant by first-row cofactor expansion (oracle)."""

    def expand(rows) -> Fraction:
        n = len(rows)
        if n == 1:
            return rows[0][0]
        total = Fraction(0)
        for j, x in enumerate(rows[0]):
            if x == 0:
                continue
            sub = tuple(r[:j] + r[j + 1 :] for r in rows[1:])
            total += (-1) ** j * x * expand(sub)
        return total

    if matrix.rows != matrix.cols:
        raise ValueError("oracle determinant needs a square matrix")
    return expand(matrix.row_tuples())


def minor_rank(matrix: ExactMatrix) -> int:
    """Rank as the largest order of a nonzero square minor (oracle)."""
    rows = matrix.row_tuples()
    best = 0
    for order in range(1, min(matrix.rows, matrix.cols) + 1):
        found = False
        for ridx in combinations(range(matrix.rows), order):
            for cidx in combinations(range(matrix.cols), order):
                sub = ExactMatrix([[rows[i][j] for j in cidx] for i in ridx])
                if cofactor_det(sub) != 0:
                    found = True
                    break
            if found:
                break
        if found:
            best = order
        else:
            break
    return best


def random_rational(rng: random.Random, span: int = 9, max_den: int = 5) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, max_den))


def random_matrix(rng: random.Random, rows: int, cols: int) -> ExactMatrix:
    return ExactMatrix(
        [[random_rational(rng) for _ in range(cols)] for _ in range(rows)]
    )
