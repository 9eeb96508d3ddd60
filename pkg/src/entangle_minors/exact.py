"""Exact rational scalars and dense matrices.

Every quantity in this package is an arbitrary-precision rational
(``fractions.Fraction``); there is no floating point on any verification
path.  Determinants are computed by fraction-free (Bareiss) elimination
over the integers after clearing denominators, so signs and zeros are
exact.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

Scalar = Fraction


class ShapeError(ValueError):
    """Operand shapes do not admit the requested operation."""


def as_scalar(value: int | str | Fraction) -> Fraction:
    """Coerce an int, Fraction or "p/q" string to an exact scalar.

    Floats are rejected: binary rounding noise must never enter an exact
    computation.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not an exact scalar: {value!r}")


def format_scalar(value: Fraction) -> str:
    """Render a scalar as "p/q" in lowest terms, or "p" when q = 1."""
    return str(as_scalar(value))


def _primitive(vec: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Scale a nonzero rational vector to a primitive integer vector.

    The result has coprime integer entries and a positive first nonzero
    entry, which makes kernel witnesses deterministic and readable.
    """
    mult = lcm(*(x.denominator for x in vec))
    ints = [int(x * mult) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(Fraction(0) for _ in ints)
    lead = next(x for x in ints if x != 0)
    if lead < 0:
        g = -g
    return tuple(Fraction(x // g) for x in ints)


class ExactMatrix:
    """Immutable dense matrix of exact rationals.

    Entry access is 0-based (``M[i, j]``); the row indices taken by
    :meth:`delete_rows` are 1-based, matching the labelling used for
    deleted-row minors everywhere in this package.
    """

    __slots__ = ("_rows",)

    def __init__(self, rows: Iterable[Iterable[int | str | Fraction]]):
        data = tuple(tuple(as_scalar(x) for x in row) for row in rows)
        if not data or not data[0]:
            raise ShapeError("matrix needs at least one row and one column")
        width = len(data[0])
        if any(len(row) != width for row in data):
            raise ShapeError("rows have unequal lengths")
        self._rows = data

    # -- construction helpers -------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ExactMatrix":
        return cls([[0] * cols for _ in range(rows)])

    @classmethod
    def column(cls, entries: Sequence[int | str | Fraction]) -> "ExactMatrix":
        return cls([[x] for x in entries])

    # -- basic structure -------------------------------------------------------

    @property
    def rows(self) -> int:
        return len(self._rows)

    @property
    def cols(self) -> int:
        return len(self._rows[0])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        i, j = key
        return self._rows[i][j]

    def row_tuples(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._rows

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ExactMatrix) and self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        body = "; ".join(
            " ".join(format_scalar(x) for x in row) for row in self._rows
        )
        return f"ExactMatrix({self.rows}x{self.cols}: {body})"

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        return ExactMatrix(
            [
                [x + y for x, y in zip(r1, r2)]
                for r1, r2 in zip(self._rows, other._rows)
            ]
        )

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        return self + (-1) * other

    def __rmul__(self, scalar: int | Fraction) -> "ExactMatrix":
        s = as_scalar(scalar)
        return ExactMatrix([[s * x for x in row] for row in self._rows])

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other._rows))
        return ExactMatrix(
            [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in self._rows]
        )

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(list(zip(*self._rows)))

    def is_zero(self) -> bool:
        return all(x == 0 for row in self._rows for x in row)

    def mul_vector(self, vec: Sequence[Fraction]) -> tuple[Fraction, ...]:
        if len(vec) != self.cols:
            raise ShapeError("vector length does not match column count")
        return tuple(sum(a * b for a, b in zip(row, vec)) for row in self._rows)

    # -- row deletion (1-based, matching minor labels) --------------------------

    def delete_rows(self, indices: Iterable[int]) -> "ExactMatrix":
        """Remove the given 1-based rows, preserving the order of the rest."""
        idx = list(indices)
        chosen = set(idx)
        if len(chosen) != len(idx):
            raise ValueError(f"duplicate row indices: {sorted(idx)}")
        for i in chosen:
            if not 1 <= i <= self.rows:
                raise ValueError(f"row index {i} out of range 1..{self.rows}")
        if len(chosen) == self.rows:
            raise ShapeError("cannot delete every row")
        return ExactMatrix(
            [row for k, row in enumerate(self._rows, start=1) if k not in chosen]
        )

    # -- elimination-based operations -------------------------------------------

    def det(self) -> Fraction:
        """Exact determinant via fraction-free Bareiss elimination.

        Denominators are cleared row by row first, so all intermediate
        values are integers and entry growth stays polynomial.
        """
        if self.rows != self.cols:
            raise ShapeError(f"determinant needs a square matrix, got {self.shape}")
        n = self.rows
        mat: list[list[int]] = []
        denom = 1
        for row in self._rows:
            mult = lcm(*(x.denominator for x in row))
            mat.append([int(x * mult) for x in row])
            denom *= mult
        sign = 1
        prev = 1
        for k in range(n - 1):
            pivot_row = next((i for i in range(k, n) if mat[i][k]), None)
            if pivot_row is None:
                return Fraction(0)
            if pivot_row != k:
                mat[k], mat[pivot_row] = mat[pivot_row], mat[k]
                sign = -sign
            pivot = mat[k][k]
            for i in range(k + 1, n):
                mik = mat[i][k]
                row_i = mat[i]
                row_k = mat[k]
                for j in range(k + 1, n):
                    row_i[j] = (row_i[j] * pivot - mik * row_k[j]) // prev
                row_i[k] = 0
            prev = pivot
        return Fraction(sign * mat[n - 1][n - 1], denom)

    def rank(self) -> int:
        """Exact rank over the rationals."""
        rows = [list(row) for row in self._rows]
        nr, nc = self.rows, self.cols
        rank = 0
        for c in range(nc):
            pivot_row = next((i for i in range(rank, nr) if rows[i][c] != 0), None)
            if pivot_row is None:
                continue
            rows[rank], rows[pivot_row] = rows[pivot_row], rows[rank]
            piv = rows[rank][c]
            for i in range(rank + 1, nr):
                if rows[i][c] != 0:
                    f = rows[i][c] / piv
                    rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
            rank += 1
            if rank == nr:
                break
        return rank

    def kernel_vector(self) -> tuple[Fraction, ...] | None:
        """A nonzero kernel vector when one exists, else None.

        Returns None exactly when the columns are linearly independent.
        The witness is normalized to a primitive integer vector with a
        positive leading entry.
        """
        rows = [list(row) for row in self._rows]
        nr, nc = self.rows, self.cols
        pivot_cols: list[int] = []
        r = 0
        for c in range(nc):
            pivot_row = next((i for i in range(r, nr) if rows[i][c] != 0), None)
            if pivot_row is None:
                continue
            rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
            piv = rows[r][c]
            rows[r] = [x / piv for x in rows[r]]
            for i in range(nr):
                if i != r and rows[i][c] != 0:
                    f = rows[i][c]
                    rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
            pivot_cols.append(c)
            r += 1
            if r == nr:
                break
        if len(pivot_cols) == nc:
            return None
        free = next(c for c in range(nc) if c not in pivot_cols)
        vec = [Fraction(0)] * nc
        vec[free] = Fraction(1)
        for i, pc in enumerate(pivot_cols):
            vec[pc] = -rows[i][free]
        return _primitive(vec)

    # -- serialization -----------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[format_scalar(x) for x in row] for row in self._rows],
        }

    @classmethod
    def from_json(cls, obj: dict | str) -> "ExactMatrix":
        if isinstance(obj, str):
            obj = json.loads(obj)
        matrix = cls(obj["entries"])
        if matrix.shape != (obj["rows"], obj["cols"]):
            raise ShapeError(
                f"declared shape {(obj['rows'], obj['cols'])} "
                f"does not match entries {matrix.shape}"
            )
        return matrix
