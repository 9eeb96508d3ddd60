"""Determinant calculus for the banded families.

The determinant sequence d_n = |D_n(a, b)| satisfies the third-order
recurrence

    d_n = -a d_{n-1} - a b d_{n-2} - b^3 d_{n-3}     (n >= 2),

with d_{-1} = 0, d_0 = 1 and d_1 = -a.  At b = 1 the generating function
of the sequence is the reciprocal power series of 1 + a x + a x^2 + x^3,
and when x^3 + a x^2 + a x + 1 has three distinct roots the terms admit a
closed partial-fraction form.  Deleted-row minors of E reduce to products
of d-values:

    |E_n^k(a, 1)| = (-1)^(n-k+1) (d_{k-1} d_{n-k+1} - d_{k-2} d_{n-k}).

This module computes all of the above along all three routes, enumerates
every order-n minor of a tall matrix, and computes the minimum support of
nonzero column combinations, which the vanishing pattern of those minors
characterizes exactly.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Sequence

from .exact import ExactMatrix, ShapeError, as_scalar, format_scalar
from .families import BandedFamily


class RepeatedRootError(ValueError):
    """The cubic has a repeated root; the closed form does not apply."""


class ColumnsDependentError(ValueError):
    """Minimum support is undefined when the columns are dependent."""


def threads_from_env() -> int:
    """Worker count from ENTANGLE_MINORS_THREADS (default 1, sequential)."""
    raw = os.environ.get("ENTANGLE_MINORS_THREADS", "1")
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"ENTANGLE_MINORS_THREADS must be an integer, got {raw!r}") from exc
    if value < 1:
        raise ValueError(f"ENTANGLE_MINORS_THREADS must be >= 1, got {value}")
    return value


# ---------------------------------------------------------------------------
# d-sequence
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DSequence:
    """The determinant sequence d_{-1}, d_0, ..., d_{n_max} for fixed (a, b)."""

    a: Fraction
    b: Fraction
    values: tuple[Fraction, ...]  # values[i] holds d_{i-1}

    def __getitem__(self, n: int) -> Fraction:
        if n < -1:
            raise IndexError(f"d_{n} is not defined")
        return self.values[n + 1]

    @property
    def n_max(self) -> int:
        return len(self.values) - 2

    def to_json(self) -> dict:
        return {
            "a": str(self.a),
            "b": str(self.b),
            "values": {str(i - 1): format_scalar(v) for i, v in enumerate(self.values)},
        }


def d_sequence_recurrence(
    a: int | str | Fraction, b: int | str | Fraction, n_max: int
) -> DSequence:
    """d_{-1}..d_{n_max} by the third-order recurrence."""
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    a = as_scalar(a)
    b = as_scalar(b)
    vals = [Fraction(0), Fraction(1)]  # d_{-1}, d_0
    if n_max >= 1:
        vals.append(-a)
    for _ in range(2, n_max + 1):
        vals.append(-a * vals[-1] - a * b * vals[-2] - b**3 * vals[-3])
    return DSequence(a, b, tuple(vals))


def series_reciprocal(poly: Sequence[Fraction], n_max: int) -> list[Fraction]:
    """Coefficients 0..n_max of the power-series inverse of a unit polynomial."""
    if not poly or poly[0] != 1:
        raise ValueError("series inversion requires constant term 1")
    coeffs = [Fraction(1)]
    for n in range(1, n_max + 1):
        acc = Fraction(0)
        for j in range(1, min(n, len(poly) - 1) + 1):
            acc += poly[j] * coeffs[n - j]
        coeffs.append(-acc)
    return coeffs


def d_sequence_series(a: int | str | Fraction, n_max: int) -> DSequence:
    """d_0..d_{n_max} at b = 1 as Maclaurin coefficients of 1/(1+ax+ax^2+x^3)."""
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    a = as_scalar(a)
    coeffs = series_reciprocal([Fraction(1), a, a, Fraction(1)], n_max)
    return DSequence(a, Fraction(1), (Fraction(0), *coeffs))


# ---------------------------------------------------------------------------
# closed form over the quadratic extension Q(sqrt((a-1)^2 - 4))
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _QuadExt:
    """p + q*sqrt(disc) with rational p, q; disc is a fixed non-square.

    Valid for negative disc as well (imaginary extension); all arithmetic
    stays exact.
    """

    p: Fraction
    q: Fraction
    disc: Fraction

    def __add__(self, other: "_QuadExt") -> "_QuadExt":
        return _QuadExt(self.p + other.p, self.q + other.q, self.disc)

    def __sub__(self, other: "_QuadExt") -> "_QuadExt":
        return _QuadExt(self.p - other.p, self.q - other.q, self.disc)

    def __mul__(self, other: "_QuadExt") -> "_QuadExt":
        return _QuadExt(
            self.p * other.p + self.q * other.q * self.disc,
            self.p * other.q + self.q * other.p,
            self.disc,
        )

    def inverse(self) -> "_QuadExt":
        norm = self.p * self.p - self.q * self.q * self.disc
        if norm == 0:
            raise ZeroDivisionError("inverse of zero in quadratic extension")
        return _QuadExt(self.p / norm, -self.q / norm, self.disc)

    def power(self, k: int) -> "_QuadExt":
        result = _QuadExt(Fraction(1), Fraction(0), self.disc)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result


def _rational_sqrt(x: Fraction) -> Fraction | None:
    """sqrt(x) when x is the square of a rational, else None."""
    if x < 0:
        return None
    pn, qn = isqrt(x.numerator), isqrt(x.denominator)
    if pn * pn == x.numerator and qn * qn == x.denominator:
        return Fraction(pn, qn)
    return None


def d_closed_form(a: int | str | Fraction, k: int) -> Fraction:
    """d_k at b = 1 from the three-root partial-fraction formula.

    The cubic x^3 + a x^2 + a x + 1 factors as (x+1)(x^2 + (a-1)x + 1);
    its roots are distinct exactly when a is neither 3 nor -1.  Repeated
    roots raise :class:`RepeatedRootError` (use the recurrence instead).
    The quadratic's roots are handled exactly: rationally when
    (a-1)^2 - 4 is a rational square, otherwise inside the quadratic
    extension Q(sqrt((a-1)^2 - 4)), including the imaginary case.
    """
    if k < -1:
        raise ValueError(f"d_{k} is not defined")
    a = as_scalar(a)
    disc = (a - 1) ** 2 - 4
    if disc == 0 or a == 3 or a == -1:
        raise RepeatedRootError(
            f"x^3 + {a}x^2 + {a}x + 1 has a repeated root at a = {a}; "
            "formula inapplicable, use recurrence"
        )
    if k == -1:
        return Fraction(0)
    if k == 0:
        return Fraction(1)

    root = _rational_sqrt(disc)
    if root is not None:
        alpha = Fraction(-1)
        beta = (1 - a + root) / 2
        gamma = (1 - a - root) / 2
        total = Fraction(0)
        for top, lo1, lo2 in (
            (alpha, alpha - beta, gamma - alpha),
            (beta, alpha - beta, beta - gamma),
            (gamma, gamma - alpha, beta - gamma),
        ):
            total += 1 / (top ** (k + 1) * lo1 * lo2)
        return total

    half = Fraction(1, 2)
    alpha = _QuadExt(Fraction(-1), Fraction(0), disc)
    beta = _QuadExt((1 - a) * half, half, disc)
    gamma = _QuadExt((1 - a) * half, -half, disc)
    total = _QuadExt(Fraction(0), Fraction(0), disc)
    for top, lo1, lo2 in (
        (alpha, alpha - beta, gamma - alpha),
        (beta, alpha - beta, beta - gamma),
        (gamma, gamma - alpha, beta - gamma),
    ):
        total = total + (top.power(k + 1) * lo1 * lo2).inverse()
    if total.q != 0:
        raise ArithmeticError(
            f"closed form produced a non-rational value at a={a}, k={k}: "
            f"{total.p} + {total.q}*sqrt({disc})"
        )
    return total.p


# ---------------------------------------------------------------------------
# minor formulas for family E
# ---------------------------------------------------------------------------


def e_minor_product_formula(a: int | str | Fraction, n: int, k: int) -> Fraction:
    """|E_n^k(a, 1)| from the d-sequence product formula."""
    if not 1 <= k <= n + 1:
        raise ValueError(f"k must satisfy 1 <= k <= {n + 1}, got {k}")
    d = d_sequence_recurrence(a, 1, n)
    value = d[k - 1] * d[n - k + 1] - d[k - 2] * d[n - k]
    return value if (n - k + 1) % 2 == 0 else -value


def e_minor_b_zero(a: int | str | Fraction, n: int, k: int) -> Fraction:
    """|E_n^k(a, 0)| = (-1)^(k-1) a^n."""
    if not 1 <= k <= n + 1:
        raise ValueError(f"k must satisfy 1 <= k <= {n + 1}, got {k}")
    a = as_scalar(a)
    return a**n if k % 2 == 1 else -(a**n)


# ---------------------------------------------------------------------------
# exhaustive minor enumeration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MinorReport:
    """Every order-n minor of an (n+r) x n matrix, by deleted-row set."""

    spec: BandedFamily | None
    order: int
    entries: tuple[tuple[tuple[int, ...], Fraction], ...]

    @property
    def all_nonzero(self) -> bool:
        return not self.zero_witnesses

    @property
    def zero_witnesses(self) -> tuple[tuple[int, ...], ...]:
        return tuple(rows for rows, value in self.entries if value == 0)

    def value(self, deleted: Sequence[int]) -> Fraction:
        key = tuple(sorted(deleted))
        for rows, value in self.entries:
            if rows == key:
                return value
        raise KeyError(f"no minor with deleted rows {key}")

    def to_json(self) -> dict:
        return {
            "family": self.spec.to_json() if self.spec else None,
            "order": self.order,
            "minors": [
                {"deleted": list(rows), "value": format_scalar(value)}
                for rows, value in self.entries
            ],
            "all_nonzero": self.all_nonzero,
            "zero_witnesses": [list(rows) for rows in self.zero_witnesses],
        }


def _deleted_det(args: tuple[tuple[tuple[Fraction, ...], ...], tuple[int, ...]]) -> Fraction:
    rows, deleted = args
    keep = [row for i, row in enumerate(rows, start=1) if i not in deleted]
    return ExactMatrix(keep).det()


def all_order_n_minors(
    matrix: ExactMatrix,
    spec: BandedFamily | None = None,
    processes: int | None = None,
) -> MinorReport:
    """Determinants of every square submatrix keeping all columns.

    Deleted-row sets are enumerated in lexicographic order; the report is
    identical whether evaluated sequentially or in parallel.
    """
    if matrix.rows <= matrix.cols:
        raise ShapeError(
            f"need strictly more rows than columns, got {matrix.shape}"
        )
    r = matrix.rows - matrix.cols
    row_sets = list(itertools.combinations(range(1, matrix.rows + 1), r))
    workers = processes if processes is not None else threads_from_env()
    if workers > 1:
        rows = matrix.row_tuples()
        with ProcessPoolExecutor(max_workers=workers) as pool:
            values = list(
                pool.map(_deleted_det, [(rows, rs) for rs in row_sets], chunksize=16)
            )
    else:
        values = [matrix.delete_rows(rs).det() for rs in row_sets]
    return MinorReport(spec, matrix.cols, tuple(zip(row_sets, values)))


# ---------------------------------------------------------------------------
# minimum support of nonzero column combinations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MinSupport:
    """Minimum nonzero-entry count over all nonzero column combinations."""

    size: int
    coefficients: tuple[Fraction, ...]
    vector: tuple[Fraction, ...]

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "coefficients": [format_scalar(x) for x in self.coefficients],
            "vector": [format_scalar(x) for x in self.vector],
        }


def min_support(matrix: ExactMatrix) -> MinSupport:
    """Exact minimum support, with an achieving combination as witness.

    A nonzero combination supported inside a row set T exists iff the
    submatrix keeping the rows outside T is rank-deficient, so the
    minimum is found by growing |T| from 1; it never exceeds r + 1 for an
    (n+r) x n matrix.  Requires linearly independent columns.
    """
    nr, nc = matrix.rows, matrix.cols
    if matrix.rank() < nc:
        raise ColumnsDependentError(
            "columns are linearly dependent; minimum support is undefined"
        )
    r = nr - nc
    for size in range(1, r + 1):
        for support in itertools.combinations(range(1, nr + 1), size):
            outside = matrix.delete_rows(support)
            coeffs = outside.kernel_vector()
            if coeffs is not None:
                return MinSupport(size, coeffs, matrix.mul_vector(coeffs))
    # all order-n minors are nonzero: the minimum is exactly r + 1
    for c in range(nc):
        col = tuple(matrix[i, c] for i in range(nr))
        if sum(1 for x in col if x != 0) == r + 1:
            unit = tuple(
                Fraction(1) if j == c else Fraction(0) for j in range(nc)
            )
            return MinSupport(r + 1, unit, col)
    support = tuple(range(1, r + 2))
    coeffs = matrix.delete_rows(support).kernel_vector()
    assert coeffs is not None  # fewer rows than columns always has a kernel
    return MinSupport(r + 1, coeffs, matrix.mul_vector(coeffs))
