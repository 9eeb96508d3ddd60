"""Anti-diagonal pattern subspaces of C^m (x) C^n and Schmidt-rank checks.

A tensor is stored as its m x n coefficient matrix under the canonical
linear isomorphism sending |e_i>(x)|f_j> to the (i, j) matrix unit; the
Schmidt rank of a tensor equals the rank of that matrix.  A pattern
subspace is spanned by vectors whose coefficient matrices place one fixed
length-L window along contiguous cells of a single anti-diagonal, stored
by increasing row index.  Its dimension is (m-L+1)(n-L+1), and no nonzero
vector in it can have Schmidt rank below L as long as, for every occurring
anti-diagonal length, the full-window shift matrix of the pattern has all
its maximal-order minors nonzero: the bottom-rightmost anti-diagonal
carrying a nonzero component then contains at least L nonzero entries,
which anchor an anti-triangular L x L submatrix with nonzero determinant.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .exact import ExactMatrix, ShapeError, as_scalar, format_scalar
from .families import shift_matrix
from .minors import all_order_n_minors

_MODP = (1 << 31) - 1

DEFAULT_COEFF_SET = (-2, -1, 0, 1, 2)
DEFAULT_GRID_BUDGET = 2_000_000


class BudgetExceededError(RuntimeError):
    """A requested exhaustive grid is larger than the allowed budget."""


class WitnessNotFoundError(RuntimeError):
    """No generator with the requested properties exists at this instance."""


# ---------------------------------------------------------------------------
# tensors as coefficient matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TensorVector:
    """Element of C^m (x) C^n held as its m x n coefficient matrix."""

    coeffs: ExactMatrix

    @property
    def m(self) -> int:
        return self.coeffs.rows

    @property
    def n(self) -> int:
        return self.coeffs.cols

    @classmethod
    def zero(cls, m: int, n: int) -> "TensorVector":
        return cls(ExactMatrix.zeros(m, n))

    def __add__(self, other: "TensorVector") -> "TensorVector":
        return TensorVector(self.coeffs + other.coeffs)

    def __sub__(self, other: "TensorVector") -> "TensorVector":
        return TensorVector(self.coeffs - other.coeffs)

    def __rmul__(self, scalar: int | Fraction) -> "TensorVector":
        return TensorVector(as_scalar(scalar) * self.coeffs)

    def is_zero(self) -> bool:
        return self.coeffs.is_zero()

    def schmidt_rank(self) -> int:
        """Rank of the coefficient matrix; zero only for the zero tensor."""
        return self.coeffs.rank()

    def flatten(self) -> tuple[Fraction, ...]:
        return tuple(x for row in self.coeffs.row_tuples() for x in row)

    def to_triplets(self) -> tuple[tuple[int, int, Fraction], ...]:
        return tuple(
            (i, j, self.coeffs[i, j])
            for i in range(self.m)
            for j in range(self.n)
            if self.coeffs[i, j] != 0
        )

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "coeffs": [[i, j, format_scalar(v)] for i, j, v in self.to_triplets()],
        }


def phi(
    terms: Iterable[tuple[int, int, int | str | Fraction]], m: int, n: int
) -> TensorVector:
    """Tensor from (i, j, coefficient) terms over the canonical basis.

    Indices are 0-based; repeated (i, j) labels accumulate, so the map is
    linear in the term list.
    """
    grid = [[Fraction(0)] * n for _ in range(m)]
    for i, j, value in terms:
        if not (0 <= i < m and 0 <= j < n):
            raise IndexError(f"basis label ({i}, {j}) outside {m} x {n}")
        grid[i][j] += as_scalar(value)
    return TensorVector(ExactMatrix(grid))


def phi_inverse(vector: TensorVector) -> tuple[tuple[int, int, Fraction], ...]:
    """Nonzero coefficients of a tensor, sorted by basis label."""
    return vector.to_triplets()


def schmidt_rank(vector: TensorVector) -> int:
    return vector.schmidt_rank()


# ---------------------------------------------------------------------------
# pattern subspaces
# ---------------------------------------------------------------------------


def antidiagonal_length(m: int, n: int, d: int) -> int:
    """Number of cells (i, j) with i + j = d in an m x n matrix."""
    if not 0 <= d <= m + n - 2:
        return 0
    return min(d + 1, m, n, m + n - 1 - d)


@dataclass(frozen=True)
class BasisVector:
    antidiagonal: int
    start_row: int
    vector: TensorVector


@dataclass(frozen=True)
class SubspaceBasis:
    """Pattern-subspace basis grouped by anti-diagonal."""

    name: str
    m: int
    n: int
    pattern: tuple[Fraction, ...]
    members: tuple[BasisVector, ...]
    hypothesis: str = ""
    hypothesis_holds: bool = True

    @property
    def claimed_min_rank(self) -> int:
        return len(self.pattern)

    @property
    def dimension(self) -> int:
        return len(self.members)

    @property
    def groups(self) -> dict[int, tuple[BasisVector, ...]]:
        out: dict[int, list[BasisVector]] = {}
        for member in self.members:
            out.setdefault(member.antidiagonal, []).append(member)
        return {d: tuple(ms) for d, ms in out.items()}

    @property
    def vectors(self) -> tuple[TensorVector, ...]:
        return tuple(member.vector for member in self.members)

    def stacked_rows(self) -> ExactMatrix:
        return ExactMatrix([member.vector.flatten() for member in self.members])

    def combination(self, coefficients: Sequence[Fraction]) -> TensorVector:
        if len(coefficients) != self.dimension:
            raise ShapeError("coefficient count does not match basis dimension")
        total = TensorVector.zero(self.m, self.n)
        for lam, member in zip(coefficients, self.members):
            if lam != 0:
                total = total + lam * member.vector
        return total

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "m": self.m,
            "n": self.n,
            "pattern": [format_scalar(x) for x in self.pattern],
            "claimed_min_rank": self.claimed_min_rank,
            "hypothesis": self.hypothesis,
            "hypothesis_holds": self.hypothesis_holds,
            "dimension": self.dimension,
            "basis": [
                {
                    "antidiagonal": member.antidiagonal,
                    "window_start_row": member.start_row,
                    "coeffs": [
                        [i, j, format_scalar(v)]
                        for i, j, v in member.vector.to_triplets()
                    ],
                }
                for member in self.members
            ],
        }


def build_pattern_subspace(
    pattern: Sequence[int | str | Fraction],
    m: int,
    n: int,
    *,
    name: str = "pattern",
    hypothesis: str = "",
    hypothesis_holds: bool = True,
) -> SubspaceBasis:
    """One basis vector per full length-L window on each anti-diagonal.

    The window at anti-diagonal d starting at row i places pattern[t] in
    cell (i + t, d - i - t); anti-diagonals shorter than L contribute
    nothing.  The basis size is (m-L+1)(n-L+1).
    """
    window = tuple(as_scalar(x) for x in pattern)
    length = len(window)
    if length < 1:
        raise ValueError("pattern must be nonempty")
    if window[0] == 0 or window[-1] == 0:
        raise ValueError(f"pattern endpoints must be nonzero, got {window}")
    if m < length or n < length:
        raise ShapeError(
            f"need m, n >= pattern length {length}, got m={m}, n={n}"
        )
    members = []
    for d in range(m + n - 1):
        lo = max(0, d - n + 1)
        hi = min(m - length, d - length + 1)
        for start in range(lo, hi + 1):
            vec = phi(
                [(start + t, d - start - t, window[t]) for t in range(length)], m, n
            )
            members.append(BasisVector(d, start, vec))
    return SubspaceBasis(
        name, m, n, window, tuple(members), hypothesis, hypothesis_holds
    )


def rank4_subspace(
    a: int | str | Fraction, m: int, n: int, tilde: bool = False
) -> SubspaceBasis:
    """The window-4 subspace with pattern (1, -a, a, -1), or (1, a, a, 1).

    Every nonzero vector has Schmidt rank >= 4 when a = 3 or a > 5 for
    the alternating pattern, resp. |a| > 5 for the same-sign variant.
    """
    a = as_scalar(a)
    if min(m, n) < 4:
        raise ShapeError(f"need min(m, n) >= 4, got m={m}, n={n}")
    if tilde:
        return build_pattern_subspace(
            (1, a, a, 1),
            m,
            n,
            name="rank4-tilde",
            hypothesis="|a| > 5",
            hypothesis_holds=abs(a) > 5,
        )
    return build_pattern_subspace(
        (1, -a, a, -1),
        m,
        n,
        name="rank4",
        hypothesis="a = 3 or a > 5",
        hypothesis_holds=a == 3 or a > 5,
    )


def rank3_rank4_pair(
    a: int | str | Fraction, m: int, n: int
) -> tuple[SubspaceBasis, SubspaceBasis]:
    """Nested pair: outer pattern (1, a, 1), inner pattern (1, a+1, a+1, 1).

    Each inner generator is the sum of two adjacent outer generators on
    the same anti-diagonal, so the inner space sits inside the outer one;
    the outer min-rank-3 claim needs |a| >= 2 and the inner min-rank-4
    claim needs a > 4.
    """
    a = as_scalar(a)
    if min(m, n) < 4:
        raise ShapeError(f"need min(m, n) >= 4, got m={m}, n={n}")
    outer = build_pattern_subspace(
        (1, a, 1),
        m,
        n,
        name="pair-outer",
        hypothesis="|a| >= 2",
        hypothesis_holds=abs(a) >= 2,
    )
    inner = build_pattern_subspace(
        (1, a + 1, a + 1, 1),
        m,
        n,
        name="pair-inner",
        hypothesis="a > 4",
        hypothesis_holds=a > 4,
    )
    if not containment_check(inner, outer):
        raise RuntimeError("inner pattern subspace escaped the outer one")
    return outer, inner


def rank_chain(
    a: int | str | Fraction, m: int, n: int
) -> tuple[SubspaceBasis, SubspaceBasis, SubspaceBasis]:
    """Nested chain of window lengths 2, 3, 4 built from pair-sums.

    Starting from the pattern (a, 1), summing adjacent windows scaled by
    1/a yields (1, a + 1/a, 1), and summing those again yields
    (1, a + 1/a + 1, a + 1/a + 1, 1).  The min-rank claims 2, 3, 4 hold
    when a > 0 and a + 1/a > 4.
    """
    a = as_scalar(a)
    if a == 0:
        raise ValueError("a must be nonzero (the chain divides by a)")
    if min(m, n) < 4:
        raise ShapeError(f"need min(m, n) >= 4, got m={m}, n={n}")
    q = a + 1 / a
    hypothesis = "a > 0 and a + 1/a > 4"
    holds = a > 0 and q > 4
    big = build_pattern_subspace(
        (a, 1), m, n, name="chain-rank2", hypothesis=hypothesis, hypothesis_holds=holds
    )
    mid = build_pattern_subspace(
        (1, q, 1), m, n, name="chain-rank3", hypothesis=hypothesis, hypothesis_holds=holds
    )
    small = build_pattern_subspace(
        (1, q + 1, q + 1, 1),
        m,
        n,
        name="chain-rank4",
        hypothesis=hypothesis,
        hypothesis_holds=holds,
    )
    if not containment_check(mid, big) or not containment_check(small, mid):
        raise RuntimeError("chain nesting failed the rank check")
    return big, mid, small


# ---------------------------------------------------------------------------
# span membership
# ---------------------------------------------------------------------------


def containment_check(inner: SubspaceBasis, outer: SubspaceBasis) -> bool:
    """True iff span(inner) is contained in span(outer)."""
    if (inner.m, inner.n) != (outer.m, outer.n):
        raise ShapeError(
            f"ambient spaces differ: {(inner.m, inner.n)} vs {(outer.m, outer.n)}"
        )
    outer_rows = [member.vector.flatten() for member in outer.members]
    inner_rows = [member.vector.flatten() for member in inner.members]
    outer_rank = ExactMatrix(outer_rows).rank()
    return ExactMatrix(outer_rows + inner_rows).rank() == outer_rank


def vector_in_span(vector: TensorVector, basis: SubspaceBasis) -> bool:
    """True iff the vector lies in the span of the basis."""
    if (vector.m, vector.n) != (basis.m, basis.n):
        raise ShapeError("vector does not live in the basis's ambient space")
    if vector.is_zero():
        return True
    rows = [member.vector.flatten() for member in basis.members]
    base_rank = ExactMatrix(rows).rank()
    return ExactMatrix(rows + [vector.flatten()]).rank() == base_rank


def find_rank3_witness(outer: SubspaceBasis, inner: SubspaceBasis) -> TensorVector:
    """A Schmidt-rank-3 generator of the outer space outside the inner one.

    Raises :class:`WitnessNotFoundError` when no generator qualifies,
    which would falsify the rank-3/rank-4 separation at this instance.
    """
    for member in outer.members:
        vec = member.vector
        if vec.schmidt_rank() == 3 and not vector_in_span(vec, inner):
            return vec
    raise WitnessNotFoundError(
        f"no rank-3 generator of {outer.name} lies outside {inner.name} "
        f"at m={outer.m}, n={outer.n}"
    )


# ---------------------------------------------------------------------------
# minimum-Schmidt-rank verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Counterexample:
    coefficients: tuple[Fraction, ...]
    vector: TensorVector
    schmidt_rank: int
    antidiagonal: int | None = None

    def to_json(self) -> dict:
        return {
            "coefficients": [format_scalar(x) for x in self.coefficients],
            "vector": self.vector.to_json(),
            "schmidt_rank": self.schmidt_rank,
            "antidiagonal": self.antidiagonal,
        }


@dataclass(frozen=True)
class Verdict:
    mode: str
    k: int
    passed: bool
    checked: int
    counterexample: Counterexample | None
    notes: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "k": self.k,
            "passed": self.passed,
            "checked": self.checked,
            "counterexample": self.counterexample.to_json()
            if self.counterexample
            else None,
            "notes": dict(self.notes),
        }


def _rank_at_least_modp(mat: list[list[int]], k: int, ncols: int) -> bool:
    """Whether the integer matrix has rank >= k modulo a large prime.

    True is conclusive (mod-p rank never exceeds the exact rank); False
    must be confirmed by exact elimination before being believed.
    """
    p = _MODP
    rank = 0
    nrows = len(mat)
    for c in range(ncols):
        pivot = None
        for i in range(rank, nrows):
            if mat[i][c] % p:
                pivot = i
                break
        if pivot is None:
            continue
        if pivot != rank:
            mat[rank], mat[pivot] = mat[pivot], mat[rank]
        inv = pow(mat[rank][c], p - 2, p)
        base = mat[rank]
        for i in range(rank + 1, nrows):
            f = (mat[i][c] * inv) % p
            if f:
                row = mat[i]
                for j in range(c, ncols):
                    row[j] = (row[j] - f * base[j]) % p
        rank += 1
        if rank >= k:
            return True
    return False


def _scaled_cells(
    basis: SubspaceBasis,
) -> tuple[list[tuple[tuple[int, int, int], ...]], int]:
    """Integer sparse cells per member, under one uniform pattern scaling."""
    mult = lcm(*(x.denominator for x in basis.pattern))
    cells = []
    for member in basis.members:
        cells.append(
            tuple((i, j, int(v * mult)) for i, j, v in member.vector.to_triplets())
        )
    return cells, mult


class _CombinationChecker:
    """Exact rank >= k test with a fast modular first pass."""

    def __init__(self, basis: SubspaceBasis, k: int):
        self.basis = basis
        self.k = k
        self.cells, self.pattern_mult = _scaled_cells(basis)
        self.m, self.n = basis.m, basis.n
        self.exact_fallbacks = 0

    def holds(self, scaled_combo: Sequence[int], member_indices: Sequence[int]) -> bool:
        mat = [[0] * self.n for _ in range(self.m)]
        for lam, idx in zip(scaled_combo, member_indices):
            if lam:
                for i, j, v in self.cells[idx]:
                    mat[i][j] += lam * v
        if _rank_at_least_modp(mat, self.k, self.n):
            return True
        # rebuild: the modular pass consumed the matrix
        mat = [[0] * self.n for _ in range(self.m)]
        for lam, idx in zip(scaled_combo, member_indices):
            if lam:
                for i, j, v in self.cells[idx]:
                    mat[i][j] += lam * v
        self.exact_fallbacks += 1
        return ExactMatrix(mat).rank() >= self.k


def _normalize_coeff_set(coeff_set: Sequence[int | str | Fraction]) -> tuple[
    tuple[Fraction, ...], tuple[int, ...]
]:
    values = sorted({as_scalar(c) for c in coeff_set})
    if not values:
        raise ValueError("coefficient set must be nonempty")
    mult = lcm(*(c.denominator for c in values))
    return tuple(values), tuple(int(c * mult) for c in values)


def _member_index(basis: SubspaceBasis) -> dict[tuple[int, int], int]:
    return {
        (member.antidiagonal, member.start_row): i
        for i, member in enumerate(basis.members)
    }


def _certificate_verdict(basis: SubspaceBasis, k: int) -> Verdict:
    length = len(basis.pattern)
    occurring = sorted(
        {antidiagonal_length(basis.m, basis.n, d) for d in basis.groups}
    )
    per_length = []
    checked = 0
    failure: tuple[int, tuple[int, ...]] | None = None
    for ell in occurring:
        report = all_order_n_minors(shift_matrix(basis.pattern, ell))
        checked += len(report.entries)
        per_length.append(
            {
                "length": ell,
                "deleted_sets_checked": len(report.entries),
                "all_nonzero": report.all_nonzero,
                "zero_witnesses": [list(w) for w in report.zero_witnesses],
            }
        )
        if failure is None and not report.all_nonzero:
            failure = (ell, report.zero_witnesses[0])
    notes = {"lengths": per_length}
    if failure is None:
        return Verdict("certificate", k, True, checked, None, notes)

    ell, deleted = failure
    d = min(
        d for d in basis.groups if antidiagonal_length(basis.m, basis.n, d) == ell
    )
    group = basis.groups[d]
    kernel = shift_matrix(basis.pattern, ell).delete_rows(deleted).kernel_vector()
    assert kernel is not None  # a zero minor means exactly this kernel exists
    coefficients = [Fraction(0)] * basis.dimension
    index_of = _member_index(basis)
    for lam, member in zip(kernel, group):
        coefficients[index_of[(member.antidiagonal, member.start_row)]] = lam
    vector = basis.combination(coefficients)
    counterexample = Counterexample(
        tuple(coefficients), vector, vector.schmidt_rank(), d
    )
    notes["failed_length"] = ell
    notes["failed_deleted_rows"] = list(deleted)
    return Verdict("certificate", k, False, checked, counterexample, notes)


def _grid_verdict(
    basis: SubspaceBasis,
    k: int,
    coeff_set: Sequence[int | str | Fraction],
    budget: int,
    cross_samples: int,
    seed: int,
    require_full_grid: bool,
) -> Verdict:
    values, scaled = _normalize_coeff_set(coeff_set)
    value_of_scaled = dict(zip(scaled, values))
    checker = _CombinationChecker(basis, k)
    dim = basis.dimension
    total = len(values) ** dim

    def failure(scaled_combo: Sequence[int], indices: Sequence[int]) -> Verdict:
        coeffs = [Fraction(0)] * dim
        for s, idx in zip(scaled_combo, indices):
            coeffs[idx] = value_of_scaled[s]
        vector = basis.combination(coeffs)
        cx = Counterexample(tuple(coeffs), vector, vector.schmidt_rank())
        return Verdict(
            "grid",
            k,
            False,
            checked,
            cx,
            {"coefficients": [format_scalar(v) for v in values],
             "exact_fallbacks": checker.exact_fallbacks},
        )

    checked = 0
    if total <= budget:
        indices = tuple(range(dim))
        for combo in itertools.product(scaled, repeat=dim):
            if not any(combo):
                continue
            checked += 1
            if not checker.holds(combo, indices):
                return failure(combo, indices)
        notes = {
            "style": "full",
            "coefficients": [format_scalar(v) for v in values],
            "exact_fallbacks": checker.exact_fallbacks,
        }
        return Verdict("grid", k, True, checked, None, notes)

    if require_full_grid:
        raise BudgetExceededError(
            f"full grid needs {total} combinations but the budget is {budget}"
        )

    # Per-group grids are sound on their own: the bottom-rightmost nonzero
    # anti-diagonal of any combination is a pure within-group combination.
    # Random cross-group samples probe the mixing on top of that.
    index_of = _member_index(basis)
    for d in sorted(basis.groups):
        group = basis.groups[d]
        group_total = len(values) ** len(group)
        if group_total > budget:
            raise BudgetExceededError(
                f"group at anti-diagonal {d} needs {group_total} combinations "
                f"but the budget is {budget}"
            )
        indices = tuple(
            index_of[(member.antidiagonal, member.start_row)] for member in group
        )
        for combo in itertools.product(scaled, repeat=len(group)):
            if not any(combo):
                continue
            checked += 1
            if not checker.holds(combo, indices):
                return failure(combo, indices)
    rng = random.Random(seed)
    all_indices = tuple(range(dim))
    for _ in range(cross_samples):
        combo = tuple(rng.choice(scaled) for _ in range(dim))
        if not any(combo):
            continue
        checked += 1
        if not checker.holds(combo, all_indices):
            return failure(combo, all_indices)
    notes = {
        "style": "groups+random",
        "coefficients": [format_scalar(v) for v in values],
        "cross_samples": cross_samples,
        "seed": seed,
        "exact_fallbacks": checker.exact_fallbacks,
    }
    return Verdict("grid", k, True, checked, None, notes)


def _random_verdict(basis: SubspaceBasis, k: int, samples: int, seed: int) -> Verdict:
    rng = random.Random(seed)
    checked = 0
    for _ in range(samples):
        coeffs = tuple(
            Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in basis.members
        )
        if all(c == 0 for c in coeffs):
            continue
        checked += 1
        vector = basis.combination(coeffs)
        rank = vector.schmidt_rank()
        if rank < k:
            cx = Counterexample(coeffs, vector, rank)
            return Verdict("random", k, False, checked, cx, {"seed": seed})
    return Verdict("random", k, True, checked, None, {"seed": seed, "samples": samples})


def verify_min_rank(
    basis: SubspaceBasis,
    k: int,
    mode: str = "certificate",
    *,
    coeff_set: Sequence[int | str | Fraction] = DEFAULT_COEFF_SET,
    budget: int = DEFAULT_GRID_BUDGET,
    cross_samples: int = 1000,
    samples: int = 500,
    seed: int = 0,
    require_full_grid: bool = False,
) -> Verdict:
    """Check that every nonzero vector of the span has Schmidt rank >= k.

    certificate: for every occurring anti-diagonal length, every maximal
    minor of the pattern's shift matrix must be nonzero; this is sound
    for the whole span.  grid: exhaustive combinations over a finite
    coefficient set (decomposed into per-group grids plus random
    cross-group samples when the full grid exceeds the budget; with
    ``require_full_grid`` the budget overrun raises instead).  random:
    seeded random rational combinations.
    """
    if k != basis.claimed_min_rank:
        raise ValueError(
            f"k={k} does not match the basis's claimed minimum rank "
            f"{basis.claimed_min_rank}"
        )
    if mode == "certificate":
        return _certificate_verdict(basis, k)
    if mode == "grid":
        return _grid_verdict(
            basis, k, coeff_set, budget, cross_samples, seed, require_full_grid
        )
    if mode == "random":
        return _random_verdict(basis, k, samples, seed)
    raise ValueError(f"unknown mode {mode!r}, expected certificate, grid or random")
