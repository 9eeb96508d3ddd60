"""Constructors for the structured banded matrix families.

Each family is a banded matrix whose every column is one contiguous
placement of a fixed signature, truncated at the matrix boundary:

=======  ===========  =================  ====================
family   shape        column signature   first signature slot
=======  ===========  =================  ====================
D        n x n        (b, -a, a, -b)     one above diagonal
F        n x n        (b, -a, a, -b)     two above diagonal
E        (n+1) x n    (b, -a, a, -b)     one above diagonal
Etilde   (n+1) x n    (1, a, a, 1)       one above diagonal
G        (n+2) x n    (1, a, 1)          on the diagonal
B        (n+3) x n    (1, -a, a, -1)     on the diagonal
Btilde   (n+3) x n    (1, a, a, 1)       on the diagonal
=======  ===========  =================  ====================

G, B and Btilde place full signature windows in every column (no
truncation); B and Btilde are the bordered extensions of E and Etilde by
the rows (1,0,...,0) and (0,...,0,-1) resp. (0,...,0,1).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exact import ExactMatrix, as_scalar

FAMILY_NAMES = ("D", "F", "E", "Etilde", "G", "B", "Btilde")

# families whose definition fixes the second parameter at 1
_B_FIXED = frozenset({"Etilde", "G", "B", "Btilde"})

# (extra rows beyond n, signature offset): entry(r, c) = sig[r - c + offset]
_LAYOUT = {
    "D": (0, 1),
    "F": (0, 2),
    "E": (1, 1),
    "Etilde": (1, 1),
    "G": (2, 0),
    "B": (3, 0),
    "Btilde": (3, 0),
}


@dataclass(frozen=True)
class BandedFamily:
    """A family member selected by (family, a, b, n)."""

    family: str
    a: Fraction
    b: Fraction
    n: int

    def __init__(
        self,
        family: str,
        a: int | str | Fraction,
        b: int | str | Fraction = 1,
        n: int = 1,
    ):
        if family not in FAMILY_NAMES:
            raise ValueError(f"unknown family {family!r}, expected one of {FAMILY_NAMES}")
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        b = as_scalar(b)
        if family in _B_FIXED and b != 1:
            raise ValueError(f"family {family} is only defined with b = 1")
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "a", as_scalar(a))
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "n", n)

    @property
    def rows(self) -> int:
        return self.n + _LAYOUT[self.family][0]

    @property
    def cols(self) -> int:
        return self.n

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "a": str(self.a),
            "b": str(self.b),
            "n": self.n,
        }


def column_pattern(
    family: str, a: int | str | Fraction, b: int | str | Fraction = 1
) -> tuple[Fraction, ...]:
    """The per-column signature of a family, read top to bottom."""
    a = as_scalar(a)
    b = as_scalar(b)
    if family in ("D", "F", "E"):
        return (b, -a, a, -b)
    if family == "Etilde" or family == "Btilde":
        return (Fraction(1), a, a, Fraction(1))
    if family == "G":
        return (Fraction(1), a, Fraction(1))
    if family == "B":
        return (Fraction(1), -a, a, Fraction(-1))
    raise ValueError(f"unknown family {family!r}")


def build(spec: BandedFamily) -> ExactMatrix:
    """Materialize a family member as an exact matrix."""
    _, offset = _LAYOUT[spec.family]
    sig = column_pattern(spec.family, spec.a, spec.b)
    length = len(sig)
    rows = []
    for r in range(1, spec.rows + 1):
        row = []
        for c in range(1, spec.cols + 1):
            k = r - c + offset
            row.append(sig[k] if 0 <= k < length else Fraction(0))
        rows.append(row)
    return ExactMatrix(rows)


def deleted_variant(spec: BandedFamily, rows: Iterable[int]) -> ExactMatrix:
    """A family member with the given 1-based rows removed."""
    return build(spec).delete_rows(rows)


def shift_matrix(pattern: Sequence[int | str | Fraction], length: int) -> ExactMatrix:
    """Full-window shift matrix of a signature.

    The length x (length - L + 1) matrix whose column c places the
    length-L pattern at rows c..c+L-1.  For pattern (1, -a, a, -1) this
    coincides with family B at n = length - 3.
    """
    sig = [as_scalar(x) for x in pattern]
    width = length - len(sig) + 1
    if width < 1:
        raise ValueError(
            f"length {length} is shorter than the pattern ({len(sig)} entries)"
        )
    return ExactMatrix(
        [
            [sig[r - c] if 0 <= r - c < len(sig) else Fraction(0) for c in range(width)]
            for r in range(length)
        ]
    )


def family_from_json(obj: dict) -> tuple[BandedFamily, tuple[int, ...]]:
    """Parse {"family","a","b","n","delete_rows"} into a spec and deletions."""
    spec = BandedFamily(
        obj["family"],
        as_scalar(obj["a"]),
        as_scalar(obj.get("b", 1)),
        int(obj["n"]),
    )
    deletions = tuple(int(i) for i in obj.get("delete_rows", ()))
    return spec, deletions
