"""
GroDiv - SL3(Z) Matrices
Exact 3x3 integer matrices of determinant one and the unipotent subgroups
L (upper-right column) and M (lower-left column) used by the construction.
"""

import math
from typing import List, Sequence, Tuple

from ..errors import UsageError
from ..groups.matrices import det, elementary, mat_from_rows, mat_identity, mat_mul, sl_inverse

Mat2 = Tuple[Tuple[int, int], Tuple[int, int]]


class Mat3:
    """Immutable element of SL3(Z); the determinant is checked on construction."""

    __slots__ = ("rows",)

    def __init__(self, rows: Sequence[Sequence[int]], check: bool = True):
        rows = mat_from_rows(rows)
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise UsageError("Mat3 needs 3 rows of 3 integers")
        if check and det(rows) != 1:
            raise UsageError(f"Matrix has determinant {det(rows)}, expected 1")
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, name, value):
        raise AttributeError("Mat3 is immutable")

    # -- constructors ---------------------------------------------------------

    @classmethod
    def identity(cls) -> "Mat3":
        return cls(mat_identity(3), check=False)

    @classmethod
    def E(cls, i: int, j: int, t: int) -> "Mat3":
        """Elementary matrix E_ij(t), 1-based indices."""
        return cls(elementary(3, i, j, t), check=False)

    @classmethod
    def L(cls, m: int, n: int) -> "Mat3":
        """[[1,0,m],[0,1,n],[0,0,1]] = E13(m) E23(n)."""
        return cls(((1, 0, m), (0, 1, n), (0, 0, 1)), check=False)

    @classmethod
    def M(cls, p: int, q: int) -> "Mat3":
        """[[1,0,0],[p,1,0],[q,0,1]] = E21(p) E31(q)."""
        return cls(((1, 0, 0), (p, 1, 0), (q, 0, 1)), check=False)

    @classmethod
    def upper(cls, b: Mat2) -> "Mat3":
        """b in the upper-left 2x2 block."""
        (a, c), (d, e) = b
        return cls(((a, c, 0), (d, e, 0), (0, 0, 1)))

    @classmethod
    def lower(cls, b: Mat2) -> "Mat3":
        """b in the lower-right 2x2 block."""
        (a, c), (d, e) = b
        return cls(((1, 0, 0), (0, a, c), (0, d, e)))

    # -- algebra --------------------------------------------------------------

    def __matmul__(self, other: "Mat3") -> "Mat3":
        return Mat3(mat_mul(self.rows, other.rows), check=False)

    def inverse(self) -> "Mat3":
        return Mat3(sl_inverse(self.rows), check=False)

    def __eq__(self, other) -> bool:
        return isinstance(other, Mat3) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __getitem__(self, ij: Tuple[int, int]) -> int:
        """0-based entry access: m[i, j]."""
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> Tuple[int, int, int]:
        return tuple(row[j] for row in self.rows)

    def max_entry(self) -> int:
        return max(abs(x) for row in self.rows for x in row)

    def proxy(self) -> float:
        """log2(1 + max |entry|), the stand-in for the word length."""
        return math.log2(1 + self.max_entry())

    def is_M(self) -> bool:
        """Whether this matrix is an M-element."""
        r = self.rows
        return r[0] == (1, 0, 0) and (r[1][1], r[1][2], r[2][1], r[2][2]) == (1, 0, 0, 1)

    def m_vector(self) -> Tuple[int, int]:
        if not self.is_M():
            raise UsageError(f"{self.literal()} is not an M-element")
        return self.rows[1][0], self.rows[2][0]

    def lower_block(self) -> Mat2:
        r = self.rows
        return ((r[1][1], r[1][2]), (r[2][1], r[2][2]))

    # -- serialization ----------------------------------------------------------

    def to_json(self) -> List[List[str]]:
        """Rows as decimal strings, safe for any entry size."""
        return [[str(x) for x in row] for row in self.rows]

    @classmethod
    def from_json(cls, rows: Sequence[Sequence[str]]) -> "Mat3":
        try:
            return cls([[int(x) for x in row] for row in rows])
        except (TypeError, ValueError) as e:
            raise UsageError(f"Cannot read matrix from {rows!r}: {e}") from e

    def literal(self) -> str:
        return "m:" + ";".join(",".join(str(x) for x in row) for row in self.rows)

    def __repr__(self) -> str:
        return f"Mat3({self.literal()})"


def mat2_mul(a: Mat2, b: Mat2) -> Mat2:
    return (
        (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
        (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
    )


def mat2_inverse(a: Mat2) -> Mat2:
    (p, q), (r, s) = a
    return ((s, -q), (-r, p))


def mat2_apply(a: Mat2, v: Tuple[int, int]) -> Tuple[int, int]:
    return a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]


def row_apply(v: Tuple[int, int], a: Mat2) -> Tuple[int, int]:
    """Row vector times matrix, v * a."""
    return v[0] * a[0][0] + v[1] * a[1][0], v[0] * a[0][1] + v[1] * a[1][1]
