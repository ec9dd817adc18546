"""
GroDiv - Integer Matrix Helpers
Square matrices of Python ints stored as row tuples. Entries are arbitrary
precision everywhere; nothing here ever touches a float.
"""

from typing import Sequence, Tuple

IntMatrix = Tuple[Tuple[int, ...], ...]


def mat_identity(n: int) -> IntMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_from_rows(rows: Sequence[Sequence[int]]) -> IntMatrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


def mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    n = len(a)
    cols = list(zip(*b))
    return tuple(
        tuple(sum(a[i][k] * cols[j][k] for k in range(n)) for j in range(n))
        for i in range(n)
    )


def det(m: IntMatrix) -> int:
    if len(m) == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if len(m) == 3:
        return (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        )
    raise ValueError(f"det only implemented for 2x2 and 3x3, got {len(m)}x{len(m)}")


def sl_inverse(m: IntMatrix) -> IntMatrix:
    """Inverse of a determinant-one matrix (the adjugate)."""
    if len(m) == 2:
        (a, b), (c, d) = m
        return ((d, -b), (-c, a))
    if len(m) == 3:
        def cof(i, j):
            rows = [r for k, r in enumerate(m) if k != i]
            minor = [[x for l, x in enumerate(r) if l != j] for r in rows]
            return (-1) ** (i + j) * (minor[0][0] * minor[1][1] - minor[0][1] * minor[1][0])
        return tuple(tuple(cof(j, i) for j in range(3)) for i in range(3))
    raise ValueError(f"sl_inverse only implemented for 2x2 and 3x3, got {len(m)}x{len(m)}")


def elementary(n: int, i: int, j: int, t: int) -> IntMatrix:
    """E_ij(t): identity plus t at (i, j), 1-based indices."""
    if i == j:
        raise ValueError("elementary matrix needs i != j")
    rows = [list(r) for r in mat_identity(n)]
    rows[i - 1][j - 1] = t
    return mat_from_rows(rows)


def max_abs_entry(m: IntMatrix) -> int:
    return max(abs(x) for row in m for x in row)


def max_column_l1(m: IntMatrix) -> int:
    """Largest column l1 norm: bounds entry growth under right multiplication."""
    return max(sum(abs(x) for x in col) for col in zip(*m))


def format_matrix(m: IntMatrix) -> str:
    return "m:" + ";".join(",".join(str(x) for x in row) for row in m)


def parse_matrix(body: str, n: int) -> IntMatrix:
    rows = [r for r in body.split(";") if r.strip()]
    if len(rows) != n:
        raise ValueError(f"expected {n} rows, got {len(rows)}")
    parsed = [[int(x) for x in r.split(",")] for r in rows]
    if any(len(r) != n for r in parsed):
        raise ValueError(f"expected {n} entries per row")
    return mat_from_rows(parsed)
