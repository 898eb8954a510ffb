"""
Exact integer matrix helpers.

Matrices are stored as tuples of row tuples of Python ints, which keeps the
domain types hashable and immutable. Arithmetic goes through numpy object
arrays so that entries stay arbitrary-precision Python ints; anything that
needs a determinant, an adjugate or rationals goes through sympy.
"""

import functools
from typing import Iterable, Sequence, Tuple, Union

import numpy as np
import sympy

from greenseq.core.errors import InvariantViolation, NonIntegralError

IntVector = Tuple[int, ...]
IntMatrix = Tuple[IntVector, ...]


def as_array(m: Sequence[Sequence[int]]) -> np.ndarray:
    rows = len(m)
    cols = len(m[0]) if rows else 0
    return np.array(m, dtype=object).reshape(rows, cols)


def to_matrix(arr: Union[np.ndarray, Sequence[Sequence[object]]]) -> IntMatrix:
    return tuple(tuple(int(x) for x in row) for row in arr)


def to_vector(values: Iterable[object]) -> IntVector:
    return tuple(int(x) for x in values)


def identity(n: int) -> IntMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def diagonal(d: Sequence[int]) -> IntMatrix:
    n = len(d)
    return tuple(tuple(d[i] if i == j else 0 for j in range(n)) for i in range(n))


def unit_vector(n: int, k: int, sign: int = 1) -> IntVector:
    """Signed standard basis vector, 0-based index."""
    return tuple(sign if i == k else 0 for i in range(n))


def transpose(m: IntMatrix) -> IntMatrix:
    return tuple(zip(*m)) if m else ()


def negate(m: IntMatrix) -> IntMatrix:
    return tuple(tuple(-x for x in row) for row in m)


def matmul(*ms: IntMatrix) -> IntMatrix:
    arrays = [as_array(m) for m in ms]
    return to_matrix(functools.reduce(np.dot, arrays))


def matvec(m: IntMatrix, v: Sequence[int]) -> IntVector:
    if not m:
        return ()
    return to_vector(np.dot(as_array(m), np.array(list(v), dtype=object)))


def column(m: IntMatrix, j: int) -> IntVector:
    return tuple(row[j] for row in m)


def columns(m: IntMatrix) -> Tuple[IntVector, ...]:
    return transpose(m)


def from_columns(cols: Sequence[IntVector]) -> IntMatrix:
    return transpose(tuple(cols))


def dot(x: Sequence[int], y: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(x, y))


def vector_sign(v: Sequence[int]) -> int:
    """
    1 if v is nonzero with all entries >= 0, -1 if nonzero with all <= 0,
    0 if v is zero or has entries of both signs.
    """
    has_pos = any(x > 0 for x in v)
    has_neg = any(x < 0 for x in v)
    if has_pos and not has_neg:
        return 1
    if has_neg and not has_pos:
        return -1
    return 0


def to_sympy(m: Sequence[Sequence[int]]) -> sympy.Matrix:
    rows = len(m)
    cols = len(m[0]) if rows else 0
    return sympy.Matrix(rows, cols, [x for row in m for x in row])


def from_sympy(m: sympy.MatrixBase, what: str = "matrix") -> IntMatrix:
    """Converts an exact sympy matrix to integers, refusing fractional entries."""
    rows = []
    for i in range(m.rows):
        row = []
        for j in range(m.cols):
            entry = sympy.sympify(m[i, j])
            if not entry.is_integer:
                raise NonIntegralError(
                    f"{what} has non-integral entry {entry} at ({i + 1},{j + 1})"
                )
            row.append(int(entry))
        rows.append(tuple(row))
    return tuple(rows)


def determinant(m: IntMatrix) -> int:
    if not m:
        return 1
    return int(to_sympy(m).det())


@functools.lru_cache(maxsize=8192)
def unimodular_inverse(m: IntMatrix) -> IntMatrix:
    """
    Exact inverse of an integer matrix with determinant +-1, via the adjugate.
    """
    if not m:
        return ()
    sm = to_sympy(m)
    det = int(sm.det())
    if det not in (1, -1):
        raise InvariantViolation(f"expected determinant +-1, got {det}")
    return from_sympy(sm.adjugate() * det, "inverse")
