"""
Seeds (B, C) along a mutation trajectory, g-matrices, vertex colors and
hemispheres.
"""

import enum
from dataclasses import dataclass
from typing import List, Optional, Tuple

from greenseq.algebra.matrices import (
    IntMatrix,
    IntVector,
    column,
    columns,
    determinant,
    diagonal,
    identity,
    matmul,
    transpose,
    unimodular_inverse,
    unit_vector,
    vector_sign,
)
from greenseq.algebra.quiver_core import ExchangeMatrix, Sign, check_vertex, x_matrix
from greenseq.core.errors import InvariantViolation


class VertexColor(str, enum.Enum):
    GREEN = "green"
    RED = "red"


@dataclass(frozen=True)
class Seed:
    b: ExchangeMatrix
    c: IntMatrix
    b0: ExchangeMatrix

    @property
    def n(self) -> int:
        return self.b.n

    def c_vector(self, k: int) -> IntVector:
        """Column k (1-based) of C."""
        check_vertex(k, self.n)
        return column(self.c, k - 1)


@dataclass(frozen=True)
class GMatrix:
    g: IntMatrix

    def row(self, k: int) -> IntVector:
        return self.g[k - 1]


def initial_seed(b: ExchangeMatrix) -> Seed:
    return Seed(b=b, c=identity(b.n), b0=b)


def vertex_color(s: Seed, k: int) -> VertexColor:
    sign = vector_sign(s.c_vector(k))
    if sign > 0:
        return VertexColor.GREEN
    if sign < 0:
        return VertexColor.RED
    raise InvariantViolation(f"c-vector at vertex {k} is not sign-coherent: {list(s.c_vector(k))}")


def is_all_red(s: Seed) -> bool:
    return all(vector_sign(col) < 0 for col in columns(s.c))


def mutate_seed(s: Seed, k: int) -> Seed:
    """mu_k C = C X_k^+ on a green column, C X_k^- on a red one; X built from the current B."""
    color = vertex_color(s, k)
    sign = Sign.PLUS if color is VertexColor.GREEN else Sign.MINUS
    x = x_matrix(s.b, k, sign)
    c = matmul(s.c, x.matrix)
    for j, col in enumerate(columns(c)):
        if vector_sign(col) == 0:
            raise InvariantViolation(
                f"mutation at {k} produced a c-vector at {j + 1} "
                f"that is not sign-coherent: {list(col)}"
            )
    return Seed(b=s.b.mutate(k), c=c, b0=s.b0)


def g_matrix(s: Seed) -> GMatrix:
    """G = (D C^-1 D^-1)^t, exact, entries asserted integral."""
    c_inv = unimodular_inverse(s.c)
    d = s.b.d
    n = s.n
    g = []
    for i in range(n):
        row = []
        for j in range(n):
            # (D C^-1 D^-1)^t has entry (i, j) = d_j (C^-1)_ji / d_i
            numerator = d[j] * c_inv[j][i]
            if numerator % d[i] != 0:
                raise InvariantViolation(f"g-matrix entry ({i + 1},{j + 1}) is not integral")
            row.append(numerator // d[i])
        g.append(tuple(row))
    return GMatrix(tuple(g))


def hemisphere(s: Seed, k: int) -> Sign:
    check_vertex(k, s.n)
    sign = vector_sign(g_matrix(s).row(k))
    if sign > 0:
        return Sign.PLUS
    if sign < 0:
        return Sign.MINUS
    raise InvariantViolation(f"row {k} of the g-matrix is not sign-coherent")


def check_nz(s: Seed) -> bool:
    """D B = C^t D B0 C, exactly."""
    dm = diagonal(s.b.d)
    lhs = matmul(dm, s.b.b)
    rhs = matmul(transpose(s.c), dm, s.b0.b, s.c)
    return lhs == rhs


def c_vectors_equal_unit(s: Seed) -> List[Tuple[int, int, int]]:
    """(j, k, sign) for every column j of C equal to sign * e_k."""
    found = []
    for j, col in enumerate(columns(s.c)):
        nonzero = [(i, x) for i, x in enumerate(col) if x != 0]
        if len(nonzero) == 1 and abs(nonzero[0][1]) == 1:
            i, x = nonzero[0]
            found.append((j + 1, i + 1, x))
    return found


def check_seed(s: Seed) -> None:
    """
    Raises InvariantViolation unless every seed invariant holds:
    det C = +-1, sign-coherent nonzero columns, sign-coherent rows of G, the NZ
    identity, G^t D C = D, and f_k = f_j whenever column j of C is +-e_k.
    """
    det = determinant(s.c)
    if det not in (1, -1):
        raise InvariantViolation(f"det C = {det}")
    for j, col in enumerate(columns(s.c)):
        if vector_sign(col) == 0:
            raise InvariantViolation(f"column {j + 1} of C is not sign-coherent: {list(col)}")
    if not check_nz(s):
        raise InvariantViolation("D B != C^t D B0 C")
    g = g_matrix(s).g
    for i, row in enumerate(g):
        if vector_sign(row) == 0:
            raise InvariantViolation(f"row {i + 1} of G is not sign-coherent: {list(row)}")
    dm = diagonal(s.b.d)
    if matmul(transpose(g), dm, s.c) != dm:
        raise InvariantViolation("G^t D C != D")
    for j, k, _ in c_vectors_equal_unit(s):
        if s.b.d[k - 1] != s.b.d[j - 1]:
            raise InvariantViolation(f"column {j} is +-e_{k} but f_{k} != f_{j}")


def negative_permutation(s: Seed) -> Optional[Tuple[int, ...]]:
    """
    If C = -P_sigma return sigma as images (sigma(1), ..., sigma(n)),
    with column j of C equal to -e_sigma(j); otherwise None.
    """
    n = s.n
    images = []
    for col in columns(s.c):
        hits = [i for i, x in enumerate(col) if x != 0]
        if len(hits) != 1 or col != unit_vector(n, hits[0], -1):
            return None
        images.append(hits[0] + 1)
    if len(set(images)) != n:
        return None
    return tuple(images)
