"""
Valued quivers, skew-symmetrizable exchange matrices and plain matrix mutation.

All public functions take and report 1-based vertex labels. An arrow s -> t with
valuation (d_st, d_ts) satisfies d_st * f_t = d_ts * f_s and shows up in the
exchange matrix as b_st = d_ts > 0, b_ts = -d_st. The Euler matrix has
E_ii = f_i and E_st = -d_st, so that D*B = E^t - E.
"""

import enum
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from greenseq.algebra.matrices import (
    IntMatrix,
    IntVector,
    as_array,
    diagonal,
    identity,
    matmul,
    to_matrix,
    transpose,
)
from greenseq.core.errors import InvalidQuiverError, VertexIndexError


class Sign(str, enum.Enum):
    PLUS = "+"
    MINUS = "-"

    @property
    def factor(self) -> int:
        return 1 if self is Sign.PLUS else -1


def check_vertex(k: int, n: int) -> None:
    if not isinstance(k, int) or isinstance(k, bool) or not 1 <= k <= n:
        raise VertexIndexError(f"vertex {k!r} out of range 1..{n}")


@dataclass(frozen=True, order=True)
class Arrow:
    source: int
    target: int
    d_st: int
    d_ts: int

    @property
    def product(self) -> int:
        return self.d_st * self.d_ts

    @property
    def is_infinite_type(self) -> bool:
        return self.product >= 4

    def to_json(self) -> List[int]:
        return [self.source, self.target, self.d_st, self.d_ts]


@dataclass(frozen=True)
class ValuedQuiver:
    weights: IntVector
    arrows: Tuple[Arrow, ...] = field(default=())

    def __post_init__(self) -> None:
        weights = tuple(int(f) for f in self.weights)
        n = len(weights)
        if any(f <= 0 for f in weights):
            raise InvalidQuiverError(f"weights must be positive, got {list(weights)}")

        seen_pairs = set()
        for arrow in self.arrows:
            for v in (arrow.source, arrow.target):
                if not 1 <= v <= n:
                    raise InvalidQuiverError(
                        f"arrow {arrow.to_json()} uses vertex {v} outside 1..{n}"
                    )
            if arrow.source == arrow.target:
                raise InvalidQuiverError(f"loop at vertex {arrow.source}")
            if arrow.d_st <= 0 or arrow.d_ts <= 0:
                raise InvalidQuiverError(f"arrow {arrow.to_json()} has a non-positive valuation")
            pair = frozenset((arrow.source, arrow.target))
            if pair in seen_pairs:
                raise InvalidQuiverError(
                    f"more than one arrow between {arrow.source} and {arrow.target}; "
                    "encode parallel arrows as a single valued arrow"
                )
            seen_pairs.add(pair)
            f_s = weights[arrow.source - 1]
            f_t = weights[arrow.target - 1]
            if arrow.d_st * f_t != arrow.d_ts * f_s:
                raise InvalidQuiverError(
                    f"arrow {arrow.source}->{arrow.target} violates d_st*f_t = d_ts*f_s "
                    f"({arrow.d_st}*{f_t} != {arrow.d_ts}*{f_s})"
                )

        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "arrows", tuple(sorted(self.arrows)))

    @property
    def n(self) -> int:
        return len(self.weights)

    def arrow(self, source: int, target: int) -> Optional[Arrow]:
        for a in self.arrows:
            if a.source == source and a.target == target:
                return a
        return None

    def to_json(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "weights": list(self.weights),
            "arrows": [a.to_json() for a in self.arrows],
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "ValuedQuiver":
        try:
            weights = tuple(int(f) for f in data.get("weights") or [1] * int(data["n"]))
            arrows = tuple(Arrow(*(int(x) for x in raw)) for raw in data.get("arrows", []))
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidQuiverError(f"malformed quiver JSON: {e}") from e
        if "n" in data and int(data["n"]) != len(weights):
            raise InvalidQuiverError(f"n={data['n']} but {len(weights)} weights given")
        return cls(weights=weights, arrows=arrows)


@dataclass(frozen=True)
class ExchangeMatrix:
    b: IntMatrix
    d: IntVector

    def __post_init__(self) -> None:
        b = tuple(tuple(int(x) for x in row) for row in self.b)
        d = tuple(int(x) for x in self.d)
        n = len(d)
        if len(b) != n or any(len(row) != n for row in b):
            raise InvalidQuiverError(f"B must be {n}x{n} to match the symmetrizer")
        if any(x <= 0 for x in d):
            raise InvalidQuiverError(f"symmetrizer entries must be positive, got {list(d)}")
        for i in range(n):
            if b[i][i] != 0:
                raise InvalidQuiverError(f"B has nonzero diagonal entry at vertex {i + 1}")
            for j in range(i + 1, n):
                if d[i] * b[i][j] != -d[j] * b[j][i]:
                    raise InvalidQuiverError(
                        f"diag(D)*B is not skew-symmetric at ({i + 1},{j + 1})"
                    )
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    @property
    def n(self) -> int:
        return len(self.d)

    def entry(self, i: int, j: int) -> int:
        """1-based entry b_ij."""
        return self.b[i - 1][j - 1]

    def mutate(self, k: int) -> "ExchangeMatrix":
        return ExchangeMatrix(mutate_matrix(self.b, k), self.d)

    def to_json(self) -> Dict[str, Any]:
        return {"B": [list(row) for row in self.b], "D": list(self.d)}

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "ExchangeMatrix":
        try:
            b = tuple(tuple(int(x) for x in row) for row in data["B"])
            d = tuple(int(x) for x in data.get("D") or [1] * len(b))
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidQuiverError(f"malformed matrix JSON: {e}") from e
        return cls(b, d)


@dataclass(frozen=True)
class XMatrix:
    matrix: IntMatrix
    sign: Sign
    pivot: int


def exchange_from_quiver(q: ValuedQuiver) -> ExchangeMatrix:
    n = q.n
    b = [[0] * n for _ in range(n)]
    for a in q.arrows:
        s, t = a.source - 1, a.target - 1
        b[s][t] = a.d_ts
        b[t][s] = -a.d_st
    return ExchangeMatrix(to_matrix(b), q.weights)


def quiver_from_exchange(b: ExchangeMatrix) -> ValuedQuiver:
    arrows = []
    for i in range(b.n):
        for j in range(b.n):
            if b.b[i][j] > 0:
                arrows.append(Arrow(i + 1, j + 1, -b.b[j][i], b.b[i][j]))
    return ValuedQuiver(weights=b.d, arrows=tuple(arrows))


def euler_matrix(q: ValuedQuiver) -> IntMatrix:
    e = [list(row) for row in diagonal(q.weights)]
    for a in q.arrows:
        e[a.source - 1][a.target - 1] = -a.d_st
    return to_matrix(e)


def mutate_matrix(m: Sequence[Sequence[int]], k: int) -> IntMatrix:
    """
    Matrix mutation at column k (1-based) for an n x n exchange matrix or a
    rectangular extended matrix whose top n rows are the exchange matrix.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    check_vertex(k, cols)
    kk = k - 1
    arr = as_array(m)
    col_k = arr[:, kk]
    row_k = arr[kk, :]
    # (|b_ik| b_kj + b_ik |b_kj|) / 2 is b_ik|b_kj| when the signs agree, 0 otherwise
    correction = np.outer(np.abs(col_k), row_k) + np.outer(col_k, np.abs(row_k))
    out = arr + correction // 2
    out[:, kk] = -col_k
    out[kk, :] = -row_k
    return to_matrix(out)


def x_matrix(b: ExchangeMatrix, j: int, sign: Sign) -> XMatrix:
    check_vertex(j, b.n)
    jj = j - 1
    rows = [list(row) for row in identity(b.n)]
    rows[jj] = [max(sign.factor * b.b[jj][k], 0) for k in range(b.n)]
    rows[jj][jj] = -1
    return XMatrix(to_matrix(rows), sign, j)


def infinite_type_arrows(q: ValuedQuiver) -> List[Arrow]:
    return [a for a in q.arrows if a.is_infinite_type]


def infinite_type_sources(b: ExchangeMatrix) -> FrozenSet[int]:
    """Vertices that are the source of an arrow of infinite type in the quiver of B."""
    sources = set()
    for j in range(b.n):
        for i in range(b.n):
            if b.b[j][i] > 0 and b.b[j][i] * -b.b[i][j] >= 4:
                sources.add(j + 1)
                break
    return frozenset(sources)


def load_exchange(data: Mapping[str, Any]) -> Tuple[ExchangeMatrix, ValuedQuiver]:
    """
    Accepts either the quiver JSON format ({"n", "weights", "arrows"}) or the
    matrix format ({"B", "D"}) and returns both views.
    """
    if "B" in data:
        b = ExchangeMatrix.from_json(data)
        return b, quiver_from_exchange(b)
    if "arrows" in data or "weights" in data or "n" in data:
        q = ValuedQuiver.from_json(data)
        return exchange_from_quiver(q), q
    raise InvalidQuiverError("input JSON is neither a quiver nor an exchange matrix")


def conjugate_by_permutation(b: ExchangeMatrix, images: Sequence[int]) -> ExchangeMatrix:
    """P^t B P where column j of P is e_{images[j-1]}."""
    n = b.n
    p = [[0] * n for _ in range(n)]
    for j, image in enumerate(images):
        p[image - 1][j] = 1
    pm = to_matrix(p)
    d = tuple(b.d[image - 1] for image in images)
    return ExchangeMatrix(matmul(transpose(pm), b.b, pm), d)
