"""
Rank-2 root ladders.

For an arrow j -> i with a = d_ij and b = d_ji the roots obtained by extending
e_j along the rank-2 subquiver are

    q_t(i) = U_{t-1}(b, a),  q_t(j) = U_t(a, b),  all other coordinates 0,

with U_{-1} = 0, U_0 = 1 and U_n(x, y) = x U_{n-1}(y, x) - U_{n-2}(x, y).
q_{-1} is -e_i. On the (i, j) coordinates q_t = tau q_{t-2} with
tau = [[-1, b], [-a, ab - 1]].
"""

import threading
from dataclasses import dataclass
from typing import ClassVar, Dict, List, Tuple

from greenseq.algebra.matrices import IntVector, matvec
from greenseq.algebra.quiver_core import (
    ExchangeMatrix,
    Sign,
    ValuedQuiver,
    check_vertex,
    exchange_from_quiver,
    quiver_from_exchange,
    x_matrix,
)
from greenseq.core.errors import ArrowNotFoundError


class ChebyshevTable:
    """
    Memo of U_n(x, y) per argument pair. Row k of a table holds
    (U_k(x, y), U_k(y, x)), since the recursion alternates the arguments.
    """

    _tables: ClassVar[Dict[Tuple[int, int], List[Tuple[int, int]]]] = {}
    _lock: ClassVar[threading.Lock] = threading.Lock()

    @classmethod
    def value(cls, n: int, x: int, y: int) -> int:
        if n < -1:
            raise ValueError(f"U_n is defined for n >= -1, got {n}")
        if n == -1:
            return 0
        with cls._lock:
            table = cls._tables.setdefault((x, y), [(1, 1)])
            while len(table) <= n:
                k = len(table)
                u_prev, v_prev = table[k - 1]
                u_prev2, v_prev2 = table[k - 2] if k >= 2 else (0, 0)
                table.append((x * v_prev - u_prev2, y * u_prev - v_prev2))
            return table[n][0]

    @classmethod
    def clear(cls) -> None:
        with cls._lock:
            cls._tables.clear()


def chebyshev_u(n: int, x: int, y: int) -> int:
    return ChebyshevTable.value(n, x, y)


@dataclass(frozen=True)
class Rank2Ladder:
    n: int
    source: int
    target: int
    a: int
    b: int

    @property
    def is_infinite_type(self) -> bool:
        return self.a * self.b >= 4

    def root(self, t: int) -> IntVector:
        if t < -1:
            raise ValueError(f"ladder roots start at t = -1, got {t}")
        q = [0] * self.n
        if t == -1:
            q[self.target - 1] = -1
            return tuple(q)
        q[self.target - 1] = chebyshev_u(t - 1, self.b, self.a)
        q[self.source - 1] = chebyshev_u(t, self.a, self.b)
        return tuple(q)

    def roots(self, t_max: int) -> List[IntVector]:
        """q_0, ..., q_{t_max}."""
        return [self.root(t) for t in range(t_max + 1)]

    def coordinates(self, t: int) -> Tuple[int, int]:
        """(q_t(i), q_t(j)) for the arrow j -> i."""
        q = self.root(t)
        return q[self.target - 1], q[self.source - 1]


def ladder(q: ValuedQuiver, source: int, target: int) -> Rank2Ladder:
    check_vertex(source, q.n)
    check_vertex(target, q.n)
    arrow = q.arrow(source, target)
    if arrow is None:
        raise ArrowNotFoundError(f"no arrow {source}->{target} in the quiver")
    return Rank2Ladder(n=q.n, source=source, target=target, a=arrow.d_ts, b=arrow.d_st)


def ladder_from_exchange(b: ExchangeMatrix, source: int, target: int) -> Rank2Ladder:
    return ladder(quiver_from_exchange(b), source, target)


def tau_block_roots(ladder: Rank2Ladder, t_max: int) -> List[Tuple[int, int]]:
    """
    (q_t(i), q_t(j)) for 0 <= t <= t_max by iterating the 2x2 tau block from
    q_{-1} = (-1, 0) and q_0 = (0, 1).
    """
    tau = ((-1, ladder.b), (-ladder.a, ladder.a * ladder.b - 1))
    history: List[Tuple[int, int]] = [(-1, 0), (0, 1)]
    while len(history) < t_max + 2:
        prev2 = history[-2]
        nxt = matvec(tau, prev2)
        history.append((nxt[0], nxt[1]))
    return history[1 : t_max + 2]


def ladder_rotation_check(q: ValuedQuiver, source: int, target: int, t_max: int) -> bool:
    """
    X_j^+ q_t = q'_{t-1} for 0 <= t <= t_max, where q' is the ladder of mu_j Q
    at the reversed arrow i -> j and X_j^+ is built from the exchange matrix of Q.
    """
    original = ladder(q, source, target)
    b = exchange_from_quiver(q)
    mutated = ladder_from_exchange(b.mutate(source), target, source)
    x_plus = x_matrix(b, source, Sign.PLUS).matrix
    for t in range(t_max + 1):
        if matvec(x_plus, original.root(t)) != mutated.root(t - 1):
            return False
    return True


def divergence_check(ladder: Rank2Ladder, t_max: int) -> bool:
    """
    Nonnegative coordinates and q_{t+2} > q_t in both ladder coordinates for
    0 <= t <= t_max - 2; when a = b also q_{t+1} > q_t. Holds when ab >= 4.
    """
    coords = [ladder.coordinates(t) for t in range(t_max + 1)]
    if any(x < 0 for pair in coords for x in pair):
        return False
    steps = (1, 2) if ladder.a == ladder.b else (2,)
    for step in steps:
        for t in range(t_max + 1 - step):
            lo, hi = coords[t], coords[t + step]
            if not (hi[0] > lo[0] and hi[1] > lo[1]):
                return False
    return True
