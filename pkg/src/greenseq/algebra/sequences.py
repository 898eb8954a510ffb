"""
Mutation trajectories and what can be read off them: green/red bookkeeping,
reddening and maximal green classification, the permutation of a reddening
sequence, rotation, the mutation formula and maximal green tails.
"""

import enum
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from greenseq.algebra.c_matrices import (
    Seed,
    VertexColor,
    hemisphere,
    initial_seed,
    mutate_seed,
    negative_permutation,
    vertex_color,
)
from greenseq.algebra.matrices import (
    IntMatrix,
    IntVector,
    column,
    columns,
    matmul,
    matvec,
    unit_vector,
    vector_sign,
)
from greenseq.algebra.quiver_core import (
    ExchangeMatrix,
    Sign,
    check_vertex,
    conjugate_by_permutation,
    x_matrix,
)
from greenseq.core.errors import InvariantViolation, NotReddeningError
from greenseq.observe.instrumentation import instrumented

MutationSequence = Tuple[int, ...]


@dataclass(frozen=True)
class StepRecord:
    vertex: int
    c_vector: IntVector
    color: VertexColor
    seed_after: Seed


@dataclass(frozen=True)
class MutationTrajectory:
    b0: ExchangeMatrix
    steps: Tuple[StepRecord, ...]

    @property
    def length(self) -> int:
        return len(self.steps)

    @property
    def sequence(self) -> MutationSequence:
        return tuple(step.vertex for step in self.steps)

    @property
    def colors(self) -> Tuple[VertexColor, ...]:
        return tuple(step.color for step in self.steps)

    @property
    def red_count(self) -> int:
        return sum(1 for step in self.steps if step.color is VertexColor.RED)

    @property
    def seeds(self) -> Tuple[Seed, ...]:
        """C_0 = I, C_1, ..., C_m with their exchange matrices."""
        return (initial_seed(self.b0),) + tuple(step.seed_after for step in self.steps)

    @property
    def terminal(self) -> Seed:
        return self.steps[-1].seed_after if self.steps else initial_seed(self.b0)

    @property
    def c_matrices(self) -> Tuple[IntMatrix, ...]:
        return tuple(seed.c for seed in self.seeds)


class SequenceKind(str, enum.Enum):
    NOT_REDDENING = "not_reddening"
    REDDENING = "reddening"
    MAXIMAL_GREEN = "maximal_green"


@dataclass(frozen=True)
class Permutation:
    """sigma as images: sigma(j) = images[j - 1]."""

    images: Tuple[int, ...]

    def __call__(self, j: int) -> int:
        return self.images[j - 1]

    @property
    def n(self) -> int:
        return len(self.images)

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for j, image in enumerate(self.images, start=1):
            inv[image - 1] = j
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(image == j for j, image in enumerate(self.images, start=1))

    def cycle_notation(self) -> str:
        seen = set()
        cycles = []
        for start in range(1, self.n + 1):
            if start in seen or self(start) == start:
                seen.add(start)
                continue
            cycle = []
            j = start
            while j not in seen:
                seen.add(j)
                cycle.append(j)
                j = self(j)
            cycles.append("(" + " ".join(str(x) for x in cycle) + ")")
        return "".join(cycles) or "()"

    def __str__(self) -> str:
        return self.cycle_notation()


@dataclass(frozen=True)
class SequenceClass:
    kind: SequenceKind
    red_count: Optional[int] = None
    sigma: Optional[Permutation] = None

    @property
    def is_reddening(self) -> bool:
        return self.kind is not SequenceKind.NOT_REDDENING


@dataclass(frozen=True)
class GreenTail:
    """Suffix of a trajectory after its last red step."""

    trajectory: MutationTrajectory
    start: int

    @property
    def steps(self) -> Tuple[StepRecord, ...]:
        return self.trajectory.steps[self.start :]

    @property
    def sequence(self) -> MutationSequence:
        return tuple(step.vertex for step in self.steps)

    @property
    def c_vectors(self) -> Tuple[IntVector, ...]:
        return tuple(step.c_vector for step in self.steps)


def run_sequence(b0: ExchangeMatrix, ks: Sequence[int]) -> MutationTrajectory:
    for k in ks:
        check_vertex(k, b0.n)
    seed = initial_seed(b0)
    steps = []
    for k in ks:
        color = vertex_color(seed, k)
        c_vec = seed.c_vector(k)
        seed = mutate_seed(seed, k)
        steps.append(StepRecord(vertex=k, c_vector=c_vec, color=color, seed_after=seed))
    return MutationTrajectory(b0=b0, steps=tuple(steps))


def classify(t: MutationTrajectory) -> SequenceClass:
    images = negative_permutation(t.terminal)
    if images is None:
        return SequenceClass(SequenceKind.NOT_REDDENING)
    r = t.red_count
    kind = SequenceKind.MAXIMAL_GREEN if r == 0 else SequenceKind.REDDENING
    return SequenceClass(kind, red_count=r, sigma=Permutation(images))


def _require_reddening(
    b0: ExchangeMatrix, ks: Sequence[int]
) -> Tuple[MutationTrajectory, SequenceClass]:
    t = run_sequence(b0, ks)
    cls = classify(t)
    if not cls.is_reddening:
        raise NotReddeningError(f"sequence {list(ks)} does not end with every vertex red")
    return t, cls


@instrumented
def rotate(b0: ExchangeMatrix, ks: Sequence[int]) -> Tuple[ExchangeMatrix, MutationSequence]:
    """
    (k0, ..., k_{m-1}) on B0 becomes (k1, ..., k_{m-1}, sigma^-1(k0)) on mu_k0 B0.
    The rotated pair is re-run and must keep sigma and the red count.
    """
    if not ks:
        raise NotReddeningError("cannot rotate an empty sequence")
    _, cls = _require_reddening(b0, ks)
    assert cls.sigma is not None
    k0 = ks[0]
    rotated_b = b0.mutate(k0)
    rotated = tuple(ks[1:]) + (cls.sigma.inverse()(k0),)

    rotated_cls = classify(run_sequence(rotated_b, rotated))
    if rotated_cls.sigma != cls.sigma or rotated_cls.red_count != cls.red_count:
        raise InvariantViolation(
            f"rotation of {list(ks)} changed the class: {cls} -> {rotated_cls}"
        )
    return rotated_b, rotated


def rotate_times(
    b0: ExchangeMatrix, ks: Sequence[int], times: int
) -> Tuple[ExchangeMatrix, MutationSequence]:
    b, seq = b0, tuple(ks)
    for _ in range(times):
        b, seq = rotate(b, seq)
    return b, seq


def conjugated_initial(b0: ExchangeMatrix, sigma: Permutation) -> ExchangeMatrix:
    """P_sigma^t B0 P_sigma: where m rotations of a length-m sequence land."""
    return conjugate_by_permutation(b0, sigma.images)


@dataclass(frozen=True)
class PullBack:
    b: ExchangeMatrix
    sequence: MutationSequence
    sequence_class: SequenceClass


@instrumented
def pull_back(
    b_prime: ExchangeMatrix, ks: Sequence[int], path: Sequence[int]
) -> PullBack:
    """
    Transports a reddening sequence ks on B' = mu_{j_t} ... mu_{j_1} B back to B.

    The sequence (j_t, ..., j_1, j_1, ..., j_t, ks) is reddening on B' and t
    rotations turn it into (j_1, ..., j_t, ks, sigma^-1(j_t), ..., sigma^-1(j_1))
    on B, with the same sigma and red count.
    """
    js = tuple(path)
    for j in js:
        check_vertex(j, b_prime.n)
    _require_reddening(b_prime, ks)
    prefixed = tuple(reversed(js)) + js + tuple(ks)
    b, seq = rotate_times(b_prime, prefixed, len(js))
    return PullBack(b=b, sequence=seq, sequence_class=classify(run_sequence(b, seq)))


def mutation_formula_check(b0: ExchangeMatrix, ks: Sequence[int]) -> bool:
    """
    Runs ks on B0 and (k1, ...) on mu_k0 B0 side by side and checks
    C'_s = X_k0^eps(s) C_s for s >= 1, with eps(s) = + iff C_s lies in H_k0^-.
    X is built from B0.
    """
    if not ks:
        return True
    k0 = ks[0]
    original = run_sequence(b0, ks).seeds
    rotated = run_sequence(b0.mutate(k0), ks[1:]).seeds
    x_plus = x_matrix(b0, k0, Sign.PLUS).matrix
    x_minus = x_matrix(b0, k0, Sign.MINUS).matrix
    for s in range(1, len(ks) + 1):
        c_s = original[s].c
        x = x_plus if hemisphere(original[s], k0) is Sign.MINUS else x_minus
        if matmul(x, c_s) != rotated[s - 1].c:
            return False
    return True


def paired_columns_check(b0: ExchangeMatrix, ks: Sequence[int]) -> bool:
    """
    Column by column companion of the mutation formula: c'_j has the sign of
    c_j, except when c_j = +-e_k0, where c'_j = -c_j.
    """
    if not ks:
        return True
    k0 = ks[0]
    n = b0.n
    original = run_sequence(b0, ks).seeds
    rotated = run_sequence(b0.mutate(k0), ks[1:]).seeds
    for s in range(1, len(ks) + 1):
        for c_j, c_prime_j in zip(columns(original[s].c), columns(rotated[s - 1].c)):
            if c_j in (unit_vector(n, k0 - 1), unit_vector(n, k0 - 1, -1)):
                if c_prime_j != tuple(-x for x in c_j):
                    return False
            elif vector_sign(c_j) != vector_sign(c_prime_j):
                return False
    return True


def maximal_green_tail(t: MutationTrajectory) -> GreenTail:
    last_red = -1
    for s, step in enumerate(t.steps):
        if step.color is VertexColor.RED:
            last_red = s
    return GreenTail(trajectory=t, start=last_red + 1)


def one_more_time_counts(t: MutationTrajectory, k: int) -> Tuple[int, int]:
    n = t.b0.n
    check_vertex(k, n)
    plus_e = unit_vector(n, k - 1)
    minus_e = unit_vector(n, k - 1, -1)
    plus = sum(1 for step in t.steps if step.c_vector == plus_e)
    minus = sum(1 for step in t.steps if step.c_vector == minus_e)
    return plus, minus


def simple_root_counts(t: MutationTrajectory) -> Dict[int, Tuple[int, int]]:
    return {k: one_more_time_counts(t, k) for k in range(1, t.b0.n + 1)}


def post_tail_transport_check(b0: ExchangeMatrix, ks: Sequence[int]) -> bool:
    """
    With t the last step mutating the c-vector e_k0, checks c_s = X_k0^+ c'_s
    for every t < s < m, where c'_s is the c-vector mutated by the rotated
    sequence at the same vertex k_s.
    """
    t_orig, _ = _require_reddening(b0, ks)
    k0 = ks[0]
    e_k0 = unit_vector(b0.n, k0 - 1)
    last = max(s for s, step in enumerate(t_orig.steps) if step.c_vector == e_k0)
    rotated_b, rotated = rotate(b0, ks)
    rotated_seeds = run_sequence(rotated_b, rotated).seeds
    x_plus = x_matrix(b0, k0, Sign.PLUS).matrix
    for s in range(last + 1, len(ks)):
        k_s = ks[s]
        c_prime = column(rotated_seeds[s - 1].c, k_s - 1)
        if t_orig.steps[s].c_vector != matvec(x_plus, c_prime):
            return False
    return True


def first_occurrence_order(ks: Sequence[int], source: int, target: int) -> bool:
    """True unless the source vertex is mutated first (vacuous if either is missing)."""
    if source not in ks or target not in ks:
        return True
    return list(ks).index(target) < list(ks).index(source)


def target_before_source_in_tail(tail: GreenTail, source: int, target: int) -> bool:
    """
    If both e_target and e_source occur among the c-vectors mutated in the
    tail, e_target occurs first.
    """
    n = tail.trajectory.b0.n
    c_vectors: List[IntVector] = list(tail.c_vectors)
    e_source = unit_vector(n, source - 1)
    e_target = unit_vector(n, target - 1)
    if e_source not in c_vectors or e_target not in c_vectors:
        return True
    return c_vectors.index(e_target) < c_vectors.index(e_source)
