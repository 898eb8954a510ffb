"""
Euler form machinery for acyclic valued quivers of tame type.

<x, y> = x^t E y with the Euler matrix E, the AR translation is
tau = -E^-1 E^t, the projective roots are the columns of E^-t D and the
injective roots are -tau of the projectives. For tame input the symmetrized
form E + E^t has a rank-1 kernel spanned by the null root eta, and some power
of tau is a transvection: tau^m x = x + delta(x) eta.

The regions V_k and W_k are cut out by pairing against the first k tau-orbits
of injective and projective roots; a cluster is classified against
V_k \\ W_k through its dimension-vector matrix V, solved from V^t E C = -D.
"""

import enum
import functools
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import sympy

from greenseq.algebra.c_matrices import VertexColor
from greenseq.algebra.matrices import (
    IntMatrix,
    IntVector,
    columns,
    diagonal,
    dot,
    from_sympy,
    matvec,
    to_sympy,
    transpose,
    unimodular_inverse,
)
from greenseq.algebra.quiver_core import ValuedQuiver, euler_matrix
from greenseq.algebra.sequences import MutationTrajectory
from greenseq.core.errors import (
    DimensionMismatchError,
    InvariantViolation,
    NonIntegralError,
    NotTameError,
    PeriodNotFoundError,
)
from greenseq.core.metadata import resolve_period_cap
from greenseq.observe.instrumentation import instrumented

logger = logging.getLogger(__name__)


class Direction(str, enum.Enum):
    FORWARD = "forward"
    BACKWARD = "backward"


@dataclass(frozen=True)
class EulerForm:
    quiver: ValuedQuiver
    e: IntMatrix
    tau: sympy.ImmutableMatrix
    tau_inv: sympy.ImmutableMatrix
    e_inv_t: sympy.ImmutableMatrix

    @property
    def n(self) -> int:
        return self.quiver.n

    @property
    def d(self) -> IntVector:
        return self.quiver.weights


@dataclass(frozen=True)
class TameContext(EulerForm):
    eta: IntVector
    period: int
    delta: IntVector


@dataclass(frozen=True)
class RootSets:
    k: int
    preprojective: Tuple[IntVector, ...]
    preinjective: Tuple[IntVector, ...]


@dataclass(frozen=True)
class RegionMembership:
    in_w: bool
    in_v: bool


class RegionClass(str, enum.Enum):
    INSIDE = "inside"
    OUTSIDE = "outside"


@dataclass(frozen=True)
class RegionReport:
    region: RegionClass
    in_v: bool
    in_w: bool
    k: int


@dataclass(frozen=True)
class RegionTransition:
    step: int
    vertex: int
    color: VertexColor
    before: RegionReport
    after: RegionReport


def euler_form(q: ValuedQuiver) -> EulerForm:
    e = euler_matrix(q)
    em = to_sympy(e)
    if em.det() == 0:
        raise NotTameError(f"Euler matrix {[list(r) for r in e]} is singular")
    e_inv = em.inv()
    return EulerForm(
        quiver=q,
        e=e,
        tau=sympy.ImmutableMatrix(-e_inv * em.T),
        tau_inv=sympy.ImmutableMatrix(-e_inv.T * em),
        e_inv_t=sympy.ImmutableMatrix(e_inv.T),
    )


def _check_dim(form: EulerForm, *vectors: Sequence[int]) -> None:
    for v in vectors:
        if len(v) != form.n:
            raise DimensionMismatchError(f"expected a vector of length {form.n}, got {len(v)}")


def _apply(m: sympy.MatrixBase, x: Sequence[int], what: str) -> IntVector:
    image = m * sympy.Matrix(list(x))
    return tuple(row[0] for row in from_sympy(image, what))


def euler_pairing(form: EulerForm, x: Sequence[int], y: Sequence[int]) -> int:
    _check_dim(form, x, y)
    return dot(x, matvec(form.e, y))


def ar_translate(
    form: EulerForm, x: Sequence[int], direction: Direction = Direction.FORWARD
) -> IntVector:
    """tau x = -E^-1 E^t x, or tau^-1 x = -E^-t E x backwards."""
    _check_dim(form, x)
    m = form.tau if direction is Direction.FORWARD else form.tau_inv
    return _apply(m, x, f"tau^{'' if direction is Direction.FORWARD else '-1'} of {list(x)}")


def null_root(form: EulerForm) -> IntVector:
    """Primitive positive generator of ker(E + E^t)."""
    em = to_sympy(form.e)
    kernel = (em + em.T).nullspace()
    if len(kernel) != 1:
        raise NotTameError(
            f"symmetrized Euler form has a kernel of rank {len(kernel)}; "
            "expected 1 for a connected tame quiver"
        )
    v = kernel[0]
    scale = functools.reduce(sympy.ilcm, [sympy.fraction(x)[1] for x in v], 1)
    ints = [int(x * scale) for x in v]
    g = functools.reduce(math.gcd, ints, 0)
    ints = [x // g for x in ints]
    if all(x <= 0 for x in ints):
        ints = [-x for x in ints]
    if any(x <= 0 for x in ints):
        raise NotTameError(f"radical vector {ints} is not positive")
    return tuple(ints)


def coxeter_period(
    form: EulerForm, eta: Optional[Sequence[int]] = None, cap: Optional[int] = None
) -> Tuple[int, IntVector]:
    """
    Smallest m >= 1 with tau^m - I = eta delta^t for a nonzero integer row vector delta.
    """
    eta = tuple(eta) if eta is not None else null_root(form)
    cap = resolve_period_cap(cap)
    n = form.n
    eye = sympy.eye(n)
    power = sympy.eye(n)
    for m in range(1, cap + 1):
        power = power * form.tau
        delta = _transvection_functional(power - eye, eta)
        if delta is not None:
            logger.debug(f"Coxeter period {m}, defect functional {list(delta)}")
            return m, delta
    raise PeriodNotFoundError(f"no period <= {cap} with tau^m - I a multiple of eta")


def _transvection_functional(diff: sympy.MatrixBase, eta: IntVector) -> Optional[IntVector]:
    if diff.is_zero_matrix:
        return None
    pivot = next(i for i, x in enumerate(eta) if x != 0)
    delta = []
    for j in range(diff.cols):
        col = diff[:, j]
        coeff = col[pivot] / eta[pivot]
        if not sympy.sympify(coeff).is_integer:
            return None
        if any(col[i] != coeff * eta[i] for i in range(len(eta))):
            return None
        delta.append(int(coeff))
    return tuple(delta)


@instrumented
def tame_context(q: ValuedQuiver, period_cap: Optional[int] = None) -> TameContext:
    form = euler_form(q)
    eta = null_root(form)
    if _apply(form.tau, eta, "tau eta") != eta:
        raise NotTameError(f"tau does not fix the radical vector {list(eta)}")
    period, delta = coxeter_period(form, eta, period_cap)
    return TameContext(
        quiver=form.quiver,
        e=form.e,
        tau=form.tau,
        tau_inv=form.tau_inv,
        e_inv_t=form.e_inv_t,
        eta=eta,
        period=period,
        delta=delta,
    )


def defect(ctx: TameContext, x: Sequence[int]) -> int:
    """delta(x), with tau^m x = x + delta(x) eta."""
    _check_dim(ctx, x)
    return dot(ctx.delta, x)


def projective_roots(form: EulerForm) -> Tuple[IntVector, ...]:
    """Columns of E^-t D."""
    pi = form.e_inv_t * to_sympy(diagonal(form.d))
    return columns(from_sympy(pi, "projective root matrix"))


def injective_roots(form: EulerForm) -> Tuple[IntVector, ...]:
    return tuple(
        tuple(-x for x in ar_translate(form, p, Direction.FORWARD)) for p in projective_roots(form)
    )


@functools.lru_cache(maxsize=64)
def root_sets(form: EulerForm, k: int) -> RootSets:
    """
    P_k = P_1 + tau^-1 P_1 + ... + tau^-(k-1) P_1 and I_k dually, layer by
    layer in vertex order.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    pre_proj: List[IntVector] = []
    pre_inj: List[IntVector] = []
    layer_p = list(projective_roots(form))
    layer_i = list(injective_roots(form))
    for _ in range(k):
        pre_proj.extend(layer_p)
        pre_inj.extend(layer_i)
        layer_p = [ar_translate(form, x, Direction.BACKWARD) for x in layer_p]
        layer_i = [ar_translate(form, x, Direction.FORWARD) for x in layer_i]
    return RootSets(k=k, preprojective=tuple(pre_proj), preinjective=tuple(pre_inj))


def region_membership(form: EulerForm, x: Sequence[int], k: int) -> RegionMembership:
    """x in W_k: <x, a> > 0 for some a in P_k. x in V_k: <x, b> >= 0 for all b in I_k."""
    _check_dim(form, x)
    sets = root_sets(form, k)
    in_w = any(euler_pairing(form, x, a) > 0 for a in sets.preprojective)
    in_v = all(euler_pairing(form, x, b) >= 0 for b in sets.preinjective)
    return RegionMembership(in_w=in_w, in_v=in_v)


def cluster_dim_matrix(form: EulerForm, c: IntMatrix) -> IntMatrix:
    """V = -E^-t C^-t D, the solution of V^t E C = -D."""
    c_inv_t = to_sympy(transpose(unimodular_inverse(c)))
    v = -form.e_inv_t * c_inv_t * to_sympy(diagonal(form.d))
    try:
        return from_sympy(v, "cluster dimension matrix")
    except NonIntegralError as e:
        raise InvariantViolation(
            f"C = {[list(r) for r in c]} does not give an integral V: {e}"
        ) from e


def region_class(form: EulerForm, c: IntMatrix, k: int) -> RegionReport:
    """
    Classifies the cone spanned by the columns of V against V_k \\ W_k on the
    barycenter and the barycenter pushed towards each ray. Both memberships
    are all-or-nothing on the open cone; disagreement raises.
    """
    rays = columns(cluster_dim_matrix(form, c))
    bary = tuple(sum(col) for col in zip(*rays))
    points = [bary] + [tuple(b + r for b, r in zip(bary, ray)) for ray in rays]
    flags = [region_membership(form, p, k) for p in points]
    in_v = {f.in_v for f in flags}
    in_w = {f.in_w for f in flags}
    if len(in_v) != 1 or len(in_w) != 1:
        raise InvariantViolation(
            f"cone of C = {[list(r) for r in c]} straddles the boundary of V_{k} or W_{k}"
        )
    v_flag, w_flag = in_v.pop(), in_w.pop()
    region = RegionClass.INSIDE if v_flag and not w_flag else RegionClass.OUTSIDE
    return RegionReport(region=region, in_v=v_flag, in_w=w_flag, k=k)


def region_transitions(form: EulerForm, t: MutationTrajectory, k: int) -> List[RegionTransition]:
    seeds = t.seeds
    reports = [region_class(form, s.c, k) for s in seeds]
    return [
        RegionTransition(
            step=s + 1,
            vertex=step.vertex,
            color=step.color,
            before=reports[s],
            after=reports[s + 1],
        )
        for s, step in enumerate(t.steps)
    ]


def red_transition_check(form: EulerForm, t: MutationTrajectory, k: int) -> bool:
    """Leaving V_k, or leaving W_k, only ever happens at a red step."""
    for tr in region_transitions(form, t, k):
        leaves = (tr.before.in_v and not tr.after.in_v) or (tr.before.in_w and not tr.after.in_w)
        if leaves and tr.color is not VertexColor.RED:
            return False
    return True


def hyperplane_lattice_points(form: TameContext, count: int, seed: int = 0) -> List[IntVector]:
    """Deterministic integer points x with <x, eta> = 0."""
    e_eta = to_sympy(form.e) * sympy.Matrix(list(form.eta))
    basis = []
    for v in sympy.Matrix([list(e_eta)]).nullspace():
        scale = functools.reduce(sympy.ilcm, [sympy.fraction(x)[1] for x in v], 1)
        basis.append([int(x * scale) for x in v])
    rng = np.random.default_rng(seed)
    coeffs = rng.integers(-5, 6, size=(count, len(basis)))
    points = []
    for row in coeffs:
        point = [0] * form.n
        for c, b in zip(row, basis):
            point = [p + int(c) * x for p, x in zip(point, b)]
        points.append(tuple(point))
    return points


def hyperplane_equivalence_check(ctx: TameContext, x: Sequence[int], k: int) -> bool:
    """On H(eta) and for k >= m: <x, a> <= 0 on P_k iff <x, b> >= 0 on I_k."""
    sets = root_sets(ctx, k)
    proj_side = all(euler_pairing(ctx, x, a) <= 0 for a in sets.preprojective)
    inj_side = all(euler_pairing(ctx, x, b) >= 0 for b in sets.preinjective)
    return proj_side == inj_side


def d_eta_membership(ctx: TameContext, x: Sequence[int], big_k: Optional[int] = None) -> bool:
    """x in H(eta) with <x, a> <= 0 for every a in P_K; K defaults to 4m."""
    _check_dim(ctx, x)
    if euler_pairing(ctx, x, ctx.eta) != 0:
        return False
    sets = root_sets(ctx, big_k if big_k is not None else 4 * ctx.period)
    return all(euler_pairing(ctx, x, a) <= 0 for a in sets.preprojective)


def disjointness_bound(ctx: TameContext, r: int) -> int:
    return (r + 1) * ctx.period


def disjointness_check(ctx: TameContext, t: MutationTrajectory, r: int) -> bool:
    """No cluster along an r-reddening trajectory lies inside V_k \\ W_k for k = (r+1)m."""
    k = disjointness_bound(ctx, r)
    return all(region_class(ctx, s.c, k).region is RegionClass.OUTSIDE for s in t.seeds)
