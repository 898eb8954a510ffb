"""
Bounded enumeration of maximal green and reddening sequences, and BFS export
of the oriented exchange graph.

Green paths need not terminate, so every search is bounded by a maximum
length and results are complete only up to that bound; the result records
whether the bound actually cut anything off.
"""

import logging
from collections import Counter, deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Deque, Dict, FrozenSet, List, Sequence, Tuple

import networkx as nx

from greenseq.algebra.c_matrices import (
    Seed,
    VertexColor,
    initial_seed,
    is_all_red,
    mutate_seed,
    vertex_color,
)
from greenseq.algebra.matrices import IntMatrix, IntVector, columns, vector_sign
from greenseq.algebra.quiver_core import ExchangeMatrix, infinite_type_sources
from greenseq.algebra.sequences import (
    MutationSequence,
    SequenceKind,
    classify,
    run_sequence,
)
from greenseq.core.errors import InvariantViolation, SearchConfigError
from greenseq.observe.instrumentation import instrumented

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SearchConfig:
    max_length: int
    max_red: int = 0
    prune_infinite_source: bool = False
    prune_repetition: bool = True
    parallel: bool = False
    jobs: int = 1

    def __post_init__(self) -> None:
        if self.max_length < 1:
            raise SearchConfigError(f"max_length must be >= 1, got {self.max_length}")
        if self.max_red < 0:
            raise SearchConfigError(f"max_red must be >= 0, got {self.max_red}")
        if self.jobs < 1:
            raise SearchConfigError(f"jobs must be >= 1, got {self.jobs}")
        # The infinite-source prune only holds for maximal green sequences
        if self.prune_infinite_source and self.max_red > 0:
            raise SearchConfigError(
                "prune_infinite_source is only valid for maximal green search (max_red = 0)"
            )


@dataclass(frozen=True, order=True)
class CanonicalCMatrix:
    """C up to a permutation of its columns."""

    columns: Tuple[IntVector, ...]


def canonical_key(c: IntMatrix) -> CanonicalCMatrix:
    return CanonicalCMatrix(tuple(sorted(columns(c), key=lambda col: (vector_sign(col), col))))


@dataclass(frozen=True)
class SearchResult:
    sequences: Tuple[MutationSequence, ...]
    red_counts: Tuple[int, ...]
    bound: int
    max_red: int
    pruned_infinite_source: bool
    pruned_repetition: bool
    nodes_visited: int
    truncated: bool
    workers: int

    @property
    def count(self) -> int:
        return len(self.sequences)

    def pairs(self) -> List[Tuple[MutationSequence, int]]:
        return list(zip(self.sequences, self.red_counts))


def prune_check(seed: Seed) -> FrozenSet[int]:
    """Green vertices that are not the source of an infinite-type arrow of the current quiver."""
    blocked = infinite_type_sources(seed.b)
    return frozenset(
        k
        for k in range(1, seed.n + 1)
        if vertex_color(seed, k) is VertexColor.GREEN and k not in blocked
    )


def repetition_prune_check(path: Sequence[CanonicalCMatrix], max_red: int) -> bool:
    """False when some C class occurs more than max_red + 1 times on the path."""
    if not path:
        return True
    return max(Counter(path).values()) <= max_red + 1


def _moves(seed: Seed, cfg: SearchConfig, reds: int) -> List[int]:
    blocked = infinite_type_sources(seed.b) if cfg.prune_infinite_source else frozenset()
    moves = []
    for k in range(1, seed.n + 1):
        if vertex_color(seed, k) is VertexColor.GREEN:
            if k not in blocked:
                moves.append(k)
        elif reds < cfg.max_red:
            moves.append(k)
    return moves


@dataclass
class _Partial:
    found: List[Tuple[MutationSequence, int]] = field(default_factory=list)
    nodes_visited: int = 0
    truncated: bool = False


# (seed, sequence so far, red steps so far, canonical keys along the path)
_Frame = Tuple[Seed, MutationSequence, int, Tuple[CanonicalCMatrix, ...]]


def _explore(b0: ExchangeMatrix, cfg: SearchConfig, prefix: MutationSequence) -> _Partial:
    """Explicit-stack DFS of the subtree below prefix. Module level so workers can pickle it."""
    trajectory = run_sequence(b0, prefix)
    keys = tuple(canonical_key(s.c) for s in trajectory.seeds)
    stack: List[_Frame] = [(trajectory.terminal, tuple(prefix), trajectory.red_count, keys)]
    partial = _Partial()

    while stack:
        seed, seq, reds, path = stack.pop()
        partial.nodes_visited += 1

        # All-red prefixes are emitted but still extended: later red steps can come back
        if seq and is_all_red(seed):
            partial.found.append((seq, reds))

        moves = _moves(seed, cfg, reds)
        if len(seq) >= cfg.max_length:
            if moves:
                partial.truncated = True
            continue

        # Pushed in descending order so that children pop in ascending order
        for k in reversed(moves):
            is_red = vertex_color(seed, k) is VertexColor.RED
            child = mutate_seed(seed, k)
            child_path = path + (canonical_key(child.c),)
            if cfg.prune_repetition and not repetition_prune_check(child_path, cfg.max_red):
                continue
            stack.append((child, seq + (k,), reds + int(is_red), child_path))

    return partial


def _search(b0: ExchangeMatrix, cfg: SearchConfig) -> SearchResult:
    partials: List[_Partial] = []
    workers = 1

    if cfg.parallel:
        root = initial_seed(b0)
        root_keys = (canonical_key(root.c),)
        prefixes = []
        for k in _moves(root, cfg, 0):
            child_path = root_keys + (canonical_key(mutate_seed(root, k).c),)
            if cfg.prune_repetition and not repetition_prune_check(child_path, cfg.max_red):
                continue
            prefixes.append((k,))
        workers = max(1, min(cfg.jobs, len(prefixes)))
        # The root itself counts as one visited node; it is never all-red and never at the bound
        partials.append(_Partial(nodes_visited=1))
        if prefixes:
            with ProcessPoolExecutor(max_workers=workers) as ex:
                futures = [ex.submit(_explore, b0, cfg, prefix) for prefix in prefixes]
                partials.extend(f.result() for f in futures)
    else:
        partials.append(_explore(b0, cfg, ()))

    found = sorted(pair for p in partials for pair in p.found)
    for seq, reds in found:
        cls = classify(run_sequence(b0, seq))
        if not cls.is_reddening or cls.red_count != reds:
            raise InvariantViolation(f"search emitted {list(seq)} but it classifies as {cls}")
        if reds == 0 and cls.kind is not SequenceKind.MAXIMAL_GREEN:
            raise InvariantViolation(f"{list(seq)} has no red steps but is not maximal green")

    result = SearchResult(
        sequences=tuple(seq for seq, _ in found),
        red_counts=tuple(reds for _, reds in found),
        bound=cfg.max_length,
        max_red=cfg.max_red,
        pruned_infinite_source=cfg.prune_infinite_source,
        pruned_repetition=cfg.prune_repetition,
        nodes_visited=sum(p.nodes_visited for p in partials),
        truncated=any(p.truncated for p in partials),
        workers=workers,
    )
    logger.debug(
        f"search n={b0.n} bound={cfg.max_length} max_red={cfg.max_red}: "
        f"{result.count} found, {result.nodes_visited} nodes"
    )
    return result


@instrumented
def enumerate_mgs(b0: ExchangeMatrix, cfg: SearchConfig) -> SearchResult:
    """All maximal green sequences of length <= cfg.max_length, in lexicographic order."""
    if cfg.max_red != 0:
        cfg = replace(cfg, max_red=0)
    return _search(b0, cfg)


@instrumented
def enumerate_reddening(b0: ExchangeMatrix, cfg: SearchConfig) -> SearchResult:
    """All reddening sequences with at most cfg.max_red red steps and length <= cfg.max_length."""
    return _search(b0, cfg)


def length_histogram(result: SearchResult) -> Dict[int, int]:
    counts = Counter(len(seq) for seq in result.sequences)
    return {length: counts[length] for length in sorted(counts)}


@dataclass(frozen=True)
class ExchangeGraphSlice:
    """
    BFS slice of the oriented exchange graph.

    Nodes are integers in BFS order with attributes index, depth, key and seed
    (the first seed reached in that class). Each edge points in the green
    direction and carries the mutated vertex and the color seen when the BFS
    crossed it.
    """

    graph: nx.DiGraph
    depth: int

    def to_dot(self) -> str:
        lines = ["digraph exchange {", "\tnode [shape=circle];"]
        for node, data in sorted(self.graph.nodes(data=True)):
            lines.append(f'\t"{node}" [label="{node}", depth={data["depth"]}];')
        for u, v, data in self.graph.edges(data=True):
            lines.append(f'\t"{u}" -> "{v}" [label="{data["vertex"]}", color={data["color"]}];')
        lines.append("}")
        return "\n".join(lines) + "\n"


@instrumented
def export_exchange_graph(b0: ExchangeMatrix, depth: int) -> ExchangeGraphSlice:
    """
    Induced subgraph on the classes of C reachable from C = I within depth
    mutations. Nodes at the depth bound are still checked for edges to nodes
    already in the slice.
    """
    if depth < 0:
        raise SearchConfigError(f"depth must be >= 0, got {depth}")

    g = nx.DiGraph()
    root = initial_seed(b0)
    root_key = canonical_key(root.c)
    index: Dict[CanonicalCMatrix, int] = {root_key: 0}
    g.add_node(0, index=0, depth=0, key=root_key, seed=root)
    queue: Deque[Tuple[int, Seed, int]] = deque([(0, root, 0)])

    while queue:
        node, seed, level = queue.popleft()
        for k in range(1, b0.n + 1):
            color = vertex_color(seed, k)
            child = mutate_seed(seed, k)
            key = canonical_key(child.c)
            if key not in index:
                if level >= depth:
                    continue
                index[key] = len(index)
                g.add_node(index[key], index=index[key], depth=level + 1, key=key, seed=child)
                queue.append((index[key], child, level + 1))
            other = index[key]
            if g.has_edge(node, other) or g.has_edge(other, node):
                continue
            if color is VertexColor.GREEN:
                g.add_edge(node, other, vertex=k, color=color.value)
            else:
                g.add_edge(other, node, vertex=k, color=color.value)

    return ExchangeGraphSlice(graph=g, depth=depth)
