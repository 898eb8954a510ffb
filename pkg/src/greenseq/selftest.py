"""
Regression suite over the packaged quiver fixtures.

regressions.json is a list of checks. Each check names a fixture, a kind and
the expected values; the runner dispatches on the kind and reports one
outcome per check.
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple, Union

from greenseq.algebra.quiver_core import ExchangeMatrix, ValuedQuiver, load_exchange
from greenseq.algebra.rank2_roots import ladder_rotation_check
from greenseq.algebra.search import (
    SearchConfig,
    enumerate_mgs,
    enumerate_reddening,
    export_exchange_graph,
)
from greenseq.algebra.sequences import (
    classify,
    mutation_formula_check,
    one_more_time_counts,
    rotate,
    run_sequence,
)
from greenseq.algebra.tame_regions import tame_context
from greenseq.core.errors import FixtureError, GreenseqError
from greenseq.core.metadata import resolve_fixture_dir

logger = logging.getLogger(__name__)

REGRESSIONS_FILE = "regressions.json"


@dataclass(frozen=True)
class CheckOutcome:
    name: str
    passed: bool
    detail: str = ""


def load_fixture(
    name: str, fixture_dir: Union[str, Path, None] = None
) -> Tuple[ExchangeMatrix, ValuedQuiver]:
    path = resolve_fixture_dir(fixture_dir) / f"{name}.json"
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError as e:
        raise FixtureError(f"fixture {name!r} not found at {path}") from e
    except json.JSONDecodeError as e:
        raise FixtureError(f"fixture {path} is not valid JSON: {e}") from e
    return load_exchange(data)


def load_regressions(fixture_dir: Union[str, Path, None] = None) -> List[Dict[str, Any]]:
    path = resolve_fixture_dir(fixture_dir) / REGRESSIONS_FILE
    try:
        checks = json.loads(path.read_text())
    except FileNotFoundError as e:
        raise FixtureError(f"{REGRESSIONS_FILE} not found in {path.parent}") from e
    except json.JSONDecodeError as e:
        raise FixtureError(f"{path} is not valid JSON: {e}") from e
    if not isinstance(checks, list) or not all(isinstance(c, dict) for c in checks):
        raise FixtureError(f"{path} must hold a list of check objects")
    return checks


# Each handler returns None on success or a short failure detail
_Handler = Callable[[ExchangeMatrix, ValuedQuiver, Mapping[str, Any]], Optional[str]]


def _mismatch(what: str, got: Any, expected: Any) -> Optional[str]:
    return None if got == expected else f"{what}: got {got}, expected {expected}"


def _check_classify(
    b: ExchangeMatrix, q: ValuedQuiver, check: Mapping[str, Any]
) -> Optional[str]:
    seq = tuple(check["sequence"])
    cls = classify(run_sequence(b, seq))
    expect = check["expect"]
    got: Dict[str, Any] = {"class": cls.kind.value, "length": len(seq)}
    if "red_count" in expect:
        got["red_count"] = cls.red_count
    if "sigma" in expect:
        got["sigma"] = str(cls.sigma) if cls.sigma is not None else None
    return _mismatch("classification", got, dict(expect))


def _check_rotation(
    b: ExchangeMatrix, q: ValuedQuiver, check: Mapping[str, Any]
) -> Optional[str]:
    _, rotated = rotate(b, tuple(check["sequence"]))
    return _mismatch("rotated sequence", list(rotated), check["expect"]["sequence"])


def _check_mutation_formula(
    b: ExchangeMatrix, q: ValuedQuiver, check: Mapping[str, Any]
) -> Optional[str]:
    if mutation_formula_check(b, tuple(check["sequence"])):
        return None
    return "C'_s != X C_s at some step"


def _check_one_more_time(
    b: ExchangeMatrix, q: ValuedQuiver, check: Mapping[str, Any]
) -> Optional[str]:
    t = run_sequence(b, tuple(check["sequence"]))
    for k in range(1, b.n + 1):
        plus, minus = one_more_time_counts(t, k)
        if plus != minus + 1:
            return f"vertex {k}: +e_k mutated {plus} times, -e_k {minus} times"
    return None


def _check_mgs(
    b: ExchangeMatrix, q: ValuedQuiver, check: Mapping[str, Any]
) -> Optional[str]:
    result = enumerate_mgs(b, SearchConfig(max_length=int(check["max_length"])))
    expect = check["expect"]
    if "sequences" in expect:
        return _mismatch("sequences", [list(s) for s in result.sequences], expect["sequences"])
    lengths = sorted({len(s) for s in result.sequences})
    return _mismatch("lengths", lengths, expect["lengths"])


def _check_reddening(
    b: ExchangeMatrix, q: ValuedQuiver, check: Mapping[str, Any]
) -> Optional[str]:
    cfg = SearchConfig(max_length=int(check["max_length"]), max_red=int(check["max_red"]))
    result = enumerate_reddening(b, cfg)
    seq, r = check["expect"]["contains"]
    if (tuple(seq), r) in result.pairs():
        return None
    return f"({seq}, r={r}) not among {result.count} reddening sequences"


def _check_graph(
    b: ExchangeMatrix, q: ValuedQuiver, check: Mapping[str, Any]
) -> Optional[str]:
    g = export_exchange_graph(b, int(check["depth"])).graph
    got = {"nodes": g.number_of_nodes(), "edges": g.number_of_edges()}
    return _mismatch("graph size", got, dict(check["expect"]))


def _check_ladder_rotation(
    b: ExchangeMatrix, q: ValuedQuiver, check: Mapping[str, Any]
) -> Optional[str]:
    source, target = check["arrow"]
    if ladder_rotation_check(q, source, target, int(check["t_max"])):
        return None
    return "X_j^+ q_t != q'_(t-1) for some t"


def _check_tame(
    b: ExchangeMatrix, q: ValuedQuiver, check: Mapping[str, Any]
) -> Optional[str]:
    ctx = tame_context(q)
    got = {"eta": list(ctx.eta), "period": ctx.period, "delta": list(ctx.delta)}
    return _mismatch("tame data", got, dict(check["expect"]))


HANDLERS: Dict[str, _Handler] = {
    "classify": _check_classify,
    "rotation": _check_rotation,
    "mutation_formula": _check_mutation_formula,
    "one_more_time": _check_one_more_time,
    "mgs": _check_mgs,
    "reddening": _check_reddening,
    "graph": _check_graph,
    "ladder_rotation": _check_ladder_rotation,
    "tame": _check_tame,
}


def run_check(check: Mapping[str, Any], fixture_dir: Union[str, Path, None] = None) -> CheckOutcome:
    name = str(check.get("name", "<unnamed>"))
    kind = check.get("kind")
    handler = HANDLERS.get(str(kind))
    if handler is None:
        raise FixtureError(f"check {name!r} has unknown kind {kind!r}")
    if "quiver" not in check:
        raise FixtureError(f"check {name!r} names no quiver fixture")
    b, q = load_fixture(str(check["quiver"]), fixture_dir)
    try:
        detail = handler(b, q, check)
    except KeyError as e:
        raise FixtureError(f"check {name!r} is missing field {e}") from e
    except FixtureError:
        raise
    except GreenseqError as e:
        detail = f"{e.__class__.__name__}: {e}"
    return CheckOutcome(name=name, passed=detail is None, detail=detail or "")


def run_selftest(fixture_dir: Union[str, Path, None] = None) -> List[CheckOutcome]:
    outcomes = [run_check(check, fixture_dir) for check in load_regressions(fixture_dir)]
    failed = [o.name for o in outcomes if not o.passed]
    if failed:
        logger.warning(f"selftest: {len(failed)} check(s) failed: {', '.join(failed)}")
    return outcomes
