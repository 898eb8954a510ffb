"""
greenseq command line.

Every command writes deterministic, line-oriented output to stdout (or one
JSON document with --json) and exactly one structured wide event to the
"greenseq" logger on stderr. Exit codes: 0 success, 1 domain error, 2 usage.
"""

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import opentelemetry.trace as trace

from greenseq.algebra.c_matrices import g_matrix
from greenseq.algebra.quiver_core import (
    ExchangeMatrix,
    ValuedQuiver,
    euler_matrix,
    load_exchange,
    quiver_from_exchange,
)
from greenseq.algebra.rank2_roots import ladder
from greenseq.algebra.search import (
    SearchConfig,
    enumerate_mgs,
    enumerate_reddening,
    export_exchange_graph,
    length_histogram,
)
from greenseq.algebra.sequences import classify, rotate_times, run_sequence
from greenseq.algebra.tame_regions import region_class, tame_context
from greenseq.core.context import run_ctx
from greenseq.core.errors import GreenseqError, InvalidQuiverError
from greenseq.core.logger import logger
from greenseq.core.metadata import resolve_jobs
from greenseq.core.serialization import default_serializer
from greenseq.otel_setup import configure_tracing
from greenseq.selftest import run_selftest


@dataclass
class CommandOutput:
    lines: List[str] = field(default_factory=list)
    payload: Dict[str, Any] = field(default_factory=dict)
    exit_code: int = 0


def _int_list(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip() != "")
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from e


def _arrow(text: str) -> Tuple[int, int]:
    values = _int_list(text)
    if len(values) != 2:
        raise argparse.ArgumentTypeError(f"expected SOURCE,TARGET, got {text!r}")
    return values[0], values[1]


def _non_negative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value}")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _fmt(value: Any) -> str:
    """Compact JSON rendering of vectors and matrices: [[0,-1],[1,0]]."""
    return json.dumps(value, separators=(",", ":"), default=default_serializer)


def _seq(seq: Sequence[int]) -> str:
    return ",".join(str(k) for k in seq)


def _load_quiver(path: Path) -> Tuple[ExchangeMatrix, ValuedQuiver]:
    try:
        data = json.loads(path.read_text())
    except OSError as e:
        raise InvalidQuiverError(f"cannot read {path}: {e.strerror or e}") from e
    except json.JSONDecodeError as e:
        raise InvalidQuiverError(f"{path} is not valid JSON: {e}") from e
    b, q = load_exchange(data)
    run_ctx.add("quiver", {"path": str(path), "n": b.n, "arrows": len(q.arrows)})
    return b, q


def cmd_seed(args: argparse.Namespace) -> CommandOutput:
    b, q = _load_quiver(args.quiver)
    out = CommandOutput()
    out.lines += [f"n={b.n}", f"D={_fmt(b.d)}", f"B={_fmt(b.b)}", f"E={_fmt(euler_matrix(q))}"]
    out.payload = {"n": b.n, "D": b.d, "B": b.b, "E": euler_matrix(q)}
    if args.sequence is None and not (args.dump_c or args.dump_g):
        return out

    t = run_sequence(b, args.sequence or ())
    seed = t.terminal
    colors = [c.value for c in t.colors]
    g_matrices = [g_matrix(s).g for s in t.seeds]
    out.lines += [
        f"sequence={_seq(t.sequence)}",
        f"colors={','.join(colors)}",
        f"B_final={_fmt(seed.b.b)}",
        f"C={_fmt(seed.c)}",
        f"G={_fmt(g_matrices[-1])}",
    ]
    out.payload.update(
        {
            "sequence": t.sequence,
            "colors": colors,
            "B_final": seed.b.b,
            "C": seed.c,
            "G": g_matrices[-1],
        }
    )
    run_ctx.add_content("trajectory.c_matrices", _fmt(t.c_matrices))
    if args.dump_c:
        out.lines += [f"C_{s}={_fmt(c)}" for s, c in enumerate(t.c_matrices)]
        out.payload["C_matrices"] = t.c_matrices
    if args.dump_g:
        run_ctx.add_content("trajectory.g_matrices", _fmt(g_matrices))
        out.lines += [f"G_{s}={_fmt(g)}" for s, g in enumerate(g_matrices)]
        out.payload["G_matrices"] = g_matrices
    return out


def cmd_classify(args: argparse.Namespace) -> CommandOutput:
    b, _ = _load_quiver(args.quiver)
    t = run_sequence(b, args.sequence)
    cls = classify(t)
    line = f"class={cls.kind.value} length={t.length}"
    payload: Dict[str, Any] = {"class": cls.kind.value, "length": t.length}
    if cls.is_reddening:
        if cls.red_count:
            line += f" r={cls.red_count}"
        line += f" sigma={cls.sigma}"
        payload.update({"red_count": cls.red_count, "sigma": str(cls.sigma)})
    run_ctx.add("result", payload)
    return CommandOutput(lines=[line], payload=payload)


def cmd_rotate(args: argparse.Namespace) -> CommandOutput:
    b, _ = _load_quiver(args.quiver)
    rotated_b, rotated = rotate_times(b, args.sequence, args.times)
    quiver = quiver_from_exchange(rotated_b).to_json()
    payload = {"sequence": rotated, "quiver": quiver}
    run_ctx.add("result", {"sequence": _seq(rotated)})
    lines = [f"sequence={_seq(rotated)}", f"quiver={_fmt(quiver)}"]
    return CommandOutput(lines=lines, payload=payload)


def _search_output(result: Any, with_red: bool) -> CommandOutput:
    lines = []
    for seq, reds in result.pairs():
        lines.append(f"{_seq(seq)} r={reds}" if with_red else _seq(seq))
    summary = f"count={result.count} bound={result.bound}"
    if with_red:
        summary += f" max_red={result.max_red}"
    else:
        summary += f" pruned={'yes' if result.pruned_infinite_source else 'no'}"
    lines.append(summary)
    payload = {
        "sequences": result.sequences,
        "red_counts": result.red_counts,
        "count": result.count,
        "bound": result.bound,
        "max_red": result.max_red,
        "pruned": result.pruned_infinite_source,
        "truncated": result.truncated,
        "lengths": {str(k): v for k, v in length_histogram(result).items()},
    }
    run_ctx.add(
        "result",
        {
            "count": result.count,
            "nodes_visited": result.nodes_visited,
            "truncated": result.truncated,
        },
    )
    return CommandOutput(lines=lines, payload=payload)


def cmd_mgs(args: argparse.Namespace) -> CommandOutput:
    b, _ = _load_quiver(args.quiver)
    jobs = resolve_jobs(args.jobs)
    cfg = SearchConfig(
        max_length=args.max_len,
        prune_infinite_source=not args.no_prune,
        parallel=jobs > 1,
        jobs=jobs,
    )
    return _search_output(enumerate_mgs(b, cfg), with_red=False)


def cmd_reddening(args: argparse.Namespace) -> CommandOutput:
    b, _ = _load_quiver(args.quiver)
    jobs = resolve_jobs(args.jobs)
    cfg = SearchConfig(max_length=args.max_len, max_red=args.max_red, parallel=jobs > 1, jobs=jobs)
    return _search_output(enumerate_reddening(b, cfg), with_red=True)


def cmd_graph(args: argparse.Namespace) -> CommandOutput:
    b, _ = _load_quiver(args.quiver)
    graph_slice = export_exchange_graph(b, args.depth)
    g = graph_slice.graph
    dot = graph_slice.to_dot()
    summary = f"nodes={g.number_of_nodes()} edges={g.number_of_edges()} depth={args.depth}"
    run_ctx.add_content("graph.dot", dot)
    payload: Dict[str, Any] = {
        "nodes": g.number_of_nodes(),
        "edges": g.number_of_edges(),
        "depth": args.depth,
    }
    if args.dot is not None:
        args.dot.write_text(dot)
        return CommandOutput(lines=[summary], payload=payload)
    payload["dot"] = dot
    # DOT goes to stdout; the summary rides along as a DOT comment
    return CommandOutput(lines=[f"// {summary}"] + dot.rstrip("\n").split("\n"), payload=payload)


def cmd_rank2(args: argparse.Namespace) -> CommandOutput:
    _, q = _load_quiver(args.quiver)
    source, target = args.arrow
    lad = ladder(q, source, target)
    roots = lad.roots(args.t)
    lines = [f"q_{t}={_fmt(root)}" for t, root in enumerate(roots)]
    payload = {"arrow": [source, target], "a": lad.a, "b": lad.b, "roots": roots}
    return CommandOutput(lines=lines, payload=payload)


def cmd_tame(args: argparse.Namespace) -> CommandOutput:
    b, q = _load_quiver(args.quiver)
    ctx = tame_context(q)
    lines = [f"eta={_fmt(ctx.eta)}", f"period={ctx.period}", f"delta={_fmt(ctx.delta)}"]
    payload: Dict[str, Any] = {
        "eta": ctx.eta,
        "period": ctx.period,
        "delta": ctx.delta,
        "k": args.k,
    }
    if args.classify_sequence is not None:
        t = run_sequence(b, args.classify_sequence)
        rows = []
        lines.append("step vertex color region in_V in_W")
        for s, seed in enumerate(t.seeds):
            report = region_class(ctx, seed.c, args.k)
            vertex = t.steps[s - 1].vertex if s else "-"
            color = t.steps[s - 1].color.value if s else "-"
            lines.append(
                f"{s} {vertex} {color} {report.region.value} "
                f"{'yes' if report.in_v else 'no'} {'yes' if report.in_w else 'no'}"
            )
            rows.append(
                {
                    "step": s,
                    "vertex": vertex,
                    "color": color,
                    "region": report.region.value,
                    "in_v": report.in_v,
                    "in_w": report.in_w,
                }
            )
        payload["steps"] = rows
    run_ctx.add("result", {"eta": list(ctx.eta), "period": ctx.period})
    return CommandOutput(lines=lines, payload=payload)


def cmd_selftest(args: argparse.Namespace) -> CommandOutput:
    outcomes = run_selftest(args.fixtures)
    lines = [f"PASS {o.name}" if o.passed else f"FAIL {o.name}: {o.detail}" for o in outcomes]
    passed = sum(1 for o in outcomes if o.passed)
    failed = len(outcomes) - passed
    lines.append(f"passed={passed} failed={failed}")
    payload = {
        "checks": [{"name": o.name, "passed": o.passed, "detail": o.detail} for o in outcomes],
        "passed": passed,
        "failed": failed,
    }
    run_ctx.add("result", {"passed": passed, "failed": failed})
    return CommandOutput(lines=lines, payload=payload, exit_code=0 if failed == 0 else 1)


COMMANDS: Dict[str, Callable[[argparse.Namespace], CommandOutput]] = {
    "seed": cmd_seed,
    "classify": cmd_classify,
    "rotate": cmd_rotate,
    "mgs": cmd_mgs,
    "reddening": cmd_reddening,
    "graph": cmd_graph,
    "rank2": cmd_rank2,
    "tame": cmd_tame,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--trace", action="store_true", help="print OpenTelemetry spans")

    quiver = argparse.ArgumentParser(add_help=False)
    quiver.add_argument("--quiver", type=Path, required=True, help="quiver or matrix JSON file")

    parser = argparse.ArgumentParser(
        prog="greenseq",
        description="Maximal green and reddening sequences of valued quivers.",
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    p = sub.add_parser("seed", parents=[common, quiver], help="show B, D, E and optionally C, G")
    p.add_argument("--sequence", type=_int_list, default=None)
    p.add_argument("--dump-c", action="store_true", help="print C_s after every step")
    p.add_argument("--dump-g", action="store_true", help="print G_s after every step")

    p = sub.add_parser("classify", parents=[common, quiver], help="classify a mutation sequence")
    p.add_argument("--sequence", type=_int_list, required=True)

    p = sub.add_parser("rotate", parents=[common, quiver], help="rotate a reddening sequence")
    p.add_argument("--sequence", type=_int_list, required=True)
    p.add_argument("--times", type=_non_negative, default=1)

    p = sub.add_parser("mgs", parents=[common, quiver], help="enumerate maximal green sequences")
    p.add_argument("--max-len", type=_positive, required=True)
    p.add_argument("--no-prune", action="store_true", help="disable the infinite-type source prune")
    p.add_argument("--jobs", type=_positive, default=None)

    p = sub.add_parser("reddening", parents=[common, quiver], help="enumerate reddening sequences")
    p.add_argument("--max-len", type=_positive, required=True)
    p.add_argument("--max-red", type=_non_negative, default=1)
    p.add_argument("--jobs", type=_positive, default=None)

    p = sub.add_parser("graph", parents=[common, quiver], help="export the oriented exchange graph")
    p.add_argument("--depth", type=_non_negative, required=True)
    p.add_argument("--dot", type=Path, default=None, help="write DOT here instead of stdout")

    p = sub.add_parser("rank2", parents=[common, quiver], help="rank-2 root ladder of an arrow")
    p.add_argument("--arrow", type=_arrow, required=True, help="SOURCE,TARGET")
    p.add_argument("--t", type=_non_negative, default=8)

    p = sub.add_parser("tame", parents=[common, quiver], help="null root, period, defect, regions")
    p.add_argument("--k", type=_positive, default=1)
    p.add_argument("--classify-sequence", type=_int_list, default=None)

    p = sub.add_parser("selftest", parents=[common], help="run the packaged regression suite")
    p.add_argument("--fixtures", type=Path, default=None, help="alternate fixture directory")

    return parser


def _emit_event(start: float) -> None:
    ctx = run_ctx.get_all()
    final_log = {
        "severity": ctx.pop("severity", "INFO"),
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "duration_ms": round((time.time() - start) * 1000, 2),
        **ctx,
    }
    logger.info(json.dumps(final_log, default=default_serializer))


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse already printed the usage message
        return e.code if isinstance(e.code, int) else 2

    if args.trace:
        configure_tracing(enable_console_tracing=True)

    run_ctx.clear()
    start = time.time()
    tracer = trace.get_tracer(__name__)
    with tracer.start_as_current_span(f"greenseq {args.command}"):
        run_ctx.initialize_with_otel()
        run_ctx.add("command", args.command)
        try:
            out = COMMANDS[args.command](args)
        except GreenseqError as e:
            run_ctx.record_exception(e)
            print(f"greenseq {args.command}: error: {e}", file=sys.stderr)
            _emit_event(start)
            return 1

        if args.json:
            print(json.dumps(out.payload, default=default_serializer, sort_keys=True))
        else:
            for line in out.lines:
                print(line)
        run_ctx.add("exit_code", out.exit_code)
        _emit_event(start)
        return out.exit_code


def main_entry() -> None:
    sys.exit(main())
