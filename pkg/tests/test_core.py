import asyncio
import contextvars
import datetime
import enum
import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, cast

import numpy as np
import pytest
import sympy
from opentelemetry.sdk.trace import TracerProvider
from opentelemetry.sdk.trace.export import SimpleSpanProcessor
from opentelemetry.sdk.trace.export.in_memory_span_exporter import InMemorySpanExporter

from greenseq.core.context import run_ctx
from greenseq.core.errors import InvariantViolation, NotTameError
from greenseq.core.metadata import (
    DEFAULT_PERIOD_CAP,
    resolve_fixture_dir,
    resolve_jobs,
    resolve_period_cap,
)
from greenseq.core.serialization import default_serializer


def test_context_isolation() -> None:
    async def worker(worker_id: int, delay: float) -> str:
        run_ctx.clear()
        run_ctx.add("id", worker_id)
        await asyncio.sleep(delay)
        # Verify that the ID is still what we set, not overwritten by other workers
        actual_id = run_ctx.get_all().get("id")
        return f"Worker {worker_id}: {actual_id}"

    async def run_all() -> List[str]:
        return list(await asyncio.gather(worker(1, 0.2), worker(2, 0.1), worker(3, 0.05)))

    results = asyncio.run(run_all())

    assert "Worker 1: 1" in results
    assert "Worker 2: 2" in results
    assert "Worker 3: 3" in results


def test_exception_recording() -> None:
    run_ctx.clear()
    try:
        raise ValueError("test error")
    except ValueError as e:
        run_ctx.record_exception(e)

    ctx = run_ctx.get_all()
    assert ctx["severity"] == "ERROR"
    assert ctx["error"]["type"] == "ValueError"
    assert ctx["error"]["message"] == "test error"
    assert ctx["error"]["module"] == "builtins"


@pytest.mark.parametrize(
    "exc,kind",
    [
        (NotTameError("kernel of rank 2"), "domain"),
        (InvariantViolation("det C = 2"), "invariant"),
        (KeyError("x"), "internal"),
    ],
)
def test_exception_kind(exc: BaseException, kind: str) -> None:
    run_ctx.clear()
    run_ctx.record_exception(exc)

    assert run_ctx.get_all()["error"]["kind"] == kind


def test_copied_context_does_not_leak_nested_writes() -> None:
    run_ctx.clear()
    run_ctx.add("search.bound", 12)

    def worker() -> Dict[str, Any]:
        run_ctx.add("search.nodes_visited", 40)
        return run_ctx.get_all()

    inner = contextvars.copy_context().run(worker)

    assert inner["search"] == {"bound": 12, "nodes_visited": 40}
    assert run_ctx.get_all()["search"] == {"bound": 12}


def test_initialize_with_otel_nests_ids() -> None:
    provider = TracerProvider()
    run_ctx.clear()

    with provider.get_tracer(__name__).start_as_current_span("greenseq seed") as span:
        run_ctx.initialize_with_otel()
        expected = format(span.get_span_context().trace_id, "032x")

    assert run_ctx.get_all()["otel"]["trace_id"] == expected
    assert len(run_ctx.get_all()["otel"]["span_id"]) == 16


def test_initialize_without_span_adds_nothing() -> None:
    run_ctx.clear()
    run_ctx.initialize_with_otel()

    assert "otel" not in run_ctx.get_all()


def test_sequences_mirror_as_compact_json() -> None:
    provider = TracerProvider()
    exporter = InMemorySpanExporter()
    provider.add_span_processor(SimpleSpanProcessor(exporter))
    run_ctx.clear()

    with provider.get_tracer(__name__).start_as_current_span("greenseq rotate"):
        run_ctx.add("result.b", ((0, 1), (-1, 0)))

    attrs = cast(Any, exporter.get_finished_spans()[0].attributes)
    assert attrs["result.b"] == "[[0,1],[-1,0]]"


def test_dot_notation_nests() -> None:
    run_ctx.clear()
    run_ctx.add("search.nodes_visited", 12)
    run_ctx.add("search.truncated", False)

    assert run_ctx.get_all()["search"] == {"nodes_visited": 12, "truncated": False}


def test_add_content_keeps_full_value() -> None:
    run_ctx.clear()
    dump = "[[1,0],[0,1]]" * 20
    run_ctx.add_content("trajectory.c_matrices", dump)

    assert run_ctx.get_all()["trajectory"]["c_matrices"] == dump


def test_resolve_jobs(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.delenv("GREENSEQ_JOBS", raising=False)
    assert resolve_jobs() == 1
    assert resolve_jobs(4) == 4

    monkeypatch.setenv("GREENSEQ_JOBS", "3")
    assert resolve_jobs() == 3
    assert resolve_jobs(2) == 2


@pytest.mark.parametrize("raw", ["three", "0", "-2"])
def test_resolve_jobs_ignores_bad_values(
    raw: str, monkeypatch: pytest.MonkeyPatch, caplog: pytest.LogCaptureFixture
) -> None:
    monkeypatch.setenv("GREENSEQ_JOBS", raw)

    assert resolve_jobs() == 1
    assert "GREENSEQ_JOBS" in caplog.text


def test_resolve_period_cap(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.delenv("GREENSEQ_PERIOD_CAP", raising=False)
    assert resolve_period_cap() == DEFAULT_PERIOD_CAP

    monkeypatch.setenv("GREENSEQ_PERIOD_CAP", "12")
    assert resolve_period_cap() == 12
    assert resolve_period_cap(5) == 5


def test_resolve_fixture_dir(monkeypatch: pytest.MonkeyPatch, tmp_path: Path) -> None:
    monkeypatch.delenv("GREENSEQ_FIXTURES", raising=False)
    assert (resolve_fixture_dir() / "regressions.json").is_file()

    monkeypatch.setenv("GREENSEQ_FIXTURES", str(tmp_path))
    assert str(resolve_fixture_dir()) == str(tmp_path)
    assert str(resolve_fixture_dir("elsewhere")) == "elsewhere"


def test_default_serializer() -> None:
    class Color(enum.Enum):
        RED = "red"

    payload = {
        "array": np.array([[1, 2], [3, 4]], dtype=object),
        "scalar": np.int64(7),
        "enum": Color.RED,
        "integer": sympy.Integer(5),
        "rational": sympy.Rational(1, 3),
        "fraction": Fraction(2, 5),
        "set": frozenset({3, 1}),
        "when": datetime.date(2024, 1, 2),
    }

    decoded = json.loads(json.dumps(payload, default=default_serializer))

    assert decoded == {
        "array": [[1, 2], [3, 4]],
        "scalar": 7,
        "enum": "red",
        "integer": 5,
        "rational": "1/3",
        "fraction": "2/5",
        "set": [1, 3],
        "when": "2024-01-02",
    }
