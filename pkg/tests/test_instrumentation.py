from typing import Any, Tuple, cast

import pytest
from opentelemetry.sdk.trace import TracerProvider
from opentelemetry.sdk.trace.export import SimpleSpanProcessor
from opentelemetry.sdk.trace.export.in_memory_span_exporter import InMemorySpanExporter
from opentelemetry.trace import StatusCode

from greenseq.algebra.sequences import rotate
from greenseq.core.context import run_ctx
from greenseq.core.errors import NotReddeningError
from greenseq.observe import instrumentation
from greenseq.observe.instrumentation import instrumented
from greenseq.otel.processors import PayloadSanitizer
from greenseq.selftest import load_fixture


@pytest.fixture
def memory_exporter(monkeypatch: pytest.MonkeyPatch) -> InMemorySpanExporter:
    provider = TracerProvider()
    exporter = InMemorySpanExporter()
    provider.add_span_processor(PayloadSanitizer())
    provider.add_span_processor(SimpleSpanProcessor(exporter))
    # Route the decorator's tracer to this provider without touching the global one
    monkeypatch.setattr(instrumentation.trace, "get_tracer", provider.get_tracer)
    return exporter


@instrumented
def echo(values: Tuple[int, ...]) -> Tuple[int, ...]:
    return values


def test_span_per_operation(memory_exporter: InMemorySpanExporter) -> None:
    b, _ = load_fixture("a3_linear")
    rotate(b, (2, 3, 1, 3, 2))

    spans = memory_exporter.get_finished_spans()
    assert [s.name for s in spans] == ["greenseq rotate"]
    attrs = cast(Any, spans[0].attributes)
    assert attrs["ops.rotate.inputs.ks.length"] == "5"
    assert attrs["ops.rotate.inputs.b0.n"] == "3"
    assert attrs["ops.rotate.result.sequence"] == "3,1,3,2,3"


def test_exception_marks_span(memory_exporter: InMemorySpanExporter) -> None:
    b, _ = load_fixture("kronecker")

    with pytest.raises(NotReddeningError):
        rotate(b, (2, 1))

    span = memory_exporter.get_finished_spans()[0]
    assert span.status.status_code == StatusCode.ERROR
    assert any(event.name == "exception" for event in span.events)
    assert run_ctx.get_all()["severity"] == "ERROR"


def test_long_attributes_are_truncated(memory_exporter: InMemorySpanExporter) -> None:
    echo(tuple(range(1000)))

    attrs = cast(Any, memory_exporter.get_finished_spans()[0].attributes)
    value = attrs["ops.echo.inputs.values.value"]
    assert value.endswith("... [truncated]")
    assert len(value) == 1024 + len("... [truncated]")
    # the run context keeps the full value
    assert run_ctx.get_all()["ops"]["echo"]["inputs"]["values"]["length"] == 1000


def test_bulky_content_never_reaches_the_exporter(
    memory_exporter: InMemorySpanExporter,
) -> None:
    @instrumented
    def dump() -> None:
        run_ctx.add_content("trajectory.c_matrices", "[[1,0],[0,1]]" * 50)

    dump()

    attrs = cast(Any, memory_exporter.get_finished_spans()[0].attributes)
    assert "trajectory.c_matrices" not in attrs
    assert run_ctx.get_all()["trajectory"]["c_matrices"].startswith("[[1,0]")


@instrumented
def echo_twice(values: Tuple[int, ...]) -> Tuple[int, ...]:
    return echo(values) + echo(values)


def test_nested_operations_are_child_spans(memory_exporter: InMemorySpanExporter) -> None:
    assert echo_twice((1, 2)) == (1, 2, 1, 2)

    spans = {s.name: s for s in memory_exporter.get_finished_spans()}
    outer = spans["greenseq echo_twice"]
    inner = spans["greenseq echo"]
    assert inner.parent is not None
    assert inner.parent.span_id == outer.context.span_id
    assert run_ctx.get_all()["ops"]["echo_twice"]["inputs"]["values"] == {
        "length": 2,
        "value": "1,2",
    }
