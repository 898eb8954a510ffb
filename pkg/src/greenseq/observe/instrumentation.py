import functools
import inspect
from typing import Any, Callable, TypeVar, cast

import opentelemetry.trace as trace

from greenseq.core.context import run_ctx
from greenseq.observe.extractors import extract_call_metadata, extract_result_metrics

F = TypeVar("F", bound=Callable[..., Any])


def instrumented(func: F) -> F:
    """
    Decorator for the public engine operations.
    Opens a span per call, records the call inputs and a result summary into the
    run context under ops.<function name>, and records exceptions on both.
    """
    op_key = f"ops.{func.__name__}"

    @functools.wraps(func)
    def sync_wrapper(*args: Any, **kwargs: Any) -> Any:
        tracer = trace.get_tracer(__name__)
        with tracer.start_as_current_span(
            f"greenseq {func.__name__}", record_exception=False, set_status_on_exception=False
        ) as span:
            _prepare_run_ctx(op_key, func, *args, **kwargs)
            try:
                result = func(*args, **kwargs)
            except Exception as e:
                run_ctx.record_exception(e)
                span.record_exception(e)
                span.set_status(trace.Status(trace.StatusCode.ERROR))
                raise e

            run_ctx.add(f"{op_key}.result", extract_result_metrics(result))
            _add_span_attributes_from_ctx(span, op_key)
            return result

    return cast(F, sync_wrapper)


def _prepare_run_ctx(op_key: str, func: Callable[..., Any], *args: Any, **kwargs: Any) -> None:
    """Extracts metadata from the call arguments and adds it to the run context."""
    sig = inspect.signature(func)
    bound = sig.bind_partial(*args, **kwargs)
    metadata = extract_call_metadata(bound.arguments)
    if metadata:
        run_ctx.add(f"{op_key}.inputs", metadata)


def _add_span_attributes_from_ctx(span: trace.Span, op_key: str) -> None:
    """Helper to copy the operation's slice of the run context onto its span."""

    def _set_nested_attr(prefix: str, data: Any) -> None:
        if isinstance(data, dict):
            for k, v in data.items():
                _set_nested_attr(f"{prefix}.{k}" if prefix else k, v)
        else:
            attr_val = str(data)
            if len(attr_val) > 1024:
                attr_val = attr_val[:1024] + "... [truncated]"
            span.set_attribute(prefix, attr_val)

    node: Any = run_ctx.get_all()
    for part in op_key.split("."):
        node = node.get(part, {}) if isinstance(node, dict) else {}
    _set_nested_attr(op_key, node)
