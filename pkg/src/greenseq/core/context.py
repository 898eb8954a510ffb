import contextvars
import json
from typing import Any, Dict, Iterator, List, Optional, Tuple

import opentelemetry.trace as trace

from greenseq.core.errors import GreenseqError, InvariantViolation

# One bucket per CLI command (or per library call chain in a fresh context)
_run_context: contextvars.ContextVar[Optional[Dict[str, Any]]] = contextvars.ContextVar(
    "greenseq_run_context", default=None
)


def _nested_set(ctx: Dict[str, Any], parts: List[str], value: Any) -> Dict[str, Any]:
    """Copy-on-write along the dotted path; sibling subtrees are shared, never mutated."""
    out = dict(ctx)
    head = parts[0]
    if len(parts) == 1:
        out[head] = value
    else:
        child = out.get(head)
        out[head] = _nested_set(child if isinstance(child, dict) else {}, parts[1:], value)
    return out


def _span_text(value: Any) -> str:
    # sequences and matrices read as [[1,0],[0,1]] rather than Python tuple reprs
    if isinstance(value, (tuple, list)):
        try:
            return json.dumps(value, separators=(",", ":"))
        except TypeError:
            return str(value)
    return str(value)


def _flatten(prefix: str, value: Any) -> Iterator[Tuple[str, str]]:
    if isinstance(value, dict):
        for k, v in value.items():
            yield from _flatten(f"{prefix}.{k}", v)
    else:
        yield prefix, _span_text(value)


def _error_kind(exc: BaseException) -> str:
    if isinstance(exc, InvariantViolation):
        return "invariant"
    if isinstance(exc, GreenseqError):
        return "domain"
    return "internal"


class RunContext:
    """
    The wide-event bucket of the current run.

    Values are nested by dotted key ('search.nodes_visited') and mirrored,
    flattened, onto the active span.
    """

    def _get_ctx(self) -> Dict[str, Any]:
        ctx = _run_context.get()
        if ctx is None:
            ctx = {}
            _run_context.set(ctx)
        return ctx

    def add(self, key: str, value: Any) -> None:
        _run_context.set(_nested_set(self._get_ctx(), key.split("."), value))

        span = trace.get_current_span()
        if span.is_recording():
            for attr, text in _flatten(key, value):
                span.set_attribute(attr, text)

    def add_content(self, key: str, value: Any, snippet_length: int = 80) -> None:
        """
        Bulky values (matrix dumps, DOT text): the run context keeps the full
        value, the span only gets the first snippet_length characters.
        """
        self.add(key, value)

        span = trace.get_current_span()
        if span.get_span_context().is_valid:
            text = _span_text(value)
            if len(text) > snippet_length:
                text = text[:snippet_length] + "..."
            span.set_attribute(key, text)

    def enrich(self, **kwargs: Any) -> None:
        for key, value in kwargs.items():
            self.add(key, value)

    def get_all(self) -> Dict[str, Any]:
        return self._get_ctx()

    def clear(self) -> None:
        _run_context.set(None)

    def record_exception(self, exc: BaseException) -> None:
        self.add(
            "error",
            {
                "type": exc.__class__.__name__,
                "message": str(exc),
                "module": exc.__class__.__module__,
                "kind": _error_kind(exc),
            },
        )
        self.add("severity", "ERROR")

    def initialize_with_otel(self) -> None:
        """Puts the active trace and span ids under otel.*, if a span is active."""
        span_context = trace.get_current_span().get_span_context()
        if span_context.is_valid:
            self.add("otel.trace_id", format(span_context.trace_id, "032x"))
            self.add("otel.span_id", format(span_context.span_id, "016x"))


run_ctx = RunContext()
