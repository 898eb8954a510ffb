import logging
from typing import Any, cast

from opentelemetry import trace
from opentelemetry.exporter.richconsole import RichConsoleSpanExporter
from opentelemetry.sdk.trace import TracerProvider
from opentelemetry.sdk.trace.export import BatchSpanProcessor

from greenseq.otel.processors import PayloadSanitizer

logger = logging.getLogger(__name__)


def configure_tracing(enable_console_tracing: bool = True) -> None:
    """
    Configures OpenTelemetry for the engine operations.
    Safe to call more than once and safe to call when the host application
    already installed an SDK TracerProvider.
    """
    # 1. Acquire or Initialize the TracerProvider
    provider = trace.get_tracer_provider()

    if not hasattr(provider, "add_span_processor"):
        # No SDK provider yet (NoOp or Proxy): create one and make it global.
        provider = TracerProvider()
        trace.set_tracer_provider(provider)

    # Track which processors we've added to this provider instance to avoid duplicates
    if not hasattr(provider, "_greenseq_processors"):
        setattr(provider, "_greenseq_processors", set())  # noqa: B010

    processors: set[str] = provider._greenseq_processors  # type: ignore[attr-defined]

    # 2. Sanitize first so that exporters never see the matrix dumps
    if "sanitizer" not in processors:
        cast(Any, provider).add_span_processor(PayloadSanitizer())
        processors.add("sanitizer")

    # 3. Console tracing (Rich)
    if enable_console_tracing and "console" not in processors:
        console_exporter = RichConsoleSpanExporter()
        cast(Any, provider).add_span_processor(
            BatchSpanProcessor(
                console_exporter,
                schedule_delay_millis=500,
                max_export_batch_size=10,
            )
        )
        processors.add("console")
        logger.debug("Console tracing (Rich) activated.")
