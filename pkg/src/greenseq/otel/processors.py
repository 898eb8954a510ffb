from typing import Any, Tuple, cast

from opentelemetry.sdk.trace import ReadableSpan, SpanProcessor

# Bulky values that the wide event keeps in full but spans should not carry
BLOCKLIST: Tuple[str, ...] = (
    "trajectory.c_matrices",
    "trajectory.g_matrices",
    "graph.dot",
)


class PayloadSanitizer(SpanProcessor):
    """
    SpanProcessor that removes matrix dumps and DOT text from spans before export.
    """

    def on_end(self, span: ReadableSpan) -> None:
        if not span.attributes:
            return

        for key in BLOCKLIST:
            if key in span.attributes:
                # span.attributes is a read-only view; _attributes is the storage
                if hasattr(span, "_attributes"):
                    try:
                        del cast(Any, span)._attributes[key]
                    except (KeyError, TypeError):
                        pass
