import logging
import sys

# Wide events (one JSON line per command) go to stderr so stdout stays the
# command's deterministic output. Configure the "greenseq" logger to reroute.
logger = logging.getLogger("greenseq")


def _install_stderr_handler(target: logging.Logger) -> None:
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(message)s"))
    target.addHandler(handler)
    target.setLevel(logging.INFO)


if not logger.handlers:
    _install_stderr_handler(logger)
