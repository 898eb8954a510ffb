import logging
import os
from importlib import resources
from pathlib import Path
from typing import Optional, Union

logger = logging.getLogger(__name__)

DEFAULT_JOBS = 1
DEFAULT_PERIOD_CAP = 64


def _int_from_env(name: str, default: int, minimum: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning(f"Ignoring {name}={raw!r}: not an integer.")
        return default
    if value < minimum:
        logger.warning(f"Ignoring {name}={value}: must be >= {minimum}.")
        return default
    return value


def resolve_jobs(explicit: Optional[int] = None) -> int:
    """
    Number of worker processes for the sequence search.
    Resolution order:
    1. Explicit argument (CLI --jobs)
    2. GREENSEQ_JOBS env var
    3. Fallback to 1 (serial)
    """
    if explicit is not None:
        return explicit
    return _int_from_env("GREENSEQ_JOBS", DEFAULT_JOBS, 1)


def resolve_period_cap(explicit: Optional[int] = None) -> int:
    """
    Upper bound on the Coxeter period search.
    Resolution order:
    1. Explicit argument
    2. GREENSEQ_PERIOD_CAP env var
    3. Fallback to 64
    """
    if explicit is not None:
        return explicit
    return _int_from_env("GREENSEQ_PERIOD_CAP", DEFAULT_PERIOD_CAP, 1)


def resolve_fixture_dir(explicit: Union[str, Path, None] = None) -> Path:
    """
    Directory holding the quiver fixtures and regressions.json.
    Resolution order:
    1. Explicit argument
    2. GREENSEQ_FIXTURES env var
    3. The fixtures shipped inside the package
    """
    if explicit is not None:
        return Path(explicit)
    env_dir = os.environ.get("GREENSEQ_FIXTURES")
    if env_dir:
        return Path(env_dir)
    return Path(str(resources.files("greenseq.fixtures")))
