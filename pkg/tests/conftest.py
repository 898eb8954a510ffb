from typing import Callable, Tuple

import pytest
from hypothesis import HealthCheck, settings

from greenseq.algebra.quiver_core import ExchangeMatrix, ValuedQuiver
from greenseq.core.context import run_ctx
from greenseq.selftest import load_fixture

settings.register_profile(
    "greenseq",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("greenseq")

Fixture = Tuple[ExchangeMatrix, ValuedQuiver]


@pytest.fixture
def quiver_fixture() -> Callable[[str], Fixture]:
    """Loads one of the packaged quivers by name."""
    return load_fixture


@pytest.fixture
def a3_linear() -> Fixture:
    return load_fixture("a3_linear")


@pytest.fixture
def kronecker() -> Fixture:
    return load_fixture("kronecker")


@pytest.fixture
def double_path() -> Fixture:
    return load_fixture("double_path")


@pytest.fixture
def affine_a2() -> Fixture:
    return load_fixture("affine_a2")


@pytest.fixture(autouse=True)
def _fresh_run_ctx() -> None:
    run_ctx.clear()
