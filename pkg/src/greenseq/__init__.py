from greenseq.algebra.c_matrices import Seed, g_matrix, hemisphere, initial_seed, mutate_seed
from greenseq.algebra.quiver_core import (
    ExchangeMatrix,
    ValuedQuiver,
    exchange_from_quiver,
    load_exchange,
    quiver_from_exchange,
)
from greenseq.algebra.search import SearchConfig, enumerate_mgs, enumerate_reddening
from greenseq.algebra.sequences import classify, pull_back, rotate, run_sequence
from greenseq.core.context import run_ctx
from greenseq.otel_setup import configure_tracing

__all__ = [
    "ExchangeMatrix",
    "SearchConfig",
    "Seed",
    "ValuedQuiver",
    "classify",
    "configure_tracing",
    "enumerate_mgs",
    "enumerate_reddening",
    "exchange_from_quiver",
    "g_matrix",
    "hemisphere",
    "initial_seed",
    "load_exchange",
    "mutate_seed",
    "pull_back",
    "quiver_from_exchange",
    "rotate",
    "run_ctx",
    "run_sequence",
]
