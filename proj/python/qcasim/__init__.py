"""Tensor-network seed evolutions of (1+1)D quantum cellular automata."""

from qcasim._core import (
    __version__,
    build_gate,
    dense_occupation_series,
    dk_run,
    effective_exponent,
    estimate_critical,
    run_trajectory,
)

__all__ = [
    "__version__",
    "build_gate",
    "dense_occupation_series",
    "dk_run",
    "effective_exponent",
    "estimate_critical",
    "run_trajectory",
]
