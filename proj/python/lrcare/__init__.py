"""Low-rank solvers for large algebraic Riccati and Lyapunov equations."""

from ._lrcare import (
    Breakdown,
    ConfigError,
    Error,
    InputError,
    Problem,
    ShiftRejected,
    bench,
    convection_diffusion,
    dense_care,
    dense_residual,
    load_manifest,
    problem,
    projected_solution,
    random_stable,
    solve,
    with_mass,
)


def solution(result):
    """Dense X = factor factor^H from a solve() result (small problems only)."""
    f = result["factor"]
    return f @ f.conj().T


__all__ = [
    "Breakdown",
    "ConfigError",
    "Error",
    "InputError",
    "Problem",
    "ShiftRejected",
    "bench",
    "convection_diffusion",
    "dense_care",
    "dense_residual",
    "load_manifest",
    "problem",
    "projected_solution",
    "random_stable",
    "solution",
    "solve",
    "with_mass",
]
