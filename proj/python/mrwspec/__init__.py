"""Covariance spectra of multifractal-volatility return matrices."""

from ._core import (
    ln_plus_kernel,
    mp_density,
    rho_eps,
    sample_mrm,
    simulate_eigenvalues,
    solve_density,
    solve_mu2,
    zeta,
)

__all__ = [
    "ln_plus_kernel",
    "mp_density",
    "rho_eps",
    "sample_mrm",
    "simulate_eigenvalues",
    "solve_density",
    "solve_mu2",
    "zeta",
]
