"""Poisson-midpoint Langevin Monte Carlo samplers, kernels and verification suites."""

__version__ = "0.1.0"

__all__ = ["__version__"]
