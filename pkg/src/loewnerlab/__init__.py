"""Numerical laboratory for multiple SLE, particle-driven Loewner chains,
Gaussian free fields with log/arg decorations, and Ito drift audits."""

__version__ = "0.1.0"
