"""Numerical toolkit for Euler elasticae.

Closed-form elastica families (wavelike, orbitlike, borderline, circular,
and spatial), discrete-curve energies and Euler-Lagrange diagnostics,
clamped fixed-length and length-penalized bending-energy minimization,
and the oscillation/concentration counterexample experiments.
"""

from ._kernels import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = ["KERNEL_BACKEND", "__version__"]
