"""Jacobi elliptic integrals and functions on the parameter range m in [0, 1].

Conventions: m is the elliptic *parameter* (square of the modulus), with
sn(0, m) = 0, cn(0, m) = 1, sn(K(m), m) = 1.  K and E use the AGM; sn/cn/dn
use the descending AGM phase recursion (see the kernel backends).

The degenerate parameter m = 1 gets an explicit analytic branch
(sn = tanh, cn = dn = sech); parameters within NEAR_ONE_CUTOFF of 1 are
routed through it as well, which avoids catastrophic cancellation in the
AGM at the price of an O(1 - m) error in the returned values.
"""

from __future__ import annotations

import math

import numpy as np

from . import _kernels

#: parameters above this are evaluated on the m = 1 branch
NEAR_ONE_CUTOFF = 1.0 - 1e-10


def _check_parameter(m: float, allow_one: bool) -> float:
    m = float(m)
    if math.isnan(m) or m < 0.0 or m > 1.0:
        raise ValueError(f"elliptic parameter must lie in [0, 1], got {m!r}")
    if not allow_one and m == 1.0:
        raise ValueError("elliptic integral diverges at m = 1")
    return m


def complete_K(m: float) -> float:
    """Complete elliptic integral of the first kind, m in [0, 1)."""
    m = _check_parameter(m, allow_one=False)
    return _kernels.complete_k(m)


def complete_E(m: float) -> float:
    """Complete elliptic integral of the second kind, m in [0, 1]."""
    m = _check_parameter(m, allow_one=True)
    if m == 1.0:
        return 1.0
    return _kernels.complete_e(m)


def jacobi_sn_cn_dn(u, m: float):
    """Jacobi sn, cn, dn at u (scalar or array) for parameter m in [0, 1].

    Returns a triple matching the shape of u.  For m above NEAR_ONE_CUTOFF
    the hyperbolic m = 1 branch is used: sn = tanh u, cn = dn = sech u.
    """
    m = _check_parameter(m, allow_one=True)
    u_arr = np.atleast_1d(np.asarray(u, dtype=float))
    if m > NEAR_ONE_CUTOFF:
        sn = np.tanh(u_arr)
        cn = 1.0 / np.cosh(u_arr)
        dn = cn.copy()
    else:
        sn, cn, dn = _kernels.jacobi_sn_cn_dn(u_arr, m)
    if np.isscalar(u) or np.ndim(u) == 0:
        return float(sn[0]), float(cn[0]), float(dn[0])
    return sn, cn, dn


def cn_squared_period_integral(m: float) -> float:
    """Integral of cn(u, m)^2 over one period interval [0, 2K(m)].

    Equals 2 (E(m) - (1 - m) K(m)) / m for m > 0, with limit pi/2 at m = 0;
    a series is used for tiny m where the closed form cancels.
    """
    m = _check_parameter(m, allow_one=False)
    if m == 0.0:
        return math.pi / 2.0
    if m < 1e-7:
        return math.pi / 2.0 + math.pi * m / 16.0
    return 2.0 * (complete_E(m) - (1.0 - m) * complete_K(m)) / m
