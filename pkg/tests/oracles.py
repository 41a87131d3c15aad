"""Independent numerical oracles used by the test suite.

Everything here avoids the package's own elliptic/AGM code paths:
quadrature of the defining integrals (scipy.integrate.quad), mpmath's
arbitrary-precision Jacobi functions, and scipy.special — so agreement is
evidence, not circularity.
"""

import mpmath as mp
import numpy as np
from scipy.integrate import quad


def complete_K_quad(m: float) -> float:
    val, _ = quad(lambda t: 1.0 / np.sqrt(1.0 - m * np.sin(t) ** 2), 0.0, np.pi / 2,
                  epsabs=1e-13, epsrel=1e-13, limit=200)
    return val


def complete_E_quad(m: float) -> float:
    val, _ = quad(lambda t: np.sqrt(1.0 - m * np.sin(t) ** 2), 0.0, np.pi / 2,
                  epsabs=1e-13, epsrel=1e-13, limit=200)
    return val


def cn_squared_period_integral_quad(m: float) -> float:
    # substitute u = F(theta, m): du = dtheta / sqrt(1 - m sin^2), cn -> cos
    val, _ = quad(lambda t: np.cos(t) ** 2 / np.sqrt(1.0 - m * np.sin(t) ** 2), 0.0, np.pi,
                  epsabs=1e-13, epsrel=1e-13, limit=400)
    return val


def jacobi_mp(u: float, m: float):
    """(sn, cn, dn) from mpmath at 50 digits."""
    with mp.workdps(50):
        sn = mp.ellipfun("sn", u, m=m)
        cn = mp.ellipfun("cn", u, m=m)
        dn = mp.ellipfun("dn", u, m=m)
        return float(sn), float(cn), float(dn)


def wavelike_arc_energy_quad(amplitude: float, alpha: float, beta: float, m: float,
                             s0: float, s1: float) -> float:
    """Integral of (A cn(alpha s + beta, m))^2 via scipy's ellipj."""
    from scipy.special import ellipj

    def k2(s):
        _, cn, _, _ = ellipj(alpha * s + beta, m)
        return (amplitude * cn) ** 2

    val, _ = quad(k2, s0, s1, epsabs=1e-13, epsrel=1e-13, limit=400)
    return val
