"""Pure-NumPy implementations of the hot numerical kernels.

Used when the compiled extension is unavailable (see package __init__).
Both backends implement the same algorithms with the same operation order:

* complete elliptic integrals K, E by the arithmetic-geometric mean,
* Jacobi sn/cn/dn by the descending AGM phase recursion,
* fixed-step RK4 integrators for planar (tangent-angle) and spatial
  (Frenet frame) curve reconstruction from sampled curvature/torsion.
"""

from __future__ import annotations

import math

import numpy as np

_AGM_TOL = 1e-17
_AGM_MAX_ITER = 60


def _agm_scale(m: float):
    """AGM sequences a_n, c_n for parameter m in [0, 1).

    Returns (a_list, c_list) where c_list[n] = (a_{n-1} - b_{n-1}) / 2 for
    n >= 1 and c_list[0] = sqrt(m).
    """
    a = 1.0
    b = math.sqrt(1.0 - m)
    a_seq = [a]
    c_seq = [math.sqrt(m)]
    for _ in range(_AGM_MAX_ITER):
        c = 0.5 * (a - b)
        a, b = 0.5 * (a + b), math.sqrt(a * b)
        a_seq.append(a)
        c_seq.append(c)
        if abs(c) <= _AGM_TOL * a:
            break
    return a_seq, c_seq


def complete_k(m: float) -> float:
    """Complete elliptic integral of the first kind, 0 <= m < 1."""
    a_seq, _ = _agm_scale(m)
    return math.pi / (2.0 * a_seq[-1])


def complete_e(m: float) -> float:
    """Complete elliptic integral of the second kind, 0 <= m < 1."""
    a_seq, c_seq = _agm_scale(m)
    s = 0.0
    for n, c in enumerate(c_seq):
        s += 0.5 * (2.0 ** n) * c * c
    return math.pi / (2.0 * a_seq[-1]) * (1.0 - s)


def jacobi_sn_cn_dn(u: np.ndarray, m: float):
    """Jacobi elliptic sn, cn, dn at points u for parameter 0 <= m < 1.

    Descending AGM phase recursion; dn is recovered from the defining
    identity dn^2 = 1 - m sn^2 (dn > 0 on the real line for m < 1).
    """
    u = np.asarray(u, dtype=float)
    if m < 1e-16:
        # series correction is below double precision here
        return np.sin(u), np.cos(u), np.ones_like(u)
    a_seq, c_seq = _agm_scale(m)
    n_top = len(a_seq) - 1
    phi = (2.0 ** n_top) * a_seq[n_top] * u
    for n in range(n_top, 0, -1):
        ratio = c_seq[n] / a_seq[n]
        phi = 0.5 * (phi + np.arcsin(np.clip(ratio * np.sin(phi), -1.0, 1.0)))
    sn = np.sin(phi)
    cn = np.cos(phi)
    dn = np.sqrt(1.0 - m * sn * sn)
    return sn, cn, dn


def planar_rk4(k_half: np.ndarray, h: float):
    """Integrate theta' = k(s), gamma' = (cos theta, sin theta) by RK4.

    k_half holds the signed curvature sampled at s = 0, h/2, h, ... (2N+1
    values).  Returns (theta at the N+1 nodes, node coordinates (N+1, 2)),
    starting from theta = 0 and gamma = 0.
    """
    k_half = np.asarray(k_half, dtype=float)
    n_steps = (k_half.shape[0] - 1) // 2
    k0 = k_half[0:-1:2]
    km = k_half[1::2]
    k1 = k_half[2::2]

    theta = np.empty(n_steps + 1)
    theta[0] = 0.0
    np.cumsum((h / 6.0) * (k0 + 4.0 * km + k1), out=theta[1:])

    th = theta[:-1]
    a1 = th
    a2 = th + 0.5 * h * k0
    a3 = th + 0.5 * h * km
    a4 = th + h * km
    dx = (h / 6.0) * (np.cos(a1) + 2.0 * np.cos(a2) + 2.0 * np.cos(a3) + np.cos(a4))
    dy = (h / 6.0) * (np.sin(a1) + 2.0 * np.sin(a2) + 2.0 * np.sin(a3) + np.sin(a4))

    nodes = np.zeros((n_steps + 1, 2))
    np.cumsum(dx, out=nodes[1:, 0])
    np.cumsum(dy, out=nodes[1:, 1])
    return theta, nodes


def frenet_rk4(k_half: np.ndarray, t_half: np.ndarray, h: float):
    """Integrate the Frenet system T' = kN, N' = -kT + tB, B' = -tN, g' = T.

    Curvature and torsion are sampled at half steps (2N+1 values each).
    Starts from g = 0 with the canonical frame T = e1, N = e2, B = e3.
    Returns (nodes, T, N, B) as (N+1, 3) arrays.
    """
    k_half = np.asarray(k_half, dtype=float)
    t_half = np.asarray(t_half, dtype=float)
    n_steps = (k_half.shape[0] - 1) // 2

    nodes = np.empty((n_steps + 1, 3))
    tang = np.empty((n_steps + 1, 3))
    norm = np.empty((n_steps + 1, 3))
    binorm = np.empty((n_steps + 1, 3))

    # state as plain floats: g, T, N, B
    gx = gy = gz = 0.0
    tx, ty, tz = 1.0, 0.0, 0.0
    nx, ny, nz = 0.0, 1.0, 0.0
    bx, by, bz = 0.0, 0.0, 1.0
    nodes[0] = (gx, gy, gz)
    tang[0] = (tx, ty, tz)
    norm[0] = (nx, ny, nz)
    binorm[0] = (bx, by, bz)

    h2 = 0.5 * h
    h6 = h / 6.0
    for i in range(n_steps):
        ka, kb, kc = k_half[2 * i], k_half[2 * i + 1], k_half[2 * i + 2]
        ta, tb, tc = t_half[2 * i], t_half[2 * i + 1], t_half[2 * i + 2]

        # stage 1
        d1tx, d1ty, d1tz = ka * nx, ka * ny, ka * nz
        d1nx, d1ny, d1nz = -ka * tx + ta * bx, -ka * ty + ta * by, -ka * tz + ta * bz
        d1bx, d1by, d1bz = -ta * nx, -ta * ny, -ta * nz
        d1gx, d1gy, d1gz = tx, ty, tz
        # stage 2
        s2tx, s2ty, s2tz = tx + h2 * d1tx, ty + h2 * d1ty, tz + h2 * d1tz
        s2nx, s2ny, s2nz = nx + h2 * d1nx, ny + h2 * d1ny, nz + h2 * d1nz
        s2bx, s2by, s2bz = bx + h2 * d1bx, by + h2 * d1by, bz + h2 * d1bz
        d2tx, d2ty, d2tz = kb * s2nx, kb * s2ny, kb * s2nz
        d2nx = -kb * s2tx + tb * s2bx
        d2ny = -kb * s2ty + tb * s2by
        d2nz = -kb * s2tz + tb * s2bz
        d2bx, d2by, d2bz = -tb * s2nx, -tb * s2ny, -tb * s2nz
        d2gx, d2gy, d2gz = s2tx, s2ty, s2tz
        # stage 3
        s3tx, s3ty, s3tz = tx + h2 * d2tx, ty + h2 * d2ty, tz + h2 * d2tz
        s3nx, s3ny, s3nz = nx + h2 * d2nx, ny + h2 * d2ny, nz + h2 * d2nz
        s3bx, s3by, s3bz = bx + h2 * d2bx, by + h2 * d2by, bz + h2 * d2bz
        d3tx, d3ty, d3tz = kb * s3nx, kb * s3ny, kb * s3nz
        d3nx = -kb * s3tx + tb * s3bx
        d3ny = -kb * s3ty + tb * s3by
        d3nz = -kb * s3tz + tb * s3bz
        d3bx, d3by, d3bz = -tb * s3nx, -tb * s3ny, -tb * s3nz
        d3gx, d3gy, d3gz = s3tx, s3ty, s3tz
        # stage 4
        s4tx, s4ty, s4tz = tx + h * d3tx, ty + h * d3ty, tz + h * d3tz
        s4nx, s4ny, s4nz = nx + h * d3nx, ny + h * d3ny, nz + h * d3nz
        s4bx, s4by, s4bz = bx + h * d3bx, by + h * d3by, bz + h * d3bz
        d4tx, d4ty, d4tz = kc * s4nx, kc * s4ny, kc * s4nz
        d4nx = -kc * s4tx + tc * s4bx
        d4ny = -kc * s4ty + tc * s4by
        d4nz = -kc * s4tz + tc * s4bz
        d4bx, d4by, d4bz = -tc * s4nx, -tc * s4ny, -tc * s4nz
        d4gx, d4gy, d4gz = s4tx, s4ty, s4tz

        gx += h6 * (d1gx + 2.0 * (d2gx + d3gx) + d4gx)
        gy += h6 * (d1gy + 2.0 * (d2gy + d3gy) + d4gy)
        gz += h6 * (d1gz + 2.0 * (d2gz + d3gz) + d4gz)
        tx += h6 * (d1tx + 2.0 * (d2tx + d3tx) + d4tx)
        ty += h6 * (d1ty + 2.0 * (d2ty + d3ty) + d4ty)
        tz += h6 * (d1tz + 2.0 * (d2tz + d3tz) + d4tz)
        nx += h6 * (d1nx + 2.0 * (d2nx + d3nx) + d4nx)
        ny += h6 * (d1ny + 2.0 * (d2ny + d3ny) + d4ny)
        nz += h6 * (d1nz + 2.0 * (d2nz + d3nz) + d4nz)
        bx += h6 * (d1bx + 2.0 * (d2bx + d3bx) + d4bx)
        by += h6 * (d1by + 2.0 * (d2by + d3by) + d4by)
        bz += h6 * (d1bz + 2.0 * (d2bz + d3bz) + d4bz)

        nodes[i + 1] = (gx, gy, gz)
        tang[i + 1] = (tx, ty, tz)
        norm[i + 1] = (nx, ny, nz)
        binorm[i + 1] = (bx, by, bz)

    return nodes, tang, norm, binorm
