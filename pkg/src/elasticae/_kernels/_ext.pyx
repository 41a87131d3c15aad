# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels (see _fallback for the reference).

Same algorithms and operation order as the NumPy fallback: AGM elliptic
integrals, descending-AGM Jacobi functions, RK4 curve reconstruction.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport asin, cos, fabs, pi, sin, sqrt

cnp.import_array()

DEF AGM_TOL = 1e-17
DEF AGM_MAX_ITER = 60


cdef int _agm_scale(double m, double* a_seq, double* c_seq) nogil:
    """Fill AGM sequences; returns the index of the last level."""
    cdef double a = 1.0
    cdef double b = sqrt(1.0 - m)
    cdef double c
    cdef int n = 0
    a_seq[0] = a
    c_seq[0] = sqrt(m)
    while n < AGM_MAX_ITER:
        c = 0.5 * (a - b)
        a, b = 0.5 * (a + b), sqrt(a * b)
        n += 1
        a_seq[n] = a
        c_seq[n] = c
        if fabs(c) <= AGM_TOL * a:
            break
    return n


def complete_k(double m):
    """Complete elliptic integral of the first kind, 0 <= m < 1."""
    cdef double a_seq[64]
    cdef double c_seq[64]
    cdef int n = _agm_scale(m, a_seq, c_seq)
    return pi / (2.0 * a_seq[n])


def complete_e(double m):
    """Complete elliptic integral of the second kind, 0 <= m < 1."""
    cdef double a_seq[64]
    cdef double c_seq[64]
    cdef int n = _agm_scale(m, a_seq, c_seq)
    cdef double s = 0.0
    cdef double p = 0.5
    cdef int i
    for i in range(n + 1):
        s += p * c_seq[i] * c_seq[i]
        p *= 2.0
    return pi / (2.0 * a_seq[n]) * (1.0 - s)


def jacobi_sn_cn_dn(u, double m):
    """Jacobi sn, cn, dn at points u for parameter 0 <= m < 1."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] uu = np.ascontiguousarray(u, dtype=np.float64)
    cdef Py_ssize_t n_pts = uu.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] sn = np.empty(n_pts)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cn = np.empty(n_pts)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] dn = np.empty(n_pts)
    cdef Py_ssize_t i
    cdef int n_top, n
    cdef double phi, ratio, arg, scale, s
    cdef double a_seq[64]
    cdef double c_seq[64]

    if m < 1e-16:
        for i in range(n_pts):
            sn[i] = sin(uu[i])
            cn[i] = cos(uu[i])
            dn[i] = 1.0
        return sn, cn, dn

    n_top = _agm_scale(m, a_seq, c_seq)
    scale = a_seq[n_top]
    for n in range(n_top):
        scale *= 2.0
    for i in range(n_pts):
        phi = scale * uu[i]
        for n in range(n_top, 0, -1):
            ratio = c_seq[n] / a_seq[n]
            arg = ratio * sin(phi)
            if arg > 1.0:
                arg = 1.0
            elif arg < -1.0:
                arg = -1.0
            phi = 0.5 * (phi + asin(arg))
        s = sin(phi)
        sn[i] = s
        cn[i] = cos(phi)
        dn[i] = sqrt(1.0 - m * s * s)
    return sn, cn, dn


def planar_rk4(k_half, double h):
    """RK4 for theta' = k(s), gamma' = (cos theta, sin theta); see fallback."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] kk = np.ascontiguousarray(k_half, dtype=np.float64)
    cdef Py_ssize_t n_steps = (kk.shape[0] - 1) // 2
    cdef cnp.ndarray[cnp.float64_t, ndim=1] theta = np.empty(n_steps + 1)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] nodes = np.empty((n_steps + 1, 2))
    cdef Py_ssize_t i
    cdef double th = 0.0, x = 0.0, y = 0.0
    cdef double k0, km, k1, a1, a2, a3, a4, h6 = h / 6.0, h2 = 0.5 * h

    theta[0] = 0.0
    nodes[0, 0] = 0.0
    nodes[0, 1] = 0.0
    for i in range(n_steps):
        k0 = kk[2 * i]
        km = kk[2 * i + 1]
        k1 = kk[2 * i + 2]
        a1 = th
        a2 = th + h2 * k0
        a3 = th + h2 * km
        a4 = th + h * km
        x += h6 * (cos(a1) + 2.0 * cos(a2) + 2.0 * cos(a3) + cos(a4))
        y += h6 * (sin(a1) + 2.0 * sin(a2) + 2.0 * sin(a3) + sin(a4))
        th += h6 * (k0 + 4.0 * km + k1)
        theta[i + 1] = th
        nodes[i + 1, 0] = x
        nodes[i + 1, 1] = y
    return theta, nodes


def frenet_rk4(k_half, t_half, double h):
    """RK4 for the Frenet system T' = kN, N' = -kT + tB, B' = -tN, g' = T."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] kk = np.ascontiguousarray(k_half, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] tt = np.ascontiguousarray(t_half, dtype=np.float64)
    cdef Py_ssize_t n_steps = (kk.shape[0] - 1) // 2
    cdef cnp.ndarray[cnp.float64_t, ndim=2] nodes = np.empty((n_steps + 1, 3))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] tang = np.empty((n_steps + 1, 3))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] norm = np.empty((n_steps + 1, 3))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] binorm = np.empty((n_steps + 1, 3))
    cdef Py_ssize_t i
    cdef double h2 = 0.5 * h, h6 = h / 6.0
    cdef double gx = 0, gy = 0, gz = 0
    cdef double tx = 1, ty = 0, tz = 0
    cdef double nx = 0, ny = 1, nz = 0
    cdef double bx = 0, by = 0, bz = 1
    cdef double ka, kb, kc, ta, tb, tc
    cdef double d1tx, d1ty, d1tz, d1nx, d1ny, d1nz, d1bx, d1by, d1bz, d1gx, d1gy, d1gz
    cdef double d2tx, d2ty, d2tz, d2nx, d2ny, d2nz, d2bx, d2by, d2bz, d2gx, d2gy, d2gz
    cdef double d3tx, d3ty, d3tz, d3nx, d3ny, d3nz, d3bx, d3by, d3bz, d3gx, d3gy, d3gz
    cdef double d4tx, d4ty, d4tz, d4nx, d4ny, d4nz, d4bx, d4by, d4bz, d4gx, d4gy, d4gz
    cdef double s2tx, s2ty, s2tz, s2nx, s2ny, s2nz, s2bx, s2by, s2bz
    cdef double s3tx, s3ty, s3tz, s3nx, s3ny, s3nz, s3bx, s3by, s3bz
    cdef double s4tx, s4ty, s4tz, s4nx, s4ny, s4nz, s4bx, s4by, s4bz

    nodes[0, 0] = gx; nodes[0, 1] = gy; nodes[0, 2] = gz
    tang[0, 0] = tx; tang[0, 1] = ty; tang[0, 2] = tz
    norm[0, 0] = nx; norm[0, 1] = ny; norm[0, 2] = nz
    binorm[0, 0] = bx; binorm[0, 1] = by; binorm[0, 2] = bz

    for i in range(n_steps):
        ka = kk[2 * i]; kb = kk[2 * i + 1]; kc = kk[2 * i + 2]
        ta = tt[2 * i]; tb = tt[2 * i + 1]; tc = tt[2 * i + 2]

        d1tx = ka * nx; d1ty = ka * ny; d1tz = ka * nz
        d1nx = -ka * tx + ta * bx; d1ny = -ka * ty + ta * by; d1nz = -ka * tz + ta * bz
        d1bx = -ta * nx; d1by = -ta * ny; d1bz = -ta * nz
        d1gx = tx; d1gy = ty; d1gz = tz

        s2tx = tx + h2 * d1tx; s2ty = ty + h2 * d1ty; s2tz = tz + h2 * d1tz
        s2nx = nx + h2 * d1nx; s2ny = ny + h2 * d1ny; s2nz = nz + h2 * d1nz
        s2bx = bx + h2 * d1bx; s2by = by + h2 * d1by; s2bz = bz + h2 * d1bz
        d2tx = kb * s2nx; d2ty = kb * s2ny; d2tz = kb * s2nz
        d2nx = -kb * s2tx + tb * s2bx; d2ny = -kb * s2ty + tb * s2by; d2nz = -kb * s2tz + tb * s2bz
        d2bx = -tb * s2nx; d2by = -tb * s2ny; d2bz = -tb * s2nz
        d2gx = s2tx; d2gy = s2ty; d2gz = s2tz

        s3tx = tx + h2 * d2tx; s3ty = ty + h2 * d2ty; s3tz = tz + h2 * d2tz
        s3nx = nx + h2 * d2nx; s3ny = ny + h2 * d2ny; s3nz = nz + h2 * d2nz
        s3bx = bx + h2 * d2bx; s3by = by + h2 * d2by; s3bz = bz + h2 * d2bz
        d3tx = kb * s3nx; d3ty = kb * s3ny; d3tz = kb * s3nz
        d3nx = -kb * s3tx + tb * s3bx; d3ny = -kb * s3ty + tb * s3by; d3nz = -kb * s3tz + tb * s3bz
        d3bx = -tb * s3nx; d3by = -tb * s3ny; d3bz = -tb * s3nz
        d3gx = s3tx; d3gy = s3ty; d3gz = s3tz

        s4tx = tx + h * d3tx; s4ty = ty + h * d3ty; s4tz = tz + h * d3tz
        s4nx = nx + h * d3nx; s4ny = ny + h * d3ny; s4nz = nz + h * d3nz
        s4bx = bx + h * d3bx; s4by = by + h * d3by; s4bz = bz + h * d3bz
        d4tx = kc * s4nx; d4ty = kc * s4ny; d4tz = kc * s4nz
        d4nx = -kc * s4tx + tc * s4bx; d4ny = -kc * s4ty + tc * s4by; d4nz = -kc * s4tz + tc * s4bz
        d4bx = -tc * s4nx; d4by = -tc * s4ny; d4bz = -tc * s4nz
        d4gx = s4tx; d4gy = s4ty; d4gz = s4tz

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

        nodes[i + 1, 0] = gx; nodes[i + 1, 1] = gy; nodes[i + 1, 2] = gz
        tang[i + 1, 0] = tx; tang[i + 1, 1] = ty; tang[i + 1, 2] = tz
        norm[i + 1, 0] = nx; norm[i + 1, 1] = ny; norm[i + 1, 2] = nz
        binorm[i + 1, 0] = bx; binorm[i + 1, 1] = by; binorm[i + 1, 2] = bz

    return nodes, tang, norm, binorm
