"""Closed-form elastica families parametrized over the moduli region.

A non-straight elastica in R^3 is determined (up to isometry) by moduli
(m, w, A) with 0 <= m <= w <= 1, w > 0, A > 0, a phase beta, and a sign for
the torsion constant.  Its squared curvature is

    k(s)^2 = A^2 (1 - (m/w) sn^2(A s / (2 sqrt(w)) + beta, m)),

with multiplier lam = A^2 (3w - m - 1) / (2w), torsion constant c obeying
4 c^2 = A^6 (1 - w)(w - m) / w^2 and k^2 t = c, and a constant-norm Killing
field of magnitude a with a^2 = (k^2 - lam)^2 + 4 (dk/ds)^2 + 4 k^2 t^2.

Planar families by (m, w): wavelike (w = m), orbitlike (w = 1), borderline
(m = w = 1), circular arcs (m = 0, w = 1); anything with c != 0 is spatial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _kernels, elliptic
from .curve import DiscreteCurve

_REGION_TOL = 1e-12
_CONSISTENCY_RTOL = 1e-9


class FamilyKind(Enum):
    WAVELIKE = "wavelike"
    ORBITLIKE = "orbitlike"
    BORDERLINE = "borderline"
    CIRCULAR = "circular"
    SPATIAL = "spatial"


def _check_region(m: float, w: float, amplitude: float) -> None:
    if not (
        -_REGION_TOL <= m <= w + _REGION_TOL
        and w <= 1.0 + _REGION_TOL
        and w > 0.0
        and amplitude > 0.0
    ):
        raise ValueError(
            f"moduli outside the admissible region 0 <= m <= w <= 1, w > 0, A > 0: "
            f"m={m}, w={w}, A={amplitude}"
        )


def lambda_from_moduli(m: float, w: float, amplitude: float) -> float:
    """Multiplier of the elastica with moduli (m, w, A)."""
    _check_region(m, w, amplitude)
    return amplitude**2 / (2.0 * w) * (3.0 * w - m - 1.0)


def torsion_constant_from_moduli(m: float, w: float, amplitude: float, sign: int = 1) -> float:
    """Torsion constant c with 4 c^2 = A^6 (1-w)(w-m) / w^2; sign picks the branch."""
    _check_region(m, w, amplitude)
    if sign not in (-1, 1):
        raise ValueError("sign must be +1 or -1")
    return sign * amplitude**3 / (2.0 * w) * math.sqrt(max((1.0 - w) * (w - m), 0.0))


def _killing_from_moduli(amplitude: float, lam: float, c: float) -> float:
    # evaluated where k^2 = A^2 (there dk/ds = 0): a^2 = (A^2-lam)^2 + 4c^2/A^2
    return math.sqrt((amplitude**2 - lam) ** 2 + 4.0 * c * c / amplitude**2)


@dataclass(frozen=True)
class ElasticaParams:
    """Moduli-space point (m, w, A, c, beta, lam, a) of a closed-form elastica.

    Build with from_moduli, which derives the dependent fields and
    normalizes beta into [-2K(m), 0] (beta is a phase in the sn argument,
    of period 2K(m); for m = 1 there is no period and beta is kept as-is).
    """

    m: float
    w: float
    amplitude: float
    c: float
    beta: float
    lam: float
    a: float

    def __post_init__(self):
        _check_region(self.m, self.w, self.amplitude)
        scale2 = max(1.0, self.amplitude**2)
        if abs(self.lam - lambda_from_moduli(self.m, self.w, self.amplitude)) > _CONSISTENCY_RTOL * scale2:
            raise ValueError("multiplier inconsistent with the moduli")
        c2 = self.amplitude**6 / self.w**2 * (1.0 - self.w) * (self.w - self.m)
        if abs(4.0 * self.c**2 - c2) > _CONSISTENCY_RTOL * max(1.0, self.amplitude**6):
            raise ValueError("torsion constant inconsistent with the moduli")
        if abs(self.a - _killing_from_moduli(self.amplitude, self.lam, self.c)) > _CONSISTENCY_RTOL * scale2:
            raise ValueError("Killing magnitude inconsistent with the moduli")

    @classmethod
    def from_moduli(
        cls,
        m: float,
        w: float,
        amplitude: float,
        beta: float = 0.0,
        torsion_sign: int = 1,
    ) -> "ElasticaParams":
        _check_region(m, w, amplitude)
        m = min(max(float(m), 0.0), 1.0)
        w = min(float(w), 1.0)
        lam = lambda_from_moduli(m, w, amplitude)
        c = torsion_constant_from_moduli(m, w, amplitude, torsion_sign)
        if m < 1.0:
            period = 2.0 * elliptic.complete_K(m)
            beta = float(beta) % period
            if beta > 0.0:
                beta -= period
        return cls(m, w, float(amplitude), c, float(beta), lam, _killing_from_moduli(amplitude, lam, c))

    @property
    def alpha(self) -> float:
        """Argument rate of the sn phase: A / (2 sqrt(w))."""
        return self.amplitude / (2.0 * math.sqrt(self.w))

    @property
    def family(self) -> FamilyKind:
        if self.c != 0.0:
            return FamilyKind.SPATIAL
        if self.m == 0.0:
            return FamilyKind.CIRCULAR
        if self.m == self.w and self.w < 1.0:
            return FamilyKind.WAVELIKE
        if self.w == 1.0 and self.m < 1.0:
            return FamilyKind.ORBITLIKE
        return FamilyKind.BORDERLINE

    @property
    def planar(self) -> bool:
        return self.c == 0.0


def curvature_squared(params: ElasticaParams, s):
    """k(s)^2 = A^2 (1 - (m/w) sn^2(alpha s + beta, m)); s scalar or array."""
    s_arr = np.asarray(s, dtype=float)
    if params.m == 0.0:
        out = np.full_like(s_arr, params.amplitude**2)
    else:
        sn, _, _ = elliptic.jacobi_sn_cn_dn(params.alpha * s_arr + params.beta, params.m)
        out = params.amplitude**2 * np.clip(1.0 - params.m / params.w * np.asarray(sn) ** 2, 0.0, None)
    return float(out) if np.ndim(s) == 0 else out


def curvature_squared_derivative(params: ElasticaParams, s):
    """d(k^2)/ds = -2 A^2 (m/w) alpha sn cn dn evaluated at alpha s + beta."""
    s_arr = np.asarray(s, dtype=float)
    if params.m == 0.0:
        out = np.zeros_like(s_arr)
    else:
        sn, cn, dn = elliptic.jacobi_sn_cn_dn(params.alpha * s_arr + params.beta, params.m)
        out = -2.0 * params.amplitude**2 * params.m / params.w * params.alpha * np.asarray(sn) * np.asarray(cn) * np.asarray(dn)
    return float(out) if np.ndim(s) == 0 else out


def signed_curvature_planar(params: ElasticaParams, s):
    """Signed curvature of a planar family member.

    Wavelike: A cn(alpha s + beta, m); orbitlike/circular: A dn(A s/2 + beta, m)
    (dn = sech covers the borderline case m = 1).  Raises for spatial curves.
    """
    if not params.planar:
        raise ValueError("signed curvature is defined for planar curves only (c = 0)")
    s_arr = np.asarray(s, dtype=float)
    u = params.alpha * s_arr + params.beta
    if params.w == 1.0:
        _, _, dn = elliptic.jacobi_sn_cn_dn(u, params.m)
        out = params.amplitude * np.asarray(dn)
    else:
        _, cn, _ = elliptic.jacobi_sn_cn_dn(u, params.m)
        out = params.amplitude * np.asarray(cn)
    return float(out) if np.ndim(s) == 0 else out


def torsion(params: ElasticaParams, s):
    """t(s) = c / k(s)^2; identically zero for planar curves."""
    s_arr = np.asarray(s, dtype=float)
    if params.c == 0.0:
        out = np.zeros_like(s_arr)
        return float(out) if np.ndim(s) == 0 else out
    k2 = curvature_squared(params, s_arr)
    if np.min(k2) < 1e-14 * params.amplitude**2:
        raise ValueError("torsion singular: curvature vanishes while c != 0")
    out = params.c / k2
    return float(out) if np.ndim(s) == 0 else out


def killing_magnitude(params: ElasticaParams) -> float:
    """Norm a of the constant Killing field (k^2-lam) T + 2 k_s N + 2 k t B.

    Raises for the degenerate circular arc with k^2 = lam, where the field
    vanishes and the cylindrical radius formula breaks down.
    """
    if params.a**2 <= 1e-12 * max(params.amplitude**4, 1.0):
        raise ValueError("Killing field vanishes: circular arc with k^2 = lambda")
    return params.a


def killing_a_squared_profile(params: ElasticaParams, s) -> np.ndarray:
    """a(s)^2 = (k^2 - lam)^2 + 4 k'^2 + 4 k^2 t^2, evaluated pointwise.

    Constant in s in exact arithmetic; exposed so tests can verify the
    constancy numerically.  Uses cancellation-safe forms of 4 k'^2 near
    curvature zeros of the wavelike/borderline families.
    """
    s_arr = np.atleast_1d(np.asarray(s, dtype=float))
    k2 = np.atleast_1d(curvature_squared(params, s_arr))
    base = (k2 - params.lam) ** 2
    if params.m == params.w and params.m > 0.0:
        # k = +-A cn (or A sech at m = 1): 4 k'^2 = 4 A^2 alpha^2 sn^2 dn^2
        sn, _, dn = elliptic.jacobi_sn_cn_dn(params.alpha * s_arr + params.beta, params.m)
        extra = 4.0 * params.amplitude**2 * params.alpha**2 * np.asarray(sn) ** 2 * np.asarray(dn) ** 2
    elif params.m == 0.0:
        extra = 4.0 * params.c**2 / k2
    else:
        # k^2 >= A^2 (1 - m/w) > 0: divide safely
        dk2 = np.atleast_1d(curvature_squared_derivative(params, s_arr))
        extra = (dk2**2 + 4.0 * params.c**2) / k2
    return base + extra


def cylindrical_radius(params: ElasticaParams, s):
    """Distance r(s) = (2/a^2) sqrt(a^2 k(s)^2 - 4 c^2) from the Killing axis."""
    a = killing_magnitude(params)
    k2 = curvature_squared(params, s)
    val = np.clip(a**2 * k2 - 4.0 * params.c**2, 0.0, None)
    out = 2.0 / a**2 * np.sqrt(val)
    return float(out) if np.ndim(s) == 0 else out


def killing_vector_at_start(params: ElasticaParams) -> np.ndarray:
    """Killing vector J at s = 0 in the reconstruction frame.

    Planar curves use the frame T = (1, 0), N = (0, 1) of reconstruct_planar
    (2 components); spatial curves the canonical Frenet start frame of
    reconstruct_spatial (3 components).
    """
    k2_0 = curvature_squared(params, 0.0)
    dk2_0 = curvature_squared_derivative(params, 0.0)
    if params.planar:
        k0 = signed_curvature_planar(params, 0.0)
        dk0 = 0.0 if k0 == 0.0 else dk2_0 / (2.0 * k0)
        if params.m == params.w and params.m > 0.0:
            sn, _, dn = elliptic.jacobi_sn_cn_dn(params.beta, params.m)
            dk0 = -params.amplitude * params.alpha * sn * dn
        return np.array([k2_0 - params.lam, 2.0 * dk0])
    k0 = math.sqrt(k2_0)
    dk0 = dk2_0 / (2.0 * k0)
    t0 = params.c / k2_0
    return np.array([k2_0 - params.lam, 2.0 * dk0, 2.0 * k0 * t0])


def reconstruct_planar(params: ElasticaParams, length: float, num_segments: int) -> DiscreteCurve:
    """Integrate theta' = k, gamma' = (cos theta, sin theta) by fixed-step RK4.

    Starts from gamma(0) = 0, theta(0) = 0; the result is constant-speed up
    to discretization error and its discrete bending energy converges at
    O(N^-2) to the closed-form integral of k^2.
    """
    if not params.planar:
        raise ValueError("planar reconstruction needs c = 0; use reconstruct_spatial")
    if length <= 0.0:
        raise ValueError("length must be positive")
    if num_segments < 16:
        raise ValueError("num_segments must be >= 16")
    s_half = np.linspace(0.0, length, 2 * num_segments + 1)
    k_half = signed_curvature_planar(params, s_half)
    _, nodes = _kernels.planar_rk4(k_half, length / num_segments)
    return DiscreteCurve(nodes)


def reconstruct_spatial(params: ElasticaParams, length: float, num_segments: int) -> DiscreteCurve:
    """Integrate the Frenet system T' = kN, N' = -kT + tB, B' = -tN by RK4.

    Spatial families have k^2 >= A^2 (1 - m/w) > 0, so the frame is global.
    Planar input (c = 0) delegates to reconstruct_planar, embedded at z = 0.
    """
    if params.planar:
        flat = reconstruct_planar(params, length, num_segments)
        nodes = np.hstack([flat.nodes, np.zeros((flat.nodes.shape[0], 1))])
        return DiscreteCurve(nodes)
    if length <= 0.0:
        raise ValueError("length must be positive")
    if num_segments < 16:
        raise ValueError("num_segments must be >= 16")
    s_half = np.linspace(0.0, length, 2 * num_segments + 1)
    k2 = curvature_squared(params, s_half)
    if np.min(k2) <= 1e-14 * params.amplitude**2:
        raise ValueError("torsion singular: curvature vanishes on the window while c != 0")
    k_half = np.sqrt(k2)
    t_half = params.c / k2
    nodes, _, _, _ = _kernels.frenet_rk4(k_half, t_half, length / num_segments)
    return DiscreteCurve(nodes)


def radius_law_residual(params: ElasticaParams, curve: DiscreteCurve, length: float) -> float:
    """Sup gap between node distances to the best-fit Killing axis and r(s).

    The axis direction comes from the Killing vector at s = 0; the axis
    base point solves the linearized distance equations in least squares
    (the paper-level theory fixes the direction but not the placement).
    """
    killing_magnitude(params)  # reject the degenerate a = 0 case
    direction = killing_vector_at_start(params)
    direction = direction / np.linalg.norm(direction)
    n = curve.num_segments
    s_nodes = np.linspace(0.0, length, n + 1)
    r_pred = np.atleast_1d(cylindrical_radius(params, s_nodes))
    nodes = curve.nodes
    if curve.dim != direction.shape[0]:
        raise ValueError("curve dimension does not match the family's frame")

    # orthonormal basis of the plane orthogonal to the axis direction
    basis = []
    for e in np.eye(curve.dim):
        v = e - np.dot(e, direction) * direction
        for b in basis:
            v = v - np.dot(v, b) * b
        norm = np.linalg.norm(v)
        if norm > 1e-8:
            basis.append(v / norm)
    basis = np.array(basis[: curve.dim - 1])
    proj = nodes @ basis.T  # (N+1, dim-1) coordinates orthogonal to the axis

    # |p - q|^2 = r^2 linearized: 2 p.q - |q|^2 = |p|^2 - r^2, unknowns (q, |q|^2)
    cols = [2.0 * proj[:, j] for j in range(proj.shape[1])] + [-np.ones(len(proj))]
    mat = np.column_stack(cols)
    rhs = np.einsum("ij,ij->i", proj, proj) - r_pred**2
    sol, *_ = np.linalg.lstsq(mat, rhs, rcond=None)
    q = sol[: proj.shape[1]]
    dist = np.linalg.norm(proj - q, axis=1)
    return float(np.abs(dist - r_pred).max())
