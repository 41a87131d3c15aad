"""Discrete curves: resampling, energies, Euler-Lagrange diagnostics.

A DiscreteCurve is a value object: N+1 nodes in R^2 or R^3 over the uniform
parameter grid x_i = i/N on [0, 1].  Speed and length are chordal
(speed_i = |node_{i+1} - node_i| * N, length = sum of chords), so a curve is
constant-speed exactly when its chords are equal; the resampler enforces
that to near machine precision.  All differential quantities use 2nd-order
finite differences on the constant-speed grid (centered in the interior,
one-sided at the ends).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.interpolate import CubicSpline

#: relative chord spread below which a curve counts as constant-speed
CONSTANT_SPEED_RTOL = 1e-6


class NonConstantSpeedError(ValueError):
    """Operation needs a constant-speed curve; resample_constant_speed first."""


class DegenerateCurveError(ValueError):
    """Curve is not immersed (coincident nodes / vanishing length)."""


class GraftError(RuntimeError):
    """Boundary graft collapsed the speed; retry with larger delta."""


class DiscreteCurve:
    """Sampled immersed curve in R^n, n in {2, 3}, over a uniform grid."""

    __slots__ = ("nodes",)

    def __init__(self, nodes):
        nodes = np.array(nodes, dtype=float)
        if nodes.ndim != 2 or nodes.shape[1] not in (2, 3):
            raise ValueError(f"nodes must have shape (N+1, 2 or 3), got {nodes.shape}")
        if nodes.shape[0] < 17:
            raise ValueError(f"need at least 17 nodes (N >= 16), got {nodes.shape[0]}")
        if not np.all(np.isfinite(nodes)):
            raise ValueError("nodes contain non-finite values")
        chords = np.linalg.norm(np.diff(nodes, axis=0), axis=1)
        if np.any(chords == 0.0):
            raise DegenerateCurveError("consecutive nodes coincide")
        nodes.setflags(write=False)
        self.nodes = nodes

    @property
    def num_segments(self) -> int:
        return self.nodes.shape[0] - 1

    @property
    def dim(self) -> int:
        return self.nodes.shape[1]

    @property
    def parameter(self) -> np.ndarray:
        n = self.num_segments
        return np.arange(n + 1) / n

    @property
    def chords(self) -> np.ndarray:
        return np.linalg.norm(np.diff(self.nodes, axis=0), axis=1)

    @property
    def speeds(self) -> np.ndarray:
        """Chordal speed |d gamma / dx| per edge."""
        return self.chords * self.num_segments

    @property
    def length(self) -> float:
        return float(self.chords.sum())

    def is_constant_speed(self, rtol: float = CONSTANT_SPEED_RTOL) -> bool:
        ch = self.chords
        mean = ch.mean()
        return bool(np.abs(ch - mean).max() <= rtol * mean)

    def __repr__(self):
        return f"DiscreteCurve(N={self.num_segments}, dim={self.dim}, length={self.length:.6g})"


def _require_constant_speed(curve: DiscreteCurve):
    if not curve.is_constant_speed():
        raise NonConstantSpeedError(
            "curve is not constant-speed; call resample_constant_speed first"
        )


def resample_constant_speed(curve: DiscreteCurve, num_segments: int | None = None) -> DiscreteCurve:
    """Re-place nodes on the interpolating cubic spline so chords are equal.

    Preserves the image (to spline interpolation error), the endpoints
    exactly, and the chordal length to high order.  `num_segments` changes
    the resolution; default keeps the input's.
    """
    nodes = curve.nodes
    t = np.concatenate(([0.0], np.cumsum(curve.chords)))
    spline = CubicSpline(t, nodes, axis=0)
    n = num_segments if num_segments is not None else curve.num_segments
    if n < 16:
        raise ValueError("num_segments must be >= 16")

    s = np.linspace(0.0, t[-1], n + 1)
    pts = spline(s)
    for _ in range(50):
        ch = np.linalg.norm(np.diff(pts, axis=0), axis=1)
        mean = ch.mean()
        if np.abs(ch - mean).max() <= 1e-13 * mean:
            break
        cum = np.concatenate(([0.0], np.cumsum(ch)))
        s = np.interp(np.linspace(0.0, cum[-1], n + 1), cum, s)
        s[0], s[-1] = 0.0, t[-1]
        pts = spline(s)
    return DiscreteCurve(pts)


# ---------------------------------------------------------------------------
# finite-difference stencils (2nd-order interior and one-sided ends)

_END3_0 = np.array([-2.5, 9.0, -12.0, 7.0, -1.5])
_END3_1 = np.array([-1.5, 5.0, -6.0, 3.0, -0.5])


def _fd_derivative(values: np.ndarray, h: float, order: int) -> np.ndarray:
    """Finite-difference derivative along axis 0 of a nodal field."""
    f = values
    if order == 0:
        return f
    if order > 3:
        out = _fd_derivative(f, h, 3)
        for _ in range(order - 3):
            out = np.gradient(out, h, axis=0, edge_order=2)
        return out
    out = np.empty_like(f)
    if order == 1:
        out[1:-1] = (f[2:] - f[:-2]) / (2 * h)
        out[0] = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * h)
        out[-1] = (3 * f[-1] - 4 * f[-2] + f[-3]) / (2 * h)
    elif order == 2:
        out[1:-1] = (f[2:] - 2 * f[1:-1] + f[:-2]) / h**2
        out[0] = (2 * f[0] - 5 * f[1] + 4 * f[2] - f[3]) / h**2
        out[-1] = (2 * f[-1] - 5 * f[-2] + 4 * f[-3] - f[-4]) / h**2
    else:
        out[2:-2] = (-f[:-4] + 2 * f[1:-3] - 2 * f[3:-1] + f[4:]) / (2 * h**3)
        out[0] = np.tensordot(_END3_0, f[:5], axes=(0, 0)) / h**3
        out[1] = np.tensordot(_END3_1, f[:5], axes=(0, 0)) / h**3
        out[-1] = -np.tensordot(_END3_0, f[-5:][::-1], axes=(0, 0)) / h**3
        out[-2] = -np.tensordot(_END3_1, f[-5:][::-1], axes=(0, 0)) / h**3
    return out


_GAUSS5_X, _GAUSS5_W = np.polynomial.legendre.leggauss(5)


def spline_arclength(curve: DiscreteCurve) -> float:
    """Arclength of the interpolating cubic spline (5-point Gauss per segment).

    Free of the O(h^2) chord-vs-arc bias of `length`; use for tight length
    checks.  Agrees with the smooth arclength to the spline interpolation
    error, O(h^4).
    """
    x = curve.parameter
    spline = CubicSpline(x, curve.nodes, axis=0).derivative()
    h = 1.0 / curve.num_segments
    mids = (x[:-1] + x[1:]) / 2.0
    pts = (mids[:, None] + (h / 2.0) * _GAUSS5_X[None, :]).ravel()
    speeds = np.linalg.norm(spline(pts), axis=-1).reshape(-1, 5)
    return float((h / 2.0) * (speeds @ _GAUSS5_W).sum())


def curvature_vectors(curve: DiscreteCurve) -> np.ndarray:
    """Curvature vector kappa = gamma_ss at every node (constant-speed grid)."""
    _require_constant_speed(curve)
    h = 1.0 / curve.num_segments
    length = curve.length
    return _fd_derivative(curve.nodes, h, 2) / length**2


def bending_energy(curve: DiscreteCurve) -> float:
    """Discrete integral of |kappa|^2 ds by the trapezoid rule."""
    kappa = curvature_vectors(curve)
    k2 = np.einsum("ij,ij->i", kappa, kappa)
    h = 1.0 / curve.num_segments
    return float(curve.length * h * (k2.sum() - 0.5 * (k2[0] + k2[-1])))


def energy_identity_check(curve: DiscreteCurve) -> float:
    """Relative gap between two discretizations of the bending energy.

    Left side: the finite-difference bending_energy.  Right side:
    L^{-3} * integral of |d^2 gamma / dx^2|^2 dx, computed exactly on the
    interpolating cubic spline (whose second derivative is piecewise
    linear).  For a constant-speed curve both equal B.
    """
    _require_constant_speed(curve)
    lhs = bending_energy(curve)
    spline = CubicSpline(curve.parameter, curve.nodes, axis=0)
    second = spline(curve.parameter, 2)
    a, b = second[:-1], second[1:]
    h = 1.0 / curve.num_segments
    integral = h / 3.0 * float(
        np.einsum("ij,ij->", a, a) + np.einsum("ij,ij->", a, b) + np.einsum("ij,ij->", b, b)
    )
    rhs = integral / curve.length**3
    if max(lhs, rhs) < 1e-14:
        return 0.0
    return abs(lhs - rhs) / max(lhs, rhs)


def _el_stride(n: int) -> int:
    """Stencil stride for the 4th-derivative EL pipeline.

    The residual needs four derivatives of the positions; with step H its
    truncation error is O(H^2) while double-precision roundoff grows like
    eps / H^4.  Capping the effective resolution near 1/1024 balances the
    two for unit-scale curves.
    """
    return max(1, n // 1024)


def _el_operator(curve: DiscreteCurve, stride: int):
    """Field 2 grad_s^2 kappa + |kappa|^2 kappa and kappa on the strided grid.

    Uses grad_s^2 kappa = P(kappa_ss) + |kappa|^2 kappa (P = projection off
    the tangent), which holds because <kappa_s, T> = -|kappa|^2; the direct
    second difference of kappa has a ~4x smaller truncation constant than
    nesting two first differences.
    """
    nodes = curve.nodes[::stride]
    h = stride / curve.num_segments
    length = curve.length
    tang = _fd_derivative(nodes, h, 1) / length
    tang = tang / np.linalg.norm(tang, axis=1, keepdims=True)
    kappa = _fd_derivative(nodes, h, 2) / length**2
    kappa_ss = _fd_derivative(kappa, h, 2) / length**2
    proj = kappa_ss - np.einsum("ij,ij->i", kappa_ss, tang)[:, None] * tang
    k2 = np.einsum("ij,ij->i", kappa, kappa)
    return 2.0 * proj + 3.0 * k2[:, None] * kappa, kappa, h


def el_residual(curve: DiscreteCurve, lam: float, stride: int | None = None):
    """Discrete Euler-Lagrange residual 2 grad_s^2 kappa + |kappa|^2 kappa - lam kappa.

    Returns (field, norm): the residual field on the evaluation grid
    (zeroed on the excluded boundary layers of width 4h, where the wide
    stencils are unreliable) and its L^2(ds) norm over the interior.
    Needs N >= 64.  The default stride (see _el_stride) keeps the
    4th-derivative pipeline away from its roundoff floor at large N.
    """
    _require_constant_speed(curve)
    n = curve.num_segments
    if n < 64:
        raise ValueError(f"el_residual needs N >= 64, got N = {n}")
    stride = stride or _el_stride(n)
    field, kappa, h = _el_operator(curve, stride)
    resid = field - lam * kappa
    resid[:4] = 0.0
    resid[-4:] = 0.0
    norm = float(np.sqrt(curve.length * h * np.einsum("ij,ij->", resid, resid)))
    return resid, norm


def estimate_multiplier(curve: DiscreteCurve, stride: int | None = None):
    """Least-squares multiplier lam minimizing the EL residual, plus that residual.

    lam = <2 grad_s^2 kappa + |kappa|^2 kappa, kappa> / ||kappa||^2 in the
    discrete interior inner product.  Raises DegenerateCurveError for
    (near-)segments, where the multiplier is not identifiable.
    """
    _require_constant_speed(curve)
    n = curve.num_segments
    if n < 64:
        raise ValueError(f"estimate_multiplier needs N >= 64, got N = {n}")
    stride = stride or _el_stride(n)
    field, kappa, h = _el_operator(curve, stride)
    sl = slice(4, field.shape[0] - 4)
    k2_mass = float(np.einsum("ij,ij->", kappa[sl], kappa[sl])) * curve.length * h
    if k2_mass < 1e-10:
        raise DegenerateCurveError("curvature mass too small: segment has no unique multiplier")
    lam = float(np.einsum("ij,ij->", field[sl], kappa[sl]) / np.einsum("ij,ij->", kappa[sl], kappa[sl]))
    resid = field[sl] - lam * kappa[sl]
    norm = float(np.sqrt(curve.length * h * np.einsum("ij,ij->", resid, resid)))
    return lam, norm


def cm_distance(curve_a: DiscreteCurve, curve_b: DiscreteCurve, order: int) -> float:
    """Discrete C^m distance: max over nodes and derivative orders 0..order.

    Derivatives are finite differences in the uniform parameter; both
    curves must share node count and dimension (resample first).  For
    order >= 3 this is a documented proxy for the true C^m norm.
    """
    if curve_a.nodes.shape != curve_b.nodes.shape:
        raise ValueError("curves must have equal node count and dimension; resample first")
    diff = curve_a.nodes - curve_b.nodes
    h = 1.0 / curve_a.num_segments
    worst = 0.0
    for q in range(order + 1):
        d = _fd_derivative(diff, h, q)
        worst = max(worst, float(np.linalg.norm(d, axis=1).max()))
    return worst


def end_tangents(curve: DiscreteCurve):
    """Unit tangents at x = 0 and x = 1 (one-sided 2nd-order differences)."""
    h = 1.0 / curve.num_segments
    d = _fd_derivative(curve.nodes, h, 1)
    t0 = d[0] / np.linalg.norm(d[0])
    t1 = d[-1] / np.linalg.norm(d[-1])
    return t0, t1


def tangent_turn_bound_check(curve: DiscreteCurve):
    """Returns (sqrt(L B), |tangent(1) - tangent(0)|); the first dominates."""
    _require_constant_speed(curve)
    lhs = float(np.sqrt(curve.length * bending_energy(curve)))
    t0, t1 = end_tangents(curve)
    return lhs, float(np.linalg.norm(t1 - t0))


# ---------------------------------------------------------------------------
# clamped boundary data

@dataclass(frozen=True)
class BoundaryData:
    """Clamped data: endpoint positions P0, P1 and unit tangents V0, V1."""

    P0: np.ndarray
    P1: np.ndarray
    V0: np.ndarray
    V1: np.ndarray

    def __post_init__(self):
        for name in ("P0", "P1", "V0", "V1"):
            v = np.array(getattr(self, name), dtype=float)
            v.setflags(write=False)
            object.__setattr__(self, name, v)
        dims = {v.shape for v in (self.P0, self.P1, self.V0, self.V1)}
        if len(dims) != 1 or self.P0.shape not in ((2,), (3,)):
            raise ValueError("boundary data must be four vectors of equal dimension 2 or 3")
        for name in ("V0", "V1"):
            v = getattr(self, name)
            norm = np.linalg.norm(v)
            if abs(norm - 1.0) > 1e-8:
                raise ValueError(f"{name} must be a unit vector, |{name}| = {norm}")
            w = v / norm
            w.setflags(write=False)
            object.__setattr__(self, name, w)

    @property
    def dim(self) -> int:
        return self.P0.shape[0]

    @property
    def chord(self) -> float:
        return float(np.linalg.norm(self.P1 - self.P0))


class FixedLengthClass(Enum):
    APRIME = "interior"      # |P1 - P0| < L: curved admissible curves exist
    AS = "segment"           # |P1 - P0| = L with aligned tangents: only the segment
    INFEASIBLE = "infeasible"


class PenalizedClass(Enum):
    XPRIME = "generic"
    XS = "segment"           # P0 != P1 with tangents aligned to the chord


@dataclass(frozen=True)
class BoundaryClass:
    fixed_length_class: FixedLengthClass | None
    penalized_class: PenalizedClass
    closed_flag: bool


#: relative tolerance for the segment-class membership tests
CLASS_RTOL = 1e-9


def classify_boundary(data: BoundaryData, length: float | None = None) -> BoundaryClass:
    """Classify clamped data for the fixed-length and penalized problems.

    Membership tolerances are CLASS_RTOL-relative; chord lengths within
    that band of L are treated as the segment case.
    """
    chord = data.chord
    scale = max(1.0, chord, length or 0.0)
    has_chord = chord > CLASS_RTOL * scale
    if has_chord:
        u = (data.P1 - data.P0) / chord
        aligned = (
            np.linalg.norm(data.V0 - u) <= 1e2 * CLASS_RTOL
            and np.linalg.norm(data.V1 - u) <= 1e2 * CLASS_RTOL
        )
    else:
        aligned = False
    closed = (not has_chord) and np.linalg.norm(data.V0 - data.V1) <= 1e2 * CLASS_RTOL

    penal = PenalizedClass.XS if (has_chord and aligned) else PenalizedClass.XPRIME

    fixed: FixedLengthClass | None = None
    if length is not None:
        if length <= 0:
            raise ValueError("length must be positive")
        if chord < length * (1.0 - CLASS_RTOL):
            fixed = FixedLengthClass.APRIME
        elif chord <= length * (1.0 + CLASS_RTOL) and aligned:
            fixed = FixedLengthClass.AS
        else:
            fixed = FixedLengthClass.INFEASIBLE
    return BoundaryClass(fixed, penal, closed)


def boundary_data_of(curve: DiscreteCurve) -> BoundaryData:
    """Read clamped data (endpoints and unit end tangents) off a curve."""
    t0, t1 = end_tangents(curve)
    return BoundaryData(curve.nodes[0], curve.nodes[-1], t0, t1)


# ---------------------------------------------------------------------------
# boundary graft

def _cutoff(t: np.ndarray) -> np.ndarray:
    """Quintic smoothstep cutoff: 1 on (-inf, 0], 0 on [1, inf), C^2 joins."""
    t = np.clip(t, 0.0, 1.0)
    return 1.0 - t**3 * (10.0 - 15.0 * t + 6.0 * t * t)


def boundary_graft(curve: DiscreteCurve, target: BoundaryData, delta: float) -> DiscreteCurve:
    """Blend the curve near its ends so it matches the target clamped data.

    Adds the cutoff-weighted correction zeta(x/delta) (dP + x L dV) at each
    end, leaving [delta, 1-delta] untouched, then resamples to constant
    speed.  The C^2 distance to the input scales like
    |dP|/delta^2 + |dV|/delta; a zero correction returns the input exactly
    (up to resampling roundoff).
    """
    if not 0.0 < delta < 0.25:
        raise ValueError(f"delta must lie in (0, 1/4), got {delta}")
    _require_constant_speed(curve)
    if target.dim != curve.dim:
        raise ValueError("boundary data dimension does not match the curve")
    nodes = curve.nodes
    length = curve.length
    x = curve.parameter
    t0, t1 = end_tangents(curve)

    corr0 = target.P0 - nodes[0] + np.outer(x * length, target.V0 - t0)
    corr1 = target.P1 - nodes[-1] + np.outer((x - 1.0) * length, target.V1 - t1)
    blended = (
        nodes
        + _cutoff(x / delta)[:, None] * corr0
        + _cutoff((1.0 - x) / delta)[:, None] * corr1
    )
    chords = np.linalg.norm(np.diff(blended, axis=0), axis=1)
    nominal = length / curve.num_segments
    if chords.min() < 0.01 * nominal:
        raise GraftError("graft collapsed the parametrization speed; increase delta")
    return resample_constant_speed(DiscreteCurve(blended))


# ---------------------------------------------------------------------------
# CSV exchange format

def curve_to_csv(curve: DiscreteCurve, path) -> None:
    """Write `x,p1,...,pn` rows with 17 significant digits."""
    cols = ["x"] + [f"p{i + 1}" for i in range(curve.dim)]
    x = curve.parameter
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(cols) + "\n")
        for xi, row in zip(x, curve.nodes):
            fh.write(",".join(format(v, ".17g") for v in (xi, *row)) + "\n")


def curve_from_csv(path) -> DiscreteCurve:
    """Read a curve CSV; validates the header, monotone uniform x, dimension."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        dim = len(header) - 1
        if header[0] != "x" or dim not in (2, 3) or header[1:] != [f"p{i + 1}" for i in range(dim)]:
            raise ValueError(f"bad curve CSV header: {header}")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if data.shape[1] != dim + 1:
        raise ValueError("row width does not match header")
    x = data[:, 0]
    if np.any(np.diff(x) <= 0):
        raise ValueError("parameter column x must be strictly increasing")
    n = len(x) - 1
    if np.abs(x - np.arange(n + 1) / n).max() > 1e-9:
        raise ValueError("parameter column x must be the uniform grid on [0, 1]")
    return DiscreteCurve(data[:, 1:])
