"""Clamped bending-energy minimization.

Two problems over curves with clamped endpoint positions P0, P1 and unit
tangents V0, V1:

* fixed length: minimize B = integral of k^2 ds at prescribed length L;
* length-penalized: minimize E_lam = B + lam * L over free length, lam > 0.

The primary representation for n = 2 is the tangent angle theta(x) on the
uniform grid: the curve is recovered by quadrature of (cos theta,
sin theta), so constant speed and the length constraint hold by
construction and only the two endpoint-position integrals remain as
constraints.  These are enforced by an augmented-Lagrangian outer loop
around an L-BFGS inner solve.  For n = 3 a slower node-position
representation with per-edge length constraints is available.

Multiplier recovery, Euler-Lagrange residuals, and admissibility checks
come from the curve module.  Multistart initialization covers single-arc,
S-shaped, bump, and random-Fourier tangent profiles over several winding
numbers; results are merged deterministically by (energy, start index).
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import minimize as _scipy_minimize

from .curve import (
    BoundaryData,
    DegenerateCurveError,
    DiscreteCurve,
    FixedLengthClass,
    PenalizedClass,
    _fd_derivative,
    bending_energy,
    classify_boundary,
    cm_distance,
    el_residual,
    end_tangents,
    estimate_multiplier,
    resample_constant_speed,
    spline_arclength,
)


class InfeasibleBoundaryError(ValueError):
    """No curve of the requested length can satisfy the clamped data."""


@dataclass(frozen=True)
class FixedLength:
    """Constraint tag: minimize B at fixed length."""

    length: float


@dataclass(frozen=True)
class Penalized:
    """Constraint tag: minimize B + lam * L over free length."""

    lam: float


@dataclass
class SolverConfig:
    num_segments: int = 512
    representation: str = "tangent-angle"  # or "points" (n = 3, slower)
    outer_iters: int = 25
    inner_iters: int = 600
    constraint_tol: float = 1e-6
    grad_tol: float = 1e-4
    penalty_growth: float = 10.0
    multistart_count: int = 8
    seed: int = 0
    telemetry_path: str | None = None

    def __post_init__(self):
        if self.num_segments < 64:
            raise ValueError("num_segments must be >= 64")
        if not 0.0 < self.constraint_tol <= 1e-2:
            raise ValueError("constraint_tol must lie in (0, 1e-2]")
        if not 0.0 < self.grad_tol <= 1e-2:
            raise ValueError("grad_tol must lie in (0, 1e-2]")
        if self.penalty_growth <= 1.0:
            raise ValueError("penalty_growth must exceed 1")
        if self.representation not in ("tangent-angle", "points"):
            raise ValueError(f"unknown representation {self.representation!r}")
        if self.multistart_count < 1:
            raise ValueError("multistart_count must be >= 1")


@dataclass
class MinimizeResult:
    """Solver output.

    `length` is the represented (smooth) length; the chordal length of
    `curve` differs from it at O(N^-2).  `constraint_violation` is measured
    in the solver's own discretization: endpoint-position gap of the
    quadrature curve and (points representation) edge-length spread; the
    tangent and length constraints hold by construction in the
    tangent-angle representation.
    """

    curve: DiscreteCurve
    energy: float
    length: float
    lambda_est: float
    el_residual_norm: float
    constraint_violation: float
    converged: bool
    starts_used: int
    notes: str = ""


@dataclass
class _StartResult:
    index: int
    curve: DiscreteCurve | None
    energy: float
    length: float
    violation: float
    feasible: bool
    telemetry: list = field(default_factory=list)


def _thread_count() -> int:
    raw = os.environ.get("ELASTICA_THREADS", "1")
    try:
        value = int(raw)
    except ValueError:
        return 1
    if value == 0:
        return os.cpu_count() or 1
    return max(1, value)


def _angle_of(v: np.ndarray) -> float:
    return math.atan2(v[1], v[0])


def _wrap_pi(angle: float) -> float:
    return (angle + math.pi) % (2.0 * math.pi) - math.pi


def _initial_profiles(theta0, theta_gap, chord, length, count, seed):
    """Heterogeneous initial tangent-angle profiles over winding numbers.

    Yields (theta_end, profile(x) callable values on demand) pairs encoded
    as full grids later; amplitude heuristics come from the excess length.
    """
    windings = (0, 1, -1)
    excess = max(length / max(chord, 1e-12) - 1.0, 0.02) if chord > 1e-12 else 1.0
    amp = min(2.5, math.sqrt(8.0 * excess))
    rng = np.random.default_rng([seed, 1234])
    profiles = []
    for i in range(count):
        w = windings[i % len(windings)]
        kind = (i // len(windings)) % 4
        theta_n = theta0 + theta_gap + 2.0 * math.pi * w
        profiles.append((i, w, kind, theta_n, rng.normal(size=6)))
    return profiles, amp


def _profile_grid(theta0, theta_n, kind, amp, coeffs, x):
    base = theta0 + (theta_n - theta0) * x
    if kind == 0:  # single arc
        return base
    if kind == 1:  # S-shape
        return base + amp * np.sin(2.0 * np.pi * x)
    if kind == 2:  # single bump, alternating sign via coeffs
        return base + math.copysign(amp, coeffs[0]) * np.sin(np.pi * x)
    modes = np.arange(1, len(coeffs) + 1)
    return base + (amp / 2.0) * np.sin(np.pi * np.outer(x, modes)) @ (coeffs / modes)


# ---------------------------------------------------------------------------
# tangent-angle representation (n = 2)

class _TangentAngleProblem:
    """Shared machinery for fixed-length and penalized solves in R^2."""

    def __init__(self, data: BoundaryData, cfg: SolverConfig, lam: float | None, length: float | None):
        self.data = data
        self.cfg = cfg
        self.lam = lam                  # penalized weight, None for fixed length
        self.fixed_length = length     # None for penalized
        self.n = cfg.num_segments
        self.h = 1.0 / self.n
        self.theta0 = _angle_of(data.V0)
        self.theta_gap = _wrap_pi(_angle_of(data.V1) - self.theta0)
        self.chord = data.chord
        if lam is not None:
            if self.chord > 1e-12:
                self.len_lb = self.chord * (1.0 + 1e-12)
            else:
                # truly closed data: admissible curves are loops, whose energy
                # blows up as the length vanishes; keep the length away from
                # the spurious sub-tolerance collapse
                self.len_lb = 0.05 / math.sqrt(lam)

    # -- packing: z = theta[1:-1] (+ [ell] when penalized)

    def _unpack(self, z, theta_n):
        theta = np.empty(self.n + 1)
        theta[0] = self.theta0
        theta[-1] = theta_n
        if self.lam is None:
            theta[1:-1] = z
            ell = self.fixed_length
        else:
            theta[1:-1] = z[:-1]
            ell = z[-1]
        return theta, ell

    def _trapezoid_endpoint(self, theta, ell):
        cos_t, sin_t = np.cos(theta), np.sin(theta)
        wx = cos_t.sum() - 0.5 * (cos_t[0] + cos_t[-1])
        wy = sin_t.sum() - 0.5 * (sin_t[0] + sin_t[-1])
        gx = self.data.P0[0] + ell * self.h * wx - self.data.P1[0]
        gy = self.data.P0[1] + ell * self.h * wy - self.data.P1[1]
        return np.array([gx, gy]), cos_t, sin_t

    def merit_and_grad(self, z, theta_n, mu, rho):
        theta, ell = self._unpack(z, theta_n)
        dth = np.diff(theta)
        bend = float(dth @ dth) / (ell * self.h)
        g, cos_t, sin_t = self._trapezoid_endpoint(theta, ell)
        lag = mu + rho * g
        merit = bend + float(mu @ g) + 0.5 * rho * float(g @ g)

        # d bend / d theta_j, interior j
        grad_theta = 2.0 * (dth[:-1] - dth[1:]) / (ell * self.h)
        # d g / d theta_j = ell h (-sin, cos)
        grad_theta += ell * self.h * (-lag[0] * sin_t[1:-1] + lag[1] * cos_t[1:-1])

        if self.lam is None:
            return merit, grad_theta
        merit += self.lam * ell
        dg_dell = (g - self.data.P0 + self.data.P1) / ell
        grad_ell = -bend / ell + self.lam + float(lag @ dg_dell)
        return merit, np.concatenate([grad_theta, [grad_ell]])

    def violation(self, z, theta_n) -> float:
        theta, ell = self._unpack(z, theta_n)
        g, _, _ = self._trapezoid_endpoint(theta, ell)
        return float(np.linalg.norm(g))

    def nodes(self, z, theta_n) -> tuple[np.ndarray, float]:
        theta, ell = self._unpack(z, theta_n)
        e = np.column_stack([np.cos(theta), np.sin(theta)])
        steps = 0.5 * ell * self.h * (e[:-1] + e[1:])
        nodes = np.vstack([[0.0, 0.0], np.cumsum(steps, axis=0)]) + self.data.P0
        return nodes, ell

    def energy_of(self, z, theta_n) -> float:
        theta, ell = self._unpack(z, theta_n)
        dth = np.diff(theta)
        bend = float(dth @ dth) / (ell * self.h)
        return bend if self.lam is None else bend + self.lam * ell

    def _integrate_el_ivp(self, k0: float, v0: float, lam: float, ell: float):
        """Fixed-substep RK4 on theta' = k, k' = v, v' = (lam k - k^3)/2.

        Re-integrating the Euler-Lagrange ODE from polished initial data
        yields nodes that are smooth to machine precision, which the
        4th-derivative residual measurement requires (interpolating a
        collocation solution leaves knot-scale kinks that it amplifies).
        """
        sub = 4
        n_tot = self.n * sub
        h = ell / n_tot
        theta, k, v = self.theta0, k0, v0
        x, y = float(self.data.P0[0]), float(self.data.P0[1])
        nodes = np.empty((self.n + 1, 2))
        nodes[0] = (x, y)
        theta_end = theta
        blowup = 1e6 * (1.0 + abs(k0) + abs(v0))
        for i in range(n_tot):
            if not (abs(k) < blowup and abs(v) < blowup):
                return None, None  # EL flow left the basin; shot rejected
            d1 = (k, v, 0.5 * (lam * k - k**3), math.cos(theta), math.sin(theta))
            t2, k2, v2 = theta + 0.5 * h * d1[0], k + 0.5 * h * d1[1], v + 0.5 * h * d1[2]
            d2 = (k2, v2, 0.5 * (lam * k2 - k2**3), math.cos(t2), math.sin(t2))
            t3, k3, v3 = theta + 0.5 * h * d2[0], k + 0.5 * h * d2[1], v + 0.5 * h * d2[2]
            d3 = (k3, v3, 0.5 * (lam * k3 - k3**3), math.cos(t3), math.sin(t3))
            t4, k4, v4 = theta + h * d3[0], k + h * d3[1], v + h * d3[2]
            d4 = (k4, v4, 0.5 * (lam * k4 - k4**3), math.cos(t4), math.sin(t4))
            theta += (h / 6.0) * (d1[0] + 2.0 * (d2[0] + d3[0]) + d4[0])
            k += (h / 6.0) * (d1[1] + 2.0 * (d2[1] + d3[1]) + d4[1])
            v += (h / 6.0) * (d1[2] + 2.0 * (d2[2] + d3[2]) + d4[2])
            x += (h / 6.0) * (d1[3] + 2.0 * (d2[3] + d3[3]) + d4[3])
            y += (h / 6.0) * (d1[4] + 2.0 * (d2[4] + d3[4]) + d4[4])
            if (i + 1) % sub == 0:
                nodes[(i + 1) // sub] = (x, y)
        theta_end = theta
        return nodes, theta_end

    def _shoot(self, q, theta_n, fixed):
        """Endpoint mismatch of the EL flow started from q = (k0, v0, lam-or-ell)."""
        k0, v0, par = q
        lam = par if fixed else self.lam
        ell = self.fixed_length if fixed else par
        if ell <= (self.len_lb * 0.5 if self.lam is not None else 0.0) or ell <= 0:
            return None, None
        nodes, theta_end = self._integrate_el_ivp(k0, v0, lam, ell)
        if nodes is None:
            return None, None
        mismatch = np.array(
            [
                theta_end - theta_n,
                nodes[-1, 0] - self.data.P1[0],
                nodes[-1, 1] - self.data.P1[1],
            ]
        )
        return mismatch, nodes

    def polish(self, z, theta_n):
        """Shooting polish: Newton on the planar EL boundary-value problem.

        The augmented-Lagrangian minimizer of the O(h^2) discrete energy
        sits O(h^2) away from the smooth elastica, which the 4th-order EL
        operator amplifies.  Starting from that minimizer, Newton-solve the
        three-parameter shooting problem for 2 k'' + k^3 - lam k = 0 with
        clamped conditions (unknowns: curvature and its derivative at the
        start, plus lam for fixed length or the length for the penalized
        problem), re-integrating the EL flow with fixed-substep RK4 so the
        returned nodes are smooth to machine precision.  Returns
        (nodes, ell) or None on failure.
        """
        theta, ell = self._unpack(z, theta_n)
        dth = np.diff(theta)
        if float(dth @ dth) / (ell / self.n) < 1e-8:
            return None  # essentially straight: nothing to polish
        fixed = self.lam is None
        k_nodes = _fd_derivative(theta, 1.0 / self.n, 1) / ell
        v_nodes = _fd_derivative(k_nodes, 1.0 / self.n, 1) / ell
        if fixed:
            nodes, _ = self.nodes(z, theta_n)
            try:
                par0, _ = estimate_multiplier(resample_constant_speed(DiscreteCurve(nodes)))
            except Exception:
                par0 = 0.0
        else:
            par0 = ell
        q = np.array([k_nodes[0], v_nodes[0], par0])

        mismatch, _ = self._shoot(q, theta_n, fixed)
        if mismatch is None:
            return None
        scale = max(1.0, self.chord, ell)
        for _ in range(15):
            err = max(abs(mismatch[0]), abs(mismatch[1]) / scale, abs(mismatch[2]) / scale)
            if err <= 1e-11:
                break
            jac = np.empty((3, 3))
            for col in range(3):
                step = 1e-6 * (1.0 + abs(q[col]))
                q_try = q.copy()
                q_try[col] += step
                m_try, _ = self._shoot(q_try, theta_n, fixed)
                if m_try is None:
                    return None
                jac[:, col] = (m_try - mismatch) / step
            try:
                delta = np.linalg.solve(jac, -mismatch)
            except np.linalg.LinAlgError:
                return None
            # damped update
            norm0 = float(np.linalg.norm(mismatch))
            for attempt in range(5):
                q_new = q + delta * (0.5**attempt)
                m_new, _ = self._shoot(q_new, theta_n, fixed)
                if m_new is not None and float(np.linalg.norm(m_new)) < norm0:
                    q, mismatch = q_new, m_new
                    break
            else:
                return None
        else:
            return None

        ell_out = self.fixed_length if fixed else float(q[2])
        lam_out = float(q[2]) if fixed else self.lam
        nodes_out, _ = self._integrate_el_ivp(float(q[0]), float(q[1]), lam_out, ell_out)
        if nodes_out is None:
            return None
        return nodes_out, ell_out

    def solve_start(self, index, winding_kind) -> _StartResult:
        i, _, kind, theta_n, coeffs = winding_kind
        x = np.arange(self.n + 1) / self.n
        excess = (
            max(self.fixed_length / max(self.chord, 1e-12) - 1.0, 0.02)
            if self.lam is None and self.chord > 1e-12
            else 1.0
        )
        amp = min(2.5, math.sqrt(8.0 * excess))
        theta_init = _profile_grid(self.theta0, theta_n, kind, amp, coeffs, x)
        if self.lam is None:
            z = theta_init[1:-1].copy()
            bounds = None
        else:
            ell0 = self.chord + (1.0, 2.0, 4.0, 8.0)[i % 4] / math.sqrt(self.lam)
            z = np.concatenate([theta_init[1:-1], [max(ell0, self.len_lb * 1.5)]])
            bounds = [(None, None)] * (self.n - 1) + [(self.len_lb, None)]

        mu = np.zeros(2)
        rho = 1e3
        prev_viol = math.inf
        telemetry = []
        converged_outer = False
        for outer in range(self.cfg.outer_iters):
            merit_pre, _ = self.merit_and_grad(z, theta_n, mu, rho)
            res = _scipy_minimize(
                self.merit_and_grad,
                z,
                args=(theta_n, mu, rho),
                jac=True,
                method="L-BFGS-B",
                bounds=bounds,
                options={"maxiter": self.cfg.inner_iters, "maxcor": 20, "ftol": 1e-15, "gtol": 1e-9},
            )
            z = res.x
            viol = self.violation(z, theta_n)
            telemetry.append(
                {
                    "start": index,
                    "outer": outer,
                    "merit_pre": merit_pre,
                    "merit": float(res.fun),
                    "violation": viol,
                }
            )
            theta, ell = self._unpack(z, theta_n)
            g, _, _ = self._trapezoid_endpoint(theta, ell)
            mu = mu + rho * g
            if viol <= self.cfg.constraint_tol:
                converged_outer = True
                if outer >= 1:
                    break
            else:
                if viol > 0.25 * prev_viol:
                    rho = min(rho * self.cfg.penalty_growth, 1e14)
                if outer >= 10 and viol > max(100.0 * self.cfg.constraint_tol, 1e-3):
                    break  # start is stuck in an infeasible configuration
            prev_viol = viol

        nodes, ell = self.nodes(z, theta_n)
        violation = self.violation(z, theta_n)
        energy = self.energy_of(z, theta_n)
        if converged_outer:
            polished = self.polish(z, theta_n)
            if polished is not None:
                p_nodes, p_ell = polished
                gap = max(
                    float(np.linalg.norm(p_nodes[0] - self.data.P0)),
                    float(np.linalg.norm(p_nodes[-1] - self.data.P1)),
                )
                # accept the polish only if it stays in the same basin
                if gap <= self.cfg.constraint_tol and np.abs(p_nodes - nodes).max() <= 0.1 * max(
                    1.0, ell
                ):
                    nodes, ell, violation = p_nodes, p_ell, gap
        try:
            crv = DiscreteCurve(nodes)
            if not crv.is_constant_speed():
                crv = resample_constant_speed(crv)
            bend = bending_energy(crv)
        except Exception:
            return _StartResult(index, None, math.inf, 0.0, math.inf, False, telemetry)
        energy = bend if self.lam is None else bend + self.lam * ell
        return _StartResult(index, crv, energy, ell, violation, converged_outer, telemetry)


# ---------------------------------------------------------------------------
# points representation (n = 2 or 3; slower, used for space curves)

class _PointsProblem:
    """Node-position representation with per-edge length constraints."""

    def __init__(self, data: BoundaryData, cfg: SolverConfig, lam: float | None, length: float | None):
        self.data = data
        self.cfg = cfg
        self.lam = lam
        self.fixed_length = length
        self.n = cfg.num_segments
        self.h = 1.0 / self.n
        self.dim = data.dim

    def _unpack(self, z):
        n, d = self.n, self.dim
        free = z[: (n - 1) * d].reshape(n - 1, d)
        nodes = np.empty((n + 1, d))
        nodes[0] = self.data.P0
        nodes[-1] = self.data.P1
        nodes[1:-1] = free
        ell = self.fixed_length if self.lam is None else z[-1]
        return nodes, ell

    def _constraints(self, nodes, ell):
        edge = ell * self.h
        diffs = np.diff(nodes, axis=0)
        lengths2 = np.einsum("ij,ij->i", diffs, diffs)
        c_edges = lengths2[1:-1] - edge**2
        c_t0 = nodes[1] - nodes[0] - edge * self.data.V0
        c_t1 = nodes[-1] - nodes[-2] - edge * self.data.V1
        return np.concatenate([c_t0, c_t1, c_edges]), diffs

    def merit_and_grad(self, z, mu, rho):
        nodes, ell = self._unpack(z)
        edge = ell * self.h
        second = nodes[2:] - 2.0 * nodes[1:-1] + nodes[:-2]
        scale = 1.0 / (ell**3 * self.h**3)
        bend = scale * float(np.einsum("ij,ij->", second, second))
        cons, diffs = self._constraints(nodes, ell)
        lag = mu + rho * cons
        merit = bend + float(mu @ cons) + 0.5 * rho * float(cons @ cons)

        # bending gradient wrt interior nodes
        lap = np.zeros_like(nodes)
        lap[:-2] += second
        lap[1:-1] -= 2.0 * second
        lap[2:] += second
        grad_nodes = 2.0 * scale * lap

        d = self.dim
        lag_t0, lag_t1, lag_e = lag[:d], lag[d : 2 * d], lag[2 * d :]
        grad_nodes[1] += lag_t0
        grad_nodes[-2] -= lag_t1
        # edge constraints i = 1..n-2: d(|diff_i|^2)/d nodes
        w = 2.0 * lag_e[:, None] * diffs[1:-1]
        grad_nodes[2:-1] += w
        grad_nodes[1:-2] -= w

        if self.lam is None:
            return merit, grad_nodes[1:-1].ravel()
        merit += self.lam * ell
        grad_ell = -3.0 * bend / ell + self.lam
        grad_ell += float(lag_e @ np.full(len(lag_e), -2.0 * edge * self.h))
        grad_ell += float(lag_t0 @ (-self.h * self.data.V0)) + float(lag_t1 @ (-self.h * self.data.V1))
        return merit, np.concatenate([grad_nodes[1:-1].ravel(), [grad_ell]])

    def violation(self, z) -> float:
        nodes, ell = self._unpack(z)
        cons, _ = self._constraints(nodes, ell)
        return float(np.abs(cons).max())

    def initial(self, index, rng):
        n, d = self.n, self.dim
        x = np.arange(n + 1) / n
        base = self.data.P0[None, :] + x[:, None] * (self.data.P1 - self.data.P0)[None, :]
        chord = self.data.chord
        target = self.fixed_length if self.lam is None else chord + (1 + index % 4) / math.sqrt(self.lam)
        excess = max(target - chord, 0.05 * max(target, 1.0))
        span = self.data.V0 + self.data.V1 + rng.normal(size=d)
        u = span - (span @ (self.data.P1 - self.data.P0)) * 0 if chord < 1e-12 else span
        u = u / max(np.linalg.norm(u), 1e-12)
        amp = math.sqrt(excess * max(target, chord, 0.1)) * 0.6
        bump = amp * np.sin(np.pi * x * (1 + index % 2))[:, None] * u[None, :]
        nodes = base + bump
        z = nodes[1:-1].ravel()
        if self.lam is not None:
            z = np.concatenate([z, [target]])
        return z

    def solve_start(self, index, seed) -> _StartResult:
        rng = np.random.default_rng([seed, index, 77])
        z = self.initial(index, rng)
        n_cons = 2 * self.dim + self.n - 2
        mu = np.zeros(n_cons)
        rho = 1e3
        bounds = None
        if self.lam is not None:
            lb = max(self.data.chord * (1 + 1e-10), 1e-8)
            bounds = [(None, None)] * (len(z) - 1) + [(lb, None)]
        prev_viol = math.inf
        telemetry = []
        converged_outer = False
        for outer in range(self.cfg.outer_iters):
            merit_pre, _ = self.merit_and_grad(z, mu, rho)
            res = _scipy_minimize(
                self.merit_and_grad,
                z,
                args=(mu, rho),
                jac=True,
                method="L-BFGS-B",
                bounds=bounds,
                options={"maxiter": self.cfg.inner_iters, "maxcor": 20, "ftol": 1e-15, "gtol": 1e-9},
            )
            z = res.x
            viol = self.violation(z)
            telemetry.append(
                {"start": index, "outer": outer, "merit_pre": merit_pre, "merit": float(res.fun), "violation": viol}
            )
            nodes, ell = self._unpack(z)
            cons, _ = self._constraints(nodes, ell)
            mu = mu + rho * cons
            if viol <= self.cfg.constraint_tol:
                converged_outer = True
                if outer >= 1:
                    break
            elif viol > 0.25 * prev_viol:
                rho = min(rho * self.cfg.penalty_growth, 1e14)
            prev_viol = viol

        nodes, ell = self._unpack(z)
        try:
            crv = resample_constant_speed(DiscreteCurve(nodes))
        except Exception:
            return _StartResult(index, None, math.inf, 0.0, math.inf, False, telemetry)
        second = nodes[2:] - 2.0 * nodes[1:-1] + nodes[:-2]
        bend = float(np.einsum("ij,ij->", second, second)) / (ell**3 * self.h**3)
        energy = bend if self.lam is None else bend + self.lam * ell
        return _StartResult(index, crv, energy, ell, viol, converged_outer, telemetry)


# ---------------------------------------------------------------------------
# drivers

def _segment_result(data: BoundaryData, cfg: SolverConfig, penalized_lam: float | None) -> MinimizeResult:
    x = np.arange(cfg.num_segments + 1) / cfg.num_segments
    nodes = data.P0[None, :] + x[:, None] * (data.P1 - data.P0)[None, :]
    crv = DiscreteCurve(nodes)
    length = data.chord
    energy = 0.0 if penalized_lam is None else penalized_lam * length
    return MinimizeResult(
        curve=crv,
        energy=energy,
        length=length,
        lambda_est=0.0 if penalized_lam is None else penalized_lam,
        el_residual_norm=0.0,
        constraint_violation=0.0,
        converged=True,
        starts_used=0,
        notes="segment (admissible set contains only the straight segment)",
    )


def _write_telemetry(cfg: SolverConfig, starts: list[_StartResult]) -> None:
    if cfg.telemetry_path is None:
        return
    with open(cfg.telemetry_path, "a", encoding="utf-8") as fh:
        for start in sorted(starts, key=lambda s: s.index):
            for record in start.telemetry:
                fh.write(json.dumps(record, sort_keys=True) + "\n")


def _map_starts(fn, tasks):
    threads = _thread_count()
    if threads <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ThreadPoolExecutor(max_workers=min(threads, len(tasks))) as pool:
        return list(pool.map(fn, tasks))


def _run_starts(data: BoundaryData, cfg: SolverConfig, lam: float | None, length: float | None):
    if cfg.representation == "points" or data.dim == 3:
        problem = _PointsProblem(data, cfg, lam, length)
        tasks = list(range(cfg.multistart_count))
        results = _map_starts(lambda i: problem.solve_start(i, cfg.seed), tasks)
    else:
        problem = _TangentAngleProblem(data, cfg, lam, length)
        profiles, _ = _initial_profiles(
            problem.theta0, problem.theta_gap, problem.chord,
            length if length is not None else max(problem.chord, 1.0),
            cfg.multistart_count, cfg.seed,
        )
        results = _map_starts(lambda p: problem.solve_start(p[0], p), profiles)
    _write_telemetry(cfg, results)
    return [r for r in results if r.curve is not None]


def _finalize(data, cfg, start: _StartResult, lam: float | None, starts_used: int) -> MinimizeResult:
    crv = start.curve
    if lam is None:
        try:
            lam_est, _ = estimate_multiplier(crv)
        except DegenerateCurveError:
            lam_est = 0.0
        notes = ""
    else:
        lam_est = lam
        notes = ""
    _, resid = el_residual(crv, lam_est)
    bend = bending_energy(crv)
    energy = bend if lam is None else bend + lam * start.length
    converged = start.feasible and start.violation <= cfg.constraint_tol and resid <= 10.0 * cfg.grad_tol
    return MinimizeResult(
        curve=crv,
        energy=energy,
        length=start.length,
        lambda_est=lam_est,
        el_residual_norm=resid,
        constraint_violation=start.violation,
        converged=converged,
        starts_used=starts_used,
        notes=notes,
    )


def _pick_best(results: list[_StartResult]):
    return min(results, key=lambda r: (not r.feasible, r.energy, r.index))


def minimize_fixed_length(data: BoundaryData, length: float, cfg: SolverConfig | None = None) -> MinimizeResult:
    """Minimize the bending energy over clamped curves of fixed length.

    Segment-class data returns the exact segment with B = 0; infeasible
    data raises InfeasibleBoundaryError.  Otherwise the best of
    cfg.multistart_count runs is returned; converged=False flags an
    unconverged best effort.
    """
    cfg = cfg or SolverConfig()
    cls = classify_boundary(data, length)
    if cls.fixed_length_class is FixedLengthClass.INFEASIBLE:
        raise InfeasibleBoundaryError(
            f"no curve of length {length} spans |P1 - P0| = {data.chord} with these tangents"
        )
    if cls.fixed_length_class is FixedLengthClass.AS:
        return _segment_result(data, cfg, None)
    if data.dim == 3 and cfg.representation == "tangent-angle":
        raise ValueError("tangent-angle representation is planar; use representation='points' for n = 3")
    results = _run_starts(data, cfg, None, length)
    if not results:
        raise RuntimeError("all multistarts failed to produce a curve")
    return _finalize(data, cfg, _pick_best(results), None, len(results))


def minimize_penalized(data: BoundaryData, lam: float, cfg: SolverConfig | None = None) -> MinimizeResult:
    """Minimize B + lam * length over clamped curves of free length, lam > 0."""
    if lam <= 0.0:
        raise ValueError("penalized problem needs lam > 0 (minimizers may not exist otherwise)")
    cfg = cfg or SolverConfig()
    cls = classify_boundary(data)
    if cls.penalized_class is PenalizedClass.XS:
        return _segment_result(data, cfg, lam)
    if data.dim == 3 and cfg.representation == "tangent-angle":
        raise ValueError("tangent-angle representation is planar; use representation='points' for n = 3")
    results = _run_starts(data, cfg, lam, None)
    if not results:
        raise RuntimeError("all multistarts failed to produce a curve")
    return _finalize(data, cfg, _pick_best(results), lam, len(results))


def enumerate_local_minima(
    data: BoundaryData,
    constraint: FixedLength | Penalized,
    cfg: SolverConfig | None = None,
) -> list[MinimizeResult]:
    """All multistart outcomes, clustered by C^1 distance <= 1e-3.

    Returns one representative per cluster, sorted by energy; near-ties
    (energy gap <= 1e-4 * energy) are flagged in `notes` as potential
    non-uniqueness.
    """
    cfg = cfg or SolverConfig()
    lam = constraint.lam if isinstance(constraint, Penalized) else None
    length = constraint.length if isinstance(constraint, FixedLength) else None
    if lam is not None and lam <= 0.0:
        raise ValueError("penalized problem needs lam > 0")
    results = [r for r in _run_starts(data, cfg, lam, length) if r.feasible]
    results.sort(key=lambda r: (r.energy, r.index))
    clusters: list[_StartResult] = []
    for cand in results:
        for rep in clusters:
            if cand.curve.nodes.shape == rep.curve.nodes.shape and cm_distance(cand.curve, rep.curve, 1) <= 1e-3:
                break
        else:
            clusters.append(cand)
    out = [_finalize(data, cfg, rep, lam, len(results)) for rep in clusters]
    for i, res in enumerate(out):
        ties = [
            j
            for j, other in enumerate(out)
            if j != i and abs(other.energy - res.energy) <= 1e-4 * max(abs(res.energy), 1e-12)
        ]
        if ties:
            res.notes = (res.notes + " " if res.notes else "") + (
                f"near-tie with cluster(s) {ties}: possible non-uniqueness"
            )
    return out


@dataclass
class CriticalityReport:
    lambda_used: float
    el_residual_norm: float
    boundary_position_error: float
    boundary_tangent_error: float
    length_error: float
    checks: dict
    passed: bool


def verify_critical(
    curve: DiscreteCurve,
    constraint: FixedLength | Penalized,
    boundary: BoundaryData | None = None,
    residual_tol: float = 1e-3,
    boundary_tol: float = 1e-6,
    tangent_tol: float = 1e-4,
) -> CriticalityReport:
    """Check that a curve is (discretely) a critical point of its problem.

    Estimates the multiplier for fixed-length constraints, uses the given
    one for penalized; evaluates the Euler-Lagrange residual; optionally
    checks clamped boundary data and (fixed-length) the spline arclength.
    """
    if isinstance(constraint, Penalized):
        lam = constraint.lam
    else:
        try:
            lam, _ = estimate_multiplier(curve)
        except DegenerateCurveError:
            lam = 0.0
    _, resid = el_residual(curve, lam)
    checks = {"el_residual": resid <= residual_tol}

    pos_err = tan_err = 0.0
    if boundary is not None:
        pos_err = max(
            float(np.linalg.norm(curve.nodes[0] - boundary.P0)),
            float(np.linalg.norm(curve.nodes[-1] - boundary.P1)),
        )
        t0, t1 = end_tangents(curve)
        tan_err = max(float(np.linalg.norm(t0 - boundary.V0)), float(np.linalg.norm(t1 - boundary.V1)))
        scale = max(1.0, curve.length)
        checks["boundary_positions"] = pos_err <= boundary_tol * scale
        checks["boundary_tangents"] = tan_err <= tangent_tol

    len_err = 0.0
    if isinstance(constraint, FixedLength):
        len_err = abs(spline_arclength(curve) - constraint.length) / constraint.length
        checks["length"] = len_err <= max(boundary_tol, 1e-8)

    return CriticalityReport(
        lambda_used=lam,
        el_residual_norm=resid,
        boundary_position_error=pos_err,
        boundary_tangent_error=tan_err,
        length_error=len_err,
        checks=checks,
        passed=all(checks.values()),
    )


def default_config(**overrides) -> SolverConfig:
    """SolverConfig with keyword overrides (convenience for callers)."""
    cfg = SolverConfig()
    return replace(cfg, **overrides)
