"""Counterexample families, dichotomy probes, energy maps, stability sweeps.

The two classical witnesses that bounded-energy sequences of elasticae need
not converge smoothly when the limit is a segment:

* curvature oscillation: wavelike members with m = 1/j^2, A = 2 K(m),
  unit length, whose energy tends to pi^2 / 2 while the multiplier goes
  to -infinity;
* curvature concentration: borderline members k_j(s) = 2 j sech(j s + r_j)
  with the phase r_j chosen so the energy is constant (= 4 tanh 1), while
  the multiplier 2 j^2 goes to +infinity.

Both keep C^0/C^1 distances to the straight segment shrinking while the
second-derivative mass stays bounded below, so convergence cannot be
W^{2,2}-strong.  The dichotomy probe tabulates multiplier growth against
C^2 trends; the minimal-energy map and stability sweeps exercise the
solver across parameter paths.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import elliptic
from .closedform import ElasticaParams, reconstruct_planar
from .curve import (
    BoundaryData,
    DiscreteCurve,
    FixedLengthClass,
    bending_energy,
    classify_boundary,
    cm_distance,
    curvature_vectors,
    resample_constant_speed,
)
from .solver import (
    FixedLength,
    InfeasibleBoundaryError,
    MinimizeResult,
    Penalized,
    SolverConfig,
    minimize_fixed_length,
    minimize_penalized,
)


@dataclass
class ConvergenceReport:
    """Per-member diagnostics of a sequence run."""

    j: int
    energy: float
    length: float
    multiplier: float
    killing: float
    cm_distances: tuple
    energy_discrete: float | None = None
    notes: str = ""

    def __post_init__(self):
        values = [self.energy, self.length, self.multiplier, self.killing, *self.cm_distances]
        if not all(math.isfinite(v) for v in values):
            raise ValueError("convergence report entries must be finite")
        if self.length <= 0:
            raise ValueError("length must be positive")


def _segment_reference(num_segments: int) -> DiscreteCurve:
    """Unit segment from the origin along the initial tangent (1, 0).

    Reconstructions start at gamma(0) = 0 with theta(0) = 0, so after the
    normalizing translation by -gamma(0) the aligned reference is the unit
    segment along the x-axis.  (The rotational alignment by the initial
    tangent is a convention; the underlying compactness statement only
    fixes translations.)
    """
    x = np.arange(num_segments + 1) / num_segments
    return DiscreteCurve(np.column_stack([x, np.zeros(num_segments + 1)]))


def _cm_profile(curve: DiscreteCurve, reference: DiscreteCurve, max_order: int = 3) -> tuple:
    return tuple(cm_distance(curve, reference, q) for q in range(max_order + 1))


def _constant_speed(curve: DiscreteCurve) -> DiscreteCurve:
    """Resample when the chord-vs-arc bias pushes a reconstruction over tolerance."""
    return curve if curve.is_constant_speed() else resample_constant_speed(curve)


def oscillation_sequence(j_max: int, num_segments: int = 4096) -> list[ConvergenceReport]:
    """Wavelike members m_j = 1/j^2, A_j = 2 K(m_j), unit length, j = 2..j_max.

    (j = 1 would force m = 1, where K diverges and the wavelike family
    degenerates, so the sequence starts at j = 2.)  `energy` holds the
    closed-form value 2 K(m) * integral of cn^2 over a period;
    `energy_discrete` the discrete energy of the reconstruction.
    """
    if j_max < 2:
        raise ValueError("j_max must be >= 2")
    seg = _segment_reference(num_segments)
    reports = []
    for j in range(2, j_max + 1):
        m = 1.0 / j**2
        amp = 2.0 * elliptic.complete_K(m)
        params = ElasticaParams.from_moduli(m, m, amp, beta=0.0)
        curve = _constant_speed(reconstruct_planar(params, 1.0, num_segments))
        b_closed = 2.0 * elliptic.complete_K(m) * elliptic.cn_squared_period_integral(m)
        b_disc = bending_energy(curve)
        if abs(b_disc - b_closed) > 1e-2 * b_closed:
            raise RuntimeError(f"reconstruction energy far from closed form at j={j}")
        reports.append(
            ConvergenceReport(
                j=j,
                energy=b_closed,
                length=curve.length,
                multiplier=params.lam,
                killing=params.a,
                cm_distances=_cm_profile(curve, seg),
                energy_discrete=b_disc,
                notes=f"wavelike m=1/{j}^2",
            )
        )
    return reports


def concentration_phase(j: int, c_const: float | None = None, tol: float = 1e-12) -> float:
    """Phase r_j >= 0 with tanh(j + r) - tanh(r) = c / j, by bisection.

    The map r -> integral of sech^2 over [r, j + r] is continuous and
    strictly decreasing from tanh(j) >= c to 0, so the root exists and is
    unique; the bracket upper end j + log(4 j / c) puts the integral well
    below c / j.
    """
    c = math.tanh(1.0) if c_const is None else c_const
    target = c / j

    def f(r: float) -> float:
        return math.tanh(j + r) - math.tanh(r) - target

    lo, hi = 0.0, j + math.log(4.0 * j / c)
    flo, fhi = f(lo), f(hi)
    if flo < 0.0 or fhi > 0.0:
        raise RuntimeError(f"phase root not bracketed for j={j}: f({lo})={flo}, f({hi})={fhi}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) >= 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def concentration_sequence(j_max: int, num_segments: int = 4096) -> list[ConvergenceReport]:
    """Borderline members k_j(s) = 2 j sech(j s + r_j), unit length, j = 1..j_max.

    The phase r_j makes the energy 4 j (tanh(j + r_j) - tanh(r_j)) equal to
    4 tanh(1) for every j; the multiplier is 2 j^2 exactly.
    """
    if j_max < 1:
        raise ValueError("j_max must be >= 1")
    c = math.tanh(1.0)
    seg = _segment_reference(num_segments)
    reports = []
    for j in range(1, j_max + 1):
        r = concentration_phase(j, c)
        params = ElasticaParams.from_moduli(1.0, 1.0, 2.0 * j, beta=r)
        curve = _constant_speed(reconstruct_planar(params, 1.0, num_segments))
        b_analytic = 4.0 * j * (math.tanh(j + r) - math.tanh(r))
        reports.append(
            ConvergenceReport(
                j=j,
                energy=b_analytic,
                length=curve.length,
                multiplier=2.0 * j**2,
                killing=params.a,
                cm_distances=_cm_profile(curve, seg),
                energy_discrete=bending_energy(curve),
                notes=f"borderline A=2*{j}, phase={r:.6f}",
            )
        )
    return reports


def _builtin_families(j_count: int) -> dict:
    fixed = []
    m0 = 1.0 / 9.0
    amp0 = 2.0 * elliptic.complete_K(m0)
    for _ in range(j_count):
        fixed.append(ElasticaParams.from_moduli(m0, m0, amp0))
    osc = [
        ElasticaParams.from_moduli(1.0 / j**2, 1.0 / j**2, 2.0 * elliptic.complete_K(1.0 / j**2))
        for j in range(2, j_count + 2)
    ]
    conc = [
        ElasticaParams.from_moduli(1.0, 1.0, 2.0 * j, beta=concentration_phase(j))
        for j in range(1, j_count + 1)
    ]
    return {"constant": fixed, "oscillation": osc, "concentration": conc}


def dichotomy_probe(families: dict | None = None, num_segments: int = 2048, j_count: int = 8):
    """Tabulate multiplier growth against C^1/C^2 trends per family.

    Families map a name to a list of ElasticaParams (members of a
    sequence); None selects the built-in constant / oscillation /
    concentration families.  Each family is classified as
    'smooth-converging' or 'segment-limit' by whether the C^2 distance to
    the reference trends to zero; for the built-ins the classification is
    checked against multiplier boundedness (bounded <=> smooth) and a
    RuntimeError signals an inconsistency.

    Returns (rows, verdicts): per-member dict rows and a per-family
    summary dict.
    """
    builtin = families is None
    if builtin:
        families = _builtin_families(j_count)
    rows = []
    verdicts = {}
    for name, members in families.items():
        if len(members) < 2:
            raise ValueError(f"family {name!r} needs at least two members")
        curves = [_constant_speed(reconstruct_planar(p, 1.0, num_segments)) for p in members]
        if name == "constant":
            reference = curves[0]
        else:
            reference = _segment_reference(num_segments)
        lams = [p.lam for p in members]
        c1s = [cm_distance(c, reference, 1) for c in curves]
        c2s = [cm_distance(c, reference, 2) for c in curves]
        for idx, (p, l, c1, c2) in enumerate(zip(members, lams, c1s, c2s)):
            rows.append(
                {"family": name, "index": idx, "multiplier": l, "c1": c1, "c2": c2}
            )
        lam_unbounded = max(abs(l) for l in lams) >= 10.0 * max(abs(lams[0]), 1e-12)
        smooth = c2s[-1] <= max(0.1 * c2s[0], 1e-8)
        verdicts[name] = {
            "multiplier_unbounded": lam_unbounded,
            "classification": "smooth-converging" if smooth else "segment-limit",
            "consistent": lam_unbounded != smooth,
        }
        if builtin and not verdicts[name]["consistent"]:
            raise RuntimeError(f"built-in family {name!r} violates the multiplier dichotomy")
    return rows, verdicts


# ---------------------------------------------------------------------------
# minimal-energy map

@dataclass
class EnergyMapSlice:
    """Path (or small grid) in the space of clamped parameters.

    Lengths run from length_start to length_stop (geometric spacing when
    log_spacing, useful when approaching the chord length); the optional
    angle axis rotates both boundary tangents in-plane.
    """

    gamma: BoundaryData
    length_start: float
    length_stop: float
    log_spacing: bool = False
    angles: tuple = (0.0,)


def _rotate2(v: np.ndarray, phi: float) -> np.ndarray:
    c, s = math.cos(phi), math.sin(phi)
    return np.array([c * v[0] - s * v[1], s * v[0] + c * v[1]])


def minimal_energy_map(slice_spec: EnergyMapSlice, resolution: int, cfg: SolverConfig | None = None):
    """Minimal bending energy along a parameter path, by repeated solves.

    Returns (rows, diagnostics).  Rows carry (angle, length, energy,
    converged, note); solver failures and infeasible points are marked per
    grid point.  Diagnostics include the maximum adjacent-energy jump per
    angle (a discrete modulus of continuity) and the blow-up ratio
    max/min energy along each angle row.
    """
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    cfg = cfg or SolverConfig()
    base = slice_spec.gamma
    if slice_spec.log_spacing:
        chord = base.chord
        lo, hi = slice_spec.length_start - chord, slice_spec.length_stop - chord
        if lo <= 0 or hi <= 0:
            raise ValueError("log spacing needs lengths strictly above the chord")
        lengths = chord + np.geomspace(lo, hi, resolution)
    else:
        lengths = np.linspace(slice_spec.length_start, slice_spec.length_stop, resolution)

    rows = []
    for phi in slice_spec.angles:
        data = BoundaryData(base.P0, base.P1, _rotate2(base.V0, phi), _rotate2(base.V1, phi))
        for length in lengths:
            cls = classify_boundary(data, float(length)).fixed_length_class
            if cls is FixedLengthClass.INFEASIBLE:
                rows.append({"angle": phi, "length": float(length), "energy": math.nan,
                             "converged": False, "note": "infeasible"})
                continue
            if cls is FixedLengthClass.AS:
                rows.append({"angle": phi, "length": float(length), "energy": 0.0,
                             "converged": True, "note": "segment"})
                continue
            try:
                res = minimize_fixed_length(data, float(length), cfg)
            except (InfeasibleBoundaryError, RuntimeError) as exc:
                rows.append({"angle": phi, "length": float(length), "energy": math.nan,
                             "converged": False, "note": f"solver failure: {exc}"})
                continue
            rows.append({"angle": phi, "length": float(length), "energy": res.energy,
                         "converged": res.converged, "note": ""})

    diagnostics = {}
    for phi in slice_spec.angles:
        energies = [r["energy"] for r in rows if r["angle"] == phi and math.isfinite(r["energy"])]
        if len(energies) >= 2:
            jumps = [abs(b - a) for a, b in zip(energies, energies[1:])]
            diagnostics[phi] = {
                "max_jump": max(jumps),
                "blowup_ratio": max(energies) / max(min(energies), 1e-300),
            }
    return rows, diagnostics


# ---------------------------------------------------------------------------
# stability sweeps

def _discrete_killing(curve: DiscreteCurve, lam: float) -> float:
    """Mean of the discrete Killing-magnitude proxy sqrt((k^2-lam)^2 + 4 k'^2)."""
    kappa = curvature_vectors(curve)
    k = np.linalg.norm(kappa, axis=1)
    h = 1.0 / curve.num_segments
    kp = np.gradient(k, h * curve.length)
    interior = slice(4, len(k) - 4)
    prof = (k[interior] ** 2 - lam) ** 2 + 4.0 * kp[interior] ** 2
    return float(np.sqrt(prof).mean())


def perturbation_direction(dim: int, seed: int) -> np.ndarray:
    """Unit direction in (P0, P1, tangent angles, scalar) space, n = 2 only."""
    if dim != 2:
        raise ValueError("stability sweeps support planar boundary data")
    rng = np.random.default_rng([seed, 421])
    vec = rng.normal(size=2 * dim + 3)  # P0 (2), P1 (2), phi0, phi1, scalar
    return vec / np.linalg.norm(vec)


def _perturb(data: BoundaryData, direction: np.ndarray, delta: float) -> BoundaryData:
    d = data.dim
    p0 = data.P0 + delta * direction[:d]
    p1 = data.P1 + delta * direction[d : 2 * d]
    v0 = _rotate2(data.V0, delta * direction[2 * d])
    v1 = _rotate2(data.V1, delta * direction[2 * d + 1])
    return BoundaryData(p0, p1, v0, v1)


def stability_sweep(
    gamma: BoundaryData,
    constraint: FixedLength | Penalized,
    deltas,
    cfg: SolverConfig | None = None,
    seed: int = 0,
    direction: np.ndarray | None = None,
):
    """Solve the base problem, then perturbed copies at magnitudes deltas.

    The perturbation direction (positions, tangent angles, and the length
    or penalty weight) is drawn once from the seed and scaled by each
    delta, so the sweep walks a fixed ray.  Reports C^0..C^3 distances of
    each perturbed minimizer to the reference minimizer (no alignment:
    clamped data pins the frame).  Perturbed parameters that leave the
    admissible set are skipped with a note.

    Returns (reports, summary); summary flags monotonicity of the C^2
    column and whether the distances are converging at all (the
    discontinuity witness near closed boundary data reports False).
    """
    cfg = cfg or SolverConfig()
    fixed = isinstance(constraint, FixedLength)
    if direction is None:
        direction = perturbation_direction(gamma.dim, seed)
    direction = np.asarray(direction, dtype=float)

    if fixed:
        reference = minimize_fixed_length(gamma, constraint.length, cfg)
    else:
        reference = minimize_penalized(gamma, constraint.lam, cfg)

    reports = []
    distances = []
    all_converged = reference.converged
    for k, delta in enumerate(deltas):
        data = _perturb(gamma, direction, float(delta))
        note = ""
        try:
            if fixed:
                length = constraint.length + float(delta) * direction[-1]
                if classify_boundary(data, length).fixed_length_class is FixedLengthClass.INFEASIBLE:
                    reports.append(None)
                    distances.append(math.nan)
                    continue
                res = minimize_fixed_length(data, length, cfg)
            else:
                lam = constraint.lam + float(delta) * direction[-1]
                if lam <= 0:
                    reports.append(None)
                    distances.append(math.nan)
                    continue
                res = minimize_penalized(data, lam, cfg)
        except (InfeasibleBoundaryError, RuntimeError) as exc:
            reports.append(None)
            distances.append(math.nan)
            continue
        all_converged = all_converged and res.converged
        ref_curve = reference.curve
        cand = res.curve
        if cand.nodes.shape != ref_curve.nodes.shape:
            cand = resample_constant_speed(cand, ref_curve.num_segments)
        cms = _cm_profile(cand, ref_curve)
        distances.append(cms[2])
        reports.append(
            ConvergenceReport(
                j=k,
                energy=res.energy,
                length=res.length,
                multiplier=res.lambda_est,
                killing=_discrete_killing(res.curve, res.lambda_est),
                cm_distances=cms,
                notes=note or f"delta={delta:g}",
            )
        )

    solved = [d for d in distances if math.isfinite(d)]
    monotone = all(b <= a * (1.0 + 1e-9) + 1e-12 for a, b in zip(solved, solved[1:]))
    summary = {
        "reference_energy": reference.energy,
        "reference_converged": reference.converged,
        "all_converged": all_converged,
        "monotone_nonincreasing": bool(monotone) and len(solved) >= 2,
        "initial_c2": solved[0] if solved else math.nan,
        "final_c2": solved[-1] if solved else math.nan,
        "converging": bool(solved) and solved[-1] <= max(0.25 * solved[0], 1e-6),
        "skipped": sum(r is None for r in reports),
    }
    return [r for r in reports if r is not None], summary


def remark_generic_angle_base() -> tuple[BoundaryData, float]:
    """Generic-angle clamped instance with a single shallow minimizer.

    Both tangents point 15 degrees off the chord, so the boundary-angle
    genericity condition max_i |<P1 - P0, V_i>| < |P1 - P0| holds strictly,
    and the excess length matches the natural clamped-beam deflection (the
    small-length regime where a unique minimizer is expected; multistart
    finds a single converged cluster).
    """
    phi = math.radians(15.0)
    v = np.array([math.cos(phi), math.sin(phi)])
    data = BoundaryData(np.zeros(2), np.array([1.0, 0.0]), v, v)
    # excess length ~ the natural small-deflection value 0.1 tan(phi)^2,
    # keeping the minimizer gentle and far from symmetry-breaking
    return data, 1.0 + 0.1 * math.tan(phi) ** 2


def closed_loop_base() -> BoundaryData:
    """Closed clamped data (P0 = P1, V0 = V1): minimizers are circles."""
    e = np.array([1.0, 0.0])
    return BoundaryData(np.zeros(2), np.zeros(2), e, e)


def closed_discontinuity_direction() -> np.ndarray:
    """Perturbation ray for the discontinuity witness at closed data.

    Moves P1 off P0 along the common tangent while keeping the tangents
    aligned: the perturbed problems are segment-class with energy
    lam * delta, which does not approach the circle's energy 4 pi
    sqrt(lam), so the sweep reports converging = False.
    """
    vec = np.zeros(7)
    vec[2] = 1.0  # P1 moves along e1 = V0 = V1
    return vec


# ---------------------------------------------------------------------------
# report emission

def write_reports_csv(reports: list[ConvergenceReport], path) -> None:
    """One CSV row per report; cm columns c0..c3; 17 significant digits."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["j", "energy", "energy_discrete", "length", "multiplier", "killing",
             "c0", "c1", "c2", "c3", "notes"]
        )
        for rep in reports:
            disc = "" if rep.energy_discrete is None else format(rep.energy_discrete, ".17g")
            writer.writerow(
                [rep.j, format(rep.energy, ".17g"), disc, format(rep.length, ".17g"),
                 format(rep.multiplier, ".17g"), format(rep.killing, ".17g")]
                + [format(v, ".17g") for v in rep.cm_distances]
                + [rep.notes]
            )


def append_summary_record(path, record: dict) -> None:
    """Append one JSON line (sorted keys, so identical runs emit identical bytes)."""
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(json.dumps(record, sort_keys=True) + "\n")
