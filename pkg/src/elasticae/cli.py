"""Command-line front end: experiment dispatch, report emission, manifests.

Configuration is a flat key = value text file plus command-line overrides
(precedence: command line > file > defaults).  Every run writes its curve
and report CSVs into the output directory together with run_summary.jsonl
(run parameters, seed, pass/fail of built-in assertions) and
manifest.json, which echoes the resolved configuration and lists every
output file with a content hash.  Identical configuration and seed
produce byte-identical report CSVs.

Exit codes: 0 success, 1 solver non-convergence or failed verification,
2 invalid input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__, elliptic, experiments, solver
from ._kernels import BACKEND
from .closedform import ElasticaParams, reconstruct_planar, reconstruct_spatial
from .curve import (
    BoundaryData,
    FixedLengthClass,
    classify_boundary,
    curve_from_csv,
    curve_to_csv,
)


# ---------------------------------------------------------------------------
# parameter schema

@dataclass(frozen=True)
class Param:
    kind: str          # "int" | "float" | "bool" | "str" | "vec"
    default: object
    help: str
    check: object = None  # callable value -> error string or None


def _positive(name):
    return lambda v: None if v > 0 else f"{name} must be positive"


def _at_least(name, bound):
    return lambda v: None if v >= bound else f"{name} must be >= {bound}"


_VEC = lambda s: np.array([float(t) for t in str(s).split(",")])  # noqa: E731


COMMON_PARAMS = {
    "output_dir": Param("str", "elasticae-out", "directory for artifacts"),
    "seed": Param("int", 0, "random seed for multistart / perturbations"),
    "nodes": Param("int", 0, "grid segments N (0 = command default)"),
}

SCHEMAS: dict = {
    "family": {
        "m": Param("float", 0.25, "elliptic parameter in [0, 1]"),
        "w": Param("float", 0.25, "second modulus, m <= w <= 1"),
        "amplitude": Param("float", None, "curvature amplitude A > 0 (default 2K(m))"),
        "beta": Param("float", 0.0, "phase shift"),
        "torsion_sign": Param("int", 1, "sign of the torsion constant (+1/-1)"),
        "length": Param("float", 1.0, "arclength window", _positive("length")),
    },
    "oscillation": {
        "jmax": Param("int", 10, "last family index (j runs 2..jmax)", _at_least("jmax", 2)),
    },
    "concentration": {
        "jmax": Param("int", 10, "last family index (j runs 1..jmax)", _at_least("jmax", 1)),
    },
    "dichotomy": {
        "jcount": Param("int", 6, "members per built-in family", _at_least("jcount", 2)),
    },
    "minimize": {
        "p0": Param("vec", np.zeros(2), "start point, comma separated"),
        "p1": Param("vec", np.array([1.0, 0.0]), "end point"),
        "v0": Param("vec", np.array([1.0, 0.0]), "unit tangent at the start"),
        "v1": Param("vec", np.array([1.0, 0.0]), "unit tangent at the end"),
        "length": Param("float", 1.0, "prescribed length", _positive("length")),
        "multistarts": Param("int", 8, "number of heterogeneous starts", _at_least("multistarts", 1)),
    },
    "penalized": {
        "p0": Param("vec", np.zeros(2), "start point"),
        "p1": Param("vec", np.zeros(2), "end point"),
        "v0": Param("vec", np.array([1.0, 0.0]), "unit tangent at the start"),
        "v1": Param("vec", np.array([1.0, 0.0]), "unit tangent at the end"),
        "lam": Param("float", 1.0, "length penalty weight (> 0)",
                     lambda v: None if v > 0 else
                     "lam must be positive: minimizers may not exist for lam <= 0"),
        "multistarts": Param("int", 8, "number of heterogeneous starts", _at_least("multistarts", 1)),
    },
    "energy-map": {
        "p0": Param("vec", np.zeros(2), "start point"),
        "p1": Param("vec", np.array([1.0, 0.0]), "end point"),
        "v0": Param("vec", np.array([0.0, 1.0]), "unit tangent at the start"),
        "v1": Param("vec", np.array([0.0, 1.0]), "unit tangent at the end"),
        "length_start": Param("float", 1.5, "first length", _positive("length_start")),
        "length_stop": Param("float", 1.02, "last length", _positive("length_stop")),
        "resolution": Param("int", 8, "grid points along the length axis", _at_least("resolution", 2)),
        "log_spacing": Param("bool", True, "geometric spacing of length - chord"),
        "multistarts": Param("int", 6, "starts per grid point", _at_least("multistarts", 1)),
    },
    "stability": {
        "scenario": Param("str", "fixed", "fixed | penalized | closed-discontinuity",
                          lambda v: None if v in ("fixed", "penalized", "closed-discontinuity")
                          else "scenario must be fixed, penalized, or closed-discontinuity"),
        "kmax": Param("int", 8, "perturbation magnitudes 2^-1 .. 2^-kmax", _at_least("kmax", 1)),
        "lam": Param("float", 1.0, "penalty weight for penalized scenarios", _positive("lam")),
        "multistarts": Param("int", 4, "starts per solve", _at_least("multistarts", 1)),
    },
    "verify": {
        "curve": Param("str", "", "path to a curve CSV"),
        "constraint": Param("str", "fixed-length", "fixed-length | penalized",
                            lambda v: None if v in ("fixed-length", "penalized")
                            else "constraint must be fixed-length or penalized"),
        "length": Param("float", 1.0, "target length (fixed-length)", _positive("length")),
        "lam": Param("float", 1.0, "penalty weight (penalized)"),
        "residual_tol": Param("float", 1e-3, "EL residual tolerance", _positive("residual_tol")),
    },
}

_DEFAULT_NODES = {
    "family": 4096, "oscillation": 4096, "concentration": 4096, "dichotomy": 2048,
    "minimize": 512, "penalized": 256, "energy-map": 256, "stability": 512, "verify": 0,
}


class ConfigError(Exception):
    pass


def _coerce(command: str, key: str, raw, lineno=None):
    schema = {**SCHEMAS[command], **COMMON_PARAMS}
    if key not in schema:
        where = f" (line {lineno})" if lineno else ""
        raise ConfigError(f"unknown key {key!r} for command {command!r}{where}")
    spec = schema[key]
    try:
        if spec.kind == "int":
            return int(raw)
        if spec.kind == "float":
            return float(raw)
        if spec.kind == "bool":
            if isinstance(raw, bool):
                return raw
            return str(raw).strip().lower() in ("1", "true", "yes", "on")
        if spec.kind == "vec":
            return _VEC(raw) if not isinstance(raw, np.ndarray) else raw
        return str(raw)
    except (TypeError, ValueError) as exc:
        where = f" (line {lineno})" if lineno else ""
        raise ConfigError(f"bad value for {key!r}{where}: {exc}") from exc


def parse_config_file(path):
    """Flat key = value lines; '#' comments; returns [(lineno, key, value)]."""
    entries = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.split("#", 1)[0].strip()
            if not stripped:
                continue
            if "=" not in stripped:
                raise ConfigError(f"line {lineno}: expected 'key = value', got {stripped!r}")
            key, _, value = stripped.partition("=")
            entries.append((lineno, key.strip(), value.strip()))
    return entries


def resolve_config(command: str, file_path=None, overrides=None):
    """Defaults, then file entries, then overrides; returns the resolved dict."""
    if command not in SCHEMAS:
        raise ConfigError(f"unknown command {command!r}")
    resolved = {k: v.default for k, v in {**SCHEMAS[command], **COMMON_PARAMS}.items()}
    if file_path:
        for lineno, key, value in parse_config_file(file_path):
            if key == "command":
                if value != command:
                    raise ConfigError(f"line {lineno}: config is for command {value!r}, not {command!r}")
                continue
            resolved[key] = _coerce(command, key, value, lineno)
    for key, value in (overrides or {}).items():
        resolved[key] = _coerce(command, key, value)
    if resolved["nodes"] == 0:
        resolved["nodes"] = _DEFAULT_NODES[command]
    return resolved


def validate_config(command: str, resolved: dict) -> list[str]:
    """Schema plus semantic checks; returns diagnostics (empty means valid)."""
    diags = []
    schema = {**SCHEMAS[command], **COMMON_PARAMS}
    for key, value in resolved.items():
        spec = schema.get(key)
        if spec is None:
            diags.append(f"{key}: unknown key")
            continue
        if spec.check is not None:
            msg = spec.check(value)
            if msg:
                diags.append(f"{key}: {msg}")
    for key in ("v0", "v1"):
        if key in resolved:
            norm = float(np.linalg.norm(resolved[key]))
            if abs(norm - 1.0) > 1e-6:
                diags.append(f"{key}: must be a unit vector (|{key}| = {norm:.6g})")
    if command == "minimize" and not diags:
        chord = float(np.linalg.norm(resolved["p1"] - resolved["p0"]))
        data = BoundaryData(resolved["p0"], resolved["p1"], resolved["v0"], resolved["v1"])
        cls = classify_boundary(data, resolved["length"]).fixed_length_class
        if cls is FixedLengthClass.INFEASIBLE:
            diags.append(
                f"length: infeasible, |P1 - P0| = {chord:.6g} exceeds length {resolved['length']:.6g} "
                "(or equals it with misaligned tangents)"
            )
    if command == "family":
        m, w = resolved["m"], resolved["w"]
        if not (0.0 <= m <= w <= 1.0 and w > 0.0):
            diags.append("m/w: need 0 <= m <= w <= 1 with w > 0")
        amp = resolved["amplitude"]
        if amp is not None and amp <= 0:
            diags.append("amplitude: must be positive")
    return diags


# ---------------------------------------------------------------------------
# artifact helpers

class _Emitter:
    def __init__(self, out_dir):
        self.out_dir = out_dir
        os.makedirs(out_dir, exist_ok=True)
        self.outputs = []

    def path(self, name):
        self.outputs.append(name)
        return os.path.join(self.out_dir, name)

    def manifest(self, command, resolved, summary):
        hashes = {}
        for name in self.outputs:
            with open(os.path.join(self.out_dir, name), "rb") as fh:
                hashes[name] = hashlib.sha256(fh.read()).hexdigest()
        manifest = {
            "command": command,
            "config": {k: (v.tolist() if isinstance(v, np.ndarray) else v) for k, v in resolved.items()},
            "version": __version__,
            "kernel_backend": BACKEND,
            "outputs": hashes,
            "summary": summary,
        }
        path = os.path.join(self.out_dir, "manifest.json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _write_rows_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            cells = []
            for v in row:
                if isinstance(v, float):
                    cells.append(format(v, ".17g"))
                else:
                    cells.append(str(v))
            fh.write(",".join(cells) + "\n")


def _boundary_from(resolved) -> BoundaryData:
    return BoundaryData(resolved["p0"], resolved["p1"], resolved["v0"], resolved["v1"])


# ---------------------------------------------------------------------------
# command implementations (each returns (exit_code, summary))

def _run_family(resolved, emitter):
    m, w = resolved["m"], resolved["w"]
    amp = resolved["amplitude"]
    if amp is None:
        amp = math.pi if m == 0 else 2.0 * elliptic.complete_K(m)
    params = ElasticaParams.from_moduli(m, w, amp, resolved["beta"], resolved["torsion_sign"])
    n = resolved["nodes"]
    if params.planar:
        curve = reconstruct_planar(params, resolved["length"], n)
    else:
        curve = reconstruct_spatial(params, resolved["length"], n)
    curve_to_csv(curve, emitter.path("family_curve.csv"))
    summary = {
        "family": params.family.value,
        "multiplier": params.lam,
        "torsion_constant": params.c,
        "killing_magnitude": params.a,
        "beta": params.beta,
    }
    return 0, summary


def _run_sequence(kind, resolved, emitter):
    n = resolved["nodes"]
    if kind == "oscillation":
        reports = experiments.oscillation_sequence(resolved["jmax"], n)
        rebuild = lambda j: ElasticaParams.from_moduli(  # noqa: E731
            1.0 / j**2, 1.0 / j**2, 2.0 * elliptic.complete_K(1.0 / j**2)
        )
    else:
        reports = experiments.concentration_sequence(resolved["jmax"], n)
        rebuild = lambda j: ElasticaParams.from_moduli(  # noqa: E731
            1.0, 1.0, 2.0 * j, beta=experiments.concentration_phase(j)
        )
    for rep in reports:
        curve = reconstruct_planar(rebuild(rep.j), 1.0, n)
        curve_to_csv(curve, emitter.path(f"{kind}_j{rep.j:02d}_curve.csv"))
    experiments.write_reports_csv(reports, emitter.path(f"{kind}_report.csv"))
    energies = [rep.energy for rep in reports]
    if kind == "oscillation":
        checks = {
            "energy_matches_closed_form": all(
                rep.energy_discrete is not None
                and abs(rep.energy_discrete - rep.energy) <= 1e-3 * rep.energy
                for rep in reports
            ),
            "multiplier_negative_unbounded": reports[-1].multiplier < reports[0].multiplier < 0,
        }
    else:
        checks = {
            "energy_constant": max(energies) - min(energies) <= 1e-6,
            "multiplier_exact": all(rep.multiplier == 2.0 * rep.j**2 for rep in reports),
        }
    summary = {"checks": checks, "energy_first": energies[0], "energy_last": energies[-1]}
    return (0 if all(checks.values()) else 1), summary


def _run_dichotomy(resolved, emitter):
    rows, verdicts = experiments.dichotomy_probe(num_segments=resolved["nodes"], j_count=resolved["jcount"])
    _write_rows_csv(
        emitter.path("dichotomy_table.csv"),
        ["family", "index", "multiplier", "c1", "c2"],
        [[r["family"], r["index"], r["multiplier"], r["c1"], r["c2"]] for r in rows],
    )
    summary = {"verdicts": verdicts, "consistent": all(v["consistent"] for v in verdicts.values())}
    return (0 if summary["consistent"] else 1), summary


def _solver_summary(res) -> dict:
    return {
        "energy": res.energy,
        "length": res.length,
        "multiplier": res.lambda_est,
        "el_residual_norm": res.el_residual_norm,
        "constraint_violation": res.constraint_violation,
        "converged": res.converged,
        "starts_used": res.starts_used,
    }


def _run_minimize(resolved, emitter, penalized):
    data = _boundary_from(resolved)
    cfg = solver.SolverConfig(
        num_segments=resolved["nodes"],
        multistart_count=resolved["multistarts"],
        seed=resolved["seed"],
        telemetry_path=emitter.path("solver_telemetry.jsonl"),
    )
    open(cfg.telemetry_path, "w").close()
    if penalized:
        res = solver.minimize_penalized(data, resolved["lam"], cfg)
    else:
        res = solver.minimize_fixed_length(data, resolved["length"], cfg)
    name = "penalized_curve.csv" if penalized else "minimize_curve.csv"
    curve_to_csv(res.curve, emitter.path(name))
    summary = _solver_summary(res)
    return (0 if res.converged else 1), summary


def _run_energy_map(resolved, emitter):
    data = _boundary_from(resolved)
    spec = experiments.EnergyMapSlice(
        gamma=data,
        length_start=resolved["length_start"],
        length_stop=resolved["length_stop"],
        log_spacing=resolved["log_spacing"],
    )
    cfg = solver.SolverConfig(
        num_segments=resolved["nodes"], multistart_count=resolved["multistarts"], seed=resolved["seed"]
    )
    rows, diagnostics = experiments.minimal_energy_map(spec, resolved["resolution"], cfg)
    _write_rows_csv(
        emitter.path("energy_map.csv"),
        ["angle", "length", "energy", "converged", "note"],
        [[r["angle"], r["length"], r["energy"], r["converged"], r["note"]] for r in rows],
    )
    ok = all(r["converged"] for r in rows if r["note"] != "infeasible")
    summary = {"diagnostics": {str(k): v for k, v in diagnostics.items()}, "all_converged": ok}
    return (0 if ok else 1), summary


def _run_stability(resolved, emitter):
    deltas = [2.0 ** -k for k in range(1, resolved["kmax"] + 1)]
    cfg = solver.SolverConfig(
        num_segments=resolved["nodes"], multistart_count=resolved["multistarts"], seed=resolved["seed"]
    )
    scenario = resolved["scenario"]
    if scenario == "fixed":
        base, length = experiments.remark_generic_angle_base()
        reports, summary = experiments.stability_sweep(
            base, solver.FixedLength(length), deltas, cfg, seed=resolved["seed"]
        )
    elif scenario == "penalized":
        base, _ = experiments.remark_generic_angle_base()
        reports, summary = experiments.stability_sweep(
            base, solver.Penalized(resolved["lam"]), deltas, cfg, seed=resolved["seed"]
        )
    else:
        base = experiments.closed_loop_base()
        reports, summary = experiments.stability_sweep(
            base, solver.Penalized(resolved["lam"]), deltas, cfg, seed=resolved["seed"],
            direction=experiments.closed_discontinuity_direction(),
        )
    experiments.write_reports_csv(reports, emitter.path("stability_report.csv"))
    code = 0 if summary["reference_converged"] else 1
    return code, summary


def _run_verify(resolved, emitter):
    if not resolved["curve"]:
        raise ConfigError("verify needs curve = <path to curve CSV>")
    curve = curve_from_csv(resolved["curve"])
    if resolved["constraint"] == "fixed-length":
        constraint = solver.FixedLength(resolved["length"])
    else:
        constraint = solver.Penalized(resolved["lam"])
    report = solver.verify_critical(curve, constraint, residual_tol=resolved["residual_tol"])
    summary = {
        "lambda_used": report.lambda_used,
        "el_residual_norm": report.el_residual_norm,
        "checks": report.checks,
        "passed": report.passed,
    }
    return (0 if report.passed else 1), summary


_RUNNERS = {
    "family": _run_family,
    "oscillation": lambda r, e: _run_sequence("oscillation", r, e),
    "concentration": lambda r, e: _run_sequence("concentration", r, e),
    "dichotomy": _run_dichotomy,
    "minimize": lambda r, e: _run_minimize(r, e, penalized=False),
    "penalized": lambda r, e: _run_minimize(r, e, penalized=True),
    "energy-map": _run_energy_map,
    "stability": _run_stability,
    "verify": _run_verify,
}


def run(command: str, resolved: dict) -> int:
    """Dispatch a resolved configuration; writes artifacts and the manifest."""
    diags = validate_config(command, resolved)
    if diags:
        for d in diags:
            print(f"error: {d}", file=sys.stderr)
        return 2
    emitter = _Emitter(resolved["output_dir"])
    code, summary = _RUNNERS[command](resolved, emitter)
    record = {
        "command": command,
        "seed": resolved["seed"],
        "exit_code": code,
        "summary": summary,
    }
    experiments.append_summary_record(emitter.path("run_summary.jsonl"), record)
    emitter.manifest(command, resolved, summary)
    print(json.dumps(record, sort_keys=True))
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="elasticae",
        description="Closed-form elastica families, clamped bending-energy minimization, "
        "and compactness/stability experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for command, schema in SCHEMAS.items():
        p = sub.add_parser(command, help=f"run the {command} command")
        for key, spec in {**schema, **COMMON_PARAMS}.items():
            p.add_argument(f"--{key.replace('_', '-')}", dest=key, default=None,
                           metavar=spec.kind.upper(), help=spec.help)
        p.add_argument("--config", default=None, help="flat key = value configuration file")
    v = sub.add_parser("validate", help="check a configuration file without running")
    v.add_argument("config_file")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            entries = parse_config_file(args.config_file)
            commands = [val for _, key, val in entries if key == "command"]
            if not commands:
                print("error: config file must set command = <name>", file=sys.stderr)
                return 2
            command = commands[0]
            resolved = resolve_config(command, args.config_file)
            diags = validate_config(command, resolved)
            for d in diags:
                print(f"error: {d}", file=sys.stderr)
            if not diags:
                print(f"ok: valid {command} configuration")
            return 2 if diags else 0
        overrides = {
            k: v
            for k, v in vars(args).items()
            if k not in ("command", "config") and v is not None
        }
        resolved = resolve_config(args.command, args.config, overrides)
        return run(args.command, resolved)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
