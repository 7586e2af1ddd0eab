"""Command-line front end.

Each subcommand reads a JSON config, dispatches to the library, and
writes a report envelope:

    {"tool": {"name", "version"}, "command", "seed", "input_digest", "report"}

JSON output is key-sorted and therefore byte-stable for identical inputs
and seed.  CSV output (mainly for `scan`) is a plain table: header row,
',' separator, '.' decimal, 17 significant digits.  Exit codes: 0 ok,
1 structural problem (unreadable config, malformed fields), 2 validation
failure (gap violations, band violations, resonance, failed certification,
singular pencils).

Flag values override INGHAM_* environment variables, which override the
built-in defaults.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .bounds import (
    continuum_limit_scan,
    extended_frame_constants,
    frame_constants,
    plan_haraux,
)
from .errors import StructuralError, ValidationError
from .exponents import ExponentSequence, band_mask, classify, validate_weak_gap
from .kernels import G_eval, WindowKernel, certify_constants, g_transform
from .observability import (
    BEAM,
    STRING,
    CoupledSystem,
    observe,
    reconstruct,
    verify_observability,
    with_amplitudes,
)
from .sums import SamplingGrid, poisson_sides, sum_from_dict

COMMANDS = ("gaps", "kernel", "poisson", "frame", "haraux", "string", "beam", "scan")

_DEFAULT_TOL = 1e-9
_DEFAULT_SEED = 0
_DEFAULT_FORMAT = "json"


@dataclass(frozen=True)
class RunConfig:
    command: str
    input_path: str
    output_path: str | None = None
    tol: float = _DEFAULT_TOL
    seed: int = _DEFAULT_SEED
    fmt: str = _DEFAULT_FORMAT

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise StructuralError(f"unknown command {self.command!r}")
        if not (self.tol > 0.0 and math.isfinite(self.tol)):
            raise StructuralError(f"tol must be positive, got {self.tol}")
        if int(self.seed) != self.seed or self.seed < 0:
            raise StructuralError(f"seed must be a nonnegative integer, got {self.seed}")
        if self.fmt not in ("json", "csv"):
            raise StructuralError(f"format must be json or csv, got {self.fmt!r}")


def _seq_from(data: dict) -> ExponentSequence:
    try:
        omegas = tuple(data["omegas"])
        gamma = float(data["gamma"])
    except (KeyError, TypeError, ValueError) as exc:
        raise StructuralError(f"malformed sequence config: {exc}") from None
    gamma0 = float(data.get("gamma0", gamma))
    return ExponentSequence(omegas, gamma, gamma0)


def _grid_from(data: dict) -> SamplingGrid:
    try:
        return SamplingGrid(float(data["delta"]), int(data["J"]), float(data.get("t_shift", 0.0)))
    except (KeyError, TypeError, ValueError) as exc:
        raise StructuralError(f"malformed grid config: {exc}") from None


def _kernel_from(data: dict) -> WindowKernel:
    try:
        variant = data["variant"]
        gamma = float(data["gamma"])
    except (KeyError, TypeError, ValueError) as exc:
        raise StructuralError(f"malformed kernel config: {exc}") from None
    r = data.get("R")
    return certify_constants(
        variant,
        gamma,
        R=None if r is None else float(r),
        grid_points=int(data.get("grid_points", 10001)),
        margin=float(data.get("margin", 0.05)),
    )


def _handle_gaps(data: dict, cfg: RunConfig):
    seq = _seq_from(data)
    validation = validate_weak_gap(seq)
    if not validation.ok:
        raise ValidationError("gap violations", details=validation.to_dict())
    cls = classify(seq)
    report = {
        "omegas": list(seq.omegas),
        "gamma": seq.gamma,
        "gamma0": seq.gamma0,
        "gaps": list(seq.gaps()),
        "validation": validation.to_dict(),
        "classification": cls.to_dict(),
    }
    return report, None


def _handle_kernel(data: dict, cfg: RunConfig):
    kernel = _kernel_from(data)
    report = kernel.to_dict()
    report["G0"] = float(G_eval(kernel, 0.0))
    report["g0"] = float(g_transform(kernel, 0.0))
    report["alpha"] = kernel.alpha
    report["beta"] = kernel.beta
    return report, None


def _handle_poisson(data: dict, cfg: RunConfig):
    try:
        kernel_cfg = data["kernel"]
        sum_cfg = data["sum"]
        delta = float(data["delta"])
    except (KeyError, TypeError, ValueError) as exc:
        raise StructuralError(f"malformed poisson config: {exc}") from None
    kernel = _kernel_from(kernel_cfg)
    s = sum_from_dict(sum_cfg, kernel.gamma, data.get("gamma0"))
    report = poisson_sides(
        s,
        kernel,
        delta,
        tail_tol=float(data.get("tail_tol", cfg.tol)),
        enforce_band=bool(data.get("enforce_band", True)),
    )
    out = report.to_dict()
    out["delta"] = delta
    out["kernel"] = kernel.to_dict()
    return out, None


def _handle_frame(data: dict, cfg: RunConfig):
    seq = _seq_from(data)
    grid = _grid_from(data)
    report = frame_constants(seq, grid)
    out = report.to_dict()
    out["grid"] = grid.to_dict()
    if report.singular:
        return out, "singular pencil"
    return out, None


def _handle_haraux(data: dict, cfg: RunConfig):
    seq = _seq_from(data)
    grid = _grid_from(data)
    try:
        omega_prime = float(data["omega_prime"])
        j_prime = int(data["J_prime"])
    except (KeyError, TypeError, ValueError) as exc:
        raise StructuralError(f"malformed haraux config: {exc}") from None
    mask = band_mask(seq, grid.delta)
    plan = plan_haraux(seq, mask, omega_prime, j_prime, grid.delta)
    extended = extended_frame_constants(seq, mask, omega_prime, grid, j_prime)
    report = {
        "plan": plan.to_dict(),
        "extended": extended.to_dict(),
        "grid": grid.to_dict(),
    }
    if extended.singular:
        return report, "singular pencil"
    return report, None


def _observability_report(kind: str, data: dict, cfg: RunConfig):
    body = dict(data)
    body["kind"] = kind
    body.setdefault("left", [])
    body.setdefault("right", [])
    sys_cfg = {k: body[k] for k in ("kind", "a", "left", "right") if k in body}
    if "gamma" in body:
        sys_cfg["gamma"] = body["gamma"]
    system = CoupledSystem.from_dict(sys_cfg)
    grid = _grid_from(body)
    epsilon = float(body.get("epsilon", 0.5))
    trials = int(body.get("trials", 100))
    report = verify_observability(
        system,
        grid,
        epsilon,
        trials,
        seed=cfg.seed,
        enforce_horizon=bool(body.get("enforce_horizon", True)),
    )
    out = report.to_dict()
    out["grid"] = grid.to_dict()
    out["system"] = system.to_dict()
    rng = np.random.default_rng(cfg.seed)
    trial = with_amplitudes(system, rng)
    trace = observe(trial, grid)
    rec = reconstruct(trace, trial)
    truth = [m for m in trial.left + trial.right]
    found = [m for m in rec.left + rec.right]
    scale = max(max(abs(m.plus), abs(m.minus)) for m in truth)
    err = max(
        max(abs(t.plus - f.plus), abs(t.minus - f.minus)) for t, f in zip(truth, found)
    )
    out["roundtrip"] = {
        "residual": rec.residual,
        "amplitude_error": err / scale if scale > 0.0 else err,
        "min_singular_value": rec.min_singular_value,
    }
    return out, None


def _handle_string(data: dict, cfg: RunConfig):
    return _observability_report(STRING, data, cfg)


def _handle_beam(data: dict, cfg: RunConfig):
    return _observability_report(BEAM, data, cfg)


_SCAN_AXES = {
    "frame": ("delta", "J", "gamma0", "t_shift"),
    "gaps": ("gamma0", "gamma"),
    "haraux": ("delta", "J", "J_prime", "omega_prime"),
    "continuum": ("J",),
}


def _scan_rows(task: str, base: dict, combo: dict, cfg: RunConfig) -> dict:
    merged = dict(base)
    merged.update(combo)
    if task == "frame":
        report, _ = _handle_frame(merged, cfg)
        return {
            **combo,
            "c_lower": report["c_lower"],
            "c_upper": report["c_upper"],
            "min_eig": report["min_eig"],
            "max_eig": report["max_eig"],
            "pencil_dim": report["pencil_dim"],
            "singular": report["singular"],
        }
    if task == "gaps":
        report, _ = _handle_gaps(merged, cfg)
        cls = report["classification"]
        return {
            **combo,
            "n_a1": len(cls["a1"]),
            "n_a2": len(cls["a2_leads"]),
            "a2_leads": ";".join(str(k) for k in cls["a2_leads"]),
        }
    if task == "haraux":
        report, _ = _handle_haraux(merged, cfg)
        plan = report["plan"]
        ext = report["extended"]
        return {
            **combo,
            "eps_sup": plan["eps_sup"],
            "c_prime": plan["c_prime"],
            "lipschitz_L": plan["lipschitz_L"],
            "c3": ext["c_lower"],
            "c4": ext["c_upper"],
            "c4_formula": ext["companions"]["c4_formula"],
            "singular": ext["singular"],
        }
    raise StructuralError(f"unknown scan task {task!r}")


def _handle_scan(data: dict, cfg: RunConfig):
    try:
        task = data["task"]
        base = dict(data.get("base", {}))
        axes = list(data.get("axes", []))
    except (KeyError, TypeError) as exc:
        raise StructuralError(f"malformed scan config: {exc}") from None
    if task not in _SCAN_AXES:
        raise StructuralError(f"unknown scan task {task!r}")
    if len(axes) > 2:
        raise ValidationError("at most two sweep axes are supported")
    for axis in axes:
        name = axis.get("name")
        values = axis.get("values")
        if name not in _SCAN_AXES[task]:
            raise ValidationError(
                f"axis {name!r} not sweepable for task {task!r}",
                details={"allowed": list(_SCAN_AXES[task])},
            )
        if not values:
            raise ValidationError(f"axis {name!r} has no values")
        if not all(math.isfinite(float(v)) for v in values):
            raise ValidationError(f"axis {name!r} has non-finite values")
    if task == "continuum":
        seq = _seq_from(base)
        cls = classify(seq)
        if axes:
            j_list = [int(v) for v in axes[0]["values"]]
        else:
            j_list = [int(v) for v in base.get("J_list", ())]
        if not j_list:
            raise ValidationError("continuum scan needs J values")
        rows = [row.to_dict() for row in continuum_limit_scan(seq, cls, float(base["R"]), j_list)]
    else:
        combos = [{}]
        for axis in axes:
            combos = [dict(c, **{axis["name"]: v}) for c in combos for v in axis["values"]]
        rows = [_scan_rows(task, base, combo, cfg) for combo in combos]
    columns: list[str] = []
    for row in rows:
        for key in row:
            if key not in columns:
                columns.append(key)
    return {"task": task, "columns": columns, "rows": rows}, None


_HANDLERS = {
    "gaps": _handle_gaps,
    "kernel": _handle_kernel,
    "poisson": _handle_poisson,
    "frame": _handle_frame,
    "haraux": _handle_haraux,
    "string": _handle_string,
    "beam": _handle_beam,
    "scan": _handle_scan,
}


def _sanitize(obj):
    """JSON-safe copy: tuples to lists, complexes to [re, im], non-finite to strings."""
    if isinstance(obj, dict):
        return {str(k): _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(obj, (complex, np.complexfloating)):
        return [_sanitize(obj.real), _sanitize(obj.imag)]
    return obj


def _csv_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _to_csv(report: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter=",", lineterminator="\n")
    if "rows" in report and "columns" in report:
        columns = report["columns"]
        writer.writerow(columns)
        for row in report["rows"]:
            writer.writerow(_csv_cell(row.get(c, "")) for c in columns)
        return buf.getvalue()
    flat: dict[str, object] = {}

    def walk(prefix: str, node):
        if isinstance(node, dict):
            for k, v in node.items():
                walk(f"{prefix}.{k}" if prefix else str(k), v)
        elif isinstance(node, (list, tuple)):
            flat[prefix] = ";".join(_csv_cell(_sanitize(v)) if not isinstance(v, (dict, list, tuple)) else "..." for v in node)
        else:
            flat[prefix] = node

    walk("", _sanitize(report))
    keys = sorted(flat)
    writer.writerow(keys)
    writer.writerow(_csv_cell(flat[k]) for k in keys)
    return buf.getvalue()


def _emit(cfg: RunConfig, envelope: dict) -> None:
    if cfg.fmt == "csv":
        body = _to_csv(envelope["report"] if "report" in envelope else envelope)
    else:
        body = json.dumps(_sanitize(envelope), sort_keys=True, indent=2) + "\n"
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)


def run(cfg: RunConfig) -> int:
    """Execute one command, write the report, return the exit code."""
    envelope: dict = {
        "tool": {"name": "ingham", "version": __version__},
        "command": cfg.command,
        "seed": cfg.seed,
    }
    try:
        with open(cfg.input_path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        envelope["error"] = {"type": "structural", "message": f"cannot read input: {exc}"}
        _emit(cfg, envelope)
        return 1
    envelope["input_digest"] = hashlib.sha256(raw).hexdigest()
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        envelope["error"] = {"type": "structural", "message": f"invalid JSON: {exc}"}
        _emit(cfg, envelope)
        return 1
    try:
        report, validation_note = _HANDLERS[cfg.command](data, cfg)
    except ValidationError as exc:
        envelope["error"] = {
            "type": "validation",
            "message": str(exc.args[0]) if exc.args else "validation error",
            "details": _sanitize(getattr(exc, "details", {})),
        }
        _emit(cfg, envelope)
        return 2
    except StructuralError as exc:
        envelope["error"] = {"type": "structural", "message": str(exc)}
        _emit(cfg, envelope)
        return 1
    envelope["report"] = report
    if validation_note is not None:
        envelope["error"] = {"type": "validation", "message": validation_note}
        _emit(cfg, envelope)
        return 2
    _emit(cfg, envelope)
    return 0


def _env(name: str, fallback):
    return os.environ.get(f"INGHAM_{name}", fallback)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ingham",
        description="Gap-condition diagnostics, window-kernel certificates, "
        "frame constants, and junction observability for exponential sums.",
    )
    parser.add_argument("--version", action="version", version=f"ingham {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("gaps", "validate and classify an exponent sequence"),
        ("kernel", "certify window-kernel constants"),
        ("poisson", "evaluate both sides of the summation identity"),
        ("frame", "empirical frame constants from the sampled pencil"),
        ("haraux", "plan a one-frequency augmentation and its extended constants"),
        ("string", "coupled-string observability and reconstruction"),
        ("beam", "coupled-beam observability and reconstruction"),
        ("scan", "sweep one or two parameters into a table"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--input", default=None, help="JSON config path")
        p.add_argument("--output", default=None, help="report path (default stdout)")
        p.add_argument("--tol", type=float, default=None, help="tolerance (default 1e-9)")
        p.add_argument("--seed", type=int, default=None, help="seed (default 0)")
        p.add_argument("--format", choices=("json", "csv"), default=None, dest="fmt")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    input_path = args.input if args.input is not None else _env("INPUT", None)
    if input_path is None:
        raise StructuralError("no input: pass --input or set INGHAM_INPUT")
    output_path = args.output if args.output is not None else _env("OUTPUT", None)
    tol = args.tol if args.tol is not None else float(_env("TOL", _DEFAULT_TOL))
    seed = args.seed if args.seed is not None else int(_env("SEED", _DEFAULT_SEED))
    fmt = args.fmt if args.fmt is not None else str(_env("FORMAT", _DEFAULT_FORMAT))
    return RunConfig(
        command=args.command,
        input_path=input_path,
        output_path=output_path,
        tol=tol,
        seed=seed,
        fmt=fmt,
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
    except StructuralError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
