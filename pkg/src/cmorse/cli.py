"""Command-line front end.

    cmorse solve    --units dimensionless --m-r 1 --m-i 1 --a-r 1 --a-i 1 --v-or 2
    cmorse sweep    --units spectroscopic --axis m_i --min 0.1 --max 2.0 --count 191
    cmorse ros | classify | verify | critical

Settings come from an optional JSON file (``--config``); flags override it.
Exit codes: 0 success, 2 configuration error, 3 degenerate or inadmissible
parameters, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field

import numpy as np

from . import closed_form as cf
from .atlas import (
    AxisSpec,
    Mode,
    NoSignChange,
    SweepRow,
    Thresholds,
    classify_matter,
    critical_a_i_roots,
    critical_m_i,
    evaluate,
    find_critical,
    sweep,
)
from .core import H2_A_R, H2_M_R, H2_V_OR, ModelError, SystemParameters
from .oracle import random_valid_params, residual_report
from .ros import DegenerateQuadratic, ZeroImaginaryMorse, ros_coefficients, ros_roots, ros_select
from .units import UnitSystem

COMMANDS = ("solve", "ros", "sweep", "classify", "verify", "critical")
PARAM_NAMES = ("m_r", "m_i", "a_r", "a_i", "v_or")
H2_DEFAULTS = {"m_r": H2_M_R, "m_i": H2_M_R, "a_r": H2_A_R, "a_i": H2_A_R, "v_or": H2_V_OR}
DEFAULT_SEED = 20240611
DEFAULT_DRAWS = 200

EXIT_OK, EXIT_CONFIG, EXIT_DEGENERATE, EXIT_IO = 0, 2, 3, 4


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    params: dict
    units: str = UnitSystem.DIMENSIONLESS.value
    mode: str = Mode.GENERAL.value
    sweep_axis: dict | None = None
    second_axis: dict | None = None
    thresholds: dict = field(default_factory=lambda: dataclasses.asdict(Thresholds()))
    format: str = "json"
    out: str | None = None
    seed: int = DEFAULT_SEED
    draws: int = DEFAULT_DRAWS

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def system_parameters(self) -> SystemParameters:
        try:
            return SystemParameters.create(**self.params, units=self.units)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid parameters: {exc}") from None

    def threshold_record(self) -> Thresholds:
        try:
            return Thresholds(**self.thresholds)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid thresholds: {exc}") from None

    def axis(self, which="sweep_axis") -> AxisSpec | None:
        spec = getattr(self, which)
        if spec is None:
            return None
        try:
            return AxisSpec(spec["axis"], float(spec["min"]), float(spec["max"]), int(spec["count"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"invalid {which}: {exc}") from None


def _finite(name, value):
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be a number, got {value!r}") from None
    if not math.isfinite(value):
        raise ConfigError(f"{name} must be finite, got {value!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cmorse", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", metavar="PATH", help="JSON configuration file")
    for name in PARAM_NAMES:
        parser.add_argument("--" + name.replace("_", "-"), dest=name, type=float)
    parser.add_argument("--units", choices=[u.value for u in UnitSystem])
    parser.add_argument("--mode", choices=[m.value for m in Mode],
                        help="beta3 from the well depth (general) or from E_i = 0 (ros)")
    parser.add_argument("--axis", choices=("m_i", "a_i"))
    parser.add_argument("--min", dest="axis_min", type=float)
    parser.add_argument("--max", dest="axis_max", type=float)
    parser.add_argument("--count", type=int)
    parser.add_argument("--axis2", choices=("m_i", "a_i"), help="inner axis of a 2-D sweep")
    parser.add_argument("--min2", type=float)
    parser.add_argument("--max2", type=float)
    parser.add_argument("--count2", type=int)
    parser.add_argument("--eta0", type=float)
    parser.add_argument("--eps", type=float)
    parser.add_argument("--tol", type=float)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--draws", type=int, help="random parameter sets for verify")
    parser.add_argument("--format", choices=("csv", "json"))
    parser.add_argument("--out", metavar="PATH")
    parser.add_argument("--print-config", action="store_true",
                        help="emit the resolved configuration and exit")
    return parser


def _merge_axis(base, axis, lo, hi, count):
    spec = dict(base or {})
    for key, value in (("axis", axis), ("min", lo), ("max", hi), ("count", count)):
        if value is not None:
            spec[key] = value
    return spec or None


def resolve_config(args: argparse.Namespace) -> RunConfig:
    data = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {args.config} is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
    unknown = set(data) - {f.name for f in dataclasses.fields(RunConfig)}
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    units = args.units or data.get("units", UnitSystem.DIMENSIONLESS.value)
    try:
        units = UnitSystem(units).value
    except ValueError:
        raise ConfigError(f"unknown units {units!r}") from None

    params = dict(H2_DEFAULTS) if units == UnitSystem.SPECTROSCOPIC.value else {}
    params.update(data.get("params") or {})
    for name in PARAM_NAMES:
        if getattr(args, name) is not None:
            params[name] = getattr(args, name)
    missing = [n for n in PARAM_NAMES if n not in params]
    if missing and args.command == "verify" and not params:
        # verify draws its own parameter sets; keep a placeholder for the record
        params = {"m_r": 1.0, "m_i": 1.0, "a_r": 1.0, "a_i": 1.0, "v_or": 2.0}
        missing = []
    if missing:
        raise ConfigError(f"missing parameters: {', '.join(missing)}")
    extra = set(params) - set(PARAM_NAMES)
    if extra:
        raise ConfigError(f"unknown parameters: {sorted(extra)}")
    params = {n: _finite(n, params[n]) for n in PARAM_NAMES}

    thresholds = dataclasses.asdict(Thresholds())
    thresholds.update(data.get("thresholds") or {})
    for name in ("eta0", "eps", "tol"):
        if getattr(args, name) is not None:
            thresholds[name] = getattr(args, name)
    thresholds = {k: _finite(k, v) for k, v in thresholds.items()}

    sweep_axis = _merge_axis(data.get("sweep_axis"), args.axis, args.axis_min, args.axis_max, args.count)
    second_axis = _merge_axis(data.get("second_axis"), args.axis2, args.min2, args.max2, args.count2)

    fmt = args.format or data.get("format", "json")
    if fmt not in ("csv", "json"):
        raise ConfigError(f"unknown format {fmt!r}")
    mode = args.mode or data.get("mode", Mode.GENERAL.value)
    if mode not in [m.value for m in Mode]:
        raise ConfigError(f"unknown mode {mode!r}")
    seed = args.seed if args.seed is not None else data.get("seed", DEFAULT_SEED)
    draws = args.draws if args.draws is not None else data.get("draws", DEFAULT_DRAWS)
    if not isinstance(seed, int) or not isinstance(draws, int) or draws < 1:
        raise ConfigError("seed must be an integer and draws a positive integer")

    config = RunConfig(
        command=args.command,
        params=params,
        units=units,
        mode=mode,
        sweep_axis=sweep_axis,
        second_axis=second_axis,
        thresholds=thresholds,
        format=fmt,
        out=args.out if args.out is not None else data.get("out"),
        seed=seed,
        draws=draws,
    )
    # validate eagerly so problems surface as configuration errors
    config.system_parameters()
    config.threshold_record()
    if config.command != "critical":
        config.axis("sweep_axis")
    config.axis("second_axis")
    if config.command == "sweep" and config.sweep_axis is None:
        raise ConfigError("sweep needs --axis, --min, --max and --count")
    if config.command == "critical" and not (config.sweep_axis or {}).get("axis"):
        raise ConfigError("critical needs --axis")
    return config


# --- serialization -----------------------------------------------------------

def format_number(value) -> str:
    """17 significant digits, '.' decimal point; empty for non-finite values."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    value = float(value)
    if not math.isfinite(value):
        return ""
    return format(value + 0.0, ".17g")  # folds -0.0 into 0


def dumps_json(obj, indent: int = 2, _level: int = 0) -> str:
    """Deterministic JSON with keys in insertion order and 17-digit floats."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps_json(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + dumps_json(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (bool, int, float, np.floating, np.integer)):
        text = format_number(obj)
        return text if text else "null"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([v if isinstance(v, str) else ("" if v is None else format_number(v)) for v in row])
    return buf.getvalue()


def write_output(text: str, path: str | None) -> None:
    """Write to ``path`` through a temporary file and rename, or to stdout."""
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".cmorse-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# --- commands ----------------------------------------------------------------

class Inadmissible(Exception):
    """Carries an already-built document alongside exit status 3."""

    def __init__(self, message, document=None):
        super().__init__(message)
        self.document = document


def _params_dict(params: SystemParameters) -> dict:
    return {"m_r": params.m_r, "m_i": params.m_i, "a_r": params.a_r, "a_i": params.a_i,
            "v_or": params.v_or, "hbar": params.hbar, "units": params.units.value}


def _solution_fields(params, beta3, thresholds, region):
    co = cf.coefficients(params, beta3)
    spec = cf.spectrum(params, co)
    status = cf.normalization(co)
    if region.value != "NormalizablePositive":
        status = cf.NormalizationStatus(False, None, status.violated_constraints)
    matter = classify_matter(params, spec, status, thresholds)
    return {
        "alpha1": co.alpha1,
        "beta1": co.beta1,
        "N": status.constant_n,
        "E_r": spec.e_r,
        "E_i": spec.e_i,
        "region": region.value,
        "matter": matter.value,
    }


def cmd_solve(config: RunConfig):
    params = config.system_parameters()
    thresholds = config.threshold_record()
    row = evaluate(params, Mode.GENERAL, thresholds)
    if math.isnan(row.beta3):
        raise Inadmissible(f"no real beta3: region {row.region.value}")
    doc = {"params": _params_dict(params), "beta3": row.beta3, "v_oi": cf.voi_constraint(params)}
    doc.update(_solution_fields(params, row.beta3, thresholds, row.region))
    return doc


def cmd_ros(config: RunConfig):
    params = config.system_parameters()
    thresholds = config.threshold_record()
    try:
        c = ros_coefficients(params)
        roots = ros_roots(c)
    except (ZeroImaginaryMorse, DegenerateQuadratic) as exc:
        raise Inadmissible(str(exc)) from None
    sol = ros_select(params, roots)
    doc = {
        "params": _params_dict(params),
        "omega": c.omega,
        "A": c.a,
        "B": c.b,
        "roots": list(sol.roots),
        "selected": sol.selected,
        "reason": sol.reason,
        "configured_v_or": params.v_or,
        "implied_v_or": sol.implied_v_or,
        "mismatch_ratio": sol.mismatch_ratio(params.v_or),
    }
    if sol.selected is None:
        raise Inadmissible(f"no admissible real-spectrum root ({sol.reason})", doc)
    row = evaluate(params, Mode.ROS, thresholds)
    doc["beta3"] = sol.selected
    doc.update(_solution_fields(params, sol.selected, thresholds, row.region))
    return doc


def cmd_sweep(config: RunConfig):
    params = config.system_parameters()
    rows = sweep(params, config.axis("sweep_axis"), mode=config.mode,
                 thresholds=config.threshold_record(), second_axis=config.axis("second_axis"))
    return rows


def cmd_classify(config: RunConfig):
    params = config.system_parameters()
    row = evaluate(params, config.mode, config.threshold_record())
    return {"params": _params_dict(params), "mode": config.mode,
            "region": row.region.value, "matter": row.matter.value}


def verify_cases(config: RunConfig):
    """Residual reports for ``config.draws`` seeded random parameter sets."""
    rng = np.random.default_rng(config.seed)
    cases = []
    for _ in range(config.draws):
        params = random_valid_params(rng)
        sol = cf.solve(params)
        as_printed = residual_report(params, sol.v_oi, sol.coeffs, sol.spectrum)
        flipped = residual_report(params, -sol.v_oi, sol.coeffs, sol.spectrum, v_or=-params.v_or)
        cases.append((params, as_printed, flipped))
    return cases


def cmd_verify(config: RunConfig):
    cases = verify_cases(config)
    if config.format == "csv":
        return cases
    worst = {
        "eq10a_scaled": max(r.eq10a_scaled for _, r, _ in cases),
        "eq10b_scaled": max(r.eq10b_scaled for _, r, _ in cases),
        "cr_residual": max(max(r.cr_residual_pair) for _, r, _ in cases),
        "flipped_depth_eq10_scaled": max(max(f.eq10a_scaled, f.eq10b_scaled) for _, _, f in cases),
    }
    return {
        "seed": config.seed,
        "draws": config.draws,
        "worst": worst,
        "reports": [
            {"params": _params_dict(p), "report": r.to_dict(),
             "flipped_depth_scaled": [f.eq10a_scaled, f.eq10b_scaled]}
            for p, r, f in cases
        ],
    }


def cmd_critical(config: RunConfig):
    params = config.system_parameters()
    spec = config.sweep_axis
    axis = spec["axis"]
    if axis not in ("m_i", "a_i"):
        raise ConfigError(f"axis must be 'm_i' or 'a_i', got {axis!r}")
    try:
        crit = find_critical(params, axis, spec.get("min"), spec.get("max"))
    except NoSignChange as exc:
        raise Inadmissible(str(exc)) from None
    if axis == "a_i":
        analytic = [r for r in critical_a_i_roots(params) if crit.bracket[0] <= r <= crit.bracket[1]]
        analytic = analytic[0] if analytic else None
    else:
        analytic = critical_m_i(params)
    return {"params": _params_dict(params), "axis": axis, "value": crit.value, "kind": crit.kind,
            "bracket": list(crit.bracket), "analytic": analytic}


HANDLERS = {
    "solve": cmd_solve,
    "ros": cmd_ros,
    "sweep": cmd_sweep,
    "classify": cmd_classify,
    "verify": cmd_verify,
    "critical": cmd_critical,
}

VERIFY_HEADER = ("m_r", "m_i", "a_r", "a_i", "v_or", "eq10a", "eq10b", "eq10a_scaled",
                 "eq10b_scaled", "cr_1", "cr_2", "flipped_depth_scaled")


def render(config: RunConfig, result) -> str:
    if config.command == "sweep":
        if config.format == "csv":
            return dumps_csv(SweepRow.FIELDS, (r.values() for r in result))
        rows = [dict(zip(SweepRow.FIELDS, r.values())) for r in result]
        return dumps_json({"params": _params_dict(config.system_parameters()),
                           "mode": config.mode, "rows": rows}) + "\n"
    if config.command == "verify" and config.format == "csv":
        return dumps_csv(VERIFY_HEADER, (
            (p.m_r, p.m_i, p.a_r, p.a_i, p.v_or, r.eq10a_residual, r.eq10b_residual,
             r.eq10a_scaled, r.eq10b_scaled, *r.cr_residual_pair,
             max(f.eq10a_scaled, f.eq10b_scaled))
            for p, r, f in result))
    if config.format == "csv":
        flat = {k: v for k, v in result.items() if k != "params"}
        flat.update({k: v for k, v in result["params"].items()})
        values = [(" ".join(format_number(x) for x in v) if isinstance(v, list) else v)
                  for v in flat.values()]
        return dumps_csv(list(flat), [values])
    return dumps_json(result) + "\n"


def run(config: RunConfig) -> int:
    try:
        result = HANDLERS[config.command](config)
        text = render(config, result)
        status = EXIT_OK
    except Inadmissible as exc:
        print(f"cmorse: {exc}", file=sys.stderr)
        if exc.document is None:
            return EXIT_DEGENERATE
        text = render(config, exc.document)
        status = EXIT_DEGENERATE
    except ConfigError as exc:
        print(f"cmorse: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ModelError as exc:
        print(f"cmorse: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    try:
        write_output(text, config.out)
    except OSError as exc:
        print(f"cmorse: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return status


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        config = resolve_config(args)
    except ConfigError as exc:
        print(f"cmorse: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.print_config:
        try:
            write_output(dumps_json(config.to_dict()) + "\n", config.out)
        except OSError as exc:
            print(f"cmorse: cannot write output: {exc}", file=sys.stderr)
            return EXIT_IO
        return EXIT_OK
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
