"""Command-line front end.

Four subcommands:

  * build      -- construct a family instance and print B, u, and derived
                  constants in canonical text (or JSON).
  * verify     -- run certification targets and emit the report array.
  * transform  -- apply the solution transform to a seed pair and print the
                  transformed solution with its certification verdict.
  * grid       -- sample a field on a rectangular grid as CSV or JSON.

Exit codes: 0 all good, 1 a verification check failed, 2 usage/config
errors.  Data goes to stdout (or --out), JSON diagnostics go to stderr.
Rational parameters cross the boundary as "p/q" strings so exact values
never pass through floats.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from darboux2d.darboux import potential_from_B, transform_solution
from darboux2d.families import (
    DEFAULT_PARAMS,
    PRESETS,
    build_family,
    build_preset,
    build_tanh,
    closed_potential,
)
from darboux2d.harmonic import HarmonicPair, conjugate, harmonic_basis
from darboux2d.polyrat import (
    ONE,
    ZERO,
    ExponentCapError,
    PoleEvaluationError,
    as_fraction,
    ratfn_eval,
    ratfn_to_str,
)
from darboux2d.verify import ALL_TARGETS, check_schrodinger, run_suite, targets_for_family

_FAMILY_TAGS = {"b0": "B0", "b1": "B1", "b2": "B2", "b3": "B3"}
_RATIONAL_KEYS = {
    "p0", "q0", "p1", "q1", "x0", "y0", "x1", "y1", "x2", "y2", "C",
}


class CliError(Exception):
    """Config/usage failure carrying a machine-readable error type."""

    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


@dataclass(frozen=True)
class CliConfig:
    subcommand: str
    family: str | None = None
    params: dict | None = None
    x_axis: tuple[float, float, int] | None = None
    y_axis: tuple[float, float, int] | None = None
    out: str | None = None
    format: str = "csv"
    seed: int = 0
    targets: tuple[str, ...] | None = None
    field: str = "u"
    seed_kind: str | None = None
    degree: int | None = None


def _parse_axis(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise CliError("invalid-grid", f"axis must be lo:hi:count, got {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError:
        raise CliError("invalid-grid", f"cannot parse axis {text!r}") from None
    if count < 1:
        raise CliError("invalid-grid", "axis count must be at least 1")
    if count == 1 and lo != hi:
        raise CliError("invalid-grid", "a single-point axis requires lo == hi")
    if count > 1 and not lo < hi:
        raise CliError("invalid-grid", "axis range must have lo < hi")
    return lo, hi, count


def _load_params(text: str | None) -> dict:
    if text is None:
        return {}
    blob = text
    if not text.lstrip().startswith("{"):
        try:
            blob = Path(text).read_text()
        except OSError as exc:
            raise CliError("invalid-params", f"cannot read params file: {exc}") from None
    try:
        raw = json.loads(blob)
    except json.JSONDecodeError as exc:
        raise CliError("invalid-params", f"params are not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise CliError("invalid-params", "params must be a JSON object")
    return raw


def _coerce_rational(key: str, value) -> Fraction:
    try:
        return as_fraction(value)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise CliError("invalid-params", f"parameter {key}: {exc}") from None


def _coerce_params(family: str, raw: dict) -> dict:
    params: dict = {}
    for key, value in raw.items():
        if family == "tanh":
            if key not in ("C1", "C2"):
                raise CliError("invalid-params", f"unknown tanh parameter {key!r}")
            if isinstance(value, (int, float)) and not isinstance(value, bool):
                params[key] = float(value)
            else:
                params[key] = float(_coerce_rational(key, value))
        elif key == "weights_choice":
            if not isinstance(value, list) or len(value) not in (2, 6):
                raise CliError(
                    "invalid-params", "weights_choice must be a list of 2 or 6 rationals"
                )
            params[key] = tuple(_coerce_rational(key, v) for v in value)
        elif key in _RATIONAL_KEYS:
            params[key] = _coerce_rational(key, value)
        else:
            raise CliError("invalid-params", f"unknown parameter {key!r}")
    return params


def _rational_instance(family: str, params: dict):
    """(RationalSolution, closed potential) for a family key or preset name."""
    if family in PRESETS:
        sol = build_preset(family, **params)
    elif family in _FAMILY_TAGS:
        tag = _FAMILY_TAGS[family]
        merged = dict(DEFAULT_PARAMS[tag])
        merged.update(params)
        sol = build_family(tag, merged)
    else:
        raise CliError("invalid-params", f"unknown family {family!r}")
    closed = closed_potential(sol.family_tag, _closed_args(sol))
    return sol, closed


def _closed_args(sol) -> dict:
    keys = {
        "B0": ("x0", "y0", "C"),
        "B1": ("x0", "y0", "x1", "y1", "C"),
        "B2": ("x1", "y1", "x2", "y2", "C"),
        "B3": ("x1", "y1", "C"),
    }[sol.family_tag]
    poles = sol.config.poles
    C = sol.config.C
    values: dict = {"C": C}
    if sol.family_tag == "B0":
        values.update({"x0": poles[0][0], "y0": poles[0][1]})
    elif sol.family_tag == "B1":
        values.update({"x0": poles[0][0], "y0": poles[0][1],
                       "x1": poles[1][0], "y1": poles[1][1]})
    elif sol.family_tag == "B2":
        values.update({"x1": poles[1][0], "y1": poles[1][1],
                       "x2": poles[2][0], "y2": poles[2][1]})
    else:
        values.update({"x1": poles[1][0], "y1": poles[1][1]})
    return {k: values[k] for k in keys}


def _tanh_constants(params: dict) -> tuple[float, float]:
    merged = dict(DEFAULT_PARAMS["tanh"])
    merged.update(params)
    C1, C2 = merged["C1"], merged["C2"]
    if C1 == 0:
        raise CliError("invalid-params", "C1 must be nonzero")
    return C1, C2


def _write_out(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_build(config: CliConfig) -> int:
    family = config.family
    raw = config.params or {}
    if family == "tanh":
        C1, C2 = _tanh_constants(_coerce_params("tanh", raw))
        b_text = f"B_s = tanh((x*y - {C2:g})/{C1:g})"
        u_text = (f"u = -2*(x^2 + y^2)/({C1:g}^2*cosh((x*y - {C2:g})/{C1:g})^2)")
        if config.format == "json":
            payload = {"family": "tanh", "B": b_text[len("B_s = "):],
                       "u": u_text[len("u = "):],
                       "constants": {"C1": f"{C1:g}", "C2": f"{C2:g}"}}
            _write_out(json.dumps(payload, sort_keys=True), config.out)
        else:
            _write_out("\n".join(["family: tanh", b_text, u_text]), config.out)
        return 0
    sol, closed = _rational_instance(family, _coerce_params(family, raw))
    lines = [f"family: {family}"]
    if sol.preset:
        lines[0] = f"family: {family} (preset {sol.preset})"
    lines.append(f"B = {ratfn_to_str(sol.B)}")
    lines.append(f"u = {ratfn_to_str(closed.u)}")
    for key in sorted(closed.constants):
        lines.append(f"{key} = {closed.constants[key]}")
    if config.format == "json":
        payload = {
            "family": family,
            "preset": sol.preset,
            "B": ratfn_to_str(sol.B),
            "u": ratfn_to_str(closed.u),
            "constants": {k: str(v) for k, v in sorted(closed.constants.items())},
        }
        _write_out(json.dumps(payload, sort_keys=True), config.out)
    else:
        _write_out("\n".join(lines), config.out)
    return 0


def cmd_verify(config: CliConfig) -> int:
    if config.targets:
        targets = list(config.targets)
    else:
        family = config.family or "all"
        try:
            targets = targets_for_family(family)
        except ValueError as exc:
            raise CliError("invalid-params", str(exc)) from None
    try:
        reports = run_suite(targets, config.seed)
    except ValueError as exc:
        raise CliError("invalid-params", str(exc)) from None
    payload = json.dumps([r.to_json() for r in reports], sort_keys=True, indent=2)
    _write_out(payload, config.out)
    return 0 if all(r.passed for r in reports) else 1


def _seed_pair(kind: str, degree: int | None) -> HarmonicPair:
    if kind == "const":
        return HarmonicPair(Y=ZERO, Q=ONE)
    if degree is None:
        raise CliError("invalid-params", f"seed kind {kind!r} requires --degree")
    if degree < 0:
        raise CliError("invalid-params", "degree must be non-negative")
    pair = harmonic_basis(degree)[degree]
    Y = pair.Y if kind == "re" else pair.Q
    return HarmonicPair(Y=Y, Q=conjugate(Y))


def cmd_transform(config: CliConfig) -> int:
    family = config.family
    if family == "tanh":
        raise CliError("invalid-params",
                       "transform needs a rational family (b0..b3 or a preset)")
    sol, _ = _rational_instance(family, _coerce_params(family, config.params or {}))
    pair = _seed_pair(config.seed_kind or "const", config.degree)
    out = transform_solution(sol.B, pair)
    report = check_schrodinger(out.Y_tilde, potential_from_B(sol.B))
    if config.format == "json":
        payload = {
            "family": family,
            "seed_kind": config.seed_kind or "const",
            "degree": config.degree,
            "Y_tilde": ratfn_to_str(out.Y_tilde),
            "schrodinger": report.verdict,
        }
        _write_out(json.dumps(payload, sort_keys=True), config.out)
    else:
        _write_out(
            f"Y_tilde = {ratfn_to_str(out.Y_tilde)}\nschrodinger: {report.verdict}",
            config.out,
        )
    return 0 if report.passed else 1


def _field_closure(config: CliConfig) -> Callable[[float, float], float]:
    family = config.family
    raw = config.params or {}
    if family == "tanh":
        C1, C2 = _tanh_constants(_coerce_params("tanh", raw))
        B_s, u = build_tanh(C1, C2)
        return B_s if config.field == "B" else u
    sol, closed = _rational_instance(family, _coerce_params(family, raw))
    target = sol.B if config.field == "B" else closed.u

    def sample(x: float, y: float) -> float:
        # exact rational evaluation at the (exactly representable) grid
        # point, rounded once: the emitted double re-evaluates bit-for-bit
        try:
            return float(ratfn_eval(target, (Fraction(x), Fraction(y))))
        except PoleEvaluationError:
            return math.nan

    return sample


def cmd_grid(config: CliConfig) -> int:
    f = _field_closure(config)
    x_lo, x_hi, nx = config.x_axis
    y_lo, y_hi, ny = config.y_axis
    xs = [x_lo + (x_hi - x_lo) * i / (nx - 1) if nx > 1 else x_lo for i in range(nx)]
    ys = [y_lo + (y_hi - y_lo) * j / (ny - 1) if ny > 1 else y_lo for j in range(ny)]
    nonfinite = 0
    rows = []
    for y in ys:  # y is the outer loop
        for x in xs:
            try:
                value = float(f(x, y))
            except (OverflowError, ZeroDivisionError):
                value = math.nan
            if math.isfinite(value):
                rows.append((x, y, value))
            else:
                nonfinite += 1
                rows.append((x, y, None))

    def fmt(v: float) -> str:
        return format(v, ".17g")

    if config.format == "json":
        body = ",\n".join(
            f"[{fmt(x)}, {fmt(y)}, {fmt(v) if v is not None else 'null'}]"
            for x, y, v in rows
        )
        text = "[\n" + body + "\n]"
    else:
        lines = ["x,y,value"]
        for x, y, v in rows:
            lines.append(f"{fmt(x)},{fmt(y)},{fmt(v) if v is not None else ''}")
        text = "\n".join(lines)
    _write_out(text, config.out)
    print(json.dumps({"points": len(rows), "nonfinite": nonfinite}), file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="darboux2d",
        description="Build, certify, transform, and sample exactly solvable "
                    "2D Schrodinger potentials.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p: argparse.ArgumentParser, need_family: bool = True):
        if need_family:
            p.add_argument("--family", required=True,
                           help="b0..b3, tanh, or a preset name (tsarev-1, tsarev-2)")
        p.add_argument("--params", default=None,
                       help="JSON object or path to one; rationals as 'p/q' strings")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p_build = sub.add_parser("build", help="construct a family instance")
    common(p_build)

    p_verify = sub.add_parser("verify", help="run certification targets")
    p_verify.add_argument("--family", default="all",
                          help="all, b0..b3, or tanh (selects targets)")
    p_verify.add_argument("--targets", default=None,
                          help="comma-separated explicit target names")
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--out", default=None)
    p_verify.add_argument("--format", choices=("csv", "json"), default="json")

    p_transform = sub.add_parser("transform", help="apply the solution transform")
    common(p_transform)
    p_transform.add_argument("--seed-kind", choices=("const", "re", "im"),
                             default="const")
    p_transform.add_argument("--degree", type=int, default=None)

    p_grid = sub.add_parser("grid", help="sample a field on a grid")
    common(p_grid)
    p_grid.add_argument("--x", required=True, help="lo:hi:count")
    p_grid.add_argument("--y", required=True, help="lo:hi:count")
    p_grid.add_argument("--field", choices=("u", "B"), default="u")
    return parser


def _config_from_args(args: argparse.Namespace) -> CliConfig:
    kwargs = {
        "subcommand": args.subcommand,
        "out": getattr(args, "out", None),
        "format": getattr(args, "format", "csv"),
        "seed": getattr(args, "seed", 0),
        "family": getattr(args, "family", None),
    }
    if getattr(args, "params", None) is not None:
        kwargs["params"] = _load_params(args.params)
    if getattr(args, "targets", None):
        kwargs["targets"] = tuple(t.strip() for t in args.targets.split(",") if t.strip())
    if args.subcommand == "grid":
        kwargs["x_axis"] = _parse_axis(args.x)
        kwargs["y_axis"] = _parse_axis(args.y)
        kwargs["field"] = args.field
    if args.subcommand == "transform":
        kwargs["seed_kind"] = args.seed_kind
        kwargs["degree"] = args.degree
    return CliConfig(**kwargs)


_DISPATCH = {
    "build": cmd_build,
    "verify": cmd_verify,
    "transform": cmd_transform,
    "grid": cmd_grid,
}


def _glue_axis_values(argv: list[str]) -> list[str]:
    # argparse mistakes "-2:2:5" for an option; fold axis values into
    # --flag=value form so negative ranges parse
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in ("--x", "--y") and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    raw_argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(_glue_axis_values(raw_argv))
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        config = _config_from_args(args)
        return _DISPATCH[config.subcommand](config)
    except CliError as exc:
        print(json.dumps({"error": exc.kind, "message": str(exc)}), file=sys.stderr)
        return 2
    except ExponentCapError as exc:
        print(json.dumps({"error": "exponent-cap-exceeded", "message": str(exc)}),
              file=sys.stderr)
        return 2
    except (ValueError, KeyError, TypeError) as exc:
        print(json.dumps({"error": "invalid-params", "message": str(exc)}),
              file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
