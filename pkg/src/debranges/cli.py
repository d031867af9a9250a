"""Command-line front end.

Reads a JSON run configuration, executes one command and writes CSV or
structured-text output. Complex numbers in the configuration are
two-element arrays [re, im].

Commands:
  kernel      evaluate the derived-space kernel K_z(w) on a grid / point list
  structure   evaluate the derived structure function on a grid / point list
  verify      run the identity checks for the configured space and zeros
  pw-example  run the sinc-kernel determinant identities

Exit codes: 0 success / all checks passed, 1 verification failure,
2 configuration error, 3 numerical breakdown (dependent evaluators).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ConfigError, DeBrangesError, DomainError, LinearDependenceError
from .kernels import PaleyWiener, PolynomialHB, StructureFunction
from .sigma import ZeroSequence, canonicalize
from .structure import derive
from .gram import build
from .verify import (
    CHECK_DESCRIPTIONS,
    CheckReport,
    PW_EXAMPLE_SAMPLES,
    check_pw_example,
    base_tolerance,
    run_config_checks,
)

COMMANDS = ("kernel", "structure", "verify", "pw-example")
FORMATS = ("csv", "structured-text")


@dataclass
class RunConfig:
    space: StructureFunction
    sigma: ZeroSequence
    command: str
    grid: Optional[dict] = None
    eval_points: Optional[list[complex]] = None
    kernel_z: complex = 0j
    seed: int = 0
    tolerances: dict = field(default_factory=dict)
    out_path: str = ""
    out_format: str = ""


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def _require(cond: bool, fld: str, message: str) -> None:
    if not cond:
        raise ConfigError(fld, message)


def _as_complex(fld: str, value) -> complex:
    _require(
        isinstance(value, (list, tuple)) and len(value) == 2,
        fld,
        "complex numbers are two-element arrays [re, im]",
    )
    re, im = value
    _require(
        isinstance(re, (int, float)) and not isinstance(re, bool)
        and isinstance(im, (int, float)) and not isinstance(im, bool),
        fld,
        "re and im must be numbers",
    )
    _require(math.isfinite(re) and math.isfinite(im), fld, "re and im must be finite")
    return complex(re, im)


def _parse_space(raw) -> StructureFunction:
    _require(isinstance(raw, dict), "space", "must be an object")
    family = raw.get("family")
    if family == "paley-wiener":
        _require("x" in raw, "space.x", "missing exponential type")
        x = raw["x"]
        _require(
            isinstance(x, (int, float)) and not isinstance(x, bool) and x > 0,
            "space.x",
            "must be a positive number",
        )
        try:
            return PaleyWiener(float(x))
        except ValueError as exc:
            raise ConfigError("space.x", str(exc)) from None
    if family == "polynomial-hb":
        roots_raw = raw.get("roots")
        _require(isinstance(roots_raw, list) and roots_raw, "space.roots", "must be a non-empty array")
        roots = [_as_complex(f"space.roots[{i}]", r) for i, r in enumerate(roots_raw)]
        try:
            return PolynomialHB(tuple(roots))
        except ValueError as exc:
            raise ConfigError("space.roots", str(exc)) from None
    raise ConfigError("space.family", "must be 'paley-wiener' or 'polynomial-hb'")


def _parse_grid(raw) -> dict:
    _require(isinstance(raw, dict), "grid", "must be an object")
    keys = ("re_min", "re_max", "re_steps", "im_min", "im_max", "im_steps")
    for key in keys:
        _require(key in raw, f"grid.{key}", "missing")
    grid = {}
    for key in ("re_min", "re_max", "im_min", "im_max"):
        val = raw[key]
        _require(
            isinstance(val, (int, float)) and not isinstance(val, bool) and math.isfinite(val),
            f"grid.{key}",
            "must be a finite number",
        )
        grid[key] = float(val)
    for key in ("re_steps", "im_steps"):
        val = raw[key]
        _require(isinstance(val, int) and not isinstance(val, bool) and val >= 1,
                 f"grid.{key}", "must be an integer >= 1")
        grid[key] = val
    _require(grid["re_min"] <= grid["re_max"], "grid.re_min", "re_min must not exceed re_max")
    _require(grid["im_min"] <= grid["im_max"], "grid.im_min", "im_min must not exceed im_max")
    return grid


def load_config(path: str) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            raw = json.load(handle)
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"invalid JSON: {exc}") from None
    _require(isinstance(raw, dict), "config", "top level must be an object")

    command = raw.get("command")
    _require(command in COMMANDS, "command", f"must be one of {', '.join(COMMANDS)}")

    space = _parse_space(raw.get("space"))

    sigma_raw = raw.get("sigma", [])
    _require(isinstance(sigma_raw, list), "sigma", "must be an array of [re, im] pairs")
    sigma = canonicalize([_as_complex(f"sigma[{i}]", p) for i, p in enumerate(sigma_raw)])

    grid = _parse_grid(raw["grid"]) if "grid" in raw and raw["grid"] is not None else None
    pts_raw = raw.get("eval_points")
    eval_points = None
    if pts_raw is not None:
        _require(isinstance(pts_raw, list) and pts_raw, "eval_points", "must be a non-empty array")
        eval_points = [_as_complex(f"eval_points[{i}]", p) for i, p in enumerate(pts_raw)]

    if command in ("kernel", "structure"):
        _require(
            (grid is None) != (eval_points is None),
            "grid",
            f"the {command} command requires exactly one of grid / eval_points",
        )

    kernel_z = _as_complex("z", raw["z"]) if "z" in raw else 0j

    seed = raw.get("seed", 0)
    _require(
        isinstance(seed, int) and not isinstance(seed, bool) and 0 <= seed < 2**64,
        "seed",
        "must be an unsigned 64-bit integer",
    )

    tolerances = raw.get("tolerances", {})
    _require(isinstance(tolerances, dict), "tolerances", "must be an object")
    for key, val in tolerances.items():
        _require(
            isinstance(val, (int, float)) and not isinstance(val, bool) and val >= 0,
            f"tolerances.{key}",
            "must be a nonnegative number",
        )

    out_raw = raw.get("output", {})
    _require(isinstance(out_raw, dict), "output", "must be an object")
    out_path = out_raw.get("path", "")
    _require(isinstance(out_path, str), "output.path", "must be a string")
    default_format = "csv" if command in ("kernel", "structure") else "structured-text"
    out_format = out_raw.get("format", default_format)
    _require(out_format in FORMATS, "output.format", f"must be one of {', '.join(FORMATS)}")

    return RunConfig(
        space=space,
        sigma=sigma,
        command=command,
        grid=grid,
        eval_points=eval_points,
        kernel_z=kernel_z,
        seed=seed,
        tolerances=dict(tolerances),
        out_path=out_path,
        out_format=out_format,
    )


def _grid_points(grid: dict) -> list[complex]:
    res = np.linspace(grid["re_min"], grid["re_max"], grid["re_steps"])
    ims = np.linspace(grid["im_min"], grid["im_max"], grid["im_steps"])
    # deterministic order: imaginary rows outer, real part fastest
    return [complex(re, im) for im in ims for re in res]


def _value_lines(header: list[str], rows: list[list[float]], fmt: str) -> str:
    if fmt == "csv":
        lines = [",".join(header)]
        lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    else:
        lines = ["  ".join(header)]
        lines.extend("  ".join(_fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _report_lines(reports: list[CheckReport], fmt: str) -> str:
    passed = sum(1 for r in reports if r.passed)
    total = len(reports)
    summary = f"PASS {passed}/{total}" if passed == total else f"FAIL {total - passed}/{total}"
    if fmt == "csv":
        lines = ["check_id,samples,max_rel_residual,tolerance,condition_estimate,passed,note"]
        for r in reports:
            note = r.note.replace('"', "'")
            lines.append(
                f'{r.check_id},{r.samples},{_fmt(r.max_rel_residual)},{_fmt(r.tolerance)},'
                f'{_fmt(r.condition_estimate)},{str(r.passed).lower()},"{note}"'
            )
    else:
        lines = []
        for r in reports:
            lines.append(
                f"check={r.check_id} samples={r.samples} "
                f"max_rel_residual={_fmt(r.max_rel_residual)} tolerance={_fmt(r.tolerance)} "
                f"condition_estimate={_fmt(r.condition_estimate)} passed={str(r.passed).lower()}"
                + (f" note={r.note!r}" if r.note else "")
            )
    lines.append(summary)
    return "\n".join(lines) + "\n"


def _write(path: str, text: str) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def run(config: RunConfig) -> int:
    """Execute one parsed configuration; returns the process exit code."""
    points = config.eval_points if config.eval_points is not None else (
        _grid_points(config.grid) if config.grid is not None else None
    )

    if config.command == "kernel":
        gs = build(config.space, config.sigma)
        z = config.kernel_z
        rows = []
        for w in points:
            val = gs.sigma_kernel(z, w)
            rows.append([z.real, z.imag, w.real, w.imag, val.real, val.imag])
        _write(
            config.out_path,
            _value_lines(["re_z", "im_z", "re_w", "im_w", "re_val", "im_val"], rows, config.out_format),
        )
        return 0

    if config.command == "structure":
        gs = build(config.space, config.sigma)
        ssf = derive(gs)
        rows = []
        for w in points:
            val = ssf.eval("E", w)
            rows.append([w.real, w.imag, val.real, val.imag])
        _write(
            config.out_path,
            _value_lines(["re_w", "im_w", "re_val", "im_val"], rows, config.out_format),
        )
        return 0

    if config.command == "verify":
        reports = run_config_checks(
            config.space, config.sigma, seed=config.seed, tolerances=config.tolerances
        )
        _write(config.out_path, _report_lines(reports, config.out_format))
        return 0 if all(r.passed for r in reports) else 1

    # pw-example
    if not isinstance(config.space, PaleyWiener):
        raise ConfigError("space.family", "the pw-example command requires the paley-wiener family")
    if any(k != 0 for k in config.sigma.confluence):
        raise ConfigError("sigma", "the pw-example command requires distinct zeros")
    samples = config.eval_points if config.eval_points else list(PW_EXAMPLE_SAMPLES)
    try:
        reports = check_pw_example(
            config.space.x,
            config.sigma.points,
            samples,
            base_tolerance("pw-det-diag", config.tolerances),
        )
    except DomainError as exc:
        raise ConfigError("eval_points", str(exc)) from None
    _write(config.out_path, _report_lines(reports, config.out_format))
    return 0 if all(r.passed for r in reports) else 1


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="debranges",
        description="Kernels and derived structure functions for spaces of "
        "entire functions with imposed zeros.",
    )
    parser.add_argument("--config", help="path to the JSON run configuration")
    parser.add_argument("--output", help="output path, overrides the configuration")
    parser.add_argument("--seed", type=int, help="sampling seed, overrides the configuration")
    parser.add_argument(
        "--list-checks", action="store_true", help="print the check identifiers and exit"
    )
    args = parser.parse_args(argv)

    if args.list_checks:
        for check_id, description in CHECK_DESCRIPTIONS.items():
            print(f"{check_id}: {description}")
        return 0

    try:
        if not args.config:
            raise ConfigError("--config", "a configuration file is required")
        config = load_config(args.config)
        if args.output is not None:
            config.out_path = args.output
        if args.seed is not None:
            if not 0 <= args.seed < 2**64:
                raise ConfigError("--seed", "must be an unsigned 64-bit integer")
            config.seed = args.seed
        return run(config)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except LinearDependenceError as exc:
        print(
            f"numerical breakdown: {exc} (condition estimate {exc.condition_estimate:.3e})",
            file=sys.stderr,
        )
        return 3
    except DeBrangesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
