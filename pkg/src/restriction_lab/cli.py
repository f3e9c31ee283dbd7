"""Batch command-line front end.

Every command validates its whole configuration up front, runs exactly one
computation, writes exactly one result file (CSV or JSON) with the resolved
configuration embedded, and prints a one-line summary.  Exit codes: 0 on
success, 2 on validation errors, 3 when a computation produces non-finite
numbers.  Identical configurations produce bit-identical output files.
"""

from __future__ import annotations

import os


def _configure_threads() -> None:
    """Honor RESTRICTION_LAB_THREADS (0 = automatic) before numpy is loaded."""
    raw = os.environ.get("RESTRICTION_LAB_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        raise SystemExit("RESTRICTION_LAB_THREADS must be an integer")
    if n > 0:
        for var in (
            "OMP_NUM_THREADS",
            "OPENBLAS_NUM_THREADS",
            "MKL_NUM_THREADS",
            "NUMEXPR_NUM_THREADS",
        ):
            os.environ.setdefault(var, str(n))


_configure_threads()

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .caps import enumerate_caps, max_resolvable_level
from .capdecomp import chip_decompose
from .constants import alpha, beta, scaling_exponents
from .exponents import scaling_line_q
from .extend import extend_sphere
from .extremize import noisy_constant_init, pinfty_norm, power_iterate
from .fields import PlaneField, SphereField, field_to_json, lebesgue_norm
from .grids import SPHERE_MEASURE, make_sphere_grid, make_uniform_grid
from .profiles import (
    ConcentrationSchedule,
    antipodal_limit_check,
    conjugate_pair,
    sphere_parab_residual,
)


class ValidationError(Exception):
    """Configuration rejected before any computation started."""


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.15g}"
    return str(x)


def _parse_range(text: str) -> list:
    """Parse 'start:stop:step' into an increasing inclusive grid."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValidationError(f"range must be start:stop:step, got {text!r}")
    try:
        start, stop, step = (float(v) for v in parts)
    except ValueError as exc:
        raise ValidationError(f"non-numeric range {text!r}") from exc
    if step <= 0:
        raise ValidationError(f"range step must be positive, got {step}")
    if stop < start:
        raise ValidationError(f"range must be increasing, got {text!r}")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(n)]


def _parse_floats(text: str) -> list:
    try:
        return [float(v) for v in text.split(",") if v != ""]
    except ValueError as exc:
        raise ValidationError(f"expected comma-separated numbers, got {text!r}") from exc


def _parse_ints(text: str) -> list:
    try:
        return [int(v) for v in text.split(",") if v != ""]
    except ValueError as exc:
        raise ValidationError(f"expected comma-separated integers, got {text!r}") from exc


def _lambda_schedule(powers: str) -> ConcentrationSchedule:
    bounds = _parse_ints(powers) if ":" not in powers else None
    if bounds is None:
        parts = powers.split(":")
        if len(parts) != 2:
            raise ValidationError("lambda-powers must be 'k1:k2' or a comma list of exponents")
        lo, hi = int(parts[0]), int(parts[1])
        if hi < lo:
            raise ValidationError("lambda-powers must be increasing (scales decreasing)")
        bounds = list(range(lo, hi + 1))
    return ConcentrationSchedule(tuple(2.0**-k for k in bounds))


def _check_output(path_text: str) -> Path:
    path = Path(path_text)
    if path.parent and not path.parent.is_dir():
        raise ValidationError(f"output directory {path.parent} does not exist")
    return path


def _require_finite(obj, context: str) -> None:
    def walk(v):
        if isinstance(v, dict):
            for item in v.values():
                walk(item)
        elif isinstance(v, (list, tuple)):
            for item in v:
                walk(item)
        elif isinstance(v, float) and not math.isfinite(v):
            raise FloatingPointError(f"non-finite value in {context}")

    walk(obj)


def _write_json(path: Path, config: dict, results, diagnostics: dict) -> None:
    doc = {"config": config, "results": results, "diagnostics": diagnostics}
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _write_csv(path: Path, config: dict, header: list, rows: list) -> None:
    lines = [f"# {key}={_fmt(value)}" for key, value in sorted(config.items())]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def _emit(args, config, header_rows=None, json_payload=None) -> str:
    """Write the single result artifact in the requested format."""
    path = args.output
    if args.format == "csv":
        if header_rows is None:
            raise ValidationError("this command only supports --format json")
        header, rows = header_rows
        _write_csv(path, config, header, rows)
    else:
        results, diagnostics = json_payload
        _write_json(path, config, results, diagnostics)
    return str(path)


def _gaussian_plane(halfwidth: float, count: int, a: float) -> PlaneField:
    grid = make_uniform_grid(1, [halfwidth], [count])
    xi = grid.axes[0]
    return PlaneField(grid, np.exp(-a * xi**2))


# ---------------------------------------------------------------- commands


def _cmd_alpha_table(args) -> str:
    d = args.d
    p_values = _parse_range(args.p_grid)
    upper = 2.0 * (d + 1) / d
    for p in p_values:
        if not (1.0 < p < upper):
            raise ValidationError(f"p={p} outside (1, {upper}) for d={d}")
    config = vars_config(args, ["d", "p_grid", "t_tol"])
    rows = []
    for p in p_values:
        q, _, _ = scaling_exponents(p, d)
        res = alpha(p, q, t_tol=args.t_tol)
        b = beta(p, q)
        rows.append((p, q, res.value, res.argmax_t, b, b - res.value))
    _require_finite([list(r) for r in rows], "alpha-table")
    header = ["p", "q", "alpha", "argmax_t", "beta", "gap"]
    json_rows = [dict(zip(header, row)) for row in rows]
    return _emit(args, config, (header, rows), (json_rows, {"rows": len(rows)}))


def _cmd_beta_table(args) -> str:
    d = args.d
    p_values = _parse_range(args.p_grid)
    upper = 2.0 * (d + 1) / d
    for p in p_values:
        if not (1.0 < p < upper):
            raise ValidationError(f"p={p} outside (1, {upper}) for d={d}")
    config = vars_config(args, ["d", "p_grid"])
    rows = [(p, scaling_line_q(p, d), beta(p, scaling_line_q(p, d))) for p in p_values]
    _require_finite([list(r) for r in rows], "beta-table")
    header = ["p", "q", "beta"]
    json_rows = [dict(zip(header, row)) for row in rows]
    return _emit(args, config, (header, rows), (json_rows, {"rows": len(rows)}))


def _cmd_compare_alpha_beta(args) -> str:
    d = args.d
    p_values = _parse_floats(args.p_list)
    upper = 2.0 * (d + 1) / d
    for p in p_values:
        if not (1.0 < p < upper):
            raise ValidationError(f"p={p} outside (1, {upper}) for d={d}")
    config = vars_config(args, ["d", "p_list"])
    results = []
    for p in p_values:
        q, _, _ = scaling_exponents(p, d)
        res = alpha(p, q)
        b = beta(p, q)
        results.append(
            {
                "p": p,
                "q": q,
                "alpha": res.value,
                "argmax_t": res.argmax_t,
                "beta": b,
                "gap": b - res.value,
                "equal_within_1e8": abs(b - res.value) < 1e-8,
            }
        )
    _require_finite(results, "compare-alpha-beta")
    header = ["p", "q", "alpha", "argmax_t", "beta", "gap"]
    rows = [tuple(r[k] for k in header) for r in results]
    return _emit(args, config, (header, rows), (results, {}))


def _cmd_profile_converge(args) -> str:
    if args.d != 1:
        raise ValidationError("profile-converge currently supports d=1 only")
    schedule = _lambda_schedule(args.lambda_powers)
    if not (0.0 <= args.t <= 1.0):
        raise ValidationError(f"t must lie in [0,1], got {args.t}")
    q, _, _ = scaling_exponents(args.p, args.d)
    config = vars_config(
        args,
        ["d", "p", "t", "gaussian_a", "lambda_powers", "plane_halfwidth", "plane_count",
         "box_halfwidth", "box_count"],
    )
    config["q"] = q
    phi = _gaussian_plane(args.plane_halfwidth, args.plane_count, args.gaussian_a)
    pair = conjugate_pair(phi, args.t)
    schedule.check_support(pair.grid)
    box = make_uniform_grid(2, [args.box_halfwidth] * 2, [args.box_count] * 2)
    residuals = [
        sphere_parab_residual(pair, lam, box, args.p, q) for lam in schedule.lambdas
    ]
    results = {
        "lambdas": list(schedule.lambdas),
        "residuals": residuals,
        "strictly_decreasing": all(b < a for a, b in zip(residuals, residuals[1:])),
    }
    _require_finite(results, "profile-converge")
    return _emit(args, config, None, (results, {"final_residual": residuals[-1]}))


def _cmd_antipodal_limit(args) -> str:
    if args.d != 1:
        raise ValidationError("antipodal-limit currently supports d=1 only")
    schedule = _lambda_schedule(args.lambda_powers)
    if not (0.0 <= args.t <= 1.0):
        raise ValidationError(f"t must lie in [0,1], got {args.t}")
    halfwidths = _parse_floats(args.ybox_halfwidths)
    counts = _parse_ints(args.ybox_counts)
    if len(halfwidths) != 2 or len(counts) != 2:
        raise ValidationError("ybox-halfwidths and ybox-counts need exactly 2 entries")
    q, _, _ = scaling_exponents(args.p, args.d)
    config = vars_config(
        args,
        ["d", "p", "t", "gaussian_a", "lambda_powers", "plane_halfwidth", "plane_count",
         "ybox_halfwidths", "ybox_counts", "theta_nodes"],
    )
    config["q"] = q
    phi = _gaussian_plane(args.plane_halfwidth, args.plane_count, args.gaussian_a)
    pair = conjugate_pair(phi, args.t)
    ybox = make_uniform_grid(2, halfwidths, counts)
    report = antipodal_limit_check(pair, schedule, ybox, args.p, q, theta_nodes=args.theta_nodes)
    results = report.to_json_dict()
    _require_finite(results, "antipodal-limit")
    diag = {
        "sphere_resolutions": list(report.sphere_resolutions),
        "final_rel_dev": abs(report.lhs[-1] - report.rhs_theta_avg) / report.rhs_theta_avg,
    }
    return _emit(args, config, None, (results, diag))


def _cmd_chip_decompose(args) -> str:
    if args.steps < 1:
        raise ValidationError("steps must be >= 1")
    if not (1.0 <= args.p < math.inf):
        raise ValidationError("p must be finite and >= 1")
    config = vars_config(args, ["d", "resolution", "p", "steps", "seed", "min_level"])
    grid = make_sphere_grid(args.d, args.resolution)
    rng = np.random.default_rng(args.seed)
    values = rng.standard_normal(grid.size) + 1j * rng.standard_normal(grid.size)
    f = SphereField(grid, values)
    top = max_resolvable_level(grid)
    caps = enumerate_caps(args.d, args.min_level, top)
    config["max_level"] = top
    dec = chip_decompose(f, args.p, args.steps, caps)
    results = dec.to_json_dict()
    _require_finite(results, "chip-decompose")
    header = ["step", "axis", "level", "cell", "chip_norm_p", "threshold"]
    rows = [tuple(row[k] for k in header) for row in results["chips"]]
    return _emit(args, config, (header, rows), (results, {}))


def _cmd_extremize(args) -> str:
    if args.q <= args.p:
        raise ValidationError(f"need q > p, got p={args.p}, q={args.q}")
    config = vars_config(
        args,
        ["d", "p", "q", "resolution", "box_halfwidth", "box_count", "seed", "noise",
         "max_iters", "stall_tol", "init"],
    )
    grid = make_sphere_grid(args.d, args.resolution)
    box = make_uniform_grid(args.d + 1, [args.box_halfwidth] * (args.d + 1), [args.box_count] * (args.d + 1))
    if args.init == "constant":
        init = noisy_constant_init(grid, args.p, seed=args.seed, noise=args.noise)
    else:
        rng = np.random.default_rng(args.seed)
        init = SphereField(grid, rng.standard_normal(grid.size) + 1j * rng.standard_normal(grid.size))
    q = math.inf if args.q == float("inf") else args.q
    report = power_iterate(
        init, args.p, q, box, max_iters=args.max_iters, stall_tol=args.stall_tol, seed=args.seed
    )
    results = report.to_json_dict()
    if not math.isinf(q):
        _require_finite(results, "extremize")
    if args.save_field:
        Path(args.save_field).write_text(field_to_json(report.final_field))
    diag = {"iterations": len(report.ratio_history), "modulation_center": report.modulation_center.tolist()}
    return _emit(args, config, None, (results, diag))


def _cmd_pinfty_check(args) -> str:
    if args.box_count % 2 == 0:
        raise ValidationError("box-count must be odd so the lattice contains the origin")
    config = vars_config(args, ["d", "p", "resolution", "box_halfwidth", "box_count"])
    exact, extremizer = pinfty_norm(args.p, args.d, grid=make_sphere_grid(args.d, args.resolution))
    box = make_uniform_grid(
        args.d + 1, [args.box_halfwidth] * (args.d + 1), [args.box_count] * (args.d + 1)
    )
    u = extend_sphere(extremizer, box)
    estimate = float(np.abs(u.values).max())
    results = {
        "exact": exact,
        "estimate": estimate,
        "difference": abs(exact - estimate),
        "sphere_measure": SPHERE_MEASURE[args.d],
    }
    _require_finite(results, "pinfty-check")
    return _emit(args, config, None, (results, {}))


def _cmd_bessel_check(args) -> str:
    from scipy.special import j0

    config = vars_config(args, ["resolution", "points", "rmax", "seed"])
    grid = make_sphere_grid(1, args.resolution)
    f = SphereField(grid, np.ones(grid.size, dtype=complex))
    rng = np.random.default_rng(args.seed)
    radii = args.rmax * rng.random(args.points)
    angles = 2.0 * math.pi * rng.random(args.points)
    points = np.stack([radii * np.cos(angles), radii * np.sin(angles)], axis=-1)
    from .extend import extend_sphere_at

    values = extend_sphere_at(f, points)
    reference = 2.0 * math.pi * j0(radii)
    errors = np.abs(values - reference)
    results = {"max_abs_error": float(errors.max()), "points": int(args.points)}
    _require_finite(results, "bessel-check")
    return _emit(args, config, None, (results, {}))


def vars_config(args, keys: list) -> dict:
    config = {key: getattr(args, key.replace("-", "_")) for key in keys}
    config["command"] = args.command
    config["format"] = args.format
    config["version"] = __version__
    return config


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="restriction-lab",
        description="Numerical experiments for sphere extension operators",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--output", required=True, help="result file path")
        sp.add_argument("--format", choices=("csv", "json"), default="json")

    sp = sub.add_parser("alpha-table", help="alpha/beta comparison along a p grid")
    sp.add_argument("--d", type=int, choices=(1, 2), default=1)
    sp.add_argument("--p-grid", required=True, help="start:stop:step")
    sp.add_argument("--t-tol", type=float, default=1e-10)
    common(sp)
    sp.set_defaults(func=_cmd_alpha_table, format="csv")

    sp = sub.add_parser("beta-table", help="beta along a p grid on the scaling line")
    sp.add_argument("--d", type=int, choices=(1, 2), default=1)
    sp.add_argument("--p-grid", required=True, help="start:stop:step")
    common(sp)
    sp.set_defaults(func=_cmd_beta_table, format="csv")

    sp = sub.add_parser("compare-alpha-beta", help="alpha vs beta at listed p values")
    sp.add_argument("--d", type=int, choices=(1, 2), default=1)
    sp.add_argument("--p-list", required=True, help="comma-separated p values")
    common(sp)
    sp.set_defaults(func=_cmd_compare_alpha_beta)

    sp = sub.add_parser("profile-converge", help="two-carrier model residual along a scale schedule")
    sp.add_argument("--d", type=int, default=1)
    sp.add_argument("--p", type=float, default=2.0)
    sp.add_argument("--t", type=float, default=0.0)
    sp.add_argument("--gaussian-a", type=float, default=1.0)
    sp.add_argument("--lambda-powers", default="3:7", help="k1:k2 for scales 2^-k")
    sp.add_argument("--plane-halfwidth", type=float, default=3.99)
    sp.add_argument("--plane-count", type=int, default=401)
    sp.add_argument("--box-halfwidth", type=float, default=20.0)
    sp.add_argument("--box-count", type=int, default=81)
    common(sp)
    sp.set_defaults(func=_cmd_profile_converge)

    sp = sub.add_parser("antipodal-limit", help="norm of concentrating pairs vs circle average")
    sp.add_argument("--d", type=int, default=1)
    sp.add_argument("--p", type=float, default=2.0)
    sp.add_argument("--t", type=float, default=1.0)
    sp.add_argument("--gaussian-a", type=float, default=1.0)
    sp.add_argument("--lambda-powers", default="5:7")
    sp.add_argument("--plane-halfwidth", type=float, default=3.99)
    sp.add_argument("--plane-count", type=int, default=401)
    sp.add_argument("--ybox-halfwidths", default="8,6")
    sp.add_argument("--ybox-counts", default="161,81")
    sp.add_argument("--theta-nodes", type=int, default=256)
    common(sp)
    sp.set_defaults(func=_cmd_antipodal_limit)

    sp = sub.add_parser("chip-decompose", help="greedy cap decomposition of a seeded random field")
    sp.add_argument("--d", type=int, choices=(1, 2), default=1)
    sp.add_argument("--resolution", type=int, default=512)
    sp.add_argument("--p", type=float, default=2.0)
    sp.add_argument("--steps", type=int, default=8)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--min-level", type=int, default=2)
    common(sp)
    sp.set_defaults(func=_cmd_chip_decompose)

    sp = sub.add_parser("extremize", help="power-iteration search for the ratio maximizer")
    sp.add_argument("--d", type=int, choices=(1, 2), default=1)
    sp.add_argument("--p", type=float, default=2.0)
    sp.add_argument("--q", type=float, default=6.0)
    sp.add_argument("--resolution", type=int, default=512)
    sp.add_argument("--box-halfwidth", type=float, default=20.0)
    sp.add_argument("--box-count", type=int, default=129)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--noise", type=float, default=0.01)
    sp.add_argument("--max-iters", type=int, default=500)
    sp.add_argument("--stall-tol", type=float, default=1e-10)
    sp.add_argument("--init", choices=("constant", "random"), default="constant")
    sp.add_argument("--save-field", default=None)
    common(sp)
    sp.set_defaults(func=_cmd_extremize)

    sp = sub.add_parser("pinfty-check", help="sup-norm extension of the constant extremizer")
    sp.add_argument("--d", type=int, choices=(1, 2), default=1)
    sp.add_argument("--p", type=float, default=2.0)
    sp.add_argument("--resolution", type=int, default=512)
    sp.add_argument("--box-halfwidth", type=float, default=20.0)
    sp.add_argument("--box-count", type=int, default=41)
    common(sp)
    sp.set_defaults(func=_cmd_pinfty_check)

    sp = sub.add_parser("bessel-check", help="extension of the constant on S^1 vs 2 pi J0")
    sp.add_argument("--resolution", type=int, default=512)
    sp.add_argument("--points", type=int, default=100)
    sp.add_argument("--rmax", type=float, default=20.0)
    sp.add_argument("--seed", type=int, default=0)
    common(sp)
    sp.set_defaults(func=_cmd_bessel_check)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        args.output = _check_output(args.output)
        path = args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FloatingPointError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    print(f"{args.command}: wrote {path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
