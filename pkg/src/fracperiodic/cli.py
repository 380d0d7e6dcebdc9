"""Command-line front end.

Every operation is exposed as a subcommand with file-based configuration:
flags override a flat ``key=value`` config file, function inputs travel as
PeriodicFunction JSON, and tabular outputs are CSV with stable headers and
floats printed to 17 significant digits.  Exit codes: 0 success, 1 domain
error (solvability/identity violations and friends), 2 usage error.
"""

import argparse
import json
import math
import os
import sys

import numpy as np

from . import bifurcation, diagnostics, extension, linear, semilinear, spectral
from .errors import FracPeriodicError
from .spectral import DoubleWell, FracOrder, PeriodicFunction

__all__ = ["main", "run"]

JOBS_ENV = "FRACPERIODIC_JOBS"


def _fmt(x):
    return format(float(x), ".17g")


def _write_csv(path, header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) if isinstance(v, (int, float, np.floating)) else str(v)
                              for v in row))
    text = "\n".join(lines) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _load_function(path):
    with open(path) as fh:
        return PeriodicFunction.from_dict(json.load(fh))


def _save_function(u, path):
    if path in (None, "-"):
        sys.stdout.write(u.to_json() + "\n")
    else:
        with open(path, "w") as fh:
            fh.write(u.to_json() + "\n")


def _potential(spec_str):
    """'quartic', 'quartic:SCALE', or 'poly:c0,c1,...' -> DoubleWell."""
    if spec_str == "quartic":
        return DoubleWell.quartic()
    if spec_str.startswith("quartic:"):
        return DoubleWell.quartic(float(spec_str.split(":", 1)[1]))
    if spec_str.startswith("poly:"):
        coeffs = [float(t) for t in spec_str.split(":", 1)[1].split(",")]
        return DoubleWell.from_poly(coeffs)
    raise ValueError(f"unknown potential spec {spec_str!r}")


def _float_list(text):
    return [float(t) for t in text.split(",") if t]


# ---------------------------------------------------------------------------
# option registry: one source of truth for flags, config keys and --dry-run

_COMMON = [
    ("config", str, None, "flat key=value config file; flags override it"),
    ("out", str, None, "output path (default stdout)"),
]

_COMMANDS = {
    "apply": [
        ("s", float, None, "fractional order in (0,1)"),
        ("input", str, None, "PeriodicFunction JSON path"),
    ],
    "eig": [
        ("s", float, None, "fractional order"),
        ("T", float, None, "period"),
        ("count", int, 4, "number of lowest eigenvalues"),
        ("N", int, 32, "Galerkin truncation"),
        ("k", str, None, "coefficient k(x) JSON (default 0)"),
    ],
    "solve-linear": [
        ("s", float, None, "fractional order"),
        ("k", str, None, "coefficient k(x) JSON"),
        ("g", str, None, "right-hand side JSON"),
        ("N", int, 32, "Galerkin truncation"),
        ("mu", float, None, "shift: solve (L + mu)u = g coercively; omit for Fredholm"),
    ],
    "solve": [
        ("s", float, None, "fractional order"),
        ("T", float, None, "period"),
        ("potential", str, "quartic", "quartic | quartic:SCALE | poly:c0,c1,..."),
        ("symmetry", str, "odd", "odd | even"),
        ("N", int, 64, "truncation"),
        ("seed", int, 0, "multistart seed"),
    ],
    "min-period": [
        ("s", float, None, "fractional order"),
        ("potential", str, "quartic", "potential spec"),
        ("T-hi", float, None, "upper bracket period"),
        ("tol", float, 0.05, "bisection tolerance"),
        ("jobs", int, None, "parallel workers (default $" + JOBS_ENV + " or 1)"),
    ],
    "continue": [
        ("s", float, None, "fractional order"),
        ("potential", str, "quartic", "potential spec"),
        ("lambda-start", float, 1.0, "start near this bifurcation point"),
        ("steps", int, 50, "branch points to trace"),
        ("ds", float, 0.05, "arclength step"),
        ("points-dir", str, None, "directory for per-point solution JSON"),
    ],
    "t0-bound": [
        ("s", float, None, "fractional order"),
        ("potential", str, "quartic", "potential spec"),
        ("lambda-grid", str, None, "comma list of lambda values in (1, 4]"),
    ],
    "hamiltonian": [
        ("s", float, None, "fractional order"),
        ("T", float, None, "period"),
        ("potential", str, "quartic", "potential spec"),
        ("symmetry", str, "odd", "odd | even"),
        ("n-samples", int, 64, "x sample count"),
        ("tol", float, 1e-5, "max allowed deviation"),
    ],
    "modica": [
        ("s", float, None, "fractional order"),
        ("T", float, None, "period"),
        ("potential", str, "quartic", "potential spec"),
        ("nx", int, 64, "grid points in x"),
        ("ny", int, 64, "grid points in y"),
        ("tol", float, 1e-5, "inequality slack"),
    ],
    "energy-scan": [
        ("s", float, None, "fractional order"),
        ("potential", str, "quartic", "potential spec"),
        ("T-list", str, "16,32,64,128", "comma list of periods"),
        ("seed", int, 0, "multistart seed"),
        ("jobs", int, None, "parallel workers (default $" + JOBS_ENV + " or 1)"),
    ],
    "test-bound": [
        ("s", float, None, "fractional order"),
        ("T", float, None, "period"),
        ("d", float, 1.0, "interface layer width"),
        ("potential", str, "quartic", "potential spec"),
    ],
    "extend": [
        ("s", float, None, "fractional order"),
        ("input", str, None, "trace PeriodicFunction JSON"),
        ("method", str, "bessel", "bessel | poisson"),
        ("points", str, None, "semicolon list of x,y pairs (default small grid)"),
    ],
}

_REQUIRED = {
    "apply": {"s", "input"},
    "eig": {"s", "T"},
    "solve-linear": {"s", "k", "g"},
    "solve": {"s", "T"},
    "min-period": {"s", "T-hi"},
    "continue": {"s"},
    "t0-bound": {"s"},
    "hamiltonian": {"s", "T"},
    "modica": {"s", "T"},
    "energy-scan": {"s"},
    "test-bound": {"s", "T"},
    "extend": {"s", "input"},
}


class UsageError(Exception):
    pass


def _resolve(cmd, args):
    """Merge flag values over config-file values over defaults.

    Returns the canonical dict {key: value}; unknown config keys are
    rejected and missing required keys are usage errors.
    """
    opts = _COMMANDS[cmd] + _COMMON
    known = {name: (typ, default) for name, typ, default, _ in opts}
    resolved = {name: default for name, (_, default) in known.items()}
    cfg_path = getattr(args, "config", None)
    if cfg_path:
        with open(cfg_path) as fh:
            for ln, raw in enumerate(fh, 1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise UsageError(f"{cfg_path}:{ln}: expected key=value, got {line!r}")
                key, val = (t.strip() for t in line.split("=", 1))
                if key not in known:
                    raise UsageError(f"{cfg_path}:{ln}: unknown key {key!r}")
                typ, _ = known[key]
                resolved[key] = typ(val) if typ is not str else val
    for name in known:
        flag_val = getattr(args, name.replace("-", "_"), None)
        if flag_val is not None:
            resolved[name] = flag_val
    missing = [k for k in _REQUIRED[cmd] if resolved.get(k) is None]
    if missing:
        raise UsageError(f"{cmd}: missing required option(s): " + ", ".join(sorted(missing)))
    return resolved


def _jobs(cfg):
    if cfg.get("jobs") is not None:
        return cfg["jobs"]
    return int(os.environ.get(JOBS_ENV, "1"))


# ---------------------------------------------------------------------------
# command bodies


def _cmd_apply(cfg):
    u = _load_function(cfg["input"])
    _save_function(spectral.frac_laplacian(u, FracOrder(cfg["s"])), cfg["out"])


def _cmd_eig(cfg):
    frac = FracOrder(cfg["s"])
    k = _load_function(cfg["k"]) if cfg["k"] else PeriodicFunction.constant(cfg["T"], 0.0)
    op = linear.GalerkinOperator(frac=frac, T=cfg["T"], N=cfg["N"], k=k)
    pairs = linear.eigenvalue_set(op, cfg["count"])
    _write_csv(cfg["out"], ["index", "eigenvalue"],
               [(i, lam) for i, (lam, _) in enumerate(pairs)])


def _cmd_solve_linear(cfg):
    frac = FracOrder(cfg["s"])
    k = _load_function(cfg["k"])
    g = _load_function(cfg["g"])
    op = linear.GalerkinOperator(frac=frac, T=k.T, N=cfg["N"], k=k)
    if cfg["mu"] is not None:
        res = linear.solve_coercive(op, cfg["mu"], g)
        print(f"stability_constant={_fmt(res.stability_constant)} residual={_fmt(res.residual)}",
              file=sys.stderr)
        _save_function(res.u, cfg["out"])
    else:
        res = linear.solve_fredholm(op, g)
        print(f"kernel_dim={res.kernel.dim} unique={res.unique}", file=sys.stderr)
        _save_function(res.solution, cfg["out"])


def _cmd_solve(cfg):
    frac = FracOrder(cfg["s"])
    well = _potential(cfg["potential"])
    sc = semilinear.SolveConfig(symmetry=cfg["symmetry"], N=cfg["N"], seed=cfg["seed"])
    sol = semilinear.minimize_energy(cfg["T"], frac, well, sc)
    print(f"classification={sol.classification} residual={_fmt(sol.residual)} "
          f"energy={_fmt(sol.energy)} amplitude={_fmt(sol.amplitude)}", file=sys.stderr)
    _save_function(sol.u, cfg["out"])


def _cmd_min_period(cfg):
    frac = FracOrder(cfg["s"])
    well = _potential(cfg["potential"])
    est = semilinear.find_min_period(frac, well, cfg["T-hi"], tol=cfg["tol"], jobs=_jobs(cfg))
    bound = 2.0 * math.pi * (-float(well.f2(0.0))) ** (-1.0 / (2.0 * frac.s))
    _write_csv(cfg["out"], ["estimate", "bound", "tol"], [(est, bound, cfg["tol"])])


def _cmd_continue(cfg):
    frac = FracOrder(cfg["s"])
    well = _potential(cfg["potential"])
    br = bifurcation.continue_branch(frac, well, cfg["lambda-start"], cfg["steps"], cfg["ds"])
    print(f"bifurcation_lambda={_fmt(br.bifurcation_lambda)} direction={br.direction}",
          file=sys.stderr)
    _write_csv(cfg["out"], ["lambda", "amplitude", "residual", "sigma_min"],
               [(p.lam, p.amplitude, p.residual, p.sigma_min) for p in br.points])
    if cfg["points-dir"]:
        os.makedirs(cfg["points-dir"], exist_ok=True)
        for i, p in enumerate(br.points):
            _save_function(p.u, os.path.join(cfg["points-dir"], f"point_{i:04d}.json"))


def _cmd_t0_bound(cfg):
    frac = FracOrder(cfg["s"])
    well = _potential(cfg["potential"])
    grid = _float_list(cfg["lambda-grid"]) if cfg["lambda-grid"] else None
    rep = bifurcation.verify_T0_bound(frac, well, lambda_grid=grid)
    print(f"bound={_fmt(rep.bound)} min_period={_fmt(rep.min_period)}", file=sys.stderr)
    _write_csv(cfg["out"], ["lambda", "period", "amplitude", "residual"],
               [(e.lam, e.period, e.amplitude, e.residual_rescaled) for e in rep.entries])


def _solution_for(cfg, frac, well):
    sc = semilinear.SolveConfig(symmetry=cfg.get("symmetry", "even") or "even",
                                N=max(48, int(1.5 * cfg["T"])))
    return semilinear.minimize_energy(cfg["T"], frac, well, sc)


def _cmd_hamiltonian(cfg):
    frac = FracOrder(cfg["s"])
    well = _potential(cfg["potential"])
    sc = semilinear.SolveConfig(symmetry=cfg["symmetry"], N=max(48, int(1.5 * cfg["T"])))
    sol = semilinear.minimize_energy(cfg["T"], frac, well, sc)
    rep = diagnostics.hamiltonian_check(sol, frac, well, n_samples=cfg["n-samples"],
                                        tol=cfg["tol"])
    print(f"C_T={_fmt(rep.c_t)} max_deviation={_fmt(rep.max_deviation)}", file=sys.stderr)
    fu = well.f(sol.u(rep.x))
    _write_csv(cfg["out"], ["x", "w", "F_u", "deviation"],
               [(x, v + f, f, v - rep.c_t) for x, v, f in zip(rep.x, rep.values, fu)])


def _cmd_modica(cfg):
    frac = FracOrder(cfg["s"])
    well = _potential(cfg["potential"])
    sol = _solution_for(cfg, frac, well)
    rep = diagnostics.modica_check(sol, frac, well, nx=cfg["nx"], ny=cfg["ny"], tol=cfg["tol"])
    print(f"C_hat={_fmt(rep.c_hat)} lower_bound={_fmt(rep.c_hat_lower)} "
          f"argmax=({_fmt(rep.argmax[0])},{_fmt(rep.argmax[1])})", file=sys.stderr)
    rows = [(x, y, rep.v_hat[j, i]) for j, y in enumerate(rep.y) for i, x in enumerate(rep.x)]
    _write_csv(cfg["out"], ["x", "y", "v_hat"], rows)


def _cmd_energy_scan(cfg):
    frac = FracOrder(cfg["s"])
    well = _potential(cfg["potential"])
    rep = diagnostics.energy_scan(frac, well, _float_list(cfg["T-list"]),
                                  jobs=_jobs(cfg), seed=cfg["seed"])
    print(f"regime={rep.regime} slope={_fmt(rep.slope)} ratio={_fmt(rep.ratio)} "
          f"sigma={_fmt(rep.sigma)}", file=sys.stderr)
    rows = []
    for i, ((T, J), sg) in enumerate(zip(rep.entries, rep.sigma_values)):
        sub = np.array(rep.entries[: i + 1])
        slope = (float(np.polyfit(np.log(sub[:, 0]), np.log(sub[:, 1]), 1)[0])
                 if i > 0 else float("nan"))
        rows.append((T, J, slope, sg))
    _write_csv(cfg["out"], ["T", "J", "slope_so_far", "sigma"], rows)


def _cmd_test_bound(cfg):
    frac = FracOrder(cfg["s"])
    well = _potential(cfg["potential"])
    rep = diagnostics.test_function_bound(frac, cfg["T"], cfg["d"], well)
    rows = [(name, val, bnd) for name, val, bnd in rep.regions()]
    rows.append(("gagliardo_total", rep.gagliardo_total, float("nan")))
    rows.append(("f_integral", rep.f_integral, float("nan")))
    rows.append(("total", rep.total, float("nan")))
    rows.append(("j_bound", rep.j_bound, float("nan")))
    _write_csv(cfg["out"], ["region", "value", "bound"], rows)


def _cmd_extend(cfg):
    frac = FracOrder(cfg["s"])
    u = _load_function(cfg["input"])
    build = extension.extend_bessel if cfg["method"] == "bessel" else extension.extend_poisson
    if cfg["method"] not in ("bessel", "poisson"):
        raise UsageError("method must be bessel or poisson")
    field = build(u, frac)
    if cfg["points"]:
        pts = [tuple(float(t) for t in pair.split(",")) for pair in cfg["points"].split(";") if pair]
    else:
        pts = [(x, y) for x in np.linspace(0, u.T, 5, endpoint=False)
               for y in (0.0, 0.5, 1.0, 2.0)]
    rows = [(x, y, float(field.value(x, y))) for x, y in pts]
    _write_csv(cfg["out"], ["x", "y", "U"], rows)


_BODIES = {
    "apply": _cmd_apply,
    "eig": _cmd_eig,
    "solve-linear": _cmd_solve_linear,
    "solve": _cmd_solve,
    "min-period": _cmd_min_period,
    "continue": _cmd_continue,
    "t0-bound": _cmd_t0_bound,
    "hamiltonian": _cmd_hamiltonian,
    "modica": _cmd_modica,
    "energy-scan": _cmd_energy_scan,
    "test-bound": _cmd_test_bound,
    "extend": _cmd_extend,
}


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="fracperiodic",
        description="periodic fractional Laplacian toolbox",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd, opts in _COMMANDS.items():
        p = sub.add_parser(cmd)
        for name, typ, _default, help_text in opts + _COMMON:
            p.add_argument("--" + name, dest=name.replace("-", "_"), type=typ,
                           default=None, help=help_text)
        p.add_argument("--dry-run", action="store_true",
                       help="print the resolved config and exit")
    return parser


def run(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _resolve(args.command, args)
    except (UsageError, OSError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    if args.dry_run:
        for key in sorted(cfg):
            print(f"{key}={cfg[key]}")
        return 0
    try:
        _BODIES[args.command](cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except FracPeriodicError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
