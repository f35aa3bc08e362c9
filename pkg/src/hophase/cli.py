"""
Command-line front end.  Every subcommand prints a JSON summary to
stdout; with --out DIR the summary and any field artifacts (minimizer or
witness CSVs, sweep tables) are also written into DIR.

    hophase hermite       --n 3 --y "0.5,0,0" [--kind zeta|eta]
    hophase profile       --n 2 --lambda 0.017 [--T 10 --points 2001]
    hophase lambda-n      --n 2 [--starts 16 --seed 0 --points 501]
    hophase check-ineq    --which intlem [--count 500 --seed 0 ...]
    hophase minimize      --config cfg.json
    hophase gamma-sweep   --config cfg.json [--threads 4]
    hophase supercritical --config cfg.json

The three config-driven commands take a JSON file; unknown keys are
rejected so typos fail loudly.  See the README for the schemas.
"""

import argparse
import json
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Optional

import numpy as np

from .critical import LambdaOptions, estimate_lambda_n
from .energy import EnergyParams
from .experiments import (
    SweepConfig,
    gamma_sweep,
    minimize_energy,
    supercritical_probe,
)
from .grids import Field, Grid, field_from_csv, field_to_csv
from .hermite import endpoint_residuals, solve_eta, solve_zeta
from .inequalities import (
    GNParams,
    check_abstr,
    check_gagnir_interval,
    check_intlem,
    check_lower_bound_lemma,
    check_nirineq,
    ensemble_check,
)
from .potentials import get_potential
from .profiles import ProfileProblem, build_recovery, estimate_constants, minimize_profile
from .ensembles import random_field

__all__ = ["main"]


def _jsonable(obj):
    """json.dumps writes bare NaN/Infinity, which is not valid JSON; map
    non-finite floats to None so the output always parses."""
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        return float(obj) if np.isfinite(obj) else None
    if isinstance(obj, (np.integer, np.bool_)):
        return obj.item()
    return obj


def _emit(payload: dict, out: Optional[str], stem: str) -> None:
    text = json.dumps(_jsonable(payload), indent=2, default=str)
    print(text)
    if out is not None:
        d = Path(out)
        d.mkdir(parents=True, exist_ok=True)
        (d / f"{stem}.json").write_text(text + "\n")


def _write_field(f: Field, out: Optional[str], stem: str) -> Optional[str]:
    if out is None:
        return None
    d = Path(out)
    d.mkdir(parents=True, exist_ok=True)
    path = d / f"{stem}.csv"
    path.write_text(field_to_csv(f))
    return str(path)


def _load_config(path: str, allowed: set) -> dict:
    cfg = json.loads(Path(path).read_text())
    if not isinstance(cfg, dict):
        raise SystemExit("config must be a JSON object")
    if "lambda" in cfg:
        cfg["lam"] = cfg.pop("lambda")
    unknown = set(cfg) - allowed
    if unknown:
        raise SystemExit(f"unknown config keys: {sorted(unknown)}")
    return cfg


def _cmd_hermite(args) -> int:
    y = tuple(float(s) for s in args.y.split(","))
    solve = {"zeta": solve_zeta, "eta": solve_eta}[args.kind]
    p = solve(y)
    payload = {
        "n": p.n,
        "kind": p.kind,
        "data": list(y),
        "coefficients": [float(c) for c in p.exact_coefficients],
        "exact_coefficients": [str(c) for c in p.exact_coefficients],
        "max_endpoint_residual": float(endpoint_residuals(p).max()),
    }
    _emit(payload, args.out, f"hermite_{args.kind}_n{p.n}")
    return 0


def _cmd_profile(args) -> int:
    w = get_potential(args.potential)
    est = estimate_constants(
        args.n,
        args.lam,
        w,
        truncation_T=args.T,
        num_points=args.points,
        lambda_hat=args.lambda_hat,
        slack=args.slack,
    )
    payload = {
        "n": args.n,
        "lambda": args.lam,
        "lambda_hat": est.lambda_hat,
        "C_hat_0": est.c_hat_0,
        "C_hat_lam": est.c_hat_lam,
        "sandwich_ok": est.sandwich_ok,
        "slack": est.slack,
        "diagnostics": {
            "converged_0": est.result_0.converged,
            "converged_lam": est.result_lam.converged,
            "gradient_norm_0": est.result_0.gradient_norm_final,
            "gradient_norm_lam": est.result_lam.gradient_norm_final,
            "truncation_T": args.T,
            "num_points": args.points,
        },
        "minimizer_csv_path": _write_field(
            est.result_lam.minimizer, args.out, f"profile_n{args.n}_lam"
        ),
        "minimizer_lam0_csv_path": _write_field(
            est.result_0.minimizer, args.out, f"profile_n{args.n}_lam0"
        ),
    }
    _emit(payload, args.out, f"profile_n{args.n}")
    return 0


def _cmd_lambda_n(args) -> int:
    w = get_potential(args.potential)
    opts = LambdaOptions(
        num_points=args.points, seed=args.seed, n_random_starts=args.starts
    )
    est = estimate_lambda_n(args.n, w, opts)
    payload = {
        "n": args.n,
        "lambda_hat": est.value,
        "argmin_csv_path": _write_field(
            est.witness, args.out, f"lambda_argmin_n{args.n}"
        ),
        "per_start": est.per_start,
        "diagnostics": est.diagnostics,
    }
    _emit(payload, args.out, f"lambda_n{args.n}")
    return 0


def _cmd_check_ineq(args) -> int:
    w = get_potential(args.potential)
    which = args.which
    if which == "intlem":
        checker = lambda f: check_intlem(f, args.p, args.q, args.r)
    elif which == "nirineq":
        def checker(f, n=args.n, frac=args.sigma_frac, c=args.c_probe):
            return check_nirineq(f, n, frac * f.grid.length, c)
    elif which == "gagnir":
        theta = args.theta
        if theta is None:  # solve the dimension-balance relation for theta
            theta = (args.j + 1.0 / args.q - 1.0 / args.p) / (
                args.m + 1.0 / args.q - 1.0 / args.r
            )
        gp = GNParams(args.p, args.q, args.r, args.j, args.m, theta)
        c_probe = args.c_probe if args.c_probe > 0 else None
        checker = lambda f: check_gagnir_interval(f, gp, c_probe)
    elif which == "abstr":
        checker = lambda f: check_abstr(f, args.j, args.m, args.q, args.r, args.c_probe)
    elif which == "lowerbound":
        lam_hat = args.lambda_hat
        if lam_hat is None:
            lam_hat = estimate_lambda_n(args.n, w).value
        params = EnergyParams(args.n, args.epsilon, args.lam_frac * lam_hat)
        checker = lambda f: check_lower_bound_lemma(f, params, lam_hat, args.delta, w)
    else:  # pragma: no cover - argparse restricts choices
        raise SystemExit(f"unknown check: {which}")

    rep = ensemble_check(checker, which, args.count, args.seed)
    payload = {
        "which": rep.which,
        "count": rep.count,
        "seed": args.seed,
        "num_failed": rep.num_failed,
        "passed": rep.passed,
        "worst_ratio": rep.worst_ratio,
        "worst_index": rep.worst_index,
        "witness_description": rep.witness_description,
        "empirical_constant": rep.empirical_constant,
        "witness_csv_path": (
            _write_field(rep.witness, args.out, f"witness_{which}")
            if rep.witness is not None
            else None
        ),
    }
    _emit(payload, args.out, f"check_{which}")
    return 0


_MINIMIZE_KEYS = {
    "n", "epsilon", "lam", "potential", "interval", "num_points", "init",
    "jumps", "left_value", "mass", "gtol", "maxiter", "divergence_floor",
    "profile_T", "profile_points", "seed", "accuracy_order",
}


def _cmd_minimize(args) -> int:
    cfg = _load_config(args.config, _MINIMIZE_KEYS)
    n = int(cfg.get("n", 2))
    eps = float(cfg["epsilon"])
    lam = float(cfg.get("lam", 0.0))
    w = get_potential(cfg.get("potential", "quartic"))
    a, b = cfg.get("interval", (-4.0, 4.0))
    num_points = int(cfg.get("num_points", round((b - a) / (eps / 32)) + 1))
    grid = Grid(a, b, num_points)
    seed = args.seed if args.seed is not None else int(cfg.get("seed", 0))

    init_spec = cfg.get("init", "recovery")
    if init_spec == "recovery":
        from .profiles import JumpFunction

        jump_fn = JumpFunction(
            a, b, tuple(cfg.get("jumps", (0.0,))), cfg.get("left_value", -1.0)
        )
        prob = ProfileProblem(
            n, lam, cfg.get("profile_T", 5.0), cfg.get("profile_points", 2001), w
        )
        prof = minimize_profile(prob)
        init = build_recovery(jump_fn, prof.minimizer, eps)
    elif init_spec == "random":
        init = random_field(grid, np.random.default_rng(seed), "fourier")
    else:
        init = field_from_csv(Path(init_spec).read_text())

    res = minimize_energy(
        n,
        eps,
        lam,
        init,
        w,
        mass=cfg.get("mass"),
        gtol=cfg.get("gtol", 1e-7),
        maxiter=cfg.get("maxiter", 2000),
        divergence_floor=cfg.get("divergence_floor"),
        accuracy_order=cfg.get("accuracy_order", 4),
    )
    payload = {
        "n": n,
        "epsilon": eps,
        "lambda": lam,
        "energy": asdict(res.breakdown),
        "converged": res.converged,
        "diverged": res.diverged,
        "iterations": res.iterations,
        "gradient_norm": res.gradient_norm,
        "message": res.message,
        "num_points": res.field.grid.num_points,
        "minimizer_csv_path": _write_field(res.field, args.out, "minimizer"),
    }
    _emit(payload, args.out, "minimize")
    return 0


_SWEEP_KEYS = {
    "n", "lam", "potential", "interval", "jumps", "left_value",
    "eps_schedule", "points_per_eps_width", "mass_constraint", "seed",
    "output_dir", "profile_T", "profile_points", "lambda_hat",
    "accuracy_order",
}


def _cmd_gamma_sweep(args) -> int:
    cfg = _load_config(args.config, _SWEEP_KEYS)
    for key in ("interval", "jumps", "eps_schedule"):
        if key in cfg:
            cfg[key] = tuple(cfg[key])
    if args.seed is not None:
        cfg["seed"] = args.seed
    if args.out is not None:
        cfg["output_dir"] = args.out
    record = gamma_sweep(SweepConfig(**cfg), threads=args.threads)
    print(record.to_json())
    return 0


_SUPER_KEYS = {
    "n", "lambda_grid", "epsilon", "potential", "interval",
    "points_per_eps_width", "k_max", "amplitudes", "free_minimization",
    "accuracy_order",
}


def _cmd_supercritical(args) -> int:
    cfg = _load_config(args.config, _SUPER_KEYS)
    rep = supercritical_probe(
        n=int(cfg.get("n", 2)),
        lambda_grid=cfg["lambda_grid"],
        eps=float(cfg["epsilon"]),
        w=get_potential(cfg.get("potential", "quartic")),
        interval=tuple(cfg.get("interval", (0.0, 1.0))),
        points_per_eps_width=int(cfg.get("points_per_eps_width", 32)),
        k_max=int(cfg.get("k_max", 64)),
        amplitudes=tuple(cfg.get("amplitudes", (0.6, 0.9, 1.0, 1.2, 1.5))),
        free_minimization=bool(cfg.get("free_minimization", True)),
        accuracy_order=int(cfg.get("accuracy_order", 4)),
    )
    _emit(asdict(rep), args.out, f"supercritical_n{rep.n}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hophase",
        description="Higher-order phase-transition energies: profiles, "
        "critical constants, interpolation checks, sharp-interface sweeps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", default=None, help="directory for JSON/CSV artifacts")
        p.add_argument("--seed", type=int, default=None, help="RNG seed override")

    p = sub.add_parser("hermite", help="solve one coupling-polynomial system")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--y", required=True, help="comma-separated boundary data y_0..y_{n-1}")
    p.add_argument("--kind", choices=("zeta", "eta"), default="zeta")
    common(p)
    p.set_defaults(func=_cmd_hermite)

    p = sub.add_parser("profile", help="optimal-profile constants at lambda = 0 and lambda")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=0.0)
    p.add_argument("--potential", default="quartic")
    p.add_argument("--T", type=float, default=10.0, help="truncation half-width")
    p.add_argument("--points", type=int, default=2001)
    p.add_argument("--slack", type=float, default=0.02)
    p.add_argument("--lambda-hat", type=float, default=None)
    common(p)
    p.set_defaults(func=_cmd_profile)

    p = sub.add_parser("lambda-n", help="estimate the critical constant lambda_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--potential", default="quartic")
    p.add_argument("--starts", type=int, default=16)
    p.add_argument("--points", type=int, default=501)
    common(p)
    p.set_defaults(func=_cmd_lambda_n)
    p.set_defaults(seed=0)

    p = sub.add_parser("check-ineq", help="run one inequality check over an ensemble")
    p.add_argument(
        "--which",
        required=True,
        choices=("intlem", "nirineq", "gagnir", "abstr", "lowerbound"),
    )
    p.add_argument("--count", type=int, default=500)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--potential", default="quartic")
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--q", type=float, default=2.0)
    p.add_argument("--r", type=float, default=2.0)
    p.add_argument("--j", type=int, default=1)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--theta", type=float, default=None,
                   help="interpolation weight; derived from the balance "
                   "relation when omitted")
    p.add_argument("--sigma-frac", type=float, default=1.0,
                   help="sigma as a fraction of each interval length")
    p.add_argument("--c-probe", type=float, default=0.25)
    p.add_argument("--lambda-hat", type=float, default=None)
    p.add_argument("--lam-frac", type=float, default=0.3)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--epsilon", type=float, default=0.25)
    common(p)
    p.set_defaults(func=_cmd_check_ineq, seed=0)

    p = sub.add_parser("minimize", help="minimize one energy from a JSON config")
    p.add_argument("--config", required=True)
    common(p)
    p.set_defaults(func=_cmd_minimize)

    p = sub.add_parser("gamma-sweep", help="sharp-interface sweep from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--threads", type=int, default=1)
    common(p)
    p.set_defaults(func=_cmd_gamma_sweep)

    p = sub.add_parser("supercritical", help="oscillation probe from a JSON config")
    p.add_argument("--config", required=True)
    common(p)
    p.set_defaults(func=_cmd_supercritical)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
