"""
Experiment orchestration: sharp-interface-limit sweeps over an epsilon
schedule, oscillation probes in the supercritical regime, and direct
energy minimization with an optional mass constraint.

Each sweep builds the recovery sequence of a piecewise +-1 jump function,
minimizes the energy from it, and records per-epsilon rows; the recovery
energies should approach (number of jumps) times the profile constant.
Runs persist as one JSON record plus a flat CSV for plotting.
"""

import csv
import hashlib
import io
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field as dc_field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ._solvers import damped_newton, lbfgs
from .energy import EnergyBreakdown, EnergyParams, evaluate, gradient
from .grids import Field, Grid, diff_operator, quadrature_weights
from .potentials import DoubleWell, get_potential
from .profiles import (
    JumpFunction,
    ProfileProblem,
    build_recovery,
    minimize_profile,
)

__all__ = [
    "SweepConfig",
    "EpsRow",
    "RunRecord",
    "MinimizeEnergyResult",
    "SupercriticalReport",
    "minimize_energy",
    "count_jump_clusters",
    "gamma_sweep",
    "supercritical_probe",
]


@dataclass(frozen=True)
class SweepConfig:
    """Configuration of one sharp-interface sweep."""

    n: int = 2
    lam: float = 0.0
    potential: str = "quartic"
    interval: Tuple[float, float] = (-4.0, 4.0)
    jumps: Tuple[float, ...] = (0.0,)
    left_value: float = -1.0
    eps_schedule: Tuple[float, ...] = (0.25, 0.125, 0.0625, 0.03125, 0.015625)
    points_per_eps_width: int = 32
    mass_constraint: Optional[float] = None
    seed: int = 0
    output_dir: Optional[str] = None
    profile_T: float = 5.0
    profile_points: int = 2001
    lambda_hat: Optional[float] = None
    accuracy_order: int = 4

    def __post_init__(self):
        eps = self.eps_schedule
        if any(e2 >= e1 for e1, e2 in zip(eps, eps[1:])):
            raise ValueError("eps schedule must be strictly decreasing")
        length = self.interval[1] - self.interval[0]
        if self.mass_constraint is not None and not (
            -length < self.mass_constraint < length
        ):
            raise ValueError("mass constraint must lie in (-|I|, |I|)")

    def jump_function(self) -> JumpFunction:
        return JumpFunction(
            self.interval[0], self.interval[1], self.jumps, self.left_value
        )

    def config_hash(self) -> str:
        payload = json.dumps(asdict(self), sort_keys=True, default=str)
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


@dataclass
class EpsRow:
    """One epsilon of a sweep."""

    epsilon: float
    e_min: float
    e_recovery: float
    jumps_detected: int
    converged: bool
    notes: str = ""


@dataclass
class RunRecord:
    """Persisted outcome of one sweep."""

    config_hash: str
    rows: List[EpsRow]
    lambda_hat: Optional[float]
    c_hat_lam: float
    started_at: str
    finished_at: str
    notes: List[str] = dc_field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(
            {
                "config_hash": self.config_hash,
                "rows": [asdict(r) for r in self.rows],
                "lambda_hat": self.lambda_hat,
                "c_hat_lam": self.c_hat_lam,
                "started_at": self.started_at,
                "finished_at": self.finished_at,
                "notes": self.notes,
            },
            indent=2,
        )

    def rows_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(
            ["epsilon", "E_min", "E_recovery", "jumps_detected", "converged"]
        )
        for r in self.rows:
            writer.writerow(
                [
                    f"{r.epsilon:.17g}",
                    f"{r.e_min:.17g}",
                    f"{r.e_recovery:.17g}",
                    r.jumps_detected,
                    r.converged,
                ]
            )
        return buf.getvalue()


@dataclass
class MinimizeEnergyResult:
    """Minimizer field, its energy breakdown, and run diagnostics."""

    field: Field
    breakdown: EnergyBreakdown
    converged: bool
    diverged: bool
    iterations: int
    gradient_norm: float
    message: str = ""


def _kkt_newton(fun, gfun, hess, q, z, maxiter=60, gtol=1e-8):
    """Damped Newton restricted to {v : q . v = const} via the bordered
    saddle system [[H + tau I, q^T], [q, 0]]; the extra unknown is the
    constraint multiplier and the step satisfies q . d = 0 exactly."""
    m = len(z)
    qcol = sp.csr_matrix(q.reshape(-1, 1))
    energy = fun(z)
    iterations = 0
    gnorm = np.inf
    for _ in range(maxiter):
        g = gfun(z)
        gnorm = float(np.abs(g).max())
        if gnorm < gtol:
            break
        H = hess(z)
        tau = 0.0
        d = None
        for _ in range(30):
            K = sp.bmat(
                [[H + tau * sp.eye(m), qcol], [qcol.T, None]], format="csc"
            )
            try:
                sol = spla.splu(K).solve(np.concatenate([-g, [0.0]]))
            except RuntimeError:
                tau = max(1e-8, 10.0 * tau)
                continue
            d = sol[:m]
            if float(g @ d) < 0 and np.all(np.isfinite(d)):
                break
            tau = max(1e-8, 10.0 * tau)
            d = None
        if d is None:
            break
        step, slope = 1.0, float(g @ d)
        accepted = False
        for _ in range(45):
            trial = z + step * d
            e_trial = fun(trial)
            if e_trial <= energy + 1e-4 * step * slope:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break
        if abs(energy - e_trial) <= 1e-14 * max(1.0, abs(energy)):
            z, energy = trial, e_trial
            iterations += 1
            gnorm = float(np.abs(gfun(z)).max())
            break
        z, energy = trial, e_trial
        iterations += 1
    else:
        gnorm = float(np.abs(gfun(z)).max())
    return z, iterations, gnorm, energy


def minimize_energy(
    n: int,
    eps: float,
    lam: float,
    init: Field,
    w: DoubleWell,
    mass: Optional[float] = None,
    gtol: float = 1e-7,
    maxiter: int = 2000,
    divergence_floor: Optional[float] = None,
    accuracy_order: int = 4,
) -> MinimizeEnergyResult:
    """Quasi-Newton minimization of the energy from a given initialization.

    The optional mass constraint fixes int_I u = mass: the initialization
    is shifted to the prescribed value and gradients are projected onto
    the zero-weighted-mean subspace, so every quasi-Newton step preserves
    the constraint; the Newton polish solves the bordered saddle system
    for the same reason.  Energies falling below the divergence floor
    abort the run with the "supercritical divergence" record; in the
    supercritical regime that is the expected outcome, not an error.
    """
    params = EnergyParams(n, eps, lam, accuracy_order)
    grid = init.grid
    q = quadrature_weights(grid, params.rule)

    u0 = init.values.copy()
    if mass is not None:
        u0 = u0 + (mass - float(q @ u0)) / float(q.sum())

    def fun(v):
        return evaluate(Field(grid, v), params, w).total

    def gfun(v):
        g = gradient(Field(grid, v), params, w).values
        if mass is not None:
            g = g - (float(q @ g) / float(q @ q)) * q
        return g

    dl = diff_operator(grid, n - 1, accuracy_order)
    dh = diff_operator(grid, n, accuracy_order)

    def gradient_floor(v):
        # roundoff scale of the assembled gradient (largest row of sums of
        # absolute terms): the accuracy limit of gfun itself, which grows
        # like eps_machine / h^(2n) through the stencil quadratic forms
        av = np.abs(v)
        scale = (
            eps ** (2 * n - 1)
            * 2.0
            * float(np.max(abs(dh.matrix.T) @ (q * (abs(dh.matrix) @ av))))
        )
        scale += (
            abs(lam)
            * eps ** (2 * n - 3)
            * 2.0
            * float(np.max(abs(dl.matrix.T) @ (q * (abs(dl.matrix) @ av))))
        )
        scale += float(
            np.max(np.abs(np.asarray(w.eval_derivative(v), float)) * q) / eps
        )
        return 8.0 * np.finfo(float).eps * scale

    polish = w.eval_second_derivative is not None
    warmup = min(400, maxiter) if polish else maxiter
    z, info = lbfgs(
        fun, gfun, u0, maxiter=warmup, gtol=gtol,
        divergence_floor=divergence_floor,
    )
    iters = info.iterations
    gnorm = info.gradient_norm
    diverged = info.diverged
    message = "supercritical divergence" if diverged else ""

    if not diverged and polish:
        d_low = diff_operator(grid, n - 1, accuracy_order)
        d_high = diff_operator(grid, n, accuracy_order)
        Qd = sp.diags(q)
        K_low = 2.0 * (d_low.matrix.T @ Qd @ d_low.matrix)
        K_high = 2.0 * (d_high.matrix.T @ Qd @ d_high.matrix)

        def hess(v):
            H = sp.diags(
                np.asarray(w.eval_second_derivative(v), dtype=float) * q / eps
            )
            return (
                H
                - lam * eps ** (2 * n - 3) * K_low
                + eps ** (2 * n - 1) * K_high
            )

        if mass is None:
            z, ninfo = damped_newton(fun, gfun, hess, z, maxiter=60, gtol=gtol)
            iters += ninfo.newton_iterations
            gnorm = ninfo.gradient_norm
            energy = ninfo.energy
        else:
            z, nit, gnorm, energy = _kkt_newton(
                fun, gfun, hess, q, z, maxiter=60, gtol=gtol
            )
            iters += nit
        if divergence_floor is not None and energy < divergence_floor:
            diverged = True
            message = "supercritical divergence"

    final = Field(grid, z)
    tol = max(gtol, gradient_floor(z))
    return MinimizeEnergyResult(
        field=final,
        breakdown=evaluate(final, params, w),
        converged=bool(gnorm < tol and not diverged),
        diverged=bool(diverged),
        iterations=int(iters),
        gradient_norm=float(gnorm),
        message=message,
    )


def count_jump_clusters(
    f: Field, eps: float, profile_T: float, threshold: float = 0.0
) -> int:
    """Number of phase jumps of a field: sign changes of (f - threshold)
    with changes closer than 4 * eps * T merged into one cluster, since a
    transition layer of width O(eps) may wiggle through zero repeatedly."""
    s = np.sign(f.values - threshold)
    x = f.grid.nodes()
    nz = s != 0
    xs, ss = x[nz], s[nz]
    flips = xs[1:][ss[1:] != ss[:-1]]
    if len(flips) == 0:
        return 0
    merge_width = 4.0 * eps * profile_T
    clusters = 1
    last = flips[0]
    for pos in flips[1:]:
        if pos - last > merge_width:
            clusters += 1
        last = pos
    return clusters


def _run_one_eps(cfg, jump_fn, profile_field, w, eps, floor):
    n, lam = cfg.n, cfg.lam
    T = cfg.profile_T
    notes = []
    try:
        rec = build_recovery(
            jump_fn, profile_field, eps, points_per_eps=cfg.points_per_eps_width
        )
    except ValueError as exc:
        return EpsRow(eps, np.nan, np.nan, -1, False, f"recovery failed: {exc}")
    params = EnergyParams(n, eps, lam, cfg.accuracy_order)
    e_rec = evaluate(rec, params, w).total
    res = minimize_energy(
        n,
        eps,
        lam,
        rec,
        w,
        mass=cfg.mass_constraint,
        divergence_floor=floor,
        accuracy_order=cfg.accuracy_order,
    )
    e_min = res.breakdown.total
    if res.diverged:
        notes.append("supercritical divergence")
    if e_min > e_rec + 1e-9 * max(1.0, abs(e_rec)):
        notes.append("min energy above recovery energy")
    jumps = count_jump_clusters(res.field, eps, T)
    if jumps != jump_fn.jump_count:
        notes.append(
            f"jump clusters {jumps} != configured {jump_fn.jump_count}"
        )
    return EpsRow(
        epsilon=eps,
        e_min=float(e_min),
        e_recovery=float(e_rec),
        jumps_detected=int(jumps),
        converged=bool(res.converged and not res.diverged),
        notes="; ".join(notes),
    )


def gamma_sweep(cfg: SweepConfig, threads: int = 1) -> RunRecord:
    """Run the full epsilon schedule for one jump configuration.

    For each epsilon: build the recovery sequence, evaluate it, minimize
    from it, count the thresholded minimizer's jump clusters.  Per-epsilon
    failures are recorded in the row notes and the sweep continues.  When
    cfg.output_dir is set the record is persisted as JSON + CSV.
    """
    started = time.strftime("%Y-%m-%dT%H:%M:%S")
    w = get_potential(cfg.potential)
    if cfg.lambda_hat is not None and cfg.lam > 0.5 * cfg.lambda_hat:
        raise ValueError(
            f"sweep requires lam <= 0.5 * lambda_hat = {0.5 * cfg.lambda_hat:.4g}"
        )
    jump_fn = cfg.jump_function()
    prob = ProfileProblem(
        cfg.n, cfg.lam, cfg.profile_T, cfg.profile_points, w, cfg.accuracy_order
    )
    prof = minimize_profile(prob)
    c_hat = prof.energy_estimate
    notes = []
    if not prof.converged:
        notes.append(
            f"profile gradient norm {prof.gradient_norm_final:.2e} above tol"
        )

    # divergence floor: -10^3 in units of the first (largest-eps) recovery energy
    eps0 = cfg.eps_schedule[0]
    try:
        rec0 = build_recovery(
            jump_fn, prof.minimizer, eps0, points_per_eps=cfg.points_per_eps_width
        )
        e_rec0 = evaluate(
            rec0, EnergyParams(cfg.n, eps0, cfg.lam, cfg.accuracy_order), w
        ).total
        floor = -1e3 * max(abs(e_rec0), 1e-6)
    except ValueError:
        floor = -1e3

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(
                pool.map(
                    lambda e: _run_one_eps(cfg, jump_fn, prof.minimizer, w, e, floor),
                    cfg.eps_schedule,
                )
            )
    else:
        rows = [
            _run_one_eps(cfg, jump_fn, prof.minimizer, w, e, floor)
            for e in cfg.eps_schedule
        ]

    target = jump_fn.jump_count * c_hat
    devs = [
        abs(r.e_recovery - target) for r in rows if np.isfinite(r.e_recovery)
    ]
    inversions = sum(1 for d1, d2 in zip(devs, devs[1:]) if d2 > d1 * (1 + 1e-9))
    if inversions > 1:
        notes.append(f"recovery deviation not monotone ({inversions} inversions)")

    record = RunRecord(
        config_hash=cfg.config_hash(),
        rows=rows,
        lambda_hat=cfg.lambda_hat,
        c_hat_lam=float(c_hat),
        started_at=started,
        finished_at=time.strftime("%Y-%m-%dT%H:%M:%S"),
        notes=notes,
    )
    if cfg.output_dir is not None:
        out = Path(cfg.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        stem = f"sweep_{record.config_hash}"
        (out / f"{stem}.json").write_text(record.to_json())
        (out / f"{stem}.csv").write_text(record.rows_csv())
    return record


@dataclass
class SupercriticalReport:
    """Per-lambda best energies over the fixed oscillatory candidate set."""

    n: int
    eps: float
    lambda_grid: List[float]
    best_energies: List[float]
    best_k: List[int]
    best_amplitude: List[float]
    free_min_energies: List[float]
    free_diverged: List[bool]
    sign_changes: List[int]
    onset_lambda: Optional[float]
    monotone: bool
    k_scaling: List[Tuple[int, float]]


def supercritical_probe(
    n: int,
    lambda_grid: Sequence[float],
    eps: float,
    w: DoubleWell,
    interval: Tuple[float, float] = (0.0, 1.0),
    points_per_eps_width: int = 32,
    k_max: int = 64,
    amplitudes: Sequence[float] = (0.6, 0.9, 1.0, 1.2, 1.5),
    free_minimization: bool = True,
    accuracy_order: int = 4,
) -> SupercriticalReport:
    """Scan a lambda grid with the fixed oscillatory ansatz family

        u_{k,A}(x) = clip(A sin(2 pi k (x - a)/|I|), -1, 1),

    k = 1..k_max, reporting the best candidate energy per lambda, the
    lambda at which it first goes negative, and the energy-vs-k profile at
    the largest lambda.  On the fixed candidate set the minimum energy is
    non-increasing in lambda exactly, because each candidate's energy is.
    Optionally each per-lambda winner seeds a free minimization with a
    divergence floor.
    """
    a, b = interval
    L = b - a
    num_points = int(round(L / (eps / points_per_eps_width))) + 1
    grid = Grid(a, b, num_points)
    x = grid.nodes()
    t = (x - a) / L

    candidates = []
    for k in range(1, k_max + 1):
        base = np.sin(2.0 * np.pi * k * t)
        for A in amplitudes:
            candidates.append((k, A, np.clip(A * base, -1.0, 1.0)))

    # lambda-independent parts: E(lam) = base - lam * concave_weight
    q = quadrature_weights(grid, "trapezoid")
    d_low = diff_operator(grid, n - 1, accuracy_order)
    d_high = diff_operator(grid, n, accuracy_order)
    parts = []
    for k, A, vals in candidates:
        pot = float(q @ np.asarray(w.eval(vals), dtype=float)) / eps
        high = eps ** (2 * n - 1) * float(q @ d_high(vals) ** 2)
        conc = eps ** (2 * n - 3) * float(q @ d_low(vals) ** 2)
        parts.append((pot + high, conc))

    best_energies, best_ks, best_As = [], [], []
    free_energies, free_div, signs = [], [], []
    for lam in lambda_grid:
        energies = [base - lam * conc for base, conc in parts]
        i = int(np.argmin(energies))
        k, A, vals = candidates[i]
        best_energies.append(float(energies[i]))
        best_ks.append(k)
        best_As.append(float(A))
        if free_minimization:
            floor = -1e3 * max(1.0, abs(best_energies[0]))
            res = minimize_energy(
                n,
                eps,
                lam,
                Field(grid, vals),
                w,
                divergence_floor=floor,
                maxiter=600,
                accuracy_order=accuracy_order,
            )
            free_energies.append(float(res.breakdown.total))
            free_div.append(bool(res.diverged))
            s = np.sign(res.field.values)
            signs.append(int(np.count_nonzero(s[1:] * s[:-1] < 0)))
        else:
            free_energies.append(np.nan)
            free_div.append(False)
            signs.append(0)

    onset = next(
        (lam for lam, e in zip(lambda_grid, best_energies) if e < 0), None
    )
    monotone = all(
        e2 <= e1 * (1 + 1e-12) + 1e-12
        for e1, e2 in zip(best_energies, best_energies[1:])
    )
    lam_last = lambda_grid[-1]
    k_curve = {}
    for (k, A, _), (base, conc) in zip(candidates, parts):
        e = base - lam_last * conc
        if k not in k_curve or e < k_curve[k]:
            k_curve[k] = e
    k_scaling = sorted((k, float(e)) for k, e in k_curve.items())

    return SupercriticalReport(
        n=n,
        eps=eps,
        lambda_grid=[float(l) for l in lambda_grid],
        best_energies=best_energies,
        best_k=best_ks,
        best_amplitude=best_As,
        free_min_energies=free_energies,
        free_diverged=free_div,
        sign_changes=signs,
        onset_lambda=onset,
        monotone=monotone,
        k_scaling=k_scaling,
    )
