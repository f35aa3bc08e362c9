"""
Estimation of the critical interpolation constant: the largest lambda_n
for which

    lambda_n int_I (u^(n-1))^2 <= |I|^(-(2n-2)) int_I W(u) + |I|^2 int_I (u^(n))^2

holds on every bounded interval.  Both sides scale like sigma^(3-2n) under
u -> u(./sigma), so the quotient

    Q[u] = (|I|^(-(2n-2)) int W(u) + |I|^2 int (u^(n))^2) / int (u^(n-1))^2

is scale invariant and lambda_n = inf Q.  The estimator minimizes Q over
fields on the normalized interval (0,1); any candidate bounds lambda_n
from above, so the reported lambda_hat_n is an upper bound.
"""

from dataclasses import dataclass, field as dc_field
from math import factorial
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.optimize import minimize as scipy_minimize

from .ensembles import random_field
from .grids import Field, Grid, diff_operator, quadrature_weights
from .potentials import DoubleWell

__all__ = [
    "DENOMINATOR_FLOOR",
    "QuotientResult",
    "LambdaOptions",
    "LambdaEstimate",
    "SubcriticalReport",
    "quotient",
    "subdivided_quotient",
    "estimate_lambda_n",
    "verify_subcritical",
]

#: fields with int (u^(n-1))^2 at or below this are rejected as degenerate
DENOMINATOR_FLOOR = 1e-12


@dataclass(frozen=True)
class QuotientResult:
    """Value and parts of the interpolation quotient for one field."""

    value: float
    numerator_parts: Tuple[float, float]
    denominator: float
    argmin_field: Field


def _quotient_parts(u: Field, n: int, w: DoubleWell, accuracy_order: int, rule: str):
    q = quadrature_weights(u.grid, rule)
    d_low = diff_operator(u.grid, n - 1, accuracy_order)
    d_high = diff_operator(u.grid, n, accuracy_order)
    L = u.grid.length
    # sums of nonnegative terms: quadratic-form evaluations can go negative
    # by roundoff near the degenerate corner u ~ const in a well
    pot = L ** (-(2 * n - 2)) * float(q @ np.asarray(w.eval(u.values), dtype=float))
    high = L**2 * float(q @ d_high(u.values) ** 2)
    den = float(q @ d_low(u.values) ** 2)
    return pot, high, den


def quotient(
    u: Field,
    n: int,
    w: DoubleWell,
    accuracy_order: int = 4,
    rule: str = "trapezoid",
) -> QuotientResult:
    """Q[u] on the field's own interval; raises on degenerate denominator."""
    if n < 2:
        raise ValueError("quotient requires n >= 2")
    pot, high, den = _quotient_parts(u, n, w, accuracy_order, rule)
    if den <= DENOMINATOR_FLOOR:
        raise ValueError(
            "quotient undefined: int (u^(n-1))^2 = "
            f"{den:.3e} <= {DENOMINATOR_FLOOR:.0e}"
        )
    return QuotientResult(
        value=(pot + high) / den,
        numerator_parts=(pot, high),
        denominator=den,
        argmin_field=u,
    )


def subdivided_quotient(
    u: Field, n: int, w: DoubleWell, accuracy_order: int = 4, rule: str = "trapezoid"
) -> float:
    """Truncated real-line form: unit-length normalization regardless of
    the actual interval, matching the subdivision of a long interval into
    unit pieces (each contributing with |I_i| = 1 weights)."""
    q = quadrature_weights(u.grid, rule)
    d_low = diff_operator(u.grid, n - 1, accuracy_order)
    d_high = diff_operator(u.grid, n, accuracy_order)
    pot = float(q @ np.asarray(w.eval(u.values), dtype=float))
    high = float(q @ d_high(u.values) ** 2)
    den = float(q @ d_low(u.values) ** 2)
    if den <= DENOMINATOR_FLOOR:
        raise ValueError("quotient undefined: degenerate denominator")
    return (pot + high) / den


# ---------------------------------------------------------------------------
# lambda_hat estimation
# ---------------------------------------------------------------------------


@dataclass
class LambdaOptions:
    """Knobs for `estimate_lambda_n`."""

    num_points: int = 501
    seed: int = 0
    n_random_starts: int = 16
    maxiter: int = 3000
    poly_degree: int = 10
    poly_starts: int = 8
    newton_polish: bool = True
    accuracy_order: int = 4


@dataclass
class LambdaEstimate:
    """Best quotient found, its witness field, and per-start diagnostics."""

    value: float
    witness: Field
    n: int
    per_start: List[float] = dc_field(default_factory=list)
    diagnostics: dict = dc_field(default_factory=dict)


def _poly_stage(n: int, w: DoubleWell, opts: LambdaOptions):
    """Global search over monomial-coefficient space with Gauss-Legendre
    integrals (exact for polynomial potentials); cheap and independent of
    the grid discretization, used to seed the grid refinement."""
    deg = opts.poly_degree
    nodes, wts = np.polynomial.legendre.leggauss(2 * deg + 2)
    nodes = 0.5 * (nodes + 1.0)
    wts = 0.5 * wts
    ncoef = deg + 1

    def basis(k):
        B = np.zeros((ncoef, len(nodes)))
        for j in range(k, ncoef):
            B[j] = factorial(j) // factorial(j - k) * nodes ** (j - k)
        return B

    B0, Bn1, Bn = basis(0), basis(n - 1), basis(n)

    def value_grad(c):
        p = c @ B0
        pn1 = c @ Bn1
        pn = c @ Bn
        D = wts @ pn1**2
        if D <= DENOMINATOR_FLOOR:
            return np.inf, np.zeros_like(c)
        N = wts @ np.asarray(w.eval(p), dtype=float) + wts @ pn**2
        Q = N / D
        dN = B0 @ (wts * np.asarray(w.eval_derivative(p), dtype=float)) + 2.0 * (
            Bn @ (wts * pn)
        )
        dD = 2.0 * (Bn1 @ (wts * pn1))
        return Q, (dN - Q * dD) / D

    rng = np.random.default_rng(opts.seed)
    starts = []
    ramp = np.zeros(ncoef)
    ramp[0], ramp[1] = -1.0, 2.0
    starts.append(ramp)
    if n >= 3:
        quad = np.zeros(ncoef)
        quad[0], quad[1], quad[2] = 1.0, -8.0, 8.0
        starts.append(quad)
    for _ in range(opts.poly_starts):
        starts.append(rng.normal(0.0, 1.0, ncoef) / (1.0 + np.arange(ncoef)))

    best_val, best_c = np.inf, None
    for c0 in starts:
        res = scipy_minimize(
            value_grad,
            c0,
            jac=True,
            method="L-BFGS-B",
            options=dict(maxiter=2000, ftol=1e-16, gtol=1e-12, maxcor=25),
        )
        v = value_grad(res.x)[0]
        if v < best_val:
            best_val, best_c = v, res.x
    return best_val, best_c, nodes


def _newton_polish_quotient(u, n, w, grid, accuracy_order, iters=60, gtol=1e-10):
    """Damped Newton on the quotient with the rank-2 quotient-rule
    correction applied via Sherman-Morrison-Woodbury, keeping the solves
    sparse."""
    q = quadrature_weights(grid, "trapezoid")
    d_low = diff_operator(grid, n - 1, accuracy_order)
    d_high = diff_operator(grid, n, accuracy_order)
    Qd = sp.diags(q)
    K_high = 2.0 * (d_high.matrix.T @ Qd @ d_high.matrix)
    K_low = 2.0 * (d_low.matrix.T @ Qd @ d_low.matrix)
    Wpp = w.eval_second_derivative

    def parts(v):
        N = float(q @ np.asarray(w.eval(v), dtype=float)) + float(
            q @ (d_high.matrix @ v) ** 2
        )
        D = float(q @ (d_low.matrix @ v) ** 2)
        return N, D

    def val(v):
        N, D = parts(v)
        return N / D if D > DENOMINATOR_FLOOR else np.inf

    def grad(v):
        N, D = parts(v)
        Q = N / D
        gN = np.asarray(w.eval_derivative(v), dtype=float) * q + K_high @ v
        gD = K_low @ v
        return (gN - Q * gD) / D

    m = len(u)
    eye = sp.identity(m, format="csc")
    e_prev = val(u)
    for _ in range(iters):
        g = grad(u)
        if np.abs(g).max() < gtol:
            break
        N, D = parts(u)
        Q = N / D
        H0 = (sp.diags(np.asarray(Wpp(u), dtype=float) * q) + K_high - Q * K_low) / D
        gD_scaled = (K_low @ u) / D
        U = np.column_stack([-g, -gD_scaled])
        V = np.column_stack([gD_scaled, g])
        tau = 0.0
        d = None
        for _ in range(30):
            try:
                lu = spla.splu((H0 + tau * eye).tocsc())
                rhs_sol = lu.solve(-g)
                Usol = lu.solve(U)
                core = np.eye(2) + V.T @ Usol
                d = rhs_sol - Usol @ np.linalg.solve(core, V.T @ rhs_sol)
            except (RuntimeError, np.linalg.LinAlgError):
                d = None
            if d is not None and np.all(np.isfinite(d)) and g @ d < 0:
                break
            tau = max(1e-8, 10.0 * tau)
        else:
            break
        step, e0 = 1.0, val(u)
        ok = False
        for _ in range(45):
            u_try = u + step * d
            if val(u_try) <= e0 + 1e-4 * step * (g @ d):
                ok = True
                break
            step *= 0.5
        if not ok:
            break
        u = u_try
        e_new = val(u)
        if abs(e_prev - e_new) < 1e-15 * max(1.0, abs(e_new)):
            break
        e_prev = e_new
    return u, val(u), float(np.abs(grad(u)).max())


def estimate_lambda_n(
    n: int, w: DoubleWell, opts: Optional[LambdaOptions] = None
) -> LambdaEstimate:
    """Upper bound lambda_hat_n = min Q over a multi-start minimization on
    (0,1).

    Start families: tanh ramps at several widths and amplitudes,
    oscillatory sin(k pi x) ansaetze scaled into the well region, random
    trigonometric sums, plus the winner of a polynomial-coefficient
    pre-stage (degree-(n-1) fields make the highest term vanish and are
    strong competitors for n >= 3).  Every start is refined by L-BFGS and
    the best few are Newton-polished.
    """
    if n < 2:
        raise ValueError("estimate_lambda_n requires n >= 2")
    opts = opts or LambdaOptions()
    grid = Grid(0.0, 1.0, opts.num_points)
    x = grid.nodes()
    q = quadrature_weights(grid, "trapezoid")
    d_low = diff_operator(grid, n - 1, opts.accuracy_order)
    d_high = diff_operator(grid, n, opts.accuracy_order)

    def val_grad(v):
        dl = d_low.matrix @ v
        dh = d_high.matrix @ v
        D = float(q @ dl**2)
        if D <= DENOMINATOR_FLOOR:
            return np.inf, np.zeros_like(v)
        N = float(q @ np.asarray(w.eval(v), dtype=float)) + float(q @ dh**2)
        Q = N / D
        g = (
            np.asarray(w.eval_derivative(v), dtype=float) * q
            + 2.0 * (d_high.matrix.T @ (q * dh))
            - Q * 2.0 * (d_low.matrix.T @ (q * dl))
        ) / D
        return Q, g

    rng = np.random.default_rng(opts.seed)
    starts: List[np.ndarray] = []
    for width in (0.05, 0.12, 0.25):
        for amp in (0.8, 1.0, 1.4):
            starts.append(amp * np.tanh((x - 0.5) / width))
    for k in (1, 2, 3):
        for amp in (0.9, 1.3):
            starts.append(amp * np.sin(k * np.pi * x))
    for amp in (0.6, 1.0, 1.5):
        starts.append(amp * (2 * x - 1))
    if n >= 3:
        starts.append(2 * (2 * x - 1) ** 2 - 1)
    for _ in range(opts.n_random_starts):
        K = int(rng.integers(3, 8))
        c = rng.normal(0.0, 1.0, K + 1) / (1.0 + np.arange(K + 1)) ** 1.5
        starts.append(sum(ck * np.cos(k * np.pi * x) for k, ck in enumerate(c)))

    poly_val = np.inf
    if opts.poly_starts > 0:
        poly_val, poly_c, _ = _poly_stage(n, w, opts)
        if poly_c is not None:
            starts.append(np.polynomial.polynomial.polyval(x, poly_c))

    per_start: List[float] = []
    candidates: List[Tuple[float, np.ndarray]] = []
    for u0 in starts:
        v0, _ = val_grad(u0)
        if not np.isfinite(v0):
            per_start.append(np.inf)
            continue
        res = scipy_minimize(
            val_grad,
            u0,
            jac=True,
            method="L-BFGS-B",
            options=dict(maxiter=opts.maxiter, ftol=1e-16, gtol=1e-13, maxcor=25),
        )
        vend, _ = val_grad(res.x)
        dl = d_low.matrix @ res.x
        if float(q @ dl**2) <= 100 * DENOMINATOR_FLOOR:
            per_start.append(np.inf)
            continue
        per_start.append(float(vend))
        candidates.append((float(vend), res.x))

    if not candidates:
        raise RuntimeError(
            "estimate_lambda_n: all starts ended degenerate; diagnostics: "
            f"per_start={per_start}"
        )
    candidates.sort(key=lambda t: t[0])
    best_val, best_u = candidates[0]
    gnorm = np.nan
    if opts.newton_polish and w.eval_second_derivative is not None:
        for v0, u0 in candidates[:3]:
            u_ref, v_ref, gn = _newton_polish_quotient(
                u0.copy(), n, w, grid, opts.accuracy_order
            )
            if v_ref < best_val:
                best_val, best_u, gnorm = v_ref, u_ref, gn
    return LambdaEstimate(
        value=float(best_val),
        witness=Field(grid, best_u),
        n=n,
        per_start=per_start,
        diagnostics={
            "num_points": opts.num_points,
            "poly_stage_value": float(poly_val),
            "final_gradient_norm": float(gnorm),
            "num_starts": len(starts),
        },
    )


# ---------------------------------------------------------------------------
# subcritical ensemble verification
# ---------------------------------------------------------------------------


@dataclass
class SubcriticalReport:
    """Outcome of checking Q[u] >= lam over a random ensemble."""

    n: int
    lam: float
    num_checked: int
    num_skipped: int
    min_quotient: float
    worst_index: int
    violations: List[dict] = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def verify_subcritical(
    n: int,
    lam: float,
    ensemble_size: int,
    w: DoubleWell,
    seed: int = 0,
    num_points: int = 401,
    extra_fields: Sequence[Field] = (),
    include_subdivision: bool = True,
) -> SubcriticalReport:
    """Evaluate the quotient over a seeded random ensemble and report any
    Q[u] < lam.

    The ensemble lives on (0,1); when include_subdivision is set, every
    fourth field is drawn on a longer interval (0,K) and checked in the
    unit-normalized real-line form (the subdivision into unit intervals).
    Fields with degenerate denominator are skipped, not failed.  Witness
    fields (e.g. the argmin from `estimate_lambda_n`) can be appended via
    extra_fields; with lam > lambda_hat_n the witness violates by
    construction.
    """
    if lam < 0:
        raise ValueError("lam must be >= 0")
    rng = np.random.default_rng(seed)
    unit = Grid(0.0, 1.0, num_points)
    kinds = ("fourier", "tanh_ramp", "hermite_step")
    fields: List[Tuple[Field, bool]] = []
    for i in range(ensemble_size):
        if include_subdivision and i % 4 == 3:
            K = int(rng.integers(2, 4))
            g = Grid(0.0, float(K), (num_points - 1) * K + 1)
            fields.append((random_field(g, rng, kinds[i % 3]), True))
        else:
            fields.append((random_field(unit, rng, kinds[i % 3]), False))
    for f in extra_fields:
        fields.append((f, False))

    min_q, worst = np.inf, -1
    skipped = 0
    violations: List[dict] = []
    for idx, (f, sub) in enumerate(fields):
        try:
            if sub:
                qv = subdivided_quotient(f, n, w)
            else:
                qv = quotient(f, n, w).value
        except ValueError:
            skipped += 1
            continue
        if qv < min_q:
            min_q, worst = qv, idx
        if qv < lam:
            violations.append({"index": idx, "quotient": qv, "subdivided": sub})
    return SubcriticalReport(
        n=n,
        lam=lam,
        num_checked=len(fields) - skipped,
        num_skipped=skipped,
        min_quotient=float(min_q),
        worst_index=worst,
        violations=violations,
    )
