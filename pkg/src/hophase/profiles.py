"""
Optimal transition profiles on truncated domains and recovery sequences.

The profile constant is the infimum of the unscaled layer energy

    int_R  W(f) - lam (f^(n-1))^2 + (f^(n))^2  dx

over transitions f from -1 to +1 that become exactly constant outside a
compact set.  On the truncated domain (-T, T) the class membership is
enforced exactly by clamping the outermost stencil-width band of grid
points to the well values, so tails contribute nothing and doubling T
probes truncation error only.

Recovery sequences paste the rescaled profile f((x - s_i)/eps), with
alternating orientation, into an eps-neighborhood of each jump of a
piecewise +-1 function; their energy approaches (number of jumps) times
the profile constant.
"""

from dataclasses import dataclass, field as dc_field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.sparse as sp
from scipy.interpolate import CubicSpline

from ._solvers import damped_newton, lbfgs
from .critical import estimate_lambda_n
from .grids import Field, Grid, diff_operator, quadrature_weights
from .hermite import eval_poly, solve_zeta
from .potentials import DoubleWell

__all__ = [
    "ProfileProblem",
    "ProfileResult",
    "MinimizeOptions",
    "ConstantsEstimate",
    "JumpFunction",
    "minimize_profile",
    "estimate_constants",
    "build_recovery",
    "hermite_smoothed_step",
    "default_starts",
]


@dataclass(frozen=True)
class ProfileProblem:
    """Truncated profile problem on (-T, T).

    n = 1 is accepted here (only here) as a calibration mode: with lam = 0
    the minimum is the classical sharp-interface constant
    2 int_{-1}^{1} sqrt(W).
    """

    n: int
    lam: float
    truncation_T: float
    num_points: int
    potential: DoubleWell
    accuracy_order: int = 4

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.truncation_T <= 0:
            raise ValueError("truncation_T must be positive")
        if self.num_points < 400:
            raise ValueError("profile grid needs at least 400 points")

    @property
    def grid(self) -> Grid:
        return Grid(-self.truncation_T, self.truncation_T, self.num_points)

    @property
    def clamp_band(self) -> int:
        # stencil width of the order-n operator
        return self.n + self.accuracy_order


@dataclass
class MinimizeOptions:
    """Stopping and warmup knobs for the profile minimizer."""

    gtol: float = 1e-8
    maxiter: int = 10_000
    warmup_maxiter: int = 400
    newton_maxiter: int = 100
    divergence_floor: Optional[float] = None


@dataclass
class ProfileResult:
    """Minimizer, its energy, and convergence diagnostics."""

    minimizer: Field
    energy_estimate: float
    converged: bool
    iterations: int
    gradient_norm_final: float
    diagnosis: str = ""


def hermite_smoothed_step(grid: Grid, n: int) -> np.ndarray:
    """A -1 -> +1 step smoothed over [-1/2, 1/2] by the two-point coupling
    polynomial with max(n,2)-fold flat contact at the wells."""
    nn = max(int(n), 2)
    data = [-1.0] + [0.0] * (nn - 1)
    p = solve_zeta(tuple(data))
    x = grid.nodes()
    s = np.clip(x + 0.5, 0.0, 1.0)
    return np.asarray(eval_poly(p, s, 0), dtype=float)


def default_starts(problem: ProfileProblem) -> List[Tuple[str, np.ndarray]]:
    """Multi-start initializations: tanh ramps at several widths plus the
    Hermite-smoothed step."""
    x = problem.grid.nodes()
    starts = [(f"tanh(x/{s})", np.tanh(x / s)) for s in (0.5, 1.0, 2.0)]
    starts.append(("hermite_step", hermite_smoothed_step(problem.grid, problem.n)))
    return starts


def _profile_machinery(problem: ProfileProblem):
    grid = problem.grid
    w = problem.potential
    n, lam = problem.n, problem.lam
    q = quadrature_weights(grid, "trapezoid")
    d_high = diff_operator(grid, n, problem.accuracy_order)
    d_low = (
        diff_operator(grid, n - 1, problem.accuracy_order) if n >= 2 else None
    )
    Qd = sp.diags(q)
    K_high = 2.0 * (d_high.matrix.T @ Qd @ d_high.matrix)
    K_low = (
        2.0 * (d_low.matrix.T @ Qd @ d_low.matrix) if d_low is not None else None
    )

    def energy(u):
        e = float(q @ np.asarray(w.eval(u), dtype=float)) + float(
            q @ (d_high.matrix @ u) ** 2
        )
        if K_low is not None and lam != 0.0:
            e -= lam * float(q @ (d_low.matrix @ u) ** 2)
        return e

    def grad(u):
        g = np.asarray(w.eval_derivative(u), dtype=float) * q + K_high @ u
        if K_low is not None and lam != 0.0:
            g -= lam * (K_low @ u)
        return g

    def hess(u):
        H = sp.diags(np.asarray(w.eval_second_derivative(u), dtype=float) * q)
        H = H + K_high
        if K_low is not None and lam != 0.0:
            H = H - lam * K_low
        return H

    return energy, grad, hess if w.eval_second_derivative is not None else None


def minimize_profile(
    problem: ProfileProblem,
    opts: Optional[MinimizeOptions] = None,
    init: Optional[Union[Field, np.ndarray]] = None,
) -> ProfileResult:
    """Minimize the truncated profile energy with clamped well tails.

    The outermost `clamp_band` points on each side are fixed to -1 / +1;
    minimization runs over the free interior values with an L-BFGS warmup
    and a damped-Newton polish (when W'' is available).  With init = None
    a multi-start over `default_starts` keeps the best energy.
    """
    opts = opts or MinimizeOptions()
    energy, grad, hess = _profile_machinery(problem)
    band = problem.clamp_band
    npts = problem.num_points
    free = np.arange(band, npts - band)

    grid = problem.grid
    q = quadrature_weights(grid, "trapezoid")
    d_high = diff_operator(grid, problem.n, problem.accuracy_order)
    d_low = (
        diff_operator(grid, problem.n - 1, problem.accuracy_order)
        if problem.n >= 2
        else None
    )

    def gradient_floor(u: np.ndarray) -> float:
        """Roundoff scale of the assembled gradient: the largest row of
        sums of absolute terms, times machine epsilon.  The stencil/h^n
        weights grow like h^(-2n) through the quadratic form, so this is
        the resolution-dependent accuracy limit of the gradient itself."""
        au = np.abs(u)
        scale = float(
            np.max(2.0 * (abs(d_high.matrix.T) @ (q * (abs(d_high.matrix) @ au))))
        )
        if d_low is not None and problem.lam != 0.0:
            scale += abs(problem.lam) * float(
                np.max(2.0 * (abs(d_low.matrix.T) @ (q * (abs(d_low.matrix) @ au))))
            )
        wprime = np.abs(np.asarray(problem.potential.eval_derivative(u), float))
        scale += float(np.max(wprime * q))
        return 8.0 * np.finfo(float).eps * scale

    def run_single(u0_vals: np.ndarray) -> ProfileResult:
        u = np.asarray(u0_vals, dtype=float).copy()
        u[:band] = -1.0
        u[-band:] = 1.0

        def fun(z):
            v = u.copy()
            v[free] = z
            return energy(v)

        def gfun(z):
            v = u.copy()
            v[free] = z
            return grad(v)[free]

        z, info = lbfgs(
            fun,
            gfun,
            u[free],
            maxiter=opts.warmup_maxiter,
            gtol=opts.gtol,
            divergence_floor=opts.divergence_floor,
        )
        u[free] = z
        iters = info.iterations
        gnorm = info.gradient_norm
        diverged = info.diverged
        if not diverged and hess is not None:
            def hfun(z):
                v = u.copy()
                v[free] = z
                return hess(v)[free, :][:, free]

            z, ninfo = damped_newton(
                fun,
                gfun,
                hfun,
                u[free],
                maxiter=opts.newton_maxiter,
                gtol=opts.gtol,
            )
            u[free] = z
            iters += ninfo.newton_iterations
            gnorm = ninfo.gradient_norm
        elif not diverged:
            z, info2 = lbfgs(
                fun, gfun, u[free],
                maxiter=opts.maxiter, gtol=opts.gtol,
            )
            u[free] = z
            iters += info2.iterations
            gnorm = info2.gradient_norm
        e = energy(u)
        floor_hit = (
            opts.divergence_floor is not None and e < opts.divergence_floor
        ) or diverged
        noise = gradient_floor(u)
        tol = max(opts.gtol, noise)
        diagnosis = ""
        if floor_hit:
            diagnosis = "supercritical or T too small"
        elif gnorm >= opts.gtol and gnorm < noise:
            diagnosis = f"converged to the roundoff gradient floor {noise:.1e}"
        return ProfileResult(
            minimizer=Field(problem.grid, u),
            energy_estimate=float(e),
            converged=bool(gnorm < tol and not floor_hit),
            iterations=int(iters),
            gradient_norm_final=float(gnorm),
            diagnosis=diagnosis,
        )

    if init is not None:
        vals = init.values if isinstance(init, Field) else np.asarray(init, float)
        if len(vals) != npts:
            raise ValueError("init length does not match the profile grid")
        return run_single(vals)

    best: Optional[ProfileResult] = None
    for _, u0 in default_starts(problem):
        r = run_single(u0)
        if best is None or r.energy_estimate < best.energy_estimate:
            best = r
    return best


@dataclass
class ConstantsEstimate:
    """Profile constants at lam = 0 and at the requested lam, with the
    sandwich diagnostic (1 - lam/lambda_hat) C0 <= C_lam <= C0."""

    c_hat_0: float
    c_hat_lam: float
    lam: float
    lambda_hat: float
    sandwich_ok: bool
    slack: float
    result_0: ProfileResult = None
    result_lam: ProfileResult = None

    def __iter__(self):
        return iter((self.c_hat_0, self.c_hat_lam))


def estimate_constants(
    n: int,
    lam: float,
    w: DoubleWell,
    truncation_T: float = 10.0,
    num_points: int = 2001,
    lambda_hat: Optional[float] = None,
    slack: float = 0.02,
    opts: Optional[MinimizeOptions] = None,
) -> ConstantsEstimate:
    """Estimate C_hat at lam = 0 and at lam from multi-start profile runs
    and check the sandwich bounds within the given slack.

    lam must sit strictly below lambda_hat (subcritical); lambda_hat is
    estimated on demand when not supplied and lam > 0.
    """
    if lam < 0:
        raise ValueError("lam must be >= 0")
    if lambda_hat is None:
        lambda_hat = estimate_lambda_n(n, w).value if lam > 0 else np.inf
    if lam > 0 and lam >= lambda_hat:
        raise ValueError(
            f"lam = {lam} is not subcritical (lambda_hat = {lambda_hat:.4g})"
        )
    prob0 = ProfileProblem(n, 0.0, truncation_T, num_points, w)
    r0 = minimize_profile(prob0, opts)
    if lam == 0.0:
        r1 = r0
    else:
        prob1 = ProfileProblem(n, lam, truncation_T, num_points, w)
        r1 = minimize_profile(prob1, opts, init=r0.minimizer)
        # multi-start competitor in case the lam run prefers another basin
        r1b = minimize_profile(prob1, opts)
        if r1b.energy_estimate < r1.energy_estimate:
            r1 = r1b
    c0, c1 = r0.energy_estimate, r1.energy_estimate
    lower = (1.0 - lam / lambda_hat) * c0 if np.isfinite(lambda_hat) else 0.0
    ok = (lower - slack * c0) <= c1 <= (c0 + slack * c0)
    return ConstantsEstimate(
        c_hat_0=float(c0),
        c_hat_lam=float(c1),
        lam=lam,
        lambda_hat=float(lambda_hat),
        sandwich_ok=bool(ok),
        slack=slack,
        result_0=r0,
        result_lam=r1,
    )


@dataclass(frozen=True)
class JumpFunction:
    """Piecewise +-1 function on (a, b) with jumps at s_1 < ... < s_N."""

    a: float
    b: float
    jumps: Tuple[float, ...]
    left_value: float = -1.0

    def __post_init__(self):
        object.__setattr__(self, "jumps", tuple(float(s) for s in self.jumps))
        if self.left_value not in (-1.0, 1.0):
            raise ValueError("left_value must be -1 or +1")
        if not self.b > self.a:
            raise ValueError("interval requires b > a")
        if any(not (self.a < s < self.b) for s in self.jumps):
            raise ValueError("jumps must lie strictly inside (a, b)")
        if any(s2 <= s1 for s1, s2 in zip(self.jumps, self.jumps[1:])):
            raise ValueError("jumps must be strictly increasing")

    @property
    def jump_count(self) -> int:
        return len(self.jumps)

    @property
    def delta0(self) -> float:
        """Minimal spacing, with the interval endpoints padded in as
        s_0 = a and s_{N+1} = b."""
        pts = (self.a,) + self.jumps + (self.b,)
        return min(p2 - p1 for p1, p2 in zip(pts, pts[1:]))

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        vals = np.full_like(x, self.left_value)
        sign = self.left_value
        for s in self.jumps:
            sign = -sign
            vals = np.where(x >= s, sign, vals)
        return vals


def build_recovery(
    u: JumpFunction,
    profile: Field,
    eps: float,
    points_per_eps: int = 32,
) -> Field:
    """Paste the rescaled profile into eps-windows around each jump.

    Around an up-jump (-1 to +1 at s_i) the field is f((x - s_i)/eps);
    around a down-jump it is f(-(x - s_i)/eps); elsewhere it equals u.
    With left_value = -1 the up-jumps are exactly the odd-indexed ones.
    Requires eps * T < delta0 / 2 so the pasted windows neither overlap
    each other nor stick out of the interval.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    g = profile.grid
    if abs(g.a + g.b) > 1e-9 * g.length:
        raise ValueError("profile grid must be symmetric around 0")
    T = g.b
    if eps * T >= u.delta0 / 2:
        raise ValueError(
            f"eps too large for the jump spacing: eps*T = {eps * T:.4g} "
            f">= delta0/2 = {u.delta0 / 2:.4g}"
        )
    L = u.b - u.a
    num_points = int(round(L / (eps / points_per_eps))) + 1
    grid = Grid(u.a, u.b, num_points)
    x = grid.nodes()
    vals = u.evaluate(x)
    spline = CubicSpline(g.nodes(), profile.values, bc_type="not-a-knot")
    sign_before = u.left_value
    for s in u.jumps:
        z = (x - s) / eps
        window = np.abs(z) <= T
        arg = z if sign_before < 0 else -z
        vals = np.where(window, spline(np.clip(arg, -T, T)), vals)
        sign_before = -sign_before
    return Field(grid, vals)
