"""
Numerical checkers for the auxiliary interpolation inequalities: the
explicit-constant first-derivative bound, the sigma-weighted order-n
variant, interval Gagliardo-Nirenberg with tracked empirical constant, the
additive abstract form, and the subcritical lower-bound relation between
the lam and lam = 0 energies.

Each checker evaluates both sides on one supplied field; `ensemble_check`
drives any of them over the seeded random ensemble.  A failure at a tight
probe constant is reported as the empirical constant exceeding the probe,
never as a counterexample: discretization error can violate sharp
constants.
"""

from dataclasses import dataclass, field as dc_field
from typing import Callable, List, Optional

import numpy as np

from .energy import EnergyParams, evaluate
from .ensembles import DEFAULT_KINDS, random_field
from .grids import Field, Grid, diff_operator, quadrature_weights
from .potentials import DoubleWell

__all__ = [
    "GNParams",
    "CheckReport",
    "EnsembleCheckReport",
    "lp_norm",
    "intlem_constant",
    "check_intlem",
    "check_nirineq",
    "check_gagnir_interval",
    "check_abstr",
    "check_lower_bound_lemma",
    "ensemble_check",
]

#: multiplicative tolerance of the pass rule lhs <= rhs * (1 + PASS_RTOL)
PASS_RTOL = 1e-8


@dataclass(frozen=True)
class GNParams:
    """Exponents of the interval Gagliardo-Nirenberg inequality."""

    p: float
    q: float
    r: float
    j: int
    m: int
    theta: float

    def __post_init__(self):
        if not (self.p >= 1 and self.q >= 1 and self.r >= 1):
            raise ValueError("p, q, r must be >= 1")
        if not 0 <= self.j < self.m:
            raise ValueError("need 0 <= j < m")
        if not self.j / self.m <= self.theta < 1:
            raise ValueError("theta must lie in [j/m, 1)")
        balance = self.j + self.theta * (1.0 / self.r - self.m) + (
            1.0 - self.theta
        ) / self.q
        if abs(1.0 / self.p - balance) > 1e-12:
            raise ValueError(
                f"dimension balance violated: 1/p = {1.0 / self.p:.15g} but "
                f"j + theta(1/r - m) + (1-theta)/q = {balance:.15g}"
            )


@dataclass
class CheckReport:
    """Both sides of one inequality check on one field."""

    lhs: float
    rhs: float
    ratio: float
    passed: bool
    witness: str = ""
    extra: dict = dc_field(default_factory=dict)


def _report(lhs: float, rhs: float, witness: str, **extra) -> CheckReport:
    ratio = lhs / rhs if rhs != 0 else (0.0 if lhs == 0 else np.inf)
    passed = lhs <= rhs * (1.0 + PASS_RTOL) + 1e-300
    return CheckReport(
        lhs=float(lhs),
        rhs=float(rhs),
        ratio=float(ratio),
        passed=bool(passed),
        witness=witness,
        extra=dict(extra),
    )


def lp_norm(f: Field, p: float, rule: str = "trapezoid") -> float:
    """L^p norm by |.|^p quadrature; p = inf gives the max norm."""
    if np.isinf(p):
        return float(np.abs(f.values).max())
    if p < 1:
        raise ValueError("p must be >= 1")
    q = quadrature_weights(f.grid, rule)
    return float((q @ np.abs(f.values) ** p) ** (1.0 / p))


def intlem_constant(q: float) -> float:
    """The explicit constant 8 (q+1)^(1/q); equals 16 at q = 1."""
    return 8.0 * (q + 1.0) ** (1.0 / q)


def _deriv_field(u: Field, k: int, accuracy_order: int = 4) -> Field:
    return Field(u.grid, diff_operator(u.grid, k, accuracy_order)(u.values))


def check_intlem(u: Field, p: float, q: float, r: float) -> CheckReport:
    """First-derivative interpolation with the explicit constant:

        ||u'||_p <= C (|I|^(1+1/p-1/r) ||u''||_r + |I|^(-1+1/p-1/q) ||u||_q),
        C = 8 (q+1)^(1/q).
    """
    L = u.grid.length
    C = intlem_constant(q)
    lhs = lp_norm(_deriv_field(u, 1), p)
    rhs = C * (
        L ** (1.0 + 1.0 / p - 1.0 / r) * lp_norm(_deriv_field(u, 2), r)
        + L ** (-1.0 + 1.0 / p - 1.0 / q) * lp_norm(u, q)
    )
    return _report(lhs, rhs, f"field on ({u.grid.a:.3g},{u.grid.b:.3g})", C=C)


def check_nirineq(u: Field, n: int, sigma: float, c_probe: float) -> CheckReport:
    """Sigma-weighted order-n interpolation:

        c_probe int (u^(n-1))^2 <= sigma^(-(2n-2)) int u^2 + sigma^2 int (u^(n))^2,

    for 0 < sigma <= |I|.  The empirical admissible constant rhs/lhs is
    reported alongside.
    """
    L = u.grid.length
    if not 0 < sigma <= L:
        raise ValueError(f"sigma must satisfy 0 < sigma <= |I| = {L:.4g}")
    qw = quadrature_weights(u.grid, "trapezoid")
    lo = float(qw @ _deriv_field(u, n - 1).values ** 2)
    lhs = c_probe * lo
    rhs = sigma ** (-(2 * n - 2)) * float(qw @ u.values**2) + sigma**2 * float(
        qw @ _deriv_field(u, n).values ** 2
    )
    empirical = rhs / lo if lo > 0 else np.inf
    return _report(
        lhs,
        rhs,
        f"n={n}, sigma={sigma:.4g}",
        empirical_constant=float(empirical),
    )


def check_gagnir_interval(
    u: Field, gp: GNParams, C_probe: Optional[float] = None
) -> CheckReport:
    """Interval Gagliardo-Nirenberg:

        ||u^(j)||_p <= C (||u^(m)||_r^theta ||u||_q^(1-theta) + ||u||_q).

    No explicit C is available, so the required constant lhs/bracket is
    reported; with C_probe = None the check passes whenever the required
    constant is finite.
    """
    lhs = lp_norm(_deriv_field(u, gp.j), gp.p) if gp.j >= 1 else lp_norm(u, gp.p)
    high = lp_norm(_deriv_field(u, gp.m), gp.r)
    low = lp_norm(u, gp.q)
    bracket = high**gp.theta * low ** (1.0 - gp.theta) + low
    required = lhs / bracket if bracket > 0 else (0.0 if lhs == 0 else np.inf)
    if C_probe is None:
        return CheckReport(
            lhs=float(lhs),
            rhs=float(bracket),
            ratio=float(required),
            passed=bool(np.isfinite(required)),
            witness=f"required C = {required:.6g}",
            extra={"required_C": float(required), "bracket": float(bracket)},
        )
    rep = _report(lhs, C_probe * bracket, f"C_probe={C_probe:.6g}")
    rep.extra["required_C"] = float(required)
    return rep


def check_abstr(
    u: Field, j: int, m: int, q: float, r: float, C_probe: float
) -> CheckReport:
    """Additive interpolation ||u^(j)||_r <= ||u^(m)||_r + C ||u||_q; the
    minimal passing constant (lhs - ||u^(m)||_r)/||u||_q is reported."""
    if not 0 <= j < m:
        raise ValueError("need 0 <= j < m")
    lhs = lp_norm(_deriv_field(u, j), r) if j >= 1 else lp_norm(u, r)
    high = lp_norm(_deriv_field(u, m), r)
    low = lp_norm(u, q)
    rhs = high + C_probe * low
    minimal = max(0.0, (lhs - high) / low) if low > 0 else 0.0
    return _report(lhs, rhs, f"j={j}, m={m}", minimal_C=float(minimal))


def check_lower_bound_lemma(
    u: Field, p: EnergyParams, lam_hat: float, delta: float, w: DoubleWell
) -> CheckReport:
    """Subcritical lower bound: (1 - lam/lam_hat - delta) E_0[u] <= E_lam[u],
    relating the energy to its lam = 0 part."""
    if not 0 < delta < 1:
        raise ValueError("delta must be in (0, 1)")
    if p.lam < 0 or p.lam > 0.5 * lam_hat:
        raise ValueError("precondition: 0 <= lam <= 0.5 * lam_hat")
    e_lam = evaluate(u, p, w).total
    p0 = EnergyParams(p.n, p.epsilon, 0.0, p.accuracy_order, p.rule)
    e_0 = evaluate(u, p0, w).total
    factor = 1.0 - p.lam / lam_hat - delta
    return _report(factor * e_0, e_lam, f"eps={p.epsilon:.4g}", factor=factor)


@dataclass
class EnsembleCheckReport:
    """Reduction of one checker over the seeded random ensemble."""

    which: str
    count: int
    num_failed: int
    worst_ratio: float
    worst_index: int
    witness: Optional[Field]
    witness_description: str = ""
    empirical_constant: float = np.nan
    reports: List[CheckReport] = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.num_failed == 0

    def summary(self) -> str:
        verdict = "pass" if self.passed else "empirical constant exceeds probe"
        return (
            f"{self.which}: {self.count - self.num_failed}/{self.count} passed, "
            f"worst ratio {self.worst_ratio:.6g} ({verdict})"
        )


def ensemble_check(
    checker: Callable[[Field], CheckReport],
    which: str,
    count: int,
    seed: int,
    num_points: int = 401,
    length_range=(0.3, 4.0),
    keep_reports: bool = False,
) -> EnsembleCheckReport:
    """Run a per-field checker over `count` random fields on random
    intervals and reduce to the worst case (by lhs/rhs ratio)."""
    rng = np.random.default_rng(seed)
    worst_ratio, worst_idx, worst_field = -np.inf, -1, None
    num_failed = 0
    reports: List[CheckReport] = []
    empirical = np.nan
    for i in range(count):
        L = float(rng.uniform(*length_range))
        grid = Grid(0.0, L, num_points)
        f = random_field(grid, rng, DEFAULT_KINDS[i % len(DEFAULT_KINDS)])
        rep = checker(f)
        if keep_reports:
            reports.append(rep)
        if not rep.passed:
            num_failed += 1
        if np.isfinite(rep.ratio) and rep.ratio > worst_ratio:
            worst_ratio, worst_idx, worst_field = rep.ratio, i, f
            if "empirical_constant" in rep.extra:
                empirical = rep.extra["empirical_constant"]
            elif "required_C" in rep.extra:
                empirical = rep.extra["required_C"]
            elif "minimal_C" in rep.extra:
                empirical = rep.extra["minimal_C"]
    return EnsembleCheckReport(
        which=which,
        count=count,
        num_failed=num_failed,
        worst_ratio=float(worst_ratio),
        worst_index=worst_idx,
        witness=worst_field,
        witness_description=f"ensemble index {worst_idx} (seed {seed})",
        empirical_constant=float(empirical),
        reports=reports,
    )
