"""
Uniform-grid discretization of functions on an interval: grids, sampled
fields, finite-difference derivative operators with one-sided boundary
stencils, quadrature, resampling, and CSV/JSON serialization.
"""

import io
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Tuple

import numpy as np
import scipy.sparse as sp
from scipy.interpolate import CubicSpline

__all__ = [
    "Grid",
    "Field",
    "DiffOperator",
    "MAX_DERIVATIVE_ORDER",
    "stencil_weights",
    "diff_operator",
    "derivative",
    "quadrature_weights",
    "integrate",
    "resample",
    "field_to_csv",
    "field_from_csv",
    "field_to_json",
    "field_from_json",
]

#: highest derivative order with prebuilt stencil support
MAX_DERIVATIVE_ORDER = 6


@dataclass(frozen=True)
class Grid:
    """Uniform grid on [a, b] with num_points nodes."""

    a: float
    b: float
    num_points: int

    def __post_init__(self):
        if not self.b > self.a:
            raise ValueError("grid requires b > a")
        if self.num_points < 2:
            raise ValueError("grid requires num_points >= 2")

    @property
    def h(self) -> float:
        return (self.b - self.a) / (self.num_points - 1)

    @property
    def length(self) -> float:
        return self.b - self.a

    def nodes(self) -> np.ndarray:
        return np.linspace(self.a, self.b, self.num_points)


@dataclass(frozen=True)
class Field:
    """Sampled function values on a grid."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if vals.shape != (self.grid.num_points,):
            raise ValueError(
                f"values shape {vals.shape} does not match grid with "
                f"{self.grid.num_points} points"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("field values must be finite")

    @classmethod
    def from_callable(cls, grid: Grid, f) -> "Field":
        return cls(grid, np.asarray(f(grid.nodes()), dtype=float))


@lru_cache(maxsize=None)
def stencil_weights(offsets: Tuple[int, ...], k: int) -> Tuple[Fraction, ...]:
    """Finite-difference weights for the k-th derivative on integer offsets.

    Solves the Vandermonde moment system exactly over rationals, so the
    returned weights annihilate polynomials of degree < k and are exact on
    degree <= len(offsets) - 1.  Divide by h**k for a physical grid.
    """
    m = len(offsets)
    if k >= m:
        raise ValueError("need at least k+1 stencil points")
    A = [[Fraction(o) ** i for o in offsets] for i in range(m)]
    rhs = [Fraction(0)] * m
    rhs[k] = Fraction(factorial(k))
    # Gaussian elimination with partial pivoting over Fraction
    for col in range(m):
        piv = max(range(col, m), key=lambda r: abs(A[r][col]))
        if A[piv][col] == 0:
            raise ValueError("degenerate stencil offsets")
        A[col], A[piv] = A[piv], A[col]
        rhs[col], rhs[piv] = rhs[piv], rhs[col]
        inv = 1 / A[col][col]
        A[col] = [x * inv for x in A[col]]
        rhs[col] = rhs[col] * inv
        for r in range(m):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
                rhs[r] = rhs[r] - f * rhs[col]
    return tuple(rhs)


@dataclass(frozen=True)
class DiffOperator:
    """Sparse k-th derivative operator on a fixed grid.

    Interior rows use centered stencils of the requested accuracy order;
    near the boundary the stencil window shifts one-sidedly, keeping the
    same polynomial exactness (degree <= k + accuracy_order - 1).
    """

    k: int
    accuracy_order: int
    num_points: int
    h: float
    matrix: sp.csr_matrix

    def __call__(self, values: np.ndarray) -> np.ndarray:
        return self.matrix @ values


_OPERATOR_CACHE: dict = {}


def diff_operator(grid: Grid, k: int, accuracy_order: int = 4) -> DiffOperator:
    """Build (or fetch from cache) the k-th derivative operator for a grid."""
    if not 1 <= k <= MAX_DERIVATIVE_ORDER:
        raise ValueError(f"derivative order must be in [1, {MAX_DERIVATIVE_ORDER}]")
    if accuracy_order < 2:
        raise ValueError("accuracy_order must be >= 2")
    m = k + accuracy_order
    if grid.num_points < m:
        raise ValueError(
            f"grid with {grid.num_points} points too small for the order-{k} "
            f"stencil; need at least {m} points"
        )
    key = (grid.num_points, grid.h, k, accuracy_order)
    hit = _OPERATOR_CACHE.get(key)
    if hit is not None:
        return hit

    n = grid.num_points
    half = (m - 1) // 2
    scale = grid.h**k
    # distinct window starts: clamped to [0, n-m]; precompute one weight row
    # per offset pattern and broadcast over the interior
    rows = np.arange(n)
    starts = np.clip(rows - half, 0, n - m)
    data = np.empty((n, m))
    pattern_cache = {}
    for i in range(n):
        shift = int(starts[i] - i)
        wrow = pattern_cache.get(shift)
        if wrow is None:
            offs = tuple(range(shift, shift + m))
            wrow = np.array(
                [float(c) for c in stencil_weights(offs, k)], dtype=float
            ) / scale
            pattern_cache[shift] = wrow
        data[i] = wrow
    cols = starts[:, None] + np.arange(m)[None, :]
    mat = sp.csr_matrix(
        (data.ravel(), (np.repeat(rows, m), cols.ravel())), shape=(n, n)
    )
    op = DiffOperator(k=k, accuracy_order=accuracy_order, num_points=n, h=grid.h,
                      matrix=mat)
    _OPERATOR_CACHE[key] = op
    return op


def derivative(f: Field, k: int, accuracy_order: int = 4) -> Field:
    """Discrete k-th derivative of a field on its own grid."""
    op = diff_operator(f.grid, k, accuracy_order)
    return Field(f.grid, op(f.values))


def quadrature_weights(grid: Grid, rule: str = "trapezoid") -> np.ndarray:
    """Composite quadrature weights on the grid nodes.

    trapezoid: any num_points.  simpson: requires odd num_points.
    """
    n, h = grid.num_points, grid.h
    if rule == "trapezoid":
        q = np.full(n, h)
        q[0] = q[-1] = h / 2
        return q
    if rule == "simpson":
        if n % 2 == 0:
            raise ValueError("Simpson quadrature requires an odd number of points")
        q = np.full(n, 2 * h / 3)
        q[1::2] = 4 * h / 3
        q[0] = q[-1] = h / 3
        return q
    raise ValueError(f"unknown quadrature rule {rule!r}")


def integrate(f: Field, rule: str = "trapezoid") -> float:
    """Composite quadrature of the sampled values over the grid interval."""
    return float(quadrature_weights(f.grid, rule) @ f.values)


def resample(f: Field, new_num_points: int) -> Field:
    """Piecewise-cubic interpolation onto a new grid over the same interval."""
    if new_num_points < 2:
        raise ValueError("new_num_points must be >= 2")
    new_grid = Grid(f.grid.a, f.grid.b, new_num_points)
    if f.grid.num_points < 4:
        vals = np.interp(new_grid.nodes(), f.grid.nodes(), f.values)
        return Field(new_grid, vals)
    spline = CubicSpline(f.grid.nodes(), f.values, bc_type="not-a-knot")
    return Field(new_grid, spline(new_grid.nodes()))


def field_to_csv(f: Field) -> str:
    """Two-column CSV (x, value) with 17 significant digits."""
    buf = io.StringIO()
    buf.write("x,value\n")
    for x, v in zip(f.grid.nodes(), f.values):
        buf.write(f"{x:.17g},{v:.17g}\n")
    return buf.getvalue()


def field_from_csv(text: str) -> Field:
    """Inverse of `field_to_csv` (bit-exact round trip on uniform grids)."""
    lines = [ln for ln in text.strip().splitlines() if ln]
    if lines and lines[0].lower().startswith("x,"):
        lines = lines[1:]
    xs, vs = [], []
    for ln in lines:
        sx, sv = ln.split(",")
        xs.append(float(sx))
        vs.append(float(sv))
    grid = Grid(xs[0], xs[-1], len(xs))
    return Field(grid, np.array(vs))


def field_to_json(f: Field) -> str:
    return json.dumps(
        {
            "a": f.grid.a,
            "b": f.grid.b,
            "num_points": f.grid.num_points,
            "values": [float(f"{v:.17g}") for v in f.values],
        }
    )


def field_from_json(text: str) -> Field:
    d = json.loads(text)
    return Field(Grid(d["a"], d["b"], d["num_points"]), np.array(d["values"]))
