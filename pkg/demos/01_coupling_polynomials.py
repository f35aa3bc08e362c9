"""Exact coupling polynomials: boundary-matched Hermite interpolants.

The admissible-transition constructions glue a candidate profile to the
constant well states with a polynomial that matches n derivative conditions
at each endpoint of a unit window.  The linear systems are solved in exact
rational arithmetic, so the endpoint conditions hold with zero residual and
the coefficient-matrix determinant identity can be verified as integers.
"""

from math import factorial

import numpy as np

from hophase import (
    coefficient_matrix_exact,
    coupling_energy_upper_bound,
    determinant_exact,
    endpoint_residuals,
    eval_poly,
    make_quartic,
    solve_eta,
    solve_zeta,
)


def main():
    print("== exact solves for a few boundary-data vectors ==")
    for y in [(1.0, 0.0), (0.5, -0.25, 0.1), (0.9, 0.0, 0.0, 0.0)]:
        zeta = solve_zeta(y)
        eta = solve_eta(y)
        print(f"n = {zeta.n}, data = {y}")
        print(f"  zeta coefficients: {[str(c) for c in zeta.exact_coefficients]}")
        print(f"  eta  coefficients: {[str(c) for c in eta.exact_coefficients]}")
        print(
            "  max endpoint residuals:"
            f" zeta {endpoint_residuals(zeta).max():.1e},"
            f" eta {endpoint_residuals(eta).max():.1e}"
        )

    print("\n== determinant identity det M_n = (prod_k k!)^2 ==")
    for n in range(2, 9):
        det = determinant_exact(coefficient_matrix_exact(n))
        expected = int(np.prod([factorial(k) for k in range(n)], dtype=object)) ** 2
        status = "ok" if det == expected else "MISMATCH"
        print(f"  n = {n}: det = {det} ({status})")

    print("\n== glueing cost of one window (upper bound for the layer energy) ==")
    w = make_quartic()
    y = (0.8, -0.1, 0.05)
    for lam in (0.0, 0.01, 0.02):
        cost = coupling_energy_upper_bound(y, lam, w)
        print(f"  lambda = {lam}: window energy bound {cost:.6f}")
    p = solve_zeta(y)
    xs = np.linspace(0.0, 1.0, 5)
    print(f"  zeta values on the window: {np.round(eval_poly(p, xs), 4)}")


if __name__ == "__main__":
    main()
