"""Numerical stress tests of the interpolation inequalities.

Every inequality underlying the lower-bound machinery is checked over
seeded random ensembles (Fourier series, tanh ramps, polynomial steps on
random intervals).  Each check reports the worst lhs/rhs ratio and, where
meaningful, the empirical best constant seen.
"""

from hophase import (
    EnergyParams,
    GNParams,
    check_abstr,
    check_gagnir_interval,
    check_intlem,
    check_lower_bound_lemma,
    check_nirineq,
    ensemble_check,
    intlem_constant,
    make_quartic,
)

LAMBDA_HAT_2 = 0.056938


def main():
    w = make_quartic()

    print("== norm interpolation with the explicit constant 8(q+1)^(1/q) ==")
    for (p, q, r) in ((2.0, 2.0, 2.0), (2.0, 1.0, 2.0), (3.0, 2.0, 2.0)):
        rep = ensemble_check(
            lambda f: check_intlem(f, p, q, r),
            which=f"intlem({p:g},{q:g},{r:g})",
            count=200,
            seed=0,
        )
        print(
            f"  (p,q,r)=({p:g},{q:g},{r:g}): C = {intlem_constant(q):.3f},"
            f" worst ratio {rep.worst_ratio:.4f}, {rep.summary()}"
        )

    print("\n== boundary-window derivative bound (probe constant 0.25) ==")
    rep = ensemble_check(
        lambda f: check_nirineq(f, 2, f.grid.length, c_probe=0.25),
        which="nirineq",
        count=200,
        seed=1,
    )
    print(f"  worst ratio {rep.worst_ratio:.4f}, empirical constant "
          f"{rep.empirical_constant:.4f}, {rep.summary()}")

    print("\n== interval Gagliardo-Nirenberg: smallest admissible constant ==")
    gp = GNParams(p=2.0, q=2.0, r=2.0, j=1, m=2, theta=0.5)
    rep = ensemble_check(
        lambda f: check_gagnir_interval(f, gp), which="gagnir", count=200, seed=2
    )
    print(f"  required C over the ensemble: {rep.empirical_constant:.4f}, "
          f"{rep.summary()}")

    print("\n== additive-form interpolation (probe constant 10) ==")
    rep = ensemble_check(
        lambda f: check_abstr(f, 1, 2, 2.0, 2.0, C_probe=10.0),
        which="abstr",
        count=200,
        seed=3,
    )
    print(f"  worst ratio {rep.worst_ratio:.4f}, {rep.summary()}")

    print("\n== energy lower bound: damped vs undamped functional ==")
    params = EnergyParams(2, 0.25, 0.3 * LAMBDA_HAT_2)
    rep = ensemble_check(
        lambda f: check_lower_bound_lemma(f, params, LAMBDA_HAT_2, 0.1, w),
        which="lowerbound",
        count=200,
        seed=4,
    )
    print(f"  worst ratio {rep.worst_ratio:.4f}, {rep.summary()}")


if __name__ == "__main__":
    main()
