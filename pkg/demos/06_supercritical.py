"""Above the critical coupling the uniform phases destabilize.

For lambda beyond lambda_n the concave term wins: clipped high-frequency
oscillations drive the energy negative (and, under free minimization,
unboundedly so).  This script scans a lambda grid with a fixed family of
clipped sine candidates -- on that fixed set the minimal energy is exactly
non-increasing in lambda -- then lets a free minimization run from the best
candidate, showing divergence once lambda is supercritical.
"""

import numpy as np

from hophase import Field, Grid, make_quartic, minimize_energy, supercritical_probe


def main():
    w = make_quartic()
    eps = 1.0 / 16.0
    grid = (0.25, 0.5, 1.0, 2.0, 4.0)

    print("== fixed candidate set: clipped sines, k = 1..32 ==")
    rep = supercritical_probe(2, grid, eps, w, k_max=32, free_minimization=False)
    print("  lambda   best energy   best k   best amplitude")
    for lam, e, k, amp in zip(
        rep.lambda_grid, rep.best_energies, rep.best_k, rep.best_amplitude
    ):
        print(f"  {lam:<7g}  {e:<12.4f}  {k:<7d}  {amp}")
    print(f"  onset of negative energy: lambda = {rep.onset_lambda}")
    print(f"  monotone non-increasing in lambda: {rep.monotone}")

    print("\n== energy vs frequency at the largest lambda ==")
    ks = [k for k, _ in rep.k_scaling[:12]]
    es = [e for _, e in rep.k_scaling[:12]]
    for k, e in zip(ks, es):
        bar = "#" * max(0, int(8 - e))
        print(f"  k = {k:<3d} E = {e:9.3f} {bar}")

    print("\n== free minimization diverges at supercritical lambda ==")
    g = Grid(0.0, 1.0, 513)
    init = Field(g, np.clip(1.2 * np.sin(2.0 * np.pi * 4 * g.nodes()), -1, 1))
    for lam in (0.02, 4.0):
        res = minimize_energy(2, eps, lam, init, w, divergence_floor=-100.0)
        tag = (
            f"{res.message}, energy fell below the floor ({res.breakdown.total:.1f})"
            if res.diverged
            else f"converged to E = {res.breakdown.total:.4f}"
        )
        print(f"  lambda = {lam}: {tag}")


if __name__ == "__main__":
    main()
