"""Sharp-interface limit: energies concentrate on N transition layers.

For a target piecewise +-1 function with N jumps, pasting the optimal
profile into an eps-window around each jump gives a recovery sequence whose
energy approaches N * C_hat.  Minimizing from that sequence at each eps
confirms the minimum stays at (or just below) the recovery energy and keeps
exactly N transition clusters.
"""

from hophase import SweepConfig, gamma_sweep

LAMBDA_HAT_2 = 0.056938


def run(jumps):
    cfg = SweepConfig(
        n=2,
        lam=0.3 * LAMBDA_HAT_2,
        interval=(-4.0, 4.0),
        jumps=jumps,
        eps_schedule=(0.25, 0.125, 0.0625, 0.03125, 0.015625),
        points_per_eps_width=32,
        lambda_hat=LAMBDA_HAT_2,
    )
    record = gamma_sweep(cfg)
    N = len(jumps)
    target = N * record.c_hat_lam
    print(f"jumps at {jumps}: target N * C_hat_lambda = {target:.6f}")
    print("  eps        E_min        E_recovery   clusters  converged")
    for r in record.rows:
        print(
            f"  {r.epsilon:<9g}  {r.e_min:<11.6f}  {r.e_recovery:<11.6f}"
            f"  {r.jumps_detected:<8d}  {r.converged}"
        )
    last = record.rows[-1]
    rel = abs(last.e_recovery - target) / target
    print(f"  final recovery energy within {rel:.1e} of the target\n")
    return last


def main():
    one = run((0.0,))
    two = run((-4.0 / 3.0, 4.0 / 3.0))
    print(
        "two-transition / one-transition energy ratio:"
        f" {two.e_recovery / one.e_recovery:.6f} (expected 2)"
    )


if __name__ == "__main__":
    main()
