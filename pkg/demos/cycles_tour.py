"""Two- and three-cycles, sunspots and an orbit diagram.

Uses a high-curvature economy (eta = 4) where the semi-analytic orbits close.
"""

import numpy as np

from frbdyn.core import ModelParams, Policy
from frbdyn.cycles import (chi_hat_m, chi_m, cycle_existence_set, find_three_cycle,
                           find_two_cycle, orbit_samples, slope_at_steady,
                           sunspot_near_cycle)


def main():
    params = ModelParams(0.96, 0.5, alpha=0.9, alpha_s=0.5, B=3.0, C=1.0, eta=4.0)
    base = Policy(0.05, 0.5)
    print(f"chi_m = {chi_m(params, base):.5f}, chi_hat_m = {chi_hat_m(params, base):.5f}")
    for period in (2, 3):
        spans = cycle_existence_set(params, base, period)
        shown = ", ".join(f"({lo:.5f}, {hi:.5f})" for lo, hi in spans)
        print(f"period-{period} orbits close for chi in {shown}")

    two = find_two_cycle(params, Policy(0.05, 0.87))
    three = find_three_cycle(params, Policy(0.05, 0.95))
    print("\n2-cycle at chi=0.87:", ", ".join(f"{z:.6f}" for z in two.points))
    print("3-cycle at chi=0.95:", ", ".join(f"{z:.6f}" for z in three.points),
          "(period three implies chaos)" if three.chaotic else "")

    ss = sunspot_near_cycle(params, Policy(0.05, 0.87))
    print(f"\nsunspot: z = ({ss.z1:.6f}, {ss.z2:.6f}), "
          f"switching probabilities ({ss.zeta1:.4f}, {ss.zeta2:.4f})")

    print("\norbit diagram (last 8 points of the backward map)")
    print(f"{'chi':>6} {'slope':>8}  points")
    for chi in np.linspace(0.5, 0.98, 7):
        pol = Policy(0.05, chi)
        pts = np.unique(np.round(orbit_samples(params, pol, n_keep=8), 6))
        print(f"{chi:6.3f} {slope_at_steady(params, pol):8.3f}  {pts}")


if __name__ == "__main__":
    main()
