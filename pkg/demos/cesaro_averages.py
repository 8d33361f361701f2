"""Cesaro averages of spherical averages for F2 acting on 64 points.

Each generator acts by a random permutation (its inverse by the inverse
permutation).  The spherical averages s_n(phi) need not settle down, but
their running means c_N(phi) do; the ladder below shows ||c_2N - c_N||_1
shrinking as N doubles.

Run: python demos/cesaro_averages.py
"""

import numpy as np

from markovcesaro.action import (
    convergence_report,
    invariance_probe,
    lp_norm,
    random_action,
    spherical_averages,
)
from markovcesaro.codings import build_free_group, free_group_inverses

g = build_free_group(2)
rng = np.random.default_rng(2024)
act = random_action(g.alphabet, 64, rng, free_group_inverses(2))
phi = rng.uniform(-1, 1, 64)

series = spherical_averages(act, g, phi, 4096)
print("n      ||s_n||_1")
for n in (0, 1, 2, 3, 10, 100, 1000, 4096):
    print(f"{n:<6} {lp_norm(act.space, series.s[n], 1):.6f}")

report = convergence_report(series, act.space, p=1, window_growth=2.0, start=16)
print("\nN      2N     ||c_2N - c_N||_1   max oscillation")
for st in report.steps:
    print(f"{st.N:<6} {st.N_next:<6} {st.distance:<18.3e} {st.oscillation:.3e}")

probe = invariance_probe(series, act, g, 4096)
print(f"\nmax over generators of ||c_N o T_s - c_N||_1 at N = 4096: {probe.value:.3e}")
print(f"mean of phi: {phi.mean():+.6f}, mean of c_4096: {series.cesaro(4096).mean():+.6f}")
