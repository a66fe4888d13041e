"""
Fitting degree exponents
========================

The exponent of a power-law tail is estimated by maximum likelihood
above ``kmin``; citetopo tries ``kmin`` of 10 and 25 and keeps the one
whose fit has the smaller Kolmogorov-Smirnov distance.
"""

import numpy as np

from citetopo.degree import best_power_law, fit_power_law

rng = np.random.default_rng(0)

# continuous Pareto sample with exponent 2.5
x = 10.0 * (1.0 - rng.random(100_000)) ** (-1 / 1.5)
print(f"continuous sample: gamma = {fit_power_law(x, 10).gamma:.3f}")

###############################################################################
# Degrees are integers.  The same estimator applied to a discrete Zipf
# sample is biased upward, which is worth keeping in mind for low kmin.

k = rng.zipf(2.5, 200_000)
for kmin in (10, 25):
    f = fit_power_law(k, kmin)
    print(f"zipf sample, kmin={kmin}: gamma = {f.gamma:.3f}, KS = {f.ks_distance:.4f}")

###############################################################################
# A sample that is not a power law at all is flagged by the KS test.

lognormal = np.round(np.exp(rng.normal(2.5, 0.6, 50_000))).astype(int)
best, fits = best_power_law(lognormal)
for kmin, f in fits.items():
    print(f"lognormal, kmin={kmin}: gamma = {f.gamma:.2f}, plausible = {f.plausible}")
