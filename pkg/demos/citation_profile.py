"""
A statistic profile for a growing citation network
==================================================

We grow a toy citation network where each new paper cites a handful of
older ones, preferring papers that are already well cited, and then
compute every statistic citetopo knows about.
"""

import numpy as np

from citetopo import compute_profile, graph_from_edges

rng = np.random.default_rng(1)
n, refs = 3000, 6
edges, weight = [], np.ones(n)
for u in range(refs + 1, n):
    p = weight[:u] / weight[:u].sum()
    for v in rng.choice(u, size=refs, replace=False, p=p):
        edges.append((u, v))
        weight[v] += 1

# duplicate links, self-citations and isolated papers are removed here
g = graph_from_edges(np.array(edges))
print(f"{g.n} papers, {g.m} citations")

###############################################################################
# Every paper except the first few cites something, so the in-field
# (papers citing nothing) is tiny and most of the network is core or
# the uncited research front.

prof = compute_profile(g, "toy", seed=0, anf_realizations=20)
for name in ("wcc", "in_field", "core", "out_field"):
    print(f"{name:>10s}  {prof[name]:8.2f} %")

###############################################################################
# Degrees, mixing and clustering.  Out-degrees are all equal to 6, so no
# out-degree power law exists and that exponent is reported as undefined.

for name in ("k_mean", "gamma", "gamma_in", "gamma_out", "r", "r_in_in",
             "C_mean", "D_mean", "r_D"):
    print(f"{name:>10s}  {prof[name]}")
print("undefined:", prof.undefined)

###############################################################################
# Effective diameters come with a standard error over ANF realizations.

for name in ("diam_eff", "diam_eff_und"):
    print(f"{name:>12s}  {prof[name]:.2f} +- {prof.sem[name]:.2f}")

# the whole profile as JSON, as written by ``citetopo stats``
print(prof.to_json()[:400], "...")
