"""
Approximate vs exact hop plots
==============================

The approximate neighbourhood function keeps a few Flajolet-Martin
bitmasks per node instead of full reachable sets.  On a graph small
enough for breadth-first search we can see how close it gets.
"""

import numpy as np

from citetopo import anf_hop_plot, effective_diameter, exact_hop_plot, graph_from_edges

rng = np.random.default_rng(5)
n = 800
src = rng.integers(0, n, 4 * n)
dst = rng.integers(0, n, 4 * n)
g = graph_from_edges(np.column_stack([src, dst]))

exact = exact_hop_plot(g, directed=True)
print("hop   exact     anf(32 trials)")
for trials in (32, 4):
    approx = anf_hop_plot(g, directed=True, realizations=50, trials=trials, seed=0)
    if trials == 32:
        for d, (a, b) in enumerate(zip(exact.mean_curve, approx.mean_curve)):
            print(f"{d:3d}  {a:.4f}    {b:.4f}")
    ed = effective_diameter(approx)
    print(f"trials={trials:2d}: effective diameter {ed.mean:.3f} +- {ed.sem:.3f}")

print(f"exact: effective diameter {effective_diameter(exact).mean:.3f}")

###############################################################################
# More trials per node shrink the per-realization noise; more realizations
# shrink the standard error of the mean.  Memory is ``2 * n * trials * 8``
# bytes, checked up front.
