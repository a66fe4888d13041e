"""
Ranking bibliographic databases by consistency
==============================================

The package ships published profiles of six bibliographic citation
networks and two online networks.  Here we rank the bibliographic ones
over ten independent statistics and draw the critical-difference diagram.
"""

from citetopo import PRESETS, compare, matrix_from_profiles, paper_profiles
from citetopo.cddiagram import cd_layout, render_svg

profiles = paper_profiles()
names = ["WoS", "CS", "Cora", "HC", "DBLP", "arXiv"]
matrix = matrix_from_profiles([profiles[d] for d in names], PRESETS["paper10"])

report = compare(matrix, alpha=0.05)

###############################################################################
# Studentized residuals flag single statistics where one network sits far
# from the rest.

for d, s, x, p in report.residuals.significant(0.05):
    print(f"{d:>6s} {s:>14s}  residual {x:+.2f}  p = {p:.3f}")

###############################################################################
# Mean ranks (lower is more consistent with the others), then the
# Friedman test and the Nemenyi critical difference.

for d, r in sorted(report.mean_ranks.items(), key=lambda t: t[1]):
    print(f"{d:>6s}  {r:.2f}")
print(f"Friedman {report.friedman:.2f}, p = {report.friedman_p:.3f}")
print(f"critical difference {report.cd:.3f}")
print("groups:", report.group_names())
print("significant pairs:", report.pair_names())

svg = render_svg(cd_layout(report.mean_ranks, report.groups, report.cd),
                 title="bibliographic databases")
with open("cd_diagram.svg", "w") as fh:
    fh.write(svg)
print("wrote cd_diagram.svg")
