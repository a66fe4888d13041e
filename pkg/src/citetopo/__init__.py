"""Graph statistics and statistical comparison of citation network topology."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    CitetopoError, EmptyGraphError, ManifestError, ParseError, ResourceError, StatisticsError,
)
from .graph import (  # noqa: E402
    DatasetManifest, DirectedGraph, UndirectedView, degrees, graph_from_edges,
    parse_edge_list, preprocess, read_manifest, undirected_view,
)
from .decomposition import FieldBowTie, WccResult, field_bowtie, largest_wcc  # noqa: E402
from .degree import (  # noqa: E402
    PowerLawFit, best_power_law, degree_distribution, degree_mixing_directed,
    degree_mixing_undirected, fit_power_law, neighbour_connectivity,
)
from .clustering import (  # noqa: E402
    ClusteringScores, clustering_all, clustering_mixing, clustering_profile,
)
from .distance import (  # noqa: E402
    EffectiveDiameter, HopPlot, anf_hop_plot, effective_diameter, exact_hop_plot,
)
from .compare import (  # noqa: E402
    ComparisonReport, StatMatrix, cd_groups, compare, fisher_independence_test,
    friedman_statistic, friedman_test, nemenyi_cd, rank_datasets, spearman,
    studentized_residuals,
)
from .profile import (  # noqa: E402
    PRESETS, STATISTICS, StatProfile, compute_profile, matrix_from_profiles, paper_profiles,
)
