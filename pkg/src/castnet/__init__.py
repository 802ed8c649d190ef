"""Actor collaboration network analytics for movie/OTT catalogs."""

from .centrality import (
    Measure,
    ScoreTable,
    betweenness_centrality,
    closeness_centrality,
    degree_centrality,
    eigenvector_centrality,
)
from .community import (
    ClusterGraph,
    EvolutionTimeline,
    Partition,
    build_cluster_graph,
    community_evolution,
    crossover_scores,
    filter_interactions,
    louvain,
    modularity,
)
from .graph import BipartiteStore, CoGraph, build_bipartite, project
from .ingest import (
    PersonRecord,
    TitleKind,
    TitleRecord,
    normalize_name,
    parse_imdb,
    parse_netflix,
)
from .linkpred import (
    Method,
    PairScore,
    adamic_adar,
    common_neighbors,
    jaccard,
    predict_top,
    preferential_attachment,
    resource_allocation,
)
from .paths import (
    AnnotatedPath,
    Unreachable,
    distance_histogram,
    shortest_path,
    top_partnerships,
)
from .stats import CatalogSummary, summarize

__version__ = "0.1.0"

__all__ = [
    "AnnotatedPath",
    "BipartiteStore",
    "CatalogSummary",
    "ClusterGraph",
    "CoGraph",
    "EvolutionTimeline",
    "Measure",
    "Method",
    "PairScore",
    "Partition",
    "PersonRecord",
    "ScoreTable",
    "TitleKind",
    "TitleRecord",
    "Unreachable",
    "adamic_adar",
    "betweenness_centrality",
    "build_bipartite",
    "build_cluster_graph",
    "closeness_centrality",
    "common_neighbors",
    "community_evolution",
    "crossover_scores",
    "degree_centrality",
    "distance_histogram",
    "eigenvector_centrality",
    "filter_interactions",
    "jaccard",
    "louvain",
    "modularity",
    "normalize_name",
    "parse_imdb",
    "parse_netflix",
    "predict_top",
    "preferential_attachment",
    "project",
    "resource_allocation",
    "shortest_path",
    "summarize",
    "top_partnerships",
]
