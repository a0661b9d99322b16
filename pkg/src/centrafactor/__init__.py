"""Centrality metrics, exploratory factor analysis, and canonical
correlation for undirected networks."""

__version__ = "0.1.0"

from .cca import CcaResult, Regime, cca_first, classify_regime
from .centrality import (
    METRICS,
    CentralityDataset,
    betweenness_centrality,
    centrality_dataset,
    closeness_centrality,
    degree_centrality,
    eigenvector_centrality,
)
from .efa import (
    FactorModel,
    communalities,
    dominant_factor_map,
    fit_factor_model,
    fit_from_eigen,
    initial_loadings,
    retained_factor_count_by_variance,
    varimax,
)
from .generators import GeneratorSpec, generate, parse_generator_token
from .graph import (
    Graph,
    largest_connected_component,
    parse_edge_list,
    serialize_edge_list,
    validate_graph,
)
from .linalg import EigenDecomposition, correlation_matrix, jacobi_eigen, standardize_columns
from .pipeline import (
    AnalysisConfig,
    CorpusReport,
    NetworkReport,
    analyze_network,
    emit_reports,
    load_manifest,
    run_corpus,
    validate_corpus_report,
)

__all__ = [
    "METRICS",
    "AnalysisConfig",
    "CcaResult",
    "CentralityDataset",
    "CorpusReport",
    "EigenDecomposition",
    "FactorModel",
    "GeneratorSpec",
    "Graph",
    "NetworkReport",
    "Regime",
    "analyze_network",
    "betweenness_centrality",
    "cca_first",
    "centrality_dataset",
    "classify_regime",
    "closeness_centrality",
    "communalities",
    "correlation_matrix",
    "degree_centrality",
    "dominant_factor_map",
    "eigenvector_centrality",
    "emit_reports",
    "fit_factor_model",
    "fit_from_eigen",
    "generate",
    "initial_loadings",
    "jacobi_eigen",
    "largest_connected_component",
    "load_manifest",
    "parse_edge_list",
    "parse_generator_token",
    "retained_factor_count_by_variance",
    "run_corpus",
    "serialize_edge_list",
    "standardize_columns",
    "validate_corpus_report",
    "validate_graph",
    "varimax",
]
