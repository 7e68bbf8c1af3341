"""Detection of planted perfect matchings and spanning trees in
edge-count-calibrated Erdős–Rényi graphs."""

from .errors import (
    CapacityError, ConfigError, DimensionError, DomainError, InvalidEdgeError, ModelError,
    ParameterError, PlantedError,
)
from .graph import Graph, edge_index, edge_pair, union
from .samplers import (
    ModelKind, ModelParams, PlantedStructure, SeededRng, adjusted_q, sample_gnp,
    sample_perfect_matching, sample_planted, sample_spanning_tree,
)
from .detectors import (
    Decision, DetectorOutcome, TournamentPartition, build_tournament_partition,
    edge_count_detect, null_mean_y, y_detect, y_statistic,
)

__version__ = "0.1.0"

__all__ = [
    "PlantedError", "ConfigError", "InvalidEdgeError", "DimensionError", "ModelError", "DomainError",
    "ParameterError", "CapacityError",
    "Graph", "edge_index", "edge_pair", "union",
    "ModelKind", "ModelParams", "PlantedStructure", "SeededRng", "adjusted_q", "sample_gnp",
    "sample_perfect_matching", "sample_spanning_tree", "sample_planted",
    "Decision", "DetectorOutcome", "TournamentPartition", "build_tournament_partition",
    "edge_count_detect", "null_mean_y", "y_detect", "y_statistic",
]
