"""Attention-GNN trainer for per-node influence scores."""

from .config import InfGnnHyperParams, parse_config
from .data import (TrainingGraph, default_features, load_features, load_graph,
                   negative_distribution)
from .model import InfGnn, aggregation_pairs
from .train import (TrainResult, draw_negatives, export_scores,
                    gradient_check, loss_terms, positive_pairs, train)

__version__ = "0.1.0"

__all__ = [
    "InfGnnHyperParams", "parse_config",
    "TrainingGraph", "default_features", "load_features", "load_graph",
    "negative_distribution",
    "InfGnn", "aggregation_pairs",
    "TrainResult", "draw_negatives", "export_scores", "gradient_check",
    "loss_terms", "positive_pairs", "train",
    "__version__",
]
