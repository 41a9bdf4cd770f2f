"""Fairness-aware network ranking and ratio-targeted influence seeding."""

__version__ = "0.1.0"

from .centrality import (GenderRanking, HiIndexConfig, Measure, ScoreTable,
                         degree, hi_index, intensity, neighbor_activity_count,
                         pagerank, rank_by_gender, target_hi_index)
from .diffusion import (DiffusionOutcome, ProbGraph, ProbMode, SpreadEstimate,
                        edge_probabilities, estimate_spread, exact_spread_small,
                        simulate_ic)
from .graph import (Gender, GraphFormatError, InteractionGraph,
                    InteractionType, UnknownNodeError, filter_inactive,
                    load_interactions, write_graph_csv)
from .scores import (EmbeddingIndexConfig, InfluenceScores, embedding_index,
                     load_scores, write_scores)
from .seeding import (EvalResult, MarginKind, PipelineResult, ScalingTable,
                      SeedingConfig, SeedSet, agnostic_seeding,
                      disparity_seed, diversity_seeding_baseline, evaluate,
                      im_balanced_baseline, invert_omega, isotonic_fit,
                      learn_omega, select_seeds)
from .stats import (CcdfCurve, UTestResult, ccdf, glass_ceiling_summary,
                    mann_whitney_u, top_percentile_tests)
from .synth import SyntheticGraphParams, generate_synthetic
