"""Bridge to externally trained per-node influence scores and the
score-weighted, ratio-penalized in-degree ranking built from them.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path

from .centrality import HiIndexConfig, Measure, ScoreTable, _neighbors, _qualifies
from .graph import Gender, InteractionGraph


@dataclass(frozen=True)
class InfluenceScores:
    scores: dict  # node id -> value in [0,1]


@dataclass(frozen=True)
class EmbeddingIndexConfig:
    n_threshold: int = 3
    zeta: float = 0.5

    def __post_init__(self):
        if self.n_threshold < 1:
            raise ValueError("n_threshold must be >= 1")
        if not 0.0 <= self.zeta <= 1.0:
            raise ValueError("zeta must be in [0,1]")


def load_scores(path, g: InteractionGraph) -> InfluenceScores:
    """Read the TSV `node_id<TAB>score` file and validate coverage and range.

    Nodes absent from the graph are ignored with a warning; graph nodes
    absent from the file are an error.
    """
    scores = {}
    p = Path(path)
    with p.open() as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(f"{p}:{lineno}: expected 'node_id<TAB>score'")
            node_id, text = parts[0], parts[1]
            try:
                value = float(text)
            except ValueError:
                raise ValueError(f"{p}:{lineno}: bad score {text!r}") from None
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{p}:{lineno}: score {value} outside [0,1]")
            scores[node_id] = value
    missing = sorted(v for v in g.nodes if v not in scores)
    if missing:
        raise ValueError(f"score file missing nodes: {missing[:10]}"
                         + ("..." if len(missing) > 10 else ""))
    extra = [v for v in scores if v not in g.nodes]
    if extra:
        warnings.warn(f"score file has {len(extra)} nodes not in the graph; "
                      "ignored", stacklevel=2)
    return InfluenceScores(scores={v: scores[v] for v in g.nodes})


def write_scores(scores: InfluenceScores, path) -> None:
    with Path(path).open("w", newline="\n") as fh:
        for v in sorted(scores.scores):
            fh.write(f"{v}\t{scores.scores[v]!r}\n")


def embedding_index(g: InteractionGraph, sc: InfluenceScores,
                    cfg: EmbeddingIndexConfig = EmbeddingIndexConfig(),
                    hi_cfg: HiIndexConfig = HiIndexConfig()) -> ScoreTable:
    """score * in-degree * (1 - |qualifying-neighbor female share - zeta|).

    Qualifying neighbors are those counted at activity threshold
    cfg.n_threshold; nodes with none score 0, mirroring the targeted
    H-index degenerate rule.
    """
    missing = [v for v in g.nodes if v not in sc.scores]
    if missing:
        raise ValueError(f"influence scores missing nodes: {missing[:10]}")
    out = {}
    for v in g.nodes:
        d_in = len(g.in_adj[v])
        qual = [u for u in _neighbors(g, v, hi_cfg)
                if _qualifies(g, v, u, cfg.n_threshold, hi_cfg)]
        if d_in == 0 or not qual:
            out[v] = 0.0
            continue
        nf = sum(1 for u in qual if g.gender(u) is Gender.FEMALE)
        penalty = 1.0 - abs(nf / len(qual) - cfg.zeta)
        out[v] = sc.scores[v] * d_in * penalty
    return ScoreTable(measure=Measure.EMBEDDING_INDEX, scores=out, zeta=cfg.zeta)
