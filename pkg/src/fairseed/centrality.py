"""Node ranking measures: intensity, degree, the activity H-index and its
gender-targeted variant, and weighted PageRank, plus per-gender rankings.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from .graph import Gender, InteractionGraph


class Measure(Enum):
    IN_INTENSITY = "in-intensity"
    OUT_INTENSITY = "out-intensity"
    IN_DEGREE = "in-degree"
    OUT_DEGREE = "out-degree"
    HI_INDEX = "hi-index"
    TARGET_HI_INDEX = "target-hi-index"
    PAGERANK = "pagerank"
    EMBEDDING_INDEX = "embedding-index"

    @classmethod
    def parse(cls, text: str) -> "Measure":
        t = text.strip().lower().replace("_", "-")
        for member in cls:
            if member.value == t:
                return member
        raise ValueError(f"unknown measure {text!r}")


@dataclass(frozen=True)
class ScoreTable:
    measure: Measure
    scores: dict  # node id -> float
    zeta: float | None = None
    converged: bool = True

    def write_tsv(self, path) -> None:
        with Path(path).open("w", newline="\n") as fh:
            for v in sorted(self.scores):
                fh.write(f"{v}\t{self.scores[v]!r}\n")


@dataclass(frozen=True)
class GenderRanking:
    females: list
    males: list
    tiebreak: str = "score desc, node id asc"


@dataclass(frozen=True)
class HiIndexConfig:
    """Knobs for the neighbor set and activity count of the H-style index.

    neighbor_mode: which one-hop neighbors of v are counted.
    activity: 'total' counts a neighbor's sent+received weight over the
        whole graph; 'sent' counts only what the neighbor sends.
    split_threshold: when True a neighbor qualifies at level n only if its
        interactions with v reach n AND its interactions with everyone
        else also reach n, instead of pooling everything.
    """
    neighbor_mode: str = "in"     # in | out | undirected
    activity: str = "total"       # total | sent
    split_threshold: bool = False


def intensity(g: InteractionGraph, direction: str) -> ScoreTable:
    """Summed edge weights received ('in') or sent ('out') per node."""
    adj = g.in_adj if direction == "in" else g.out_adj
    measure = Measure.IN_INTENSITY if direction == "in" else Measure.OUT_INTENSITY
    scores = {v: float(sum(adj[v].values())) for v in g.nodes}
    return ScoreTable(measure=measure, scores=scores)


def degree(g: InteractionGraph, direction: str) -> ScoreTable:
    """Distinct in- or out-neighbor counts, ignoring weights."""
    adj = g.in_adj if direction == "in" else g.out_adj
    measure = Measure.IN_DEGREE if direction == "in" else Measure.OUT_DEGREE
    scores = {v: float(len(adj[v])) for v in g.nodes}
    return ScoreTable(measure=measure, scores=scores)


def _neighbors(g: InteractionGraph, v, cfg: HiIndexConfig):
    if cfg.neighbor_mode == "in":
        return list(g.in_adj[v])
    if cfg.neighbor_mode == "out":
        return list(g.out_adj[v])
    if cfg.neighbor_mode == "undirected":
        return sorted(set(g.in_adj[v]) | set(g.out_adj[v]))
    raise ValueError(f"unknown neighbor_mode {cfg.neighbor_mode!r}")


def _activity(g: InteractionGraph, u, cfg: HiIndexConfig) -> int:
    if cfg.activity == "total":
        return g.total_weight(u)
    if cfg.activity == "sent":
        return sum(g.out_adj[u].values())
    raise ValueError(f"unknown activity {cfg.activity!r}")


def _qualifies(g: InteractionGraph, v, u, n: int, cfg: HiIndexConfig) -> bool:
    """Does neighbor u of v count at activity level n?"""
    if not cfg.split_threshold:
        return _activity(g, u, cfg) >= n
    with_v = g.out_adj[u].get(v, 0) + g.in_adj[u].get(v, 0)
    return with_v >= n and _activity(g, u, cfg) - with_v >= n


def neighbor_activity_count(g: InteractionGraph, v, n: int,
                            cfg: HiIndexConfig = HiIndexConfig()) -> int:
    """Number of v's neighbors whose activity reaches n."""
    if v not in g.nodes:
        raise ValueError(f"unknown node {v}")
    if n < 1:
        raise ValueError("n must be >= 1")
    return sum(1 for u in _neighbors(g, v, cfg) if _qualifies(g, v, u, n, cfg))


def _h_value(activities) -> int:
    """Largest h with at least h entries >= h."""
    acts = sorted(activities, reverse=True)
    h = 0
    for i, a in enumerate(acts, start=1):
        if a >= i:
            h = i
        else:
            break
    return h


def hi_index(g: InteractionGraph,
             cfg: HiIndexConfig = HiIndexConfig()) -> ScoreTable:
    """H(v) = max n such that at least n neighbors have activity >= n."""
    if cfg.split_threshold:
        scores = {}
        for v in g.nodes:
            h, n = 0, 1
            while neighbor_activity_count(g, v, n, cfg) >= n:
                h = n
                n += 1
            scores[v] = float(h)
        return ScoreTable(measure=Measure.HI_INDEX, scores=scores)
    act = {u: _activity(g, u, cfg) for u in g.nodes}
    scores = {}
    for v in g.nodes:
        scores[v] = float(_h_value(act[u] for u in _neighbors(g, v, cfg)))
    return ScoreTable(measure=Measure.HI_INDEX, scores=scores)


def target_hi_index(g: InteractionGraph, zeta: float,
                    cfg: HiIndexConfig = HiIndexConfig()) -> ScoreTable:
    """H(v) scaled by 1 - |female share of qualifying neighbors - zeta|.

    Nodes with H(v) = 0 have no qualifying neighbors and score 0.
    """
    if not 0.0 <= zeta <= 1.0:
        raise ValueError("zeta must be in [0,1]")
    base = hi_index(g, cfg)
    scores = {}
    for v in g.nodes:
        h = int(base.scores[v])
        if h == 0:
            scores[v] = 0.0
            continue
        qual = [u for u in _neighbors(g, v, cfg) if _qualifies(g, v, u, h, cfg)]
        nf = sum(1 for u in qual if g.gender(u) is Gender.FEMALE)
        ratio = nf / len(qual)
        scores[v] = h * (1.0 - abs(ratio - zeta))
    return ScoreTable(measure=Measure.TARGET_HI_INDEX, scores=scores, zeta=zeta)


def pagerank(g: InteractionGraph, damping: float = 0.85, tol: float = 1e-10,
             max_iter: int = 200, weighted: bool = True) -> ScoreTable:
    """Power iteration on the (optionally weight-) normalized transition
    structure; dangling mass is spread uniformly. Scores sum to 1.
    """
    if g.num_nodes == 0:
        raise ValueError("pagerank requires a non-empty graph")
    if not 0.0 < damping < 1.0:
        raise ValueError("damping must be in (0,1)")
    ids = sorted(g.nodes)
    idx = {v: i for i, v in enumerate(ids)}
    n = len(ids)

    src, dst, p = [], [], []
    for v in ids:
        out = g.out_adj[v]
        if not out:
            continue
        total = sum(out.values()) if weighted else len(out)
        for u, w in out.items():
            src.append(idx[v])
            dst.append(idx[u])
            p.append((w if weighted else 1) / total)
    src = np.asarray(src, dtype=np.intp)
    dst = np.asarray(dst, dtype=np.intp)
    p = np.asarray(p, dtype=np.float64)
    dangling = np.array([not g.out_adj[v] for v in ids])

    x = np.full(n, 1.0 / n)
    converged = False
    for _ in range(max_iter):
        nxt = np.zeros(n)
        np.add.at(nxt, dst, x[src] * p)
        nxt += x[dangling].sum() / n
        nxt = (1.0 - damping) / n + damping * nxt
        if np.abs(nxt - x).sum() < tol:
            x = nxt
            converged = True
            break
        x = nxt
    x = x / x.sum()
    scores = {v: float(x[idx[v]]) for v in ids}
    return ScoreTable(measure=Measure.PAGERANK, scores=scores, converged=converged)


def rank_by_gender(t: ScoreTable, g: InteractionGraph) -> GenderRanking:
    """Descending score per gender; ties broken by ascending node id."""
    missing = [v for v in g.nodes if v not in t.scores]
    if missing:
        raise ValueError(f"score table missing nodes: {missing[:5]}")
    key = lambda v: (-t.scores[v], v)
    return GenderRanking(females=sorted(g.females(), key=key),
                         males=sorted(g.males(), key=key))
