"""Ratio-targeted seed selection: learn the seeding-ratio scaling function
by simulated diffusion, invert it for a target female ratio, pick top-ranked
seeds per gender, and evaluate against the baselines.
"""

from __future__ import annotations

import csv
import heapq
import json
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path

import numpy as np

from .centrality import (GenderRanking, HiIndexConfig, Measure, ScoreTable,
                         degree, rank_by_gender, target_hi_index)
from .diffusion import ProbGraph, estimate_spread
from .graph import InteractionGraph
from .scores import EmbeddingIndexConfig, InfluenceScores, embedding_index


class MarginKind(Enum):
    RELATIVE = "relative"
    ABSOLUTE = "absolute"

    @classmethod
    def parse(cls, text: str) -> "MarginKind":
        t = text.strip().lower()
        for member in cls:
            if member.value == t:
                return member
        raise ValueError(f"unknown margin kind {text!r}")


DEFAULT_R_GRID = tuple(round(0.1 * i, 1) for i in range(11))


@dataclass(frozen=True)
class SeedingConfig:
    K: int
    zeta: float
    error_margin: float = 0.2
    margin_kind: MarginKind = MarginKind.RELATIVE
    K_s: int = 20
    num_samples: int = 10_000
    r_grid: tuple = DEFAULT_R_GRID
    master_seed: int = 0
    threads: int = 1

    def __post_init__(self):
        if self.K < 1:
            raise ValueError("K must be >= 1")
        if not 0.0 <= self.zeta <= 1.0:
            raise ValueError("zeta must be in [0,1]")
        if self.error_margin <= 0:
            raise ValueError("error_margin must be positive")
        grid = tuple(self.r_grid)
        if list(grid) != sorted(grid) or grid[0] != 0.0 or grid[-1] != 1.0:
            raise ValueError("r_grid must be sorted and span [0,1]")


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


@dataclass(frozen=True)
class ScalingTable:
    measure: Measure
    samples: list  # [(r, achieved female ratio s, spread)]
    skipped: list = field(default_factory=list)  # infeasible grid ratios

    def write_csv(self, path) -> None:
        with Path(path).open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["r", "s", "spread"])
            for r, s, spread in self.samples:
                writer.writerow([r, s, spread])


@dataclass(frozen=True)
class SeedSet:
    members: list
    measure: Measure | None
    zeta: float
    r: float
    female_count: int


@dataclass(frozen=True)
class EvalResult:
    abs_error: float
    spread: float
    s: float
    within_margin: bool
    flags: tuple = ()


def _margin_ok(abs_error: float, cfg: SeedingConfig) -> bool:
    if cfg.margin_kind is MarginKind.RELATIVE:
        return abs_error <= cfg.error_margin * cfg.zeta
    return abs_error <= cfg.error_margin


def _split_seeds(ranking: GenderRanking, r: float, k: int):
    nf = _round_half_up(r * k)
    nm = k - nf
    if len(ranking.females) < nf:
        raise ValueError(f"insufficient female nodes: need {nf}, "
                         f"have {len(ranking.females)}")
    if len(ranking.males) < nm:
        raise ValueError(f"insufficient male nodes: need {nm}, "
                         f"have {len(ranking.males)}")
    return ranking.females[:nf] + ranking.males[:nm], nf


def select_seeds(ranking: GenderRanking, r: float, k: int,
                 measure: Measure | None = None, zeta: float = 0.0) -> SeedSet:
    """Top round(r*K) females plus top complement males, females first."""
    if not 0.0 <= r <= 1.0:
        raise ValueError("r must be in [0,1]")
    members, nf = _split_seeds(ranking, r, k)
    return SeedSet(members=members, measure=measure, zeta=zeta, r=r,
                   female_count=nf)


def learn_omega(pg: ProbGraph, ranking: GenderRanking, cfg: SeedingConfig,
                measure: Measure | None = None) -> ScalingTable:
    """Sample the seeding-ratio -> achieved-ratio map over the r grid using
    K_s-sized seed groups. Infeasible grid points are recorded as skipped."""
    samples, skipped = [], []
    for r in cfg.r_grid:
        try:
            members, _ = _split_seeds(ranking, r, cfg.K_s)
        except ValueError:
            skipped.append(r)
            continue
        est = estimate_spread(pg, members, cfg.num_samples, cfg.master_seed,
                              threads=cfg.threads)
        samples.append((r, est.female_ratio, est.mean_spread))
    return ScalingTable(measure=measure, samples=samples, skipped=skipped)


def isotonic_fit(y, weights=None) -> np.ndarray:
    """Pool-adjacent-violators: least-squares non-decreasing fit."""
    y = np.asarray(y, dtype=np.float64)
    w = np.ones_like(y) if weights is None else np.asarray(weights, float)
    # blocks of (mean, weight, count)
    blocks = []
    for yi, wi in zip(y, w):
        blocks.append([yi, wi, 1])
        while len(blocks) > 1 and blocks[-2][0] > blocks[-1][0]:
            m2, w2, c2 = blocks.pop()
            m1, w1, c1 = blocks.pop()
            blocks.append([(m1 * w1 + m2 * w2) / (w1 + w2), w1 + w2, c1 + c2])
    out = np.empty_like(y)
    i = 0
    for m, _, c in blocks:
        out[i:i + c] = m
        i += c
    return out


@dataclass(frozen=True)
class OmegaInversion:
    r: float
    regressed_s: float
    out_of_range: bool


def invert_omega(tbl: ScalingTable, zeta: float,
                 grid_points: int = 1001) -> OmegaInversion:
    """Pick the seeding ratio whose isotonically-regressed achieved ratio is
    closest to zeta; ties go to the ratio with the larger recorded spread.
    Targets outside the achievable range clamp and are flagged."""
    if not tbl.samples:
        raise ValueError("scaling table is empty")
    rs = np.array([r for r, _, _ in tbl.samples])
    ss = isotonic_fit([s for _, s, _ in tbl.samples])
    spreads = np.array([sp for _, _, sp in tbl.samples])
    dense_r = np.linspace(rs[0], rs[-1], grid_points)
    dense_s = np.interp(dense_r, rs, ss)
    dense_spread = np.interp(dense_r, rs, spreads)
    err = np.abs(dense_s - zeta)
    best = err.min()
    near = err <= best + 1e-12
    candidates = np.flatnonzero(near)
    pick = candidates[np.argmax(dense_spread[candidates])]
    out_of_range = zeta < ss.min() - 1e-9 or zeta > ss.max() + 1e-9
    return OmegaInversion(r=float(dense_r[pick]), regressed_s=float(dense_s[pick]),
                          out_of_range=out_of_range)


def evaluate(seeds: SeedSet, pg: ProbGraph, cfg: SeedingConfig,
             flags=()) -> EvalResult:
    est = estimate_spread(pg, seeds.members, cfg.num_samples, cfg.master_seed,
                          threads=cfg.threads)
    abs_error = abs(est.female_ratio - cfg.zeta)
    return EvalResult(abs_error=abs_error, spread=est.mean_spread,
                      s=est.female_ratio,
                      within_margin=_margin_ok(abs_error, cfg),
                      flags=tuple(flags))


@dataclass(frozen=True)
class PipelineResult:
    seeds: SeedSet
    result: EvalResult
    scaling: ScalingTable

    def to_json(self, mode=None, master_seed=None) -> str:
        payload = {
            "measure": self.seeds.measure.value if self.seeds.measure else None,
            "zeta": self.seeds.zeta,
            "r": self.seeds.r,
            "K": len(self.seeds.members),
            "female_count": self.seeds.female_count,
            "abs_error": self.result.abs_error,
            "spread": self.result.spread,
            "s": self.result.s,
            "within_margin": self.result.within_margin,
            "flags": list(self.result.flags),
            "seeds": self.seeds.members,
        }
        if mode is not None:
            payload["mode"] = mode.value
        if master_seed is not None:
            payload["master_seed"] = master_seed
        return json.dumps(payload, sort_keys=True, indent=2)


def _rank_for_measure(g: InteractionGraph, measure: Measure, zeta: float,
                      scores: InfluenceScores | None,
                      hi_cfg: HiIndexConfig,
                      ei_cfg: EmbeddingIndexConfig) -> GenderRanking:
    if measure is Measure.TARGET_HI_INDEX:
        table = target_hi_index(g, zeta, hi_cfg)
    elif measure is Measure.EMBEDDING_INDEX:
        if scores is None:
            raise ValueError("embedding-index ranking requires a score file")
        table = embedding_index(g, scores, replace(ei_cfg, zeta=zeta), hi_cfg)
    else:
        raise ValueError(f"unsupported pipeline measure {measure}")
    return rank_by_gender(table, g)


def disparity_seed(g: InteractionGraph, pg: ProbGraph, cfg: SeedingConfig,
                   measures=(Measure.TARGET_HI_INDEX,),
                   scores: InfluenceScores | None = None,
                   hi_cfg: HiIndexConfig = HiIndexConfig(),
                   ei_cfg: EmbeddingIndexConfig | None = None) -> PipelineResult:
    """Full pipeline per measure (rank, learn omega, invert, select,
    evaluate); returns the best within-margin result by spread, or the
    minimum-error result when nothing lands inside the margin."""
    ei_cfg = ei_cfg or EmbeddingIndexConfig(zeta=cfg.zeta)
    candidates = []
    for measure in measures:
        ranking = _rank_for_measure(g, measure, cfg.zeta, scores, hi_cfg, ei_cfg)
        table = learn_omega(pg, ranking, cfg, measure=measure)
        inv = invert_omega(table, cfg.zeta)
        seeds = select_seeds(ranking, inv.r, cfg.K, measure=measure,
                             zeta=cfg.zeta)
        flags = ("target-outside-achievable-range",) if inv.out_of_range else ()
        result = evaluate(seeds, pg, cfg, flags=flags)
        candidates.append(PipelineResult(seeds=seeds, result=result,
                                         scaling=table))
    within = [c for c in candidates if c.result.within_margin]
    if within:
        return max(within, key=lambda c: c.result.spread)
    return min(candidates, key=lambda c: c.result.abs_error)


def _indegree_ranking(g: InteractionGraph):
    table = degree(g, "in")
    ranking = rank_by_gender(table, g)
    blind = sorted(g.nodes, key=lambda v: (-table.scores[v], v))
    return table, ranking, blind


def diversity_seeding_baseline(g: InteractionGraph, pg: ProbGraph,
                               cfg: SeedingConfig,
                               grid_points: int = 11) -> PipelineResult:
    """Search seeding ratios between the target and the top-K in-degree
    gender ratio for the one maximizing estimated spread."""
    _, ranking, blind = _indegree_ranking(g)
    top_k = blind[:cfg.K]
    rho = sum(1 for v in top_k if v in set(ranking.females)) / len(top_k)
    lo, hi = sorted((cfg.zeta, rho))
    ratios = [lo] if lo == hi else list(np.linspace(lo, hi, grid_points))
    best = None
    samples = []
    for r in ratios:
        try:
            seeds = select_seeds(ranking, r, cfg.K)
        except ValueError:
            continue
        est = estimate_spread(pg, seeds.members, cfg.num_samples,
                              cfg.master_seed, threads=cfg.threads)
        samples.append((r, est.female_ratio, est.mean_spread))
        if best is None or est.mean_spread > best[1].mean_spread:
            best = (seeds, est)
    if best is None:
        raise ValueError("no feasible seeding ratio in the search range")
    seeds, est = best
    abs_error = abs(est.female_ratio - cfg.zeta)
    result = EvalResult(abs_error=abs_error, spread=est.mean_spread,
                        s=est.female_ratio,
                        within_margin=_margin_ok(abs_error, cfg))
    return PipelineResult(seeds=seeds, result=result,
                          scaling=ScalingTable(measure=Measure.IN_DEGREE,
                                               samples=samples))


def agnostic_seeding(g: InteractionGraph, pg: ProbGraph,
                     cfg: SeedingConfig) -> PipelineResult:
    """Gender-blind top-K by in-degree, ties broken by node id."""
    if cfg.K > g.num_nodes:
        raise ValueError("K exceeds node count")
    _, ranking, blind = _indegree_ranking(g)
    members = blind[:cfg.K]
    nf = sum(1 for v in members if v in set(ranking.females))
    seeds = SeedSet(members=members, measure=Measure.IN_DEGREE, zeta=cfg.zeta,
                    r=nf / cfg.K, female_count=nf)
    result = evaluate(seeds, pg, cfg)
    return PipelineResult(seeds=seeds, result=result,
                          scaling=ScalingTable(measure=Measure.IN_DEGREE,
                                               samples=[]))


def _default_estimator(pg: ProbGraph, cfg: SeedingConfig):
    def est(members):
        e = estimate_spread(pg, list(members), cfg.num_samples,
                            cfg.master_seed, threads=cfg.threads)
        return e.mean_spread, e.mean_female_count
    return est


def _lazy_greedy(candidates, k: int, gain_of, feasible=None, fallback_gain=None):
    """CELF lazy greedy maximization of gain_of(S, v).

    Cached gains are re-evaluated only when a stale heap entry reaches the
    top. feasible(S, v, picks_left) may veto a candidate for the current
    pick; if it vetoes every candidate, the pick falls back to the
    candidate maximizing fallback_gain (constraint repair)."""
    chosen = []
    heap = [(-gain_of([], v), v, 0) for v in candidates]
    heapq.heapify(heap)
    gains_taken = []
    deferred = []
    while len(chosen) < k:
        if not heap:
            if not deferred:
                break
            repair = fallback_gain or gain_of
            _, v, _ = max(deferred, key=lambda item: repair(chosen, item[1]))
            deferred = [d for d in deferred if d[1] != v]
            gains_taken.append(gain_of(chosen, v))
            chosen.append(v)
        else:
            neg, v, it = heapq.heappop(heap)
            if it != len(chosen):
                heapq.heappush(heap, (-gain_of(chosen, v), v, len(chosen)))
                continue
            picks_left = k - len(chosen) - 1
            if feasible is not None and not feasible(chosen, v, picks_left):
                deferred.append((neg, v, it))
                continue
            chosen.append(v)
            gains_taken.append(-neg)
        for negg, u, _ in deferred:
            heapq.heappush(heap, (negg, u, -1))  # stale; re-evaluated on pop
        deferred = []
    return chosen, gains_taken


def im_balanced_baseline(g: InteractionGraph, pg: ProbGraph, cfg: SeedingConfig,
                         estimator=None) -> PipelineResult:
    """Two greedy passes: first maximize expected female influence to get
    its optimum, then maximize total spread subject to reaching zeta times
    that optimum by the final pick. `estimator(members) -> (spread, female)`
    is injectable so small graphs can use the exact oracle."""
    est = estimator or _default_estimator(pg, cfg)
    candidates = sorted(g.nodes)
    if cfg.K > len(candidates):
        raise ValueError("K exceeds node count")
    cache = {}

    def joint(members):
        key = tuple(sorted(members))
        if key not in cache:
            cache[key] = est(members) if members else (0.0, 0.0)
        return cache[key]

    def female_gain(s, v):
        return joint(list(s) + [v])[1] - joint(s)[1]

    pass1, _ = _lazy_greedy(candidates, cfg.K, female_gain)
    opt_female = joint(pass1)[1]
    needed = cfg.zeta * opt_female

    singleton_female = {v: joint([v])[1] for v in candidates}

    def spread_gain(s, v):
        return joint(list(s) + [v])[0] - joint(s)[0]

    def feasible(s, v, picks_left):
        if needed <= 0:
            return True
        have = joint(list(s) + [v])[1]
        rest = sorted((singleton_female[u] for u in candidates
                       if u not in s and u != v), reverse=True)[:picks_left]
        return have + sum(rest) >= needed - 1e-9

    pass2, gains = _lazy_greedy(candidates, cfg.K, spread_gain,
                                feasible=feasible, fallback_gain=female_gain)
    spread, female = joint(pass2)
    ratio = female / spread if spread else 0.0
    abs_error = abs(ratio - cfg.zeta)
    flags = []
    if female + 1e-9 < needed:
        flags.append("female-influence-constraint-infeasible")
    nf = sum(1 for v in pass2 if g.gender(v).value == "F")
    seeds = SeedSet(members=pass2, measure=None, zeta=cfg.zeta,
                    r=nf / cfg.K, female_count=nf)
    result = EvalResult(abs_error=abs_error, spread=spread, s=ratio,
                        within_margin=_margin_ok(abs_error, cfg),
                        flags=tuple(flags))
    return PipelineResult(seeds=seeds, result=result,
                          scaling=ScalingTable(measure=None, samples=[]))
