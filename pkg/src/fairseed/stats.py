"""Gender-gap measurement apparatus: per-gender CCDF curves, Mann-Whitney
U tests over top percentiles, and a glass-ceiling summary grid.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.stats import rankdata

from .centrality import Measure, ScoreTable
from .graph import Gender, InteractionGraph


@dataclass(frozen=True)
class CcdfCurve:
    gender: Gender
    points: list  # [(value, fraction >= value)], value ascending

    def write_csv(self, path) -> None:
        with Path(path).open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["value", "fraction"])
            for value, fraction in self.points:
                writer.writerow([value, fraction])


@dataclass(frozen=True)
class UTestResult:
    u_statistic: float
    z_value: float
    p_value: float
    n_a: int
    n_b: int
    sided: str = "two-sided"
    method: str = "normal"  # normal | exact
    tie_policy: str = "midranks"


def ccdf(t: ScoreTable, g: InteractionGraph, gender: Gender) -> CcdfCurve:
    """Fraction of the gender group scoring >= x, one point per distinct x."""
    group = g.females() if gender is Gender.FEMALE else g.males()
    if not group:
        raise ValueError(f"no nodes with gender {gender.value}")
    values = sorted(t.scores[v] for v in group)
    n = len(values)
    points = []
    i = 0
    while i < n:
        v = values[i]
        points.append((v, (n - i) / n))
        while i < n and values[i] == v:
            i += 1
    return CcdfCurve(gender=gender, points=points)


def _exact_u_pvalue(n_a: int, n_b: int, u: float) -> float:
    """Two-sided exact p via the arrangement-count recursion (no ties).

    c(m, n, u) arrangements of m A's and n B's with u pairs where the A
    outranks the B: the overall maximum is either an A (beating all n B's)
    or a B, giving c(m, n, u) = c(m-1, n, u-n) + c(m, n-1, u).
    """
    size = n_a * n_b + 1
    counts = np.zeros((n_a + 1, size))
    counts[:, 0] = 1.0  # n = 0: the only arrangement has u = 0
    for n in range(1, n_b + 1):
        cur = np.zeros_like(counts)
        cur[0, 0] = 1.0
        for m in range(1, n_a + 1):
            cur[m] = counts[m]
            cur[m, n:] += cur[m - 1, :size - n]
        counts = cur
    counts = counts[n_a]
    total = counts.sum()
    mu = n_a * n_b / 2.0
    dev = abs(u - mu)
    mask = np.abs(np.arange(n_a * n_b + 1) - mu) >= dev - 1e-12
    return float(min(1.0, counts[mask].sum() / total))


def mann_whitney_u(a, b, exact_limit: int = 400) -> UTestResult:
    """Two-sided Mann-Whitney U test with midrank ties.

    The normal approximation uses tie-corrected variance and a continuity
    correction. Exact enumeration is used when n_a*n_b <= exact_limit and
    the pooled sample has no ties.
    """
    a = [float(x) for x in a]
    b = [float(x) for x in b]
    n_a, n_b = len(a), len(b)
    if n_a == 0 or n_b == 0:
        raise ValueError("both samples must be non-empty")
    pooled = np.asarray(a + b)
    ranks = rankdata(pooled)
    r_a = ranks[:n_a].sum()
    u_a = r_a - n_a * (n_a + 1) / 2.0

    _, tie_counts = np.unique(pooled, return_counts=True)
    has_ties = bool((tie_counts > 1).any())

    if not has_ties and n_a * n_b <= exact_limit:
        p = _exact_u_pvalue(n_a, n_b, u_a)
        mu = n_a * n_b / 2.0
        sd = math.sqrt(n_a * n_b * (n_a + n_b + 1) / 12.0)
        z = 0.0 if sd == 0 else (u_a - mu) / sd
        return UTestResult(u_statistic=u_a, z_value=z, p_value=p,
                           n_a=n_a, n_b=n_b, method="exact")

    mu = n_a * n_b / 2.0
    n = n_a + n_b
    tie_term = float(((tie_counts ** 3) - tie_counts).sum())
    var = n_a * n_b / 12.0 * ((n + 1) - tie_term / (n * (n - 1)))
    if var <= 0:
        return UTestResult(u_statistic=u_a, z_value=0.0, p_value=1.0,
                           n_a=n_a, n_b=n_b)
    sd = math.sqrt(var)
    num = abs(u_a - mu) - 0.5
    z_abs = max(num, 0.0) / sd
    p = min(1.0, math.erfc(z_abs / math.sqrt(2.0)))
    z = math.copysign(z_abs, u_a - mu) if u_a != mu else 0.0
    return UTestResult(u_statistic=u_a, z_value=z, p_value=p, n_a=n_a, n_b=n_b)


@dataclass(frozen=True)
class PercentileTestRow:
    percentile: float
    result: UTestResult | None
    flagged: bool = False
    reason: str = ""


def _top_fraction(values, fraction: float):
    """Top `fraction` of values, highest first; empty when the slice rounds
    down to zero elements."""
    k = int(math.floor(fraction * len(values)))
    return sorted(values, reverse=True)[:k]


def top_percentile_tests(t: ScoreTable, g: InteractionGraph,
                         percentiles=(0.1, 0.01, 0.001)) -> list:
    """Male-vs-female U test over each gender's top score percentile."""
    if not percentiles:
        raise ValueError("percentiles must be non-empty")
    female_scores = [t.scores[v] for v in g.females()]
    male_scores = [t.scores[v] for v in g.males()]
    rows = []
    for p in percentiles:
        if not 0.0 < p <= 1.0:
            raise ValueError(f"percentile {p} outside (0,1]")
        top_m = _top_fraction(male_scores, p)
        top_f = _top_fraction(female_scores, p)
        if not top_m or not top_f:
            rows.append(PercentileTestRow(percentile=p, result=None, flagged=True,
                                          reason="empty sample"))
            continue
        rows.append(PercentileTestRow(percentile=p,
                                      result=mann_whitney_u(top_m, top_f)))
    return rows


def _stars(p: float) -> str:
    if p <= 0.001:
        return "***"
    if p <= 0.01:
        return "**"
    if p <= 0.05:
        return "*"
    return ""


def write_percentile_tests_csv(rows, path, measure_name: str = "") -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["measure", "percentile", "u_statistic", "z", "p_value",
                         "significance", "n_male", "n_female", "flag"])
        for row in rows:
            if row.result is None:
                writer.writerow([measure_name, row.percentile, "", "", "", "",
                                 "", "", row.reason])
            else:
                r = row.result
                writer.writerow([measure_name, row.percentile, r.u_statistic,
                                 r.z_value, r.p_value, _stars(r.p_value),
                                 r.n_a, r.n_b, ""])


@dataclass(frozen=True)
class GlassCeilingEntry:
    measure: Measure
    applicable: bool
    flagged: bool
    p_value: float | None = None


def glass_ceiling_flag(t: ScoreTable, g: InteractionGraph,
                       band: float = 0.01, alpha: float = 0.05) -> GlassCeilingEntry:
    """Flag a measure when males dominate females across the whole top
    band of within-gender ranks and the band's U test is significant.
    """
    females = g.females()
    males = g.males()
    if not females or not males:
        return GlassCeilingEntry(measure=t.measure, applicable=False, flagged=False)
    f_scores = sorted((t.scores[v] for v in females), reverse=True)
    m_scores = sorted((t.scores[v] for v in males), reverse=True)
    k = max(1, int(math.floor(band * min(len(females), len(males)))))
    # Compare at k matched rank quantiles inside each gender's own band.
    dominates = True
    strict = False
    for i in range(k):
        fm = m_scores[min(int(round(i / k * band * len(m_scores))), len(m_scores) - 1)]
        ff = f_scores[min(int(round(i / k * band * len(f_scores))), len(f_scores) - 1)]
        if fm < ff:
            dominates = False
            break
        if fm > ff:
            strict = True
    top_m = _top_fraction(m_scores, band)
    top_f = _top_fraction(f_scores, band)
    if not top_m or not top_f:
        return GlassCeilingEntry(measure=t.measure, applicable=False, flagged=False)
    test = mann_whitney_u(top_m, top_f)
    flagged = dominates and strict and test.p_value <= alpha
    return GlassCeilingEntry(measure=t.measure, applicable=True, flagged=flagged,
                             p_value=test.p_value)


def glass_ceiling_summary(g: InteractionGraph, tables, band: float = 0.01,
                          alpha: float = 0.05) -> list:
    """One GlassCeilingEntry per supplied score table."""
    return [glass_ceiling_flag(t, g, band=band, alpha=alpha) for t in tables]


def write_summary_csv(entries, path) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["measure", "glass_ceiling", "p_value"])
        for e in entries:
            status = "n/a" if not e.applicable else ("X" if e.flagged else "")
            writer.writerow([e.measure.value, status,
                             "" if e.p_value is None else e.p_value])
