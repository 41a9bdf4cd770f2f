"""Training objective, SGD loop, gradient verification, score export."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch

from .config import InfGnnHyperParams
from .data import TrainingGraph, negative_distribution
from .model import InfGnn


def draw_negatives(g: TrainingGraph, params: InfGnnHyperParams) -> torch.Tensor:
    """Fixed (num_nodes, negative_samples) table drawn once per run from
    the unigram^(3/4) distribution, so repeated epochs see the same
    expectation estimate and runs are reproducible."""
    rng = np.random.default_rng(params.rng_seed & (2**64 - 1))
    probs = negative_distribution(g)
    table = rng.choice(g.num_nodes, size=(g.num_nodes, params.negative_samples),
                       p=probs)
    return torch.from_numpy(table).long()


def positive_pairs(g: TrainingGraph):
    src, dst = [], []
    for i, neigh in enumerate(g.in_neighbors):
        for j in neigh:
            src.append(j)
            dst.append(i)
    return (torch.tensor(src, dtype=torch.long),
            torch.tensor(dst, dtype=torch.long))


def loss_terms(model: InfGnn, features: torch.Tensor, pos,
               negatives: torch.Tensor):
    """(total, proximity, influence) losses.

    Proximity is the skip-gram objective over in-neighbor pairs with the
    negative expectation estimated from the fixed sample table; influence
    penalizes the gap between each score and its neighborhood estimate
    while pushing scores of unrelated nodes apart; plus l1 on scores and
    per-node squared l2 on embeddings.
    """
    p = model.params
    h, s = model(features)
    pos_src, pos_dst = pos
    pos_term = torch.sigmoid((h[pos_dst] * h[pos_src]).sum(dim=1)).sum()
    neg_dots = (h.unsqueeze(1) * h[negatives]).sum(dim=2)
    neg_term = torch.sigmoid(-neg_dots).mean(dim=1).sum()
    l_prox = -(pos_term + neg_term)

    s_est = model.estimated_scores(h, s)
    l_inf = (torch.abs(s - s_est).sum()
             - torch.abs(s.unsqueeze(1) - s[negatives]).mean(dim=1).sum())

    total = (l_prox + p.lambda1 * l_inf + p.lambda2 * s.abs().sum()
             + p.lambda3 * (h ** 2).sum())
    return total, l_prox, l_inf


@dataclass(frozen=True)
class TrainResult:
    scores: dict          # node id -> float in (0,1)
    losses: list          # total loss per epoch (pre-step)
    final_loss: float


def train(g: TrainingGraph, features: np.ndarray,
          params: InfGnnHyperParams) -> TrainResult:
    """Full-batch SGD for `epochs` steps; deterministic for a fixed seed.

    Aborts with a diagnostic if the loss stops being finite.
    """
    x = torch.from_numpy(np.asarray(features, dtype=np.float64))
    model = InfGnn(g, x.shape[1], params)
    pos = positive_pairs(g)
    negatives = draw_negatives(g, params)
    opt = torch.optim.SGD(model.parameters(), lr=params.learning_rate)
    losses = []
    for epoch in range(params.epochs):
        opt.zero_grad()
        total, _, _ = loss_terms(model, x, pos, negatives)
        if not torch.isfinite(total):
            raise RuntimeError(
                f"training diverged: non-finite loss at epoch {epoch}; "
                f"lower learning_rate (currently {params.learning_rate})")
        total.backward()
        opt.step()
        losses.append(float(total.detach()))
    with torch.no_grad():
        final, _, _ = loss_terms(model, x, pos, negatives)
        if not torch.isfinite(final):
            raise RuntimeError("training diverged: non-finite final loss")
        _, s = model(x)
    scores = {v: float(s[i]) for i, v in enumerate(g.ids)}
    return TrainResult(scores=scores, losses=losses, final_loss=float(final))


def gradient_check(g: TrainingGraph, features: np.ndarray,
                   params: InfGnnHyperParams, num_probes: int = 50,
                   eps: float = 1e-6, grad_transform=None) -> float:
    """Max relative error between autograd and central finite differences
    over `num_probes` randomly probed parameter entries.

    `grad_transform(name, tensor) -> tensor` lets tests inject a
    deliberately corrupted analytic gradient.
    """
    x = torch.from_numpy(np.asarray(features, dtype=np.float64))
    model = InfGnn(g, x.shape[1], params)
    pos = positive_pairs(g)
    negatives = draw_negatives(g, params)

    def objective():
        total, _, _ = loss_terms(model, x, pos, negatives)
        return total

    model.zero_grad()
    objective().backward()
    named = [(name, p) for name, p in model.named_parameters()]
    grads = {name: p.grad.clone() for name, p in named}
    if grad_transform is not None:
        grads = {name: grad_transform(name, grad)
                 for name, grad in grads.items()}

    # Floor the denominator at a fraction of the typical gradient entry so
    # finite-difference roundoff on near-zero entries does not dominate.
    scale = float(np.mean([g.abs().mean() for g in grads.values()]))
    floor = max(0.01 * scale, 1e-8)

    rng = np.random.default_rng(params.rng_seed + 1)
    worst = 0.0
    with torch.no_grad():
        for _ in range(num_probes):
            name, p = named[int(rng.integers(len(named)))]
            flat = p.view(-1)
            k = int(rng.integers(flat.numel()))
            orig = float(flat[k])
            flat[k] = orig + eps
            up = float(objective())
            flat[k] = orig - eps
            down = float(objective())
            flat[k] = orig
            fd = (up - down) / (2 * eps)
            ad = float(grads[name].view(-1)[k])
            rel = abs(ad - fd) / max(abs(ad) + abs(fd), floor)
            worst = max(worst, rel)
    return worst


def export_scores(scores: dict, path) -> None:
    """TSV `node_id<TAB>score`, LF endings, full-precision decimal text."""
    with Path(path).open("w", newline="\n") as fh:
        for v in sorted(scores):
            fh.write(f"{v}\t{scores[v]!r}\n")
