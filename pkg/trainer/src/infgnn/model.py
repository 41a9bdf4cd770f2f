"""Attention-aggregation network producing node embeddings and scores.

Stacked single-head additive-attention layers over each node's in-
neighborhood (a self-loop keeps isolated nodes defined), a sigmoid
influence head, and the attention-weighted neighbor-score estimate used
by the self-supervised influence loss. All math is float64.
"""

from __future__ import annotations

import numpy as np
import torch
from torch import nn

from .config import InfGnnHyperParams
from .data import TrainingGraph

_LOGIT_CLAMP = 30.0


def aggregation_pairs(g: TrainingGraph):
    """(src, dst) index arrays over every in-neighbor pair plus one
    self-loop per node; dst is the aggregating node."""
    src, dst = [], []
    for i, neigh in enumerate(g.in_neighbors):
        for j in neigh:
            src.append(j)
            dst.append(i)
        src.append(i)
        dst.append(i)
    return (torch.tensor(src, dtype=torch.long),
            torch.tensor(dst, dtype=torch.long))


def _segment_softmax(logits, segments, num_segments):
    """Softmax of logits grouped by segment id, numerically stabilized."""
    top = torch.full((num_segments,), -torch.inf, dtype=logits.dtype)
    top = top.scatter_reduce(0, segments, logits, reduce="amax")
    shifted = torch.exp(logits - top[segments])
    denom = torch.zeros(num_segments, dtype=logits.dtype)
    denom = denom.index_add(0, segments, shifted)
    return shifted / denom[segments]


class InfGnn(nn.Module):
    def __init__(self, g: TrainingGraph, in_dim: int,
                 params: InfGnnHyperParams):
        super().__init__()
        self.params = params
        self.num_nodes = g.num_nodes
        self.in_dim = in_dim
        src, dst = aggregation_pairs(g)
        self.register_buffer("agg_src", src)
        self.register_buffer("agg_dst", dst)

        gen = torch.Generator().manual_seed(params.rng_seed)

        def init(*shape, scale):
            return nn.Parameter(
                scale * torch.randn(*shape, generator=gen, dtype=torch.float64))

        dims = [in_dim] + [params.hidden_dim] * params.layers
        self.weights = nn.ParameterList(
            init(dims[l], dims[l + 1], scale=1.0 / np.sqrt(dims[l]))
            for l in range(params.layers))
        self.attn = nn.ParameterList(
            init(2 * dims[l + 1], scale=0.1) for l in range(params.layers))
        self.score_head = init(params.hidden_dim, scale=0.1)
        self.influence_attn = init(2 * params.hidden_dim, scale=0.1)

    def forward(self, features: torch.Tensor):
        """Returns (embeddings, scores); scores lie strictly in (0,1)."""
        if features.shape != (self.num_nodes, self.in_dim):
            raise ValueError(
                f"expected features of shape {(self.num_nodes, self.in_dim)}, "
                f"got {tuple(features.shape)}")
        h = features.to(torch.float64)
        for w, a in zip(self.weights, self.attn):
            z = h @ w
            logits = torch.cat([z[self.agg_dst], z[self.agg_src]], dim=1) @ a
            alpha = _segment_softmax(logits, self.agg_dst, self.num_nodes)
            agg = torch.zeros_like(z)
            agg = agg.index_add(0, self.agg_dst,
                                alpha.unsqueeze(1) * z[self.agg_src])
            h = torch.relu(agg)
        scores = torch.sigmoid(h @ self.score_head)
        return h, scores

    def estimated_scores(self, h: torch.Tensor, scores: torch.Tensor):
        """Attention-weighted neighbor score per node: each in-neighbor j
        contributes exp(a^T[h_i,h_j]) * s_j normalized by j's own
        neighborhood attention mass (two-hop normalization)."""
        logits = torch.cat([h[self.agg_dst], h[self.agg_src]], dim=1) \
            @ self.influence_attn
        weight = torch.exp(logits.clamp(-_LOGIT_CLAMP, _LOGIT_CLAMP))
        denom = torch.zeros(self.num_nodes, dtype=h.dtype)
        denom = denom.index_add(0, self.agg_dst, weight)
        contrib = weight * scores[self.agg_src] / denom[self.agg_src]
        out = torch.zeros(self.num_nodes, dtype=h.dtype)
        return out.index_add(0, self.agg_dst, contrib)
