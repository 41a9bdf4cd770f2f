import numpy as np
import pytest

from fairseed.graph import Gender, InteractionGraph, InteractionType
from fairseed.diffusion import ProbGraph, ProbMode


def make_graph(genders, edges, itype=InteractionType.LIKE):
    """genders: {id: 'F'|'M'}; edges: {(src, dst): weight}."""
    nodes = {v: Gender.parse(g) for v, g in genders.items()}
    return InteractionGraph(nodes=nodes, edges=dict(edges), itype=itype)


def make_prob_graph(genders, edge_probs, mode=ProbMode.LITERAL):
    nodes = {v: Gender.parse(g) for v, g in genders.items()}
    return ProbGraph.from_edges(nodes, dict(edge_probs), mode)


def random_graph(rng, max_nodes=30, max_edges=120, max_weight=8):
    n = int(rng.integers(2, max_nodes + 1))
    ids = [f"v{i:02d}" for i in range(n)]
    genders = {v: ("F" if rng.random() < 0.5 else "M") for v in ids}
    m = int(rng.integers(0, max_edges + 1))
    edges = {}
    for _ in range(m):
        s, d = rng.integers(0, n, size=2)
        if s == d:
            continue
        edges[(ids[s], ids[d])] = int(rng.integers(1, max_weight + 1))
    return make_graph(genders, edges)


def random_prob_graph(rng, max_nodes=8, max_edges=12):
    n = int(rng.integers(2, max_nodes + 1))
    ids = [f"v{i}" for i in range(n)]
    genders = {v: ("F" if rng.random() < 0.5 else "M") for v in ids}
    edges = {}
    while len(edges) < max_edges:
        s, d = rng.integers(0, n, size=2)
        if s == d:
            continue
        edges[(ids[s], ids[d])] = float(np.round(rng.random(), 3))
        if rng.random() < 0.3:
            break
    nodes = {v: Gender.parse(g) for v, g in genders.items()}
    return ProbGraph.from_edges(nodes, edges, ProbMode.LITERAL)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
