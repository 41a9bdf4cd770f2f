"""Graph and feature loading for training.

Consumes the interaction CSV formats (`id,gender` node files and
`sender,receiver,type,timestamp` edge files, one row per interaction)
plus an optional `id,f1,f2,...` feature CSV. When no feature file is
given, nodes are initialized with a gender one-hot plus normalized in-
and out-degree.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


@dataclass(frozen=True)
class TrainingGraph:
    ids: tuple                  # sorted node ids
    index: dict                 # id -> position
    is_female: np.ndarray       # bool per node
    edges: dict                 # (src, dst) -> weight (interaction count)
    in_neighbors: tuple         # tuple of sorted in-neighbor index tuples

    @property
    def num_nodes(self) -> int:
        return len(self.ids)

    def degrees(self):
        d_in = np.array([len(n) for n in self.in_neighbors], dtype=np.float64)
        d_out = np.zeros(self.num_nodes)
        for (s, _d) in self.edges:
            d_out[self.index[s]] += 1
        return d_in, d_out


def load_graph(nodes_path, edges_path) -> TrainingGraph:
    genders = {}
    npath = Path(nodes_path)
    with npath.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header[:2]] != ["id", "gender"]:
            raise ValueError(f"{npath}: expected header 'id,gender'")
        for lineno, row in enumerate(reader, start=2):
            if not row or not row[0].strip():
                continue
            node_id, gender = row[0].strip(), row[1].strip().upper()
            if gender not in ("F", "M"):
                raise ValueError(f"{npath}:{lineno}: gender must be F or M")
            if node_id in genders:
                raise ValueError(f"{npath}:{lineno}: duplicate id {node_id!r}")
            genders[node_id] = gender

    edges = {}
    epath = Path(edges_path)
    with epath.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        expected = ["sender", "receiver", "type", "timestamp"]
        if header is None or [h.strip().lower() for h in header[:4]] != expected:
            raise ValueError(
                f"{epath}: expected header 'sender,receiver,type,timestamp'")
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            s, r = row[0].strip(), row[1].strip()
            for v in (s, r):
                if v not in genders:
                    raise ValueError(f"{epath}:{lineno}: unknown node {v!r}")
            if s == r:
                continue
            edges[(s, r)] = edges.get((s, r), 0) + 1

    ids = tuple(sorted(genders))
    index = {v: i for i, v in enumerate(ids)}
    incoming = [set() for _ in ids]
    for (s, r) in edges:
        incoming[index[r]].add(index[s])
    return TrainingGraph(
        ids=ids, index=index,
        is_female=np.array([genders[v] == "F" for v in ids]),
        edges=edges,
        in_neighbors=tuple(tuple(sorted(n)) for n in incoming))


def load_features(path, g: TrainingGraph) -> np.ndarray:
    """`id,f1,f2,...` rows covering every node, uniform dimensionality."""
    p = Path(path)
    rows = {}
    dim = None
    with p.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or header[0].strip().lower() != "id":
            raise ValueError(f"{p}: expected header 'id,f1,f2,...'")
        for lineno, row in enumerate(reader, start=2):
            if not row or not row[0].strip():
                continue
            node_id = row[0].strip()
            try:
                vec = [float(c) for c in row[1:]]
            except ValueError:
                raise ValueError(f"{p}:{lineno}: non-numeric feature") from None
            if dim is None:
                dim = len(vec)
            elif len(vec) != dim:
                raise ValueError(f"{p}:{lineno}: expected {dim} features, "
                                 f"got {len(vec)}")
            rows[node_id] = vec
    missing = [v for v in g.ids if v not in rows]
    if missing:
        raise ValueError(f"feature file missing nodes: {missing[:10]}")
    return np.array([rows[v] for v in g.ids], dtype=np.float64)


def default_features(g: TrainingGraph) -> np.ndarray:
    """Gender one-hot plus in/out-degree, degrees scaled to [0,1]."""
    d_in, d_out = g.degrees()
    scale_in = max(d_in.max(), 1.0)
    scale_out = max(d_out.max(), 1.0)
    return np.column_stack([
        g.is_female.astype(np.float64),
        (~g.is_female).astype(np.float64),
        d_in / scale_in,
        d_out / scale_out,
    ])


def negative_distribution(g: TrainingGraph) -> np.ndarray:
    """Unigram-to-the-3/4 sampling weights over nodes (degree-based)."""
    d_in, d_out = g.degrees()
    w = (d_in + d_out + 1.0) ** 0.75
    return w / w.sum()
