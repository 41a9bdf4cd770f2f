"""Interaction graph model and CSV ingestion.

A graph aggregates one interaction type (like / comment / tag) into a
directed weighted simple graph: edge weight = number of interactions of
that type from sender to receiver.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path


class Gender(Enum):
    FEMALE = "F"
    MALE = "M"

    @classmethod
    def parse(cls, text: str) -> "Gender":
        t = text.strip().upper()
        if t in ("F", "FEMALE"):
            return cls.FEMALE
        if t in ("M", "MALE"):
            return cls.MALE
        raise GraphFormatError(f"unknown gender string {text!r}")


class InteractionType(Enum):
    LIKE = "like"
    COMMENT = "comment"
    TAG = "tag"

    @classmethod
    def parse(cls, text: str) -> "InteractionType":
        t = text.strip().lower()
        for member in cls:
            if member.value == t:
                return member
        raise GraphFormatError(f"unknown interaction type {text!r}")


class GraphFormatError(ValueError):
    """Malformed input file or record."""


class UnknownNodeError(ValueError):
    """An edge references a node id missing from the node set."""


@dataclass(frozen=True)
class InteractionGraph:
    """Directed weighted graph over gender-labeled nodes.

    ``edges`` maps (sender, receiver) to a positive interaction count.
    Out/in adjacency dicts are built once; treat instances as immutable.
    """

    nodes: dict  # node id -> Gender
    edges: dict  # (src, dst) -> weight >= 1
    itype: InteractionType
    out_adj: dict = field(init=False, repr=False)
    in_adj: dict = field(init=False, repr=False)

    def __post_init__(self):
        out = {v: {} for v in self.nodes}
        inn = {v: {} for v in self.nodes}
        for (s, r), w in self.edges.items():
            if s not in self.nodes:
                raise UnknownNodeError(f"unknown node {s}")
            if r not in self.nodes:
                raise UnknownNodeError(f"unknown node {r}")
            if w < 1:
                raise ValueError(f"edge ({s},{r}) has non-positive weight {w}")
            out[s][r] = w
            inn[r][s] = w
        object.__setattr__(self, "out_adj", out)
        object.__setattr__(self, "in_adj", inn)

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def gender(self, v) -> Gender:
        return self.nodes[v]

    def total_weight(self, v) -> int:
        """Summed weight of all interactions v sent or received."""
        return sum(self.out_adj[v].values()) + sum(self.in_adj[v].values())

    def females(self):
        return [v for v, g in self.nodes.items() if g is Gender.FEMALE]

    def males(self):
        return [v for v, g in self.nodes.items() if g is Gender.MALE]

    def female_fraction(self) -> float:
        if not self.nodes:
            return 0.0
        nf = sum(1 for g in self.nodes.values() if g is Gender.FEMALE)
        return nf / len(self.nodes)


def load_nodes(nodes_path) -> dict:
    """Read the ``id,gender`` CSV into an id -> Gender map."""
    nodes = {}
    path = Path(nodes_path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header[:2]] != ["id", "gender"]:
            raise GraphFormatError(f"{path}: expected header 'id,gender'")
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) < 2:
                raise GraphFormatError(f"{path}:{lineno}: column 2 (gender) missing")
            node_id = row[0].strip()
            if not node_id:
                raise GraphFormatError(f"{path}:{lineno}: column 1 (id) empty")
            try:
                gender = Gender.parse(row[1])
            except GraphFormatError as exc:
                raise GraphFormatError(f"{path}:{lineno}: column 2: {exc}") from None
            if node_id in nodes:
                raise GraphFormatError(f"{path}:{lineno}: duplicate node id {node_id}")
            nodes[node_id] = gender
    return nodes


def load_interactions(nodes_path, edges_path, itype,
                      keep_self_loops: bool = False) -> InteractionGraph:
    """Build the graph for one interaction type from the two CSV files.

    Records of other interaction types are ignored. Self-interactions are
    dropped unless ``keep_self_loops``.
    """
    if isinstance(itype, str):
        itype = InteractionType.parse(itype)
    nodes = load_nodes(nodes_path)
    edges = {}
    path = Path(edges_path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        expected = ["sender", "receiver", "type", "timestamp"]
        if header is None or [h.strip().lower() for h in header[:4]] != expected:
            raise GraphFormatError(
                f"{path}: expected header 'sender,receiver,type,timestamp'")
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) < 3:
                raise GraphFormatError(f"{path}:{lineno}: column 3 (type) missing")
            sender, receiver = row[0].strip(), row[1].strip()
            try:
                row_type = InteractionType.parse(row[2])
            except GraphFormatError as exc:
                raise GraphFormatError(f"{path}:{lineno}: column 3: {exc}") from None
            if len(row) >= 4 and row[3].strip():
                try:
                    float(row[3])
                except ValueError:
                    raise GraphFormatError(
                        f"{path}:{lineno}: column 4: bad timestamp {row[3]!r}") from None
            for node_id in (sender, receiver):
                if node_id not in nodes:
                    raise UnknownNodeError(f"unknown node {node_id}")
            if row_type is not itype:
                continue
            if sender == receiver and not keep_self_loops:
                continue
            edges[(sender, receiver)] = edges.get((sender, receiver), 0) + 1
    return InteractionGraph(nodes=nodes, edges=edges, itype=itype)


def filter_inactive(g: InteractionGraph, min_total: int = 2) -> InteractionGraph:
    """Drop nodes whose total (sent + received) interaction count is below
    ``min_total``, together with their incident edges.

    Default 2 removes users with a single interaction. Idempotent.
    """
    if min_total < 1:
        raise ValueError("min_total must be >= 1")
    if min_total == 1:
        return g
    # Removing edges can drop survivors below the threshold; iterate to a
    # fixed point so the filter is idempotent.
    keep = set(g.nodes)
    edges = dict(g.edges)
    while True:
        totals = {v: 0 for v in keep}
        for (s, r), w in edges.items():
            totals[s] += w
            totals[r] += w
        next_keep = {v for v in keep if totals[v] >= min_total}
        if next_keep == keep:
            break
        keep = next_keep
        edges = {(s, r): w for (s, r), w in edges.items()
                 if s in keep and r in keep}
    nodes = {v: g.nodes[v] for v in g.nodes if v in keep}
    return InteractionGraph(nodes=nodes, edges=edges, itype=g.itype)


def write_graph_csv(g: InteractionGraph, nodes_path, edges_path) -> None:
    """Export in the two-file CSV format; weight w becomes w repeated rows."""
    with Path(nodes_path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "gender"])
        for v in sorted(g.nodes):
            writer.writerow([v, g.nodes[v].value])
    with Path(edges_path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["sender", "receiver", "type", "timestamp"])
        for (s, r) in sorted(g.edges):
            for _ in range(g.edges[(s, r)]):
                writer.writerow([s, r, g.itype.value, ""])
