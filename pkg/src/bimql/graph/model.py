"""Topology graph over navigable building elements."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from bimql.geom.core import Point

NAVIGABLE_TYPES = ("room", "door", "stair", "ramp")


@dataclass(frozen=True)
class TopoNode:
    node_id: str
    node_type: str
    name: str | None
    centroid: Point
    storey_id: str

    def __post_init__(self) -> None:
        if self.node_type not in NAVIGABLE_TYPES:
            raise ValueError(f"{self.node_type!r} is not a navigable type")


@dataclass(frozen=True)
class TopoEdge:
    """Undirected edge; endpoints stored in sorted id order."""

    a: str
    b: str
    distance: float
    edge_type: str
    is_vertical: bool


@dataclass
class TopoGraph:
    nodes: dict[str, TopoNode] = field(default_factory=dict)
    edges: dict[tuple[str, str], TopoEdge] = field(default_factory=dict)
    adjacency: dict[str, dict[str, TopoEdge]] = field(default_factory=dict)
    storey_names: dict[str, str] = field(default_factory=dict)

    def add_node(self, node: TopoNode) -> None:
        if node.node_id in self.nodes:
            raise ValueError(f"duplicate node id {node.node_id}")
        self.nodes[node.node_id] = node
        self.adjacency[node.node_id] = {}

    def add_edge(self, a: str, b: str) -> TopoEdge:
        if a == b:
            raise ValueError("self-loops are not allowed")
        if a not in self.nodes or b not in self.nodes:
            raise KeyError("both endpoints must exist")
        key = (a, b) if a < b else (b, a)
        if key in self.edges:
            return self.edges[key]
        na, nb = self.nodes[key[0]], self.nodes[key[1]]
        dz = abs(na.centroid[2] - nb.centroid[2])
        edge = TopoEdge(
            a=key[0],
            b=key[1],
            distance=math.dist(na.centroid, nb.centroid),
            edge_type="-".join(sorted((na.node_type, nb.node_type))),
            is_vertical=dz > VERTICAL_EDGE_THRESHOLD,
        )
        self.edges[key] = edge
        self.adjacency[a][b] = edge
        self.adjacency[b][a] = edge
        return edge

    def neighbors(self, node_id: str) -> list[str]:
        return sorted(self.adjacency[node_id])

    def node_count(self) -> int:
        return len(self.nodes)

    def edge_count(self) -> int:
        return len(self.edges)


#: centroid height difference separating intra- from inter-storey links
VERTICAL_EDGE_THRESHOLD = 1.0
