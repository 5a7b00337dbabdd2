"""Graph construction from navigable element records."""

from __future__ import annotations

import json
import logging

import numpy as np

from bimql.geom.adjacency import adjacent_pairs
from bimql.geom.core import Aabb
from bimql.graph.model import TopoGraph, TopoNode
from bimql.ifc.records import ElementRecord, StoreyRecord

logger = logging.getLogger(__name__)

DEFAULT_EPS = 0.05
DEFAULT_DOOR_EXPAND = 0.1
LENGTH_SHRINK_FRACTION = 0.10


def adjust_door_box(door: ElementRecord, x_expand: float = DEFAULT_DOOR_EXPAND) -> Aabb:
    """Door box reshaped for graph construction only.

    The shorter horizontal axis (across the wall) grows by ``x_expand``
    per side so the box reaches the neighboring spaces; the longer axis
    shrinks by 10% of its extent so it cannot brush past the reveal.
    Height is untouched. Square footprints expand along x by convention.
    """
    (x0, y0, z0), (x1, y1, z1) = door.aabb.min, door.aabb.max
    dx, dy = x1 - x0, y1 - y0
    if abs(dx - dy) < 1e-6:
        logger.warning(
            json.dumps(
                {
                    "severity": "warning",
                    "entity_id": door.element_id,
                    "message": "square door footprint; expanding along x by convention",
                }
            )
        )
        expand_axis = "x"
    elif dx < dy:
        expand_axis = "x"
    else:
        expand_axis = "y"

    if expand_axis == "x":
        shrink = dy * LENGTH_SHRINK_FRACTION / 2.0
        return Aabb(
            (x0 - x_expand, y0 + shrink, z0),
            (x1 + x_expand, y1 - shrink, z1),
        )
    shrink = dx * LENGTH_SHRINK_FRACTION / 2.0
    return Aabb(
        (x0 + shrink, y0 - x_expand, z0),
        (x1 - shrink, y1 + x_expand, z1),
    )


def build_graph(
    elements: list[ElementRecord],
    storeys: list[StoreyRecord] | None = None,
    eps: float = DEFAULT_EPS,
    x_expand: float = DEFAULT_DOOR_EXPAND,
) -> TopoGraph:
    """Connectivity graph over rooms, doors, stairs, and ramps.

    Every unordered pair is tested with the containment flag enabled;
    doors contribute their adjusted boxes. Input must be deduplicated
    by GUID.
    """
    seen: set[str] = set()
    for element in elements:
        if element.element_id in seen:
            raise ValueError(f"duplicate element id {element.element_id}")
        seen.add(element.element_id)

    graph = TopoGraph()
    if storeys:
        graph.storey_names = {s.storey_id: s.name or s.storey_id for s in storeys}

    ordered = sorted(elements, key=lambda e: e.element_id)
    boxes: list[Aabb] = []
    for element in ordered:
        graph.add_node(
            TopoNode(
                node_id=element.element_id,
                node_type=element.ifc_class,
                name=element.name,
                centroid=element.centroid,
                storey_id=element.storey_id,
            )
        )
        box = (
            adjust_door_box(element, x_expand)
            if element.ifc_class == "door"
            else element.aabb
        )
        boxes.append(box)

    if len(ordered) >= 2:
        mins = np.array([b.min for b in boxes])
        maxs = np.array([b.max for b in boxes])
        for i, j in adjacent_pairs(mins, maxs, eps, gamma=True):
            graph.add_edge(ordered[i].element_id, ordered[j].element_id)
    return graph


def summarize_graph(graph: TopoGraph) -> str:
    """Deterministic text block describing the graph for prompts."""
    counts: dict[str, int] = {}
    for node in graph.nodes.values():
        counts[node.node_type] = counts.get(node.node_type, 0) + 1
    type_counts = ", ".join(f"{k}: {v}" for k, v in sorted(counts.items())) or "(empty)"
    edge_types: dict[str, int] = {}
    for edge in graph.edges.values():
        edge_types[edge.edge_type] = edge_types.get(edge.edge_type, 0) + 1
    edge_lines = ", ".join(f"{k}: {v}" for k, v in sorted(edge_types.items())) or "(none)"
    storeys = ", ".join(sorted(set(graph.storey_names.values()))) or "(unknown)"
    sample_names = sorted(
        {f"{n.node_type} '{n.name}'" for n in graph.nodes.values() if n.name}
    )[:12]
    lines = [
        f"Nodes ({graph.node_count()} total): {type_counts}",
        f"CONNECTS edges ({graph.edge_count()} total): {edge_lines}",
        "Edge properties: distance (meters, between centroids), type, is_vertical",
        f"Storeys: {storeys}",
        f"Sample nodes: {', '.join(sample_names) if sample_names else '(none)'}",
    ]
    return "\n".join(lines)
