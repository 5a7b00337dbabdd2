"""Graph serialization: Cypher script, GraphML, and round-trippable JSON."""

from __future__ import annotations

import json
from xml.sax.saxutils import escape, quoteattr

from bimql.graph.model import TopoGraph, TopoNode

FORMATS = ("cypher", "graphml", "json")


def _cypher_str(value: str | None) -> str:
    if value is None:
        return "null"
    escaped = value.replace("\\", "\\\\").replace("'", "\\'")
    return f"'{escaped}'"


def export_cypher(graph: TopoGraph) -> str:
    """CREATE script with node properties and CONNECTS relationships."""
    lines = ["// topology graph export", ""]
    alias_of: dict[str, str] = {}
    for index, node_id in enumerate(sorted(graph.nodes)):
        node = graph.nodes[node_id]
        alias = f"n{index}"
        alias_of[node_id] = alias
        props = (
            f"id: {_cypher_str(node.node_id)}, "
            f"type: {_cypher_str(node.node_type)}, "
            f"name: {_cypher_str(node.name)}, "
            f"centroid_x: {node.centroid[0]!r}, "
            f"centroid_y: {node.centroid[1]!r}, "
            f"centroid_z: {node.centroid[2]!r}"
        )
        lines.append(f"CREATE ({alias} {{{props}}})")
    for key in sorted(graph.edges):
        edge = graph.edges[key]
        lines.append(
            f"CREATE ({alias_of[edge.a]})-[:CONNECTS {{distance: {edge.distance!r}, "
            f"type: {_cypher_str(edge.edge_type)}}}]->({alias_of[edge.b]})"
        )
    lines.append(";")
    return "\n".join(lines) + "\n"


def export_graphml(graph: TopoGraph) -> str:
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns">',
        '  <key id="type" for="node" attr.name="type" attr.type="string"/>',
        '  <key id="name" for="node" attr.name="name" attr.type="string"/>',
        '  <key id="distance" for="edge" attr.name="distance" attr.type="double"/>',
        '  <key id="etype" for="edge" attr.name="type" attr.type="string"/>',
        '  <graph id="topology" edgedefault="undirected">',
    ]
    for node_id in sorted(graph.nodes):
        node = graph.nodes[node_id]
        lines.append(f"    <node id={quoteattr(node_id)}>")
        lines.append(f'      <data key="type">{escape(node.node_type)}</data>')
        lines.append(f'      <data key="name">{escape(node.name or "")}</data>')
        lines.append("    </node>")
    for key in sorted(graph.edges):
        edge = graph.edges[key]
        lines.append(
            f"    <edge source={quoteattr(edge.a)} target={quoteattr(edge.b)}>"
        )
        lines.append(f'      <data key="distance">{edge.distance!r}</data>')
        lines.append(f'      <data key="etype">{escape(edge.edge_type)}</data>')
        lines.append("    </edge>")
    lines.extend(["  </graph>", "</graphml>"])
    return "\n".join(lines) + "\n"


def export_json(graph: TopoGraph) -> str:
    payload = {
        "nodes": [
            {
                "id": node.node_id,
                "type": node.node_type,
                "name": node.name,
                "centroid": list(node.centroid),
                "storey_id": node.storey_id,
            }
            for _, node in sorted(graph.nodes.items())
        ],
        "edges": [
            {
                "a": edge.a,
                "b": edge.b,
                "distance": edge.distance,
                "type": edge.edge_type,
                "is_vertical": edge.is_vertical,
            }
            for _, edge in sorted(graph.edges.items())
        ],
        "storey_names": dict(sorted(graph.storey_names.items())),
    }
    return json.dumps(payload, indent=2) + "\n"


def export_graph(graph: TopoGraph, format: str) -> str:
    if format == "cypher":
        return export_cypher(graph)
    if format == "graphml":
        return export_graphml(graph)
    if format == "json":
        return export_json(graph)
    raise ValueError(f"unknown export format {format!r}; expected one of {FORMATS}")


def import_json(text: str) -> TopoGraph:
    """Inverse of the JSON export (id-preserving)."""
    payload = json.loads(text)
    graph = TopoGraph(storey_names=payload.get("storey_names", {}))
    for raw in payload["nodes"]:
        graph.add_node(
            TopoNode(
                node_id=raw["id"],
                node_type=raw["type"],
                name=raw.get("name"),
                centroid=tuple(raw["centroid"]),
                storey_id=raw.get("storey_id", ""),
            )
        )
    for raw in payload["edges"]:
        graph.add_edge(raw["a"], raw["b"])
    return graph
