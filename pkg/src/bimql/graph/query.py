"""Structured graph query dialect and its in-process evaluator.

A query is a JSON object with exactly one command key:

    {"match_nodes":   {"type"?, "name"?, "storey"?}}
    {"neighbors":     {"node", "type_filter"?, "via_type"?}}
    {"path_exists":   {"from", "to"}}
    {"shortest_path": {"from", "to", "weight": "hops"|"distance"}}
    {"isolated":      {"type"}}
    {"degree_ranking":{"type", "via_type"?}}
    {"count":         {"type"}}

Node references are either a GUID string or {"type": ..., "name": ...}.
"""

from __future__ import annotations

import heapq
import json
from collections import deque
from dataclasses import dataclass
from typing import Any

from bimql.errors import MalformedGraphQueryError, NodeNotFoundError, NoPathError
from bimql.graph.model import NAVIGABLE_TYPES, TopoGraph, TopoNode
from bimql.table import ResultTable

COMMANDS = (
    "match_nodes",
    "neighbors",
    "path_exists",
    "shortest_path",
    "isolated",
    "degree_ranking",
    "count",
)


@dataclass(frozen=True)
class GraphQuery:
    command: str
    params: dict[str, Any]

    @staticmethod
    def from_obj(obj: Any) -> "GraphQuery":
        if not isinstance(obj, dict) or len(obj) != 1:
            raise MalformedGraphQueryError(
                "a graph query is an object with exactly one command key"
            )
        command, params = next(iter(obj.items()))
        if command not in COMMANDS:
            raise MalformedGraphQueryError(f"unknown command {command!r}")
        if params is None:
            params = {}
        if not isinstance(params, dict):
            raise MalformedGraphQueryError(f"{command} arguments must be an object")
        return GraphQuery(command, params)

    @staticmethod
    def from_json(text: str) -> "GraphQuery":
        try:
            return GraphQuery.from_obj(json.loads(text))
        except json.JSONDecodeError as exc:
            raise MalformedGraphQueryError(f"invalid JSON: {exc}") from exc


def resolve_node(graph: TopoGraph, ref: Any) -> TopoNode:
    if isinstance(ref, str):
        node = graph.nodes.get(ref)
        if node is None:
            raise NodeNotFoundError(f"no node with id {ref!r}")
        return node
    if isinstance(ref, dict):
        wanted_type = ref.get("type")
        wanted_name = ref.get("name")
        if wanted_name is None:
            raise MalformedGraphQueryError("node references need an id or a name")
        matches = [
            n
            for n in graph.nodes.values()
            if (wanted_type is None or n.node_type == wanted_type)
            and n.name is not None
            and n.name.lower() == str(wanted_name).lower()
        ]
        if not matches:
            raise NodeNotFoundError(
                f"no {wanted_type or 'node'} named {wanted_name!r}"
            )
        if len(matches) > 1:
            raise MalformedGraphQueryError(
                f"node reference {wanted_name!r} is ambiguous"
            )
        return matches[0]
    raise MalformedGraphQueryError(f"bad node reference: {ref!r}")


def _storey_matches(graph: TopoGraph, node: TopoNode, storey: str) -> bool:
    if node.storey_id == storey:
        return True
    name = graph.storey_names.get(node.storey_id)
    return name is not None and name.lower() == storey.lower()


def _check_type(value: Any, field: str) -> str:
    if value not in NAVIGABLE_TYPES:
        raise MalformedGraphQueryError(
            f"{field} must be one of {', '.join(NAVIGABLE_TYPES)}"
        )
    return value


def bfs_path(graph: TopoGraph, start: str, goal: str) -> list[str] | None:
    """Hop-minimal path with deterministic neighbor order."""
    if start == goal:
        return [start]
    previous: dict[str, str] = {start: start}
    queue: deque[str] = deque([start])
    while queue:
        current = queue.popleft()
        for neighbor in graph.neighbors(current):
            if neighbor in previous:
                continue
            previous[neighbor] = current
            if neighbor == goal:
                path = [goal]
                while path[-1] != start:
                    path.append(previous[path[-1]])
                return list(reversed(path))
            queue.append(neighbor)
    return None


def dijkstra_path(
    graph: TopoGraph, start: str, goal: str
) -> tuple[list[str], float] | None:
    """Distance-minimal path; ties broken by node id for determinism."""
    dist: dict[str, float] = {start: 0.0}
    previous: dict[str, str] = {}
    heap: list[tuple[float, str]] = [(0.0, start)]
    done: set[str] = set()
    while heap:
        d, current = heapq.heappop(heap)
        if current in done:
            continue
        done.add(current)
        if current == goal:
            path = [goal]
            while path[-1] != start:
                path.append(previous[path[-1]])
            return list(reversed(path)), d
        for neighbor in graph.neighbors(current):
            edge = graph.adjacency[current][neighbor]
            candidate = d + edge.distance
            if candidate < dist.get(neighbor, float("inf")) - 1e-15:
                dist[neighbor] = candidate
                previous[neighbor] = current
                heapq.heappush(heap, (candidate, neighbor))
    return None


def _path_table(graph: TopoGraph, path: list[str]) -> ResultTable:
    rows: list[list] = []
    total = 0.0
    for step, node_id in enumerate(path):
        if step > 0:
            total += graph.adjacency[path[step - 1]][node_id].distance
        node = graph.nodes[node_id]
        rows.append([step, node_id, node.node_type, node.name, total])
    return ResultTable(
        columns=["step", "node_id", "node_type", "name", "distance_from_start"],
        rows=rows,
    )


def _components(graph: TopoGraph) -> dict[str, int]:
    label: dict[str, int] = {}
    next_label = 0
    for node_id in sorted(graph.nodes):
        if node_id in label:
            continue
        queue = deque([node_id])
        label[node_id] = next_label
        while queue:
            current = queue.popleft()
            for neighbor in graph.neighbors(current):
                if neighbor not in label:
                    label[neighbor] = next_label
                    queue.append(neighbor)
        next_label += 1
    return label


def run_graph_query(graph: TopoGraph, query: GraphQuery) -> ResultTable:
    handler = _HANDLERS.get(query.command)
    if handler is None:
        raise MalformedGraphQueryError(f"unknown command {query.command!r}")
    return handler(graph, query.params)


def _cmd_match_nodes(graph: TopoGraph, params: dict) -> ResultTable:
    node_type = params.get("type")
    if node_type is not None:
        _check_type(node_type, "type")
    name = params.get("name")
    storey = params.get("storey")
    rows = []
    for node in sorted(
        graph.nodes.values(), key=lambda n: (n.node_type, n.name or "", n.node_id)
    ):
        if node_type is not None and node.node_type != node_type:
            continue
        if name is not None and (node.name or "").lower() != str(name).lower():
            continue
        if storey is not None and not _storey_matches(graph, node, str(storey)):
            continue
        rows.append(
            [
                node.node_id,
                node.node_type,
                node.name,
                graph.storey_names.get(node.storey_id, node.storey_id),
                node.centroid[0],
                node.centroid[1],
                node.centroid[2],
            ]
        )
    return ResultTable(
        columns=[
            "node_id",
            "node_type",
            "name",
            "storey",
            "centroid_x",
            "centroid_y",
            "centroid_z",
        ],
        rows=rows,
    )


def _cmd_neighbors(graph: TopoGraph, params: dict) -> ResultTable:
    node = resolve_node(graph, params.get("node"))
    type_filter = params.get("type_filter")
    if type_filter is not None:
        _check_type(type_filter, "type_filter")
    via_type = params.get("via_type")
    if via_type is not None:
        _check_type(via_type, "via_type")

    if via_type is None:
        found = {
            other
            for other in graph.neighbors(node.node_id)
            if type_filter is None or graph.nodes[other].node_type == type_filter
        }
    else:
        found = set()
        for via in graph.neighbors(node.node_id):
            if graph.nodes[via].node_type != via_type:
                continue
            for other in graph.neighbors(via):
                if other == node.node_id:
                    continue
                if type_filter is None or graph.nodes[other].node_type == type_filter:
                    found.add(other)

    rows = []
    for node_id in sorted(
        found, key=lambda i: (graph.nodes[i].node_type, graph.nodes[i].name or "", i)
    ):
        other = graph.nodes[node_id]
        rows.append([node_id, other.node_type, other.name])
    return ResultTable(columns=["node_id", "node_type", "name"], rows=rows)


def _cmd_path_exists(graph: TopoGraph, params: dict) -> ResultTable:
    start = resolve_node(graph, params.get("from"))
    goal = resolve_node(graph, params.get("to"))
    path = bfs_path(graph, start.node_id, goal.node_id)
    if path is None:
        rows = [[0, None]]
    else:
        rows = [[1, len(path) - 1]]
    return ResultTable(columns=["exists", "hops"], rows=rows)


def _cmd_shortest_path(graph: TopoGraph, params: dict) -> ResultTable:
    start = resolve_node(graph, params.get("from"))
    goal = resolve_node(graph, params.get("to"))
    weight = params.get("weight", "hops")
    if weight not in ("hops", "distance"):
        raise MalformedGraphQueryError("weight must be 'hops' or 'distance'")
    if weight == "hops":
        path = bfs_path(graph, start.node_id, goal.node_id)
        if path is None:
            raise NoPathError(f"no path between {start.node_id} and {goal.node_id}")
        return _path_table(graph, path)
    found = dijkstra_path(graph, start.node_id, goal.node_id)
    if found is None:
        raise NoPathError(f"no path between {start.node_id} and {goal.node_id}")
    return _path_table(graph, found[0])


def _cmd_isolated(graph: TopoGraph, params: dict) -> ResultTable:
    node_type = _check_type(params.get("type"), "type")
    labels = _components(graph)
    members: dict[int, int] = {}
    for node in graph.nodes.values():
        if node.node_type == node_type:
            members[labels[node.node_id]] = members.get(labels[node.node_id], 0) + 1
    rows = []
    for node in sorted(graph.nodes.values(), key=lambda n: (n.name or "", n.node_id)):
        if node.node_type != node_type:
            continue
        if members[labels[node.node_id]] == 1:
            rows.append([node.node_id, node.name])
    return ResultTable(columns=["node_id", "name"], rows=rows)


def _cmd_degree_ranking(graph: TopoGraph, params: dict) -> ResultTable:
    node_type = _check_type(params.get("type"), "type")
    via_type = params.get("via_type")
    if via_type is not None:
        _check_type(via_type, "via_type")
    rows = []
    for node in graph.nodes.values():
        if node.node_type != node_type:
            continue
        degree = sum(
            1
            for other in graph.adjacency[node.node_id]
            if via_type is None or graph.nodes[other].node_type == via_type
        )
        rows.append([node.node_id, node.name, degree])
    rows.sort(key=lambda r: (-r[2], r[1] or "", r[0]))
    return ResultTable(columns=["node_id", "name", "degree"], rows=rows)


def _cmd_count(graph: TopoGraph, params: dict) -> ResultTable:
    node_type = _check_type(params.get("type"), "type")
    n = sum(1 for node in graph.nodes.values() if node.node_type == node_type)
    return ResultTable(columns=["count"], rows=[[n]])


_HANDLERS = {
    "match_nodes": _cmd_match_nodes,
    "neighbors": _cmd_neighbors,
    "path_exists": _cmd_path_exists,
    "shortest_path": _cmd_shortest_path,
    "isolated": _cmd_isolated,
    "degree_ranking": _cmd_degree_ranking,
    "count": _cmd_count,
}
