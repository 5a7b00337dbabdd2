"""Scene documents for the viewer: navigable boxes plus path highlights."""

from __future__ import annotations

import json

from bimql.graph.model import TopoGraph
from bimql.graph.query import GraphQuery, resolve_node, run_graph_query
from bimql.ifc.records import NAVIGABLE_CLASSES
from bimql.store.db import RelationalStore


def build_scene(
    store: RelationalStore,
    graph: TopoGraph,
    highlight: tuple[object, object] | None = None,
    include_meshes: bool = False,
) -> dict:
    """Scene JSON with one box per graph node, all lengths in meters.

    ``highlight`` names two node references; the scene then carries the
    hop-minimal path between them in start-to-end order.
    """
    boxes = []
    for table in NAVIGABLE_CLASSES:
        result = store.execute_sql(
            f"SELECT id, name, bounding_box_min_x, bounding_box_min_y, "
            f"bounding_box_min_z, bounding_box_max_x, bounding_box_max_y, "
            f"bounding_box_max_z FROM {table} ORDER BY id"
        )
        for row in result.rows:
            if row[0] not in graph.nodes:
                continue
            boxes.append(
                {
                    "id": row[0],
                    "type": table,
                    "name": row[1],
                    "min": [row[2], row[3], row[4]],
                    "max": [row[5], row[6], row[7]],
                    "color_class": table,
                }
            )
    boxes.sort(key=lambda b: b["id"])

    highlights: list[str] = []
    if highlight is not None:
        start = resolve_node(graph, highlight[0])
        goal = resolve_node(graph, highlight[1])
        result = run_graph_query(
            graph,
            GraphQuery.from_obj(
                {
                    "shortest_path": {
                        "from": start.node_id,
                        "to": goal.node_id,
                        "weight": "hops",
                    }
                }
            ),
        )
        highlights = [row[1] for row in result.rows]

    scene = {
        "units": "meters",
        "boxes": boxes,
        "highlights": highlights,
    }
    if include_meshes:
        meshes = []
        ids = ", ".join(f"'{b['id']}'" for b in boxes)
        result = store.execute_sql(
            "SELECT element_id, element_type, vertices, faces FROM real_geometry "
            f"WHERE element_id IN ({ids}) ORDER BY element_id"
        )
        for element_id, element_type, vertices, faces in result.rows:
            meshes.append(
                {
                    "id": element_id,
                    "type": element_type,
                    "vertices": json.loads(vertices),
                    "faces": json.loads(faces),
                }
            )
        scene["meshes"] = meshes
    return scene
