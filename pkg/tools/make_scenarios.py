#!/usr/bin/env python3
"""Regenerate the evaluation-suite data files under src/bimql/data/scenarios.

Produces four files: the 30 generic scenario templates, the bindings
(parameters + data-layer oracles) for the bundled two-storey house, a
correct scripted transcript per scenario, and a fault-injected variant
where two relational scenarios first issue oversized queries, trip the
context guard twice, and recover through the fallback backend.

Every transcript is validated by running it through the real agent loop
against the bundled fixture before the files are written.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from bimql.agent.backends import ScriptedBackend  # noqa: E402
from bimql.agent.grading import grade_attempt  # noqa: E402
from bimql.agent.loop import AgentConfig, run_agent  # noqa: E402
from bimql.graph.build import build_graph  # noqa: E402
from bimql.ifc.extract import extract_model  # noqa: E402
from bimql.step.parser import parse_step  # noqa: E402
from bimql.store.db import build_store  # noqa: E402
from bimql.table import result_size_estimate  # noqa: E402

FIXTURE = REPO / "tests" / "fixtures" / "fzk_haus.ifc"
OUT_DIR = REPO / "src" / "bimql" / "data" / "scenarios"

R1_R4_DISTANCE = 6.028344710749887

# scenario_id, category, query template
SCENARIOS = [
    ("building-name", "SQL", "What is the name or description of the building?"),
    ("storey-count", "SQL", "How many storeys does the building have?"),
    ("storey-elevations", "SQL", "What are the names and elevations of each storey?"),
    ("building-height", "SQL", "What is the total building height?"),
    ("element-counts", "SQL",
     "How many rooms, walls, doors, and windows are present in the building?"),
    ("rooms-per-storey", "SQL", "How many rooms are on each storey?"),
    ("ground-top-elevations", "SQL",
     "What are the elevations of the ground and the top-most floor?"),
    ("top-storey-rooms", "SQL", "Which rooms are located on the top-most storey?"),
    ("doors-windows-per-storey", "SQL",
     "How many doors and windows are in each storey?"),
    ("bottom-slabs", "SQL", "Which slabs or ceilings belong to the bottom-most floor?"),
    ("fewest-rooms-storey", "SQL", "Which storey has the fewest rooms?"),
    ("room-volumes", "SQL", "List all rooms and their volumes."),
    ("rooms-connected", "Graph",
     'Which rooms are directly connected to room "{room_hub}"?'),
    ("room-most-doors", "Graph", "Which room contains the most doors?"),
    ("room-centroid", "SQL", 'What is the centroid of room "{room_centroid}"?'),
    ("room-distance", "Graph",
     'What is the distance between room "{room_dist_a}" and room "{room_dist_b}"?'),
    ("rooms-by-doors", "Graph",
     'Which rooms are connected by doors to room "{room_hub}"?'),
    ("room-bbox", "SQL",
     'What are the bounding box coordinates of room "{room_bbox}"?'),
    ("total-doors", "SQL", "How many doors are in the entire building?"),
    ("walls-ext-int", "SQL",
     "Which walls are external and internal ones, list them by floors?"),
    ("beams-columns-per-storey", "SQL", "How many beams or columns exist per storey?"),
    ("roofs", "SQL", "What roofs are available?"),
    ("door-materials-fire", "SQL",
     "What are the materials or fire ratings of all doors?"),
    ("navigable-path", "Graph",
     'Is there a navigable path from room "{path_from}" to room "{path_to}"?'),
    ("shortest-path", "Graph",
     'What is the shortest path between room "{sp_a}" and room "{sp_b}"?'),
    ("isolated-rooms", "Graph",
     "Which rooms are isolated (not reachable from any other room)?"),
    ("door-fire-rating", "SQL", 'What is the fire rating of door "{door_x}"?'),
    ("wall-properties", "SQL", "What are all properties defined for walls?"),
    ("u-value-external", "SQL",
     "What is the U-value or thermal transmittance of external walls?"),
    ("exit-doors", "SQL", "Which doors are exit doors?"),
]

PARAMS = {
    "room_hub": "1",
    "room_centroid": "4",
    "room_dist_a": "1",
    "room_dist_b": "4",
    "room_bbox": "2",
    "path_from": "2",
    "path_to": "7",
    "sp_a": "6",
    "sp_b": "7",
    "door_x": "Haustuer",
}

ORACLES = {
    "building-name": {"kind": "contains_all", "values": ["FZK-Haus"]},
    "storey-count": {"kind": "scalar", "value": 2},
    "storey-elevations": {
        "kind": "rows",
        "values": [["Erdgeschoss", 0.0], ["Dachgeschoss", 2.7]],
    },
    "building-height": {"kind": "scalar", "value": 2.7},
    "element-counts": {"kind": "rows", "values": [[7, 13, 5, 11]]},
    "rooms-per-storey": {
        "kind": "rows",
        "values": [["Erdgeschoss", 6], ["Dachgeschoss", 1]],
    },
    "ground-top-elevations": {"kind": "rows", "values": [[0.0, 2.7]]},
    "top-storey-rooms": {"kind": "set", "column": 0, "values": ["7"]},
    "doors-windows-per-storey": {
        "kind": "rows",
        "values": [["Erdgeschoss", 5, 9], ["Dachgeschoss", 0, 2]],
    },
    "bottom-slabs": {"kind": "set", "column": 0, "values": ["Bodenplatte"]},
    "fewest-rooms-storey": {"kind": "rows", "values": [["Dachgeschoss", 1]]},
    "room-volumes": {
        "kind": "rows",
        "tol": 0.005,
        "values": [
            ["1", 30.93], ["2", 32.46], ["3", 31.26], ["4", 55.18],
            ["5", 62.19], ["6", 43.55], ["7", 362.92],
        ],
    },
    "rooms-connected": {"kind": "set", "column": 2, "values": ["5", "6"]},
    "room-most-doors": {
        "kind": "cells",
        "at": [[0, 1, "1"], [0, 2, 4]],
    },
    "room-centroid": {
        "kind": "rows",
        "tol": 0.001,
        "values": [[9.675, 6.975, 1.25]],
    },
    "room-distance": {
        "kind": "cells",
        "tol": 0.001,
        "at": [[-1, 4, R1_R4_DISTANCE]],
    },
    "rooms-by-doors": {"kind": "set", "column": 2, "values": ["2", "3", "4"]},
    "room-bbox": {
        "kind": "rows",
        "tol": 0.01,
        "values": [[0.3, 5.99, 0.0, 3.8, 9.7, 2.5]],
    },
    "total-doors": {"kind": "scalar", "value": 5},
    "walls-ext-int": {
        "kind": "contains_all",
        "values": [
            "Wand-Ext-ERDG-1", "Wand-Ext-ERDG-2", "Wand-Ext-ERDG-3",
            "Wand-Ext-ERDG-4", "Wand-Int-ERDG-1", "Wand-Int-ERDG-2",
            "Wand-Int-ERDG-3", "Wand-Int-ERDG-4", "Wand-Int-ERDG-5",
            "Wand-Ext-OG-1", "Wand-Ext-OG-2", "Wand-Ext-OG-3", "Wand-Ext-OG-4",
        ],
    },
    "beams-columns-per-storey": {
        "kind": "rows",
        "values": [["Erdgeschoss", 0, 0], ["Dachgeschoss", 51, 1]],
    },
    "roofs": {"kind": "set", "column": 0, "values": ["Dach-1", "Dach-2"]},
    "door-materials-fire": {
        "kind": "set",
        "column": 0,
        "values": ["FireExit", "IsExternal", "ThermalTransmittance"],
    },
    "navigable-path": {"kind": "rows", "values": [[1, 5]]},
    "shortest-path": {
        "kind": "path",
        "names": ["6", "5", "Wendeltreppe", "7"],
        "total": 10.32,
        "tol": 0.05,
    },
    "isolated-rooms": {"kind": "rows", "values": []},
    "door-fire-rating": {
        "kind": "contains_all",
        "values": ["IsExternal", "True", "ThermalTransmittance", "1.4"],
    },
    "wall-properties": {
        "kind": "set",
        "column": 0,
        "values": ["IsExternal", "LoadBearing", "ThermalTransmittance"],
    },
    "u-value-external": {"kind": "set", "column": 0, "values": ["0.4"]},
    "exit-doors": {"kind": "set", "column": 0, "values": ["Haustuer", "Terrassentuer"]},
}

SQL = {
    "building-name": "SELECT name, description FROM building;",
    "storey-count": "SELECT COUNT(*) FROM storey;",
    "storey-elevations": "SELECT name, elevation FROM storey ORDER BY elevation;",
    "building-height": "SELECT MAX(elevation) - MIN(elevation) FROM storey;",
    "element-counts": (
        "SELECT (SELECT COUNT(*) FROM room), (SELECT COUNT(*) FROM wall), "
        "(SELECT COUNT(*) FROM door), (SELECT COUNT(*) FROM window);"
    ),
    "rooms-per-storey": (
        "SELECT s.name, COUNT(r.id) FROM storey s "
        "LEFT JOIN room r ON r.storey_id = s.id "
        "GROUP BY s.id ORDER BY s.elevation;"
    ),
    "ground-top-elevations": "SELECT MIN(elevation), MAX(elevation) FROM storey;",
    "top-storey-rooms": (
        "SELECT r.name FROM room r JOIN storey s ON r.storey_id = s.id "
        "WHERE s.elevation = (SELECT MAX(elevation) FROM storey);"
    ),
    "doors-windows-per-storey": (
        "SELECT s.name, "
        "(SELECT COUNT(*) FROM door d WHERE d.storey_id = s.id), "
        "(SELECT COUNT(*) FROM window w WHERE w.storey_id = s.id) "
        "FROM storey s ORDER BY s.elevation;"
    ),
    "bottom-slabs": (
        "SELECT e.name FROM slab e JOIN storey s ON e.storey_id = s.id "
        "WHERE s.elevation = (SELECT MIN(elevation) FROM storey) "
        "UNION SELECT c.name FROM ceiling c JOIN storey s2 ON c.storey_id = s2.id "
        "WHERE s2.elevation = (SELECT MIN(elevation) FROM storey);"
    ),
    "fewest-rooms-storey": (
        "SELECT s.name, COUNT(r.id) AS n FROM storey s "
        "LEFT JOIN room r ON r.storey_id = s.id "
        "GROUP BY s.id ORDER BY n ASC LIMIT 1;"
    ),
    "room-volumes": "SELECT name, ROUND(volume, 2) FROM room ORDER BY name;",
    "room-centroid": (
        "SELECT centroid_x, centroid_y, centroid_z FROM room WHERE name = '4';"
    ),
    "room-bbox": (
        "SELECT bounding_box_min_x, bounding_box_min_y, bounding_box_min_z, "
        "bounding_box_max_x, bounding_box_max_y, bounding_box_max_z "
        "FROM room WHERE name = '2';"
    ),
    "total-doors": "SELECT COUNT(*) FROM door;",
    "walls-ext-int": (
        "SELECT s.name AS storey, w.name AS wall, p.property_value AS is_external "
        "FROM wall w JOIN storey s ON w.storey_id = s.id "
        "JOIN property p ON p.element_id = w.id "
        "WHERE p.property_name = 'IsExternal' "
        "ORDER BY s.elevation, p.property_value DESC, w.name;"
    ),
    "beams-columns-per-storey": (
        "SELECT s.name, "
        "(SELECT COUNT(*) FROM beam b WHERE b.storey_id = s.id), "
        "(SELECT COUNT(*) FROM column c WHERE c.storey_id = s.id) "
        "FROM storey s ORDER BY s.elevation;"
    ),
    "roofs": "SELECT name, description FROM roof ORDER BY name;",
    "door-fire-rating-1": (
        "SELECT property_name, property_value FROM property "
        "WHERE element_id = (SELECT id FROM door WHERE name = 'Haustuer') "
        "AND property_name IN ('FireRating', 'Material');"
    ),
    "door-fire-rating-2": (
        "SELECT property_name, property_value FROM property "
        "WHERE element_id = (SELECT id FROM door WHERE name = 'Haustuer') "
        "ORDER BY property_name;"
    ),
    "door-materials-fire-1": (
        "SELECT d.name, p.property_name, p.property_value "
        "FROM door d JOIN property p ON p.element_id = d.id "
        "WHERE p.property_name IN ('Material', 'FireRating');"
    ),
    "door-materials-fire-2": (
        "SELECT DISTINCT property_name FROM property "
        "WHERE element_type = 'IfcDoor' ORDER BY property_name;"
    ),
    "wall-properties": (
        "SELECT DISTINCT property_name FROM property "
        "WHERE element_type = 'IfcWall' ORDER BY property_name;"
    ),
    "u-value-external": (
        "SELECT DISTINCT p.property_value FROM wall w "
        "JOIN property p ON p.element_id = w.id "
        "JOIN property e ON e.element_id = w.id "
        "WHERE p.property_name = 'ThermalTransmittance' "
        "AND e.property_name = 'IsExternal' AND e.property_value = 'True';"
    ),
    "exit-doors": (
        "SELECT d.name FROM door d "
        "JOIN property x ON x.element_id = d.id "
        "JOIN property f ON f.element_id = d.id "
        "WHERE x.property_name = 'IsExternal' AND x.property_value = 'True' "
        "AND f.property_name = 'FireExit' AND f.property_value = 'True' "
        "ORDER BY d.name;"
    ),
}

GRAPH = {
    "rooms-connected": (
        '{"neighbors": {"node": {"type": "room", "name": "1"}, '
        '"type_filter": "room"}}'
    ),
    "room-most-doors": '{"degree_ranking": {"type": "room", "via_type": "door"}}',
    "room-distance": (
        '{"shortest_path": {"from": {"type": "room", "name": "1"}, '
        '"to": {"type": "room", "name": "4"}, "weight": "distance"}}'
    ),
    "rooms-by-doors": (
        '{"neighbors": {"node": {"type": "room", "name": "1"}, '
        '"type_filter": "room", "via_type": "door"}}'
    ),
    "navigable-path": (
        '{"path_exists": {"from": {"type": "room", "name": "2"}, '
        '"to": {"type": "room", "name": "7"}}}'
    ),
    "shortest-path": (
        '{"shortest_path": {"from": {"type": "room", "name": "6"}, '
        '"to": {"type": "room", "name": "7"}, "weight": "hops"}}'
    ),
    "isolated-rooms": '{"isolated": {"type": "room"}}',
}

ANSWERS = {
    "building-name": (
        "The building is named FZK-Haus; its description says it is a "
        "dwelling created by KHH, IAI und FZK."
    ),
    "storey-count": "The building has 2 storeys.",
    "storey-elevations": (
        "Erdgeschoss is at 0.0 m and Dachgeschoss at 2.7 m."
    ),
    "building-height": (
        "The total building height (max minus min storey elevation) is 2.7."
    ),
    "element-counts": "Rooms: 7, walls: 13, doors: 5, windows: 11.",
    "rooms-per-storey": (
        "Erdgeschoss (ground floor) has 6 rooms and Dachgeschoss has 1 room."
    ),
    "ground-top-elevations": (
        "The ground floor is at elevation 0.0 and the top-most floor at 2.7."
    ),
    "top-storey-rooms": (
        "The only room on the highest storey is room 7, on Dachgeschoss."
    ),
    "doors-windows-per-storey": (
        "Erdgeschoss has 5 doors and 9 windows; Dachgeschoss has 0 doors "
        "and 2 windows."
    ),
    "bottom-slabs": (
        "Only the slab named Bodenplatte belongs to the bottom-most storey; "
        "no ceilings were returned for it."
    ),
    "fewest-rooms-storey": "Dachgeschoss has the fewest rooms: just 1.",
    "room-volumes": (
        "Room volumes (cubic meters): 1: 30.93, 2: 32.46, 3: 31.26, 4: 55.18, "
        "5: 62.19, 6: 43.55, 7: 362.92."
    ),
    "rooms-connected": "Room 1 is directly connected to rooms 5 and 6.",
    "room-most-doors": "Room 1 has the most doors: 4.",
    "room-centroid": "The centroid of room 4 is (9.675, 6.975, 1.25).",
    "room-distance": (
        "The shortest-path distance between room 1 and room 4 is "
        "6.028344710749887 meters."
    ),
    "rooms-by-doors": "Rooms 2, 3 and 4 are connected by doors to room 1.",
    "room-bbox": (
        "The bounding box of room 2 is (0.3, 5.99, 0.0) to (3.8, 9.7, 2.5)."
    ),
    "total-doors": "There are 5 doors in the entire building.",
    "walls-ext-int": (
        "Erdgeschoss: external walls Wand-Ext-ERDG-1..4, internal walls "
        "Wand-Int-ERDG-1..5. Dachgeschoss: external walls Wand-Ext-OG-1..4, "
        "no internal walls."
    ),
    "beams-columns-per-storey": (
        "Erdgeschoss has 0 beams and 0 columns; Dachgeschoss has 51 beams "
        "and 1 column."
    ),
    "roofs": "The available roofs are Dach-1 and Dach-2.",
    "door-materials-fire": (
        "No Material or FireRating properties exist for doors; the only door "
        "properties stored are FireExit, IsExternal and ThermalTransmittance."
    ),
    "navigable-path": (
        "Yes, a navigable path exists from room 2 to room 7; it takes 5 hops."
    ),
    "shortest-path": (
        "The shortest path from room 6 to room 7 has 3 hops: room 6 -> room 5 "
        "-> Wendeltreppe -> room 7, total distance about 10.32."
    ),
    "isolated-rooms": (
        "There are no isolated rooms; every room is reachable from at least "
        "one other room."
    ),
    "door-fire-rating": (
        "No fire rating is stored for door Haustuer; its only properties are "
        "FireExit = True, IsExternal = True and ThermalTransmittance = 1.4."
    ),
    "wall-properties": (
        "Walls carry three property names: IsExternal, LoadBearing and "
        "ThermalTransmittance."
    ),
    "u-value-external": (
        "Every external wall has the same thermal transmittance (U-value) "
        "of 0.4."
    ),
    "exit-doors": (
        "Two doors are exit doors: Haustuer and Terrassentuer, both marked "
        "IsExternal = True and FireExit = True."
    ),
}

TWO_STEP = {
    "door-fire-rating": ("door-fire-rating-1", "door-fire-rating-2"),
    "door-materials-fire": ("door-materials-fire-1", "door-materials-fire-2"),
}

# relational scenarios rewritten to overflow the context guard twice
FAULTY_DUMP = (
    "SELECT p.element_id, p.property_name, p.property_value, g.vertices, g.faces "
    "FROM property p JOIN real_geometry g ON g.element_id = p.element_id;"
)
FAULTY_IDS = ("wall-properties", "door-materials-fire")


def correct_transcript(sid: str) -> dict:
    if sid in TWO_STEP:
        first, second = TWO_STEP[sid]
        return {
            "primary": [
                f"SQL_NEEDED: {SQL[first]}",
                f"MORE_SQL_NEEDED: {SQL[second]}",
                "ANALYSIS_COMPLETE",
                ANSWERS[sid],
            ],
            "fallback": [],
        }
    if sid in GRAPH:
        return {
            "primary": [
                f"GRAPH_NEEDED: {GRAPH[sid]}",
                "ANALYSIS_COMPLETE",
                ANSWERS[sid],
            ],
            "fallback": [],
        }
    return {
        "primary": [
            f"SQL_NEEDED: {SQL[sid]}",
            "ANALYSIS_COMPLETE",
            ANSWERS[sid],
        ],
        "fallback": [],
    }


def faulty_transcript(sid: str) -> dict:
    recovery_sql = SQL[TWO_STEP[sid][1]] if sid in TWO_STEP else SQL[sid]
    return {
        "primary": [
            f"SQL_NEEDED: {FAULTY_DUMP}",
            f"MORE_SQL_NEEDED: {FAULTY_DUMP}",
        ],
        "fallback": [
            f"MORE_SQL_NEEDED: {recovery_sql}",
            "ANALYSIS_COMPLETE",
            ANSWERS[sid],
        ],
    }


def main() -> None:
    step_file = parse_step(FIXTURE.read_bytes())
    model = extract_model(step_file)
    store = build_store(model, "/tmp/bimql_scenarios.db")
    graph = build_graph(model.navigable_elements(), model.storeys)

    # the oversized dump must actually overflow the default guard
    dump = store.execute_sql(FAULTY_DUMP)
    estimate = result_size_estimate(dump)
    assert estimate > 8000, f"fault query too small: {estimate} tokens"
    print(f"fault query estimate: {estimate} tokens")

    scenarios = {"scenarios": [
        {"scenario_id": sid, "category": category, "query_template": template}
        for sid, category, template in SCENARIOS
    ]}
    bindings = {"params": PARAMS, "oracles": ORACLES}
    transcripts = {sid: correct_transcript(sid) for sid, _, _ in SCENARIOS}
    faulty = {
        sid: (faulty_transcript(sid) if sid in FAULTY_IDS else transcripts[sid])
        for sid, _, _ in SCENARIOS
    }

    # validate: every correct transcript must grade as a first-attempt hit
    for sid, category, template in SCENARIOS:
        query_text = template.format(**PARAMS)
        config = AgentConfig(
            primary=ScriptedBackend(transcripts[sid]["primary"]),
            fallback=ScriptedBackend([], name="scripted-fallback"),
        )
        result = run_agent(config, store, graph, query_text)
        grade = grade_attempt(result.state, ORACLES[sid])
        if not grade.first_attempt_correct:
            raise SystemExit(
                f"{sid}: transcript does not satisfy its oracle\n"
                f"entries: {[ (e.query, e.rows, e.error) for e in result.state.results ]}"
            )
        errors = [e for e in result.state.results if e.error]
        if errors:
            raise SystemExit(f"{sid}: query errors {[(e.query, e.error) for e in errors]}")
        print(f"  ok {sid} ({category})")

    # validate: faulty scenarios trip the guard twice and recover via fallback
    for sid in FAULTY_IDS:
        query_text = dict((s, t) for s, _, t in SCENARIOS)[sid].format(**PARAMS)
        config = AgentConfig(
            primary=ScriptedBackend(faulty[sid]["primary"], name="scripted-primary"),
            fallback=ScriptedBackend(faulty[sid]["fallback"], name="scripted-fallback"),
        )
        result = run_agent(config, store, graph, query_text)
        grade = grade_attempt(result.state, ORACLES[sid])
        assert len(result.state.guard_events) == 2, result.state.guard_events
        assert result.state.fallback_engaged
        assert not grade.first_attempt_correct
        assert grade.recovered, result.state.to_dict()
        assert len(result.state.calls) <= 5 + 3
        print(f"  ok faulty {sid}: 2 guard events, recovered on fallback")

    OUT_DIR.mkdir(parents=True, exist_ok=True)
    (OUT_DIR / "scenarios.json").write_text(json.dumps(scenarios, indent=2) + "\n")
    (OUT_DIR / "fzk_haus_bindings.json").write_text(
        json.dumps(bindings, indent=2) + "\n"
    )
    (OUT_DIR / "fzk_haus_transcripts.json").write_text(
        json.dumps(transcripts, indent=2) + "\n"
    )
    (OUT_DIR / "fzk_haus_transcripts_faulty.json").write_text(
        json.dumps(faulty, indent=2) + "\n"
    )
    print(f"wrote 4 files under {OUT_DIR}")


if __name__ == "__main__":
    main()
