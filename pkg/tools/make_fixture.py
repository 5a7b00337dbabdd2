#!/usr/bin/env python3
"""Regenerate tests/fixtures/fzk_haus.ifc.

The bundled two-storey house is engineered so the extracted records and
the derived topology graph land exactly on the reference values the test
suite asserts (counts, centroids, boxes, volumes, path distances, and
the 321 property rows). Two coordinates are solved numerically: the
hall-to-big-room door position pins the graph distance between rooms 1
and 4, and the stair position pins the room 6 to room 7 path length.

Run from the repository root:  python tools/make_fixture.py
"""

from __future__ import annotations

import math
import sys
from pathlib import Path
from random import Random

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from bimql.step.model import format_real  # noqa: E402

OUT_PATH = REPO / "tests" / "fixtures" / "fzk_haus.ifc"

MM = 1000.0

# ---------------------------------------------------------------------------
# layout constants (meters)
# ---------------------------------------------------------------------------

ROOM_HEIGHT = 2.5
STOREY_SPLIT = 2.7

# hall (room 1): fixed strip under the north rooms, west wall to x=7.96
R1_X = (0.3, 7.96)
R1_AREA = 12.372  # volume 30.93 at 2.5 m
R1_Y1 = 5.75
R1_Y0 = R1_Y1 - R1_AREA / (R1_X[1] - R1_X[0])

R2_BOX = ((0.3, 5.99), (3.8, 9.7))       # bounding box pinned by tests
R3_BOX = ((4.04, 5.99), (7.41, 9.7))     # volume 31.26
R4_BOX = ((8.2, 3.2339), (11.15, 10.7161))  # centroid (9.675, 6.975), vol 55.18

# living room band south of the hall; widths follow from the volumes
BAND_Y0 = -1.39
BAND_DEPTH = R1_Y0 - BAND_Y0
R6_DX = 17.42 / BAND_DEPTH   # volume 43.55
R5_DX = 24.876 / BAND_DEPTH  # volume 62.19
R6_X = (0.3, 0.3 + R6_DX)
R5_X = (R6_X[1], R6_X[1] + R5_DX)

# attic (room 7): gabled prism over the full footprint, volume 362.92
ATTIC_FOOT_X = (0.3, 11.7)
ATTIC_FOOT_Y = (BAND_Y0, R4_BOX[1][1])
ATTIC_WIDTH = ATTIC_FOOT_Y[1] - ATTIC_FOOT_Y[0]
ATTIC_LENGTH = ATTIC_FOOT_X[1] - ATTIC_FOOT_X[0]
ATTIC_KNEE = 1.1
ATTIC_RIDGE = 2.0 * (362.92 / ATTIC_LENGTH / ATTIC_WIDTH - ATTIC_KNEE)

DOOR_WIDTH = 0.885
DOOR_HEIGHT = 2.01
DOOR_PANEL = 0.1

STAIR_X = (5.7, 6.9)
STAIR_HALF_Y = 0.6
STAIR_TOP = 3.0

TARGET_R1_R4 = 6.028344710749887
TARGET_R6_R7 = 10.32


def room_centroid(box, height=ROOM_HEIGHT):
    (x0, y0), (x1, y1) = box
    return ((x0 + x1) / 2.0, (y0 + y1) / 2.0, height / 2.0)


def dist(a, b):
    return math.dist(a, b)


def solve_bisect(f, lo, hi, tol=1e-13):
    flo = f(lo)
    fhi = f(hi)
    if flo * fhi > 0:
        raise SystemExit(f"bisection bracket failed: f({lo})={flo}, f({hi})={fhi}")
    for _ in range(200):
        mid = (lo + hi) / 2.0
        fm = f(mid)
        if abs(fm) < tol:
            return mid
        if flo * fm <= 0:
            hi = mid
        else:
            lo, flo = mid, fm
    return (lo + hi) / 2.0


def solve_positions():
    c1 = room_centroid((R1_X[0:1] + (R1_Y0,), (R1_X[1], R1_Y1)))
    c1 = ((R1_X[0] + R1_X[1]) / 2.0, (R1_Y0 + R1_Y1) / 2.0, ROOM_HEIGHT / 2.0)
    c4 = room_centroid(R4_BOX)
    door_x = (R1_X[1] + R4_BOX[0][0]) / 2.0  # wall midplane
    door_z = DOOR_HEIGHT / 2.0

    def f(yd):
        c_door = (door_x, yd, door_z)
        return dist(c1, c_door) + dist(c_door, c4) - TARGET_R1_R4

    door_y = solve_bisect(f, 4.7, 6.05)

    c5 = room_centroid(((R5_X[0], BAND_Y0), (R5_X[1], R1_Y0)))
    c6 = room_centroid(((R6_X[0], BAND_Y0), (R6_X[1], R1_Y0)))
    c7 = (
        (ATTIC_FOOT_X[0] + ATTIC_FOOT_X[1]) / 2.0,
        (ATTIC_FOOT_Y[0] + ATTIC_FOOT_Y[1]) / 2.0,
        (STOREY_SPLIT + STOREY_SPLIT + ATTIC_KNEE + ATTIC_RIDGE) / 2.0,
    )
    stair_cx = (STAIR_X[0] + STAIR_X[1]) / 2.0

    def g(sy):
        c_stair = (stair_cx, sy, STAIR_TOP / 2.0)
        return dist(c6, c5) + dist(c5, c_stair) + dist(c_stair, c7) - TARGET_R6_R7

    stair_y = solve_bisect(g, 0.0, 1.2)
    return door_y, stair_y


# ---------------------------------------------------------------------------
# STEP writer
# ---------------------------------------------------------------------------

GUID_ALPHABET = (
    "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz_$"
)


class IfcWriter:
    def __init__(self):
        self.lines: list[str] = []
        self.next_id = 1
        self.rng = Random(20240514)
        self.guids: set[str] = set()

    def guid(self) -> str:
        while True:
            g = self.rng.choice("0123") + "".join(
                self.rng.choice(GUID_ALPHABET) for _ in range(21)
            )
            if g not in self.guids:
                self.guids.add(g)
                return g

    def add(self, type_name: str, args: str) -> int:
        eid = self.next_id
        self.next_id += 1
        self.lines.append(f"#{eid}={type_name}({args});")
        return eid

    # -- frequently used helpers --------------------------------------

    def point3(self, x: float, y: float, z: float) -> int:
        return self.add(
            "IFCCARTESIANPOINT",
            f"({format_real(x)},{format_real(y)},{format_real(z)})",
        )

    def point2(self, x: float, y: float) -> int:
        return self.add(
            "IFCCARTESIANPOINT", f"({format_real(x)},{format_real(y)})"
        )

    def direction(self, x: float, y: float, z: float) -> int:
        return self.add(
            "IFCDIRECTION",
            f"({format_real(x)},{format_real(y)},{format_real(z)})",
        )

    def axis_placement(self, origin_mm, axis=None, ref=None) -> int:
        loc = self.point3(*origin_mm)
        axis_ref = f"#{self.direction(*axis)}" if axis else "$"
        dir_ref = f"#{self.direction(*ref)}" if ref else "$"
        return self.add("IFCAXIS2PLACEMENT3D", f"#{loc},{axis_ref},{dir_ref}")

    def local_placement(self, parent: int | None, origin_mm, axis=None, ref=None) -> int:
        rel = self.axis_placement(origin_mm, axis, ref)
        parent_ref = f"#{parent}" if parent else "$"
        return self.add("IFCLOCALPLACEMENT", f"{parent_ref},#{rel}")

    def rect_profile(self, xdim_mm: float, ydim_mm: float, center_mm=None) -> int:
        if center_mm is None:
            position = "$"
        else:
            loc = self.point2(*center_mm)
            pos = self.add("IFCAXIS2PLACEMENT2D", f"#{loc},$")
            position = f"#{pos}"
        return self.add(
            "IFCRECTANGLEPROFILEDEF",
            f".AREA.,$,{position},{format_real(xdim_mm)},{format_real(ydim_mm)}",
        )

    def polyline_profile(self, points_mm) -> int:
        refs = [self.point2(x, y) for x, y in points_mm]
        refs.append(refs[0])
        poly = self.add(
            "IFCPOLYLINE", "(" + ",".join(f"#{r}" for r in refs) + ")"
        )
        return self.add("IFCARBITRARYCLOSEDPROFILEDEF", f".AREA.,$,#{poly}")

    def extrusion(self, profile: int, depth_mm: float, position: int | None = None,
                  direction=(0.0, 0.0, 1.0)) -> int:
        dir_id = self.direction(*direction)
        pos_ref = f"#{position}" if position else "$"
        return self.add(
            "IFCEXTRUDEDAREASOLID",
            f"#{profile},{pos_ref},#{dir_id},{format_real(depth_mm)}",
        )

    def body_shape(self, items: list[int], context: int) -> int:
        rep = self.add(
            "IFCSHAPEREPRESENTATION",
            f"#{context},'Body','SweptSolid',("
            + ",".join(f"#{i}" for i in items)
            + ")",
        )
        return self.add("IFCPRODUCTDEFINITIONSHAPE", f"$,$,(#{rep})")

    def box_solid(self, lo_mm, hi_mm) -> int:
        """Extruded box in the element's local frame."""
        profile = self.polyline_profile(
            [
                (lo_mm[0], lo_mm[1]),
                (hi_mm[0], lo_mm[1]),
                (hi_mm[0], hi_mm[1]),
                (lo_mm[0], hi_mm[1]),
            ]
        )
        pos = self.axis_placement((0.0, 0.0, lo_mm[2]))
        return self.extrusion(profile, hi_mm[2] - lo_mm[2], pos)

    def faceted_box(self, lo_mm, hi_mm) -> int:
        x0, y0, z0 = lo_mm
        x1, y1, z1 = hi_mm
        corners = [
            (x0, y0, z0), (x1, y0, z0), (x1, y1, z0), (x0, y1, z0),
            (x0, y0, z1), (x1, y0, z1), (x1, y1, z1), (x0, y1, z1),
        ]
        point_ids = [self.point3(*c) for c in corners]
        quads = [
            (0, 3, 2, 1), (4, 5, 6, 7), (0, 1, 5, 4),
            (1, 2, 6, 5), (2, 3, 7, 6), (3, 0, 4, 7),
        ]
        face_ids = []
        for quad in quads:
            loop = self.add(
                "IFCPOLYLOOP", "(" + ",".join(f"#{point_ids[i]}" for i in quad) + ")"
            )
            bound = self.add("IFCFACEOUTERBOUND", f"#{loop},.T.")
            face_ids.append(self.add("IFCFACE", f"(#{bound})"))
        shell = self.add(
            "IFCCLOSEDSHELL", "(" + ",".join(f"#{f}" for f in face_ids) + ")"
        )
        return self.add("IFCFACETEDBREP", f"#{shell}")

    def property_set(self, element: int, props: list[tuple[str, str]]) -> None:
        prop_ids = []
        for name, typed_value in props:
            prop_ids.append(
                self.add(
                    "IFCPROPERTYSINGLEVALUE", f"'{name}',$,{typed_value},$"
                )
            )
        pset = self.add(
            "IFCPROPERTYSET",
            f"'{self.guid()}',$,'Pset_Common',$,("
            + ",".join(f"#{p}" for p in prop_ids)
            + ")",
        )
        self.add(
            "IFCRELDEFINESBYPROPERTIES",
            f"'{self.guid()}',$,$,$,(#{element}),#{pset}",
        )

    def render(self, schema: str = "IFC4") -> str:
        header = [
            "ISO-10303-21;",
            "HEADER;",
            "FILE_DESCRIPTION(('ViewDefinition [CoordinationView]'),'2;1');",
            "FILE_NAME('fzk_haus.ifc','2024-05-14T10:00:00',('KHH'),"
            "('Karlsruhe Institute of Technology'),'bimql fixture writer',"
            "'bimql','');",
            f"FILE_SCHEMA(('{schema}'));",
            "ENDSEC;",
            "DATA;",
        ]
        footer = ["ENDSEC;", "END-ISO-10303-21;"]
        return "\n".join(header + self.lines + footer) + "\n"


# typed property values
def t_bool(flag: bool) -> str:
    return f"IFCBOOLEAN(.{'T' if flag else 'F'}.)"


def t_real(measure: str, value: float) -> str:
    return f"{measure}({format_real(value)})"


def t_label(text: str) -> str:
    return f"IFCLABEL('{text}')"


def t_int(value: int) -> str:
    return f"IFCINTEGER({value})"


def build_fixture() -> str:
    door4_y, stair_y = solve_positions()
    w = IfcWriter()

    # project scaffolding, millimeter units
    origin = w.point3(0.0, 0.0, 0.0)
    wcs = w.add("IFCAXIS2PLACEMENT3D", f"#{origin},$,$")
    context = w.add(
        "IFCGEOMETRICREPRESENTATIONCONTEXT", f"$,'Model',3,1.E-5,#{wcs},$"
    )
    unit_length = w.add("IFCSIUNIT", "*,.LENGTHUNIT.,.MILLI.,.METRE.")
    unit_area = w.add("IFCSIUNIT", "*,.AREAUNIT.,$,.SQUARE_METRE.")
    unit_volume = w.add("IFCSIUNIT", "*,.VOLUMEUNIT.,$,.CUBIC_METRE.")
    units = w.add(
        "IFCUNITASSIGNMENT", f"(#{unit_length},#{unit_area},#{unit_volume})"
    )
    project = w.add(
        "IFCPROJECT",
        f"'{w.guid()}',$,'FZK-Haus Projekt',$,$,$,$,(#{context}),#{units}",
    )

    site_placement = w.local_placement(None, (0.0, 0.0, 0.0))
    site = w.add(
        "IFCSITE",
        f"'{w.guid()}',$,'Gelaende',$,$,#{site_placement},$,$,.ELEMENT.,$,$,$,$,$",
    )
    building_placement = w.local_placement(site_placement, (0.0, 0.0, 0.0))
    building = w.add(
        "IFCBUILDING",
        f"'{w.guid()}',$,'FZK-Haus','Wohnhaus, erstellt von KHH, IAI und FZK',$,"
        f"#{building_placement},$,'FZK-Haus',.ELEMENT.,$,$,$",
    )
    erdg_placement = w.local_placement(building_placement, (0.0, 0.0, 0.0))
    erdg = w.add(
        "IFCBUILDINGSTOREY",
        f"'{w.guid()}',$,'Erdgeschoss',$,$,#{erdg_placement},$,'Ground floor',"
        f".ELEMENT.,0.",
    )
    dach_placement = w.local_placement(
        building_placement, (0.0, 0.0, STOREY_SPLIT * MM)
    )
    dach = w.add(
        "IFCBUILDINGSTOREY",
        f"'{w.guid()}',$,'Dachgeschoss',$,$,#{dach_placement},$,'Attic',"
        f".ELEMENT.,{format_real(STOREY_SPLIT * MM)}",
    )

    w.add("IFCRELAGGREGATES", f"'{w.guid()}',$,$,$,#{project},(#{site})")
    w.add("IFCRELAGGREGATES", f"'{w.guid()}',$,$,$,#{site},(#{building})")
    w.add(
        "IFCRELAGGREGATES",
        f"'{w.guid()}',$,$,$,#{building},(#{erdg},#{dach})",
    )

    erdg_elements: list[int] = []
    dach_elements: list[int] = []
    spaces: list[int] = []

    def space(name: str, box, storey_pl: int, profile_kind: str) -> int:
        (x0, y0), (x1, y1) = box
        placement = w.local_placement(storey_pl, (x0 * MM, y0 * MM, 0.0))
        dx_mm, dy_mm = (x1 - x0) * MM, (y1 - y0) * MM
        if profile_kind == "rect":
            profile = w.rect_profile(dx_mm, dy_mm, (dx_mm / 2.0, dy_mm / 2.0))
        else:
            profile = w.polyline_profile(
                [(0.0, 0.0), (dx_mm, 0.0), (dx_mm, dy_mm), (0.0, dy_mm)]
            )
        solid = w.extrusion(profile, ROOM_HEIGHT * MM)
        shape = w.body_shape([solid], context)
        return w.add(
            "IFCSPACE",
            f"'{w.guid()}',$,'{name}',$,$,#{placement},#{shape},$,.ELEMENT.,$,$",
        )

    room_boxes = {
        "1": ((R1_X[0], R1_Y0), (R1_X[1], R1_Y1)),
        "2": R2_BOX,
        "3": R3_BOX,
        "4": R4_BOX,
        "5": ((R5_X[0], BAND_Y0), (R5_X[1], R1_Y0)),
        "6": ((R6_X[0], BAND_Y0), (R6_X[1], R1_Y0)),
    }
    room_ids: dict[str, int] = {}
    for name in ("1", "2", "3"):
        room_ids[name] = space(name, room_boxes[name], erdg_placement, "rect")
    for name in ("4", "5", "6"):
        room_ids[name] = space(name, room_boxes[name], erdg_placement, "poly")
    spaces.extend(room_ids.values())

    # attic: pentagon profile in the (y, z) plane, extruded along world +X
    pent_w = ATTIC_WIDTH * MM
    pentagon = [
        (0.0, 0.0),
        (pent_w, 0.0),
        (pent_w, ATTIC_KNEE * MM),
        (pent_w / 2.0, (ATTIC_KNEE + ATTIC_RIDGE) * MM),
        (0.0, ATTIC_KNEE * MM),
    ]
    attic_placement = w.local_placement(
        dach_placement, (ATTIC_FOOT_X[0] * MM, ATTIC_FOOT_Y[0] * MM, 0.0)
    )
    attic_profile = w.polyline_profile(pentagon)
    attic_position = w.axis_placement(
        (0.0, 0.0, 0.0), axis=(1.0, 0.0, 0.0), ref=(0.0, 1.0, 0.0)
    )
    attic_solid = w.extrusion(attic_profile, ATTIC_LENGTH * MM, attic_position)
    attic_shape = w.body_shape([attic_solid], context)
    room7 = w.add(
        "IFCSPACE",
        f"'{w.guid()}',$,'7',$,$,#{attic_placement},#{attic_shape},$,.ELEMENT.,$,$",
    )
    room_ids["7"] = room7
    spaces.append(room7)

    for name, rid in room_ids.items():
        w.property_set(
            rid,
            [
                ("Reference", t_label(f"Raum {name}")),
                ("IsExternal", t_bool(False)),
                ("GrossPlannedArea", t_real("IFCAREAMEASURE", 12.0)),
                ("NetPlannedArea", t_real("IFCAREAMEASURE", 11.0)),
                ("FinishCeilingHeight", t_real("IFCLENGTHMEASURE", 2.5)),
                ("OccupancyNumber", t_int(2)),
                ("Category", t_label("Wohnen")),
                ("HandicapAccessible", t_bool(False)),
            ],
        )
    w.add(
        "IFCRELAGGREGATES",
        f"'{w.guid()}',$,$,$,#{erdg},("
        + ",".join(f"#{room_ids[n]}" for n in ("1", "2", "3", "4", "5", "6"))
        + ")",
    )
    w.add("IFCRELAGGREGATES", f"'{w.guid()}',$,$,$,#{dach},(#{room7})")

    # -- walls ----------------------------------------------------------
    def wall(name: str, box3, storey_pl: int, external: bool,
             standard_case: bool = False, clipped: bool = False) -> int:
        (x0, y0, z0), (x1, y1, z1) = box3
        placement = w.local_placement(storey_pl, (x0 * MM, y0 * MM, 0.0))
        solid = w.box_solid(
            (0.0, 0.0, z0 * MM),
            ((x1 - x0) * MM, (y1 - y0) * MM, z1 * MM),
        )
        if clipped:
            plane_pos = w.axis_placement((0.0, 0.0, (z1 - 0.1) * MM))
            plane = w.add("IFCPLANE", f"#{plane_pos}")
            half = w.add("IFCHALFSPACESOLID", f"#{plane},.F.")
            solid = w.add(
                "IFCBOOLEANCLIPPINGRESULT", f".DIFFERENCE.,#{solid},#{half}"
            )
        shape = w.body_shape([solid], context)
        type_name = "IFCWALLSTANDARDCASE" if standard_case else "IFCWALL"
        wall_id = w.add(
            type_name,
            f"'{w.guid()}',$,'{name}',$,$,#{placement},#{shape},$,$",
        )
        w.property_set(
            wall_id,
            [
                ("IsExternal", t_bool(external)),
                (
                    "ThermalTransmittance",
                    t_real("IFCTHERMALTRANSMITTANCEMEASURE", 0.4 if external else 1.2),
                ),
                ("LoadBearing", t_bool(external)),
            ],
        )
        return wall_id

    south, north = BAND_Y0 - 0.3, ATTIC_FOOT_Y[1] + 0.3
    walls_erdg = [
        ("Wand-Ext-ERDG-1", ((0.0, south, 0.0), (12.0, south + 0.3, 2.7)), True, False, False),
        ("Wand-Ext-ERDG-2", ((0.0, north - 0.3, 0.0), (12.0, north, 2.7)), True, False, False),
        ("Wand-Ext-ERDG-3", ((0.0, south, 0.0), (0.3, north, 2.7)), True, False, False),
        ("Wand-Ext-ERDG-4", ((11.7, south, 0.0), (12.0, north, 2.7)), True, False, False),
        ("Wand-Int-ERDG-1", ((0.3, 5.75, 0.0), (3.8, 5.99, 2.7)), False, True, False),
        ("Wand-Int-ERDG-2", ((4.04, 5.75, 0.0), (7.96, 5.99, 2.7)), False, True, False),
        ("Wand-Int-ERDG-3", ((7.96, 3.2339, 0.0), (8.2, 10.7161, 2.7)), False, True, False),
        ("Wand-Int-ERDG-4", ((3.8, 5.99, 0.0), (4.04, 9.7, 2.7)), False, True, False),
        ("Wand-Int-ERDG-5", ((7.41, 5.99, 0.0), (7.65, 9.7, 2.7)), False, True, True),
    ]
    wall_ids: dict[str, int] = {}
    for name, box3, external, std, clipped in walls_erdg:
        wall_ids[name] = wall(name, box3, erdg_placement, external, std, clipped)
        erdg_elements.append(wall_ids[name])
    walls_dach = [
        ("Wand-Ext-OG-1", ((0.0, south, 0.0), (12.0, south + 0.3, 1.1)), True),
        ("Wand-Ext-OG-2", ((0.0, north - 0.3, 0.0), (12.0, north, 1.1)), True),
        ("Wand-Ext-OG-3", ((0.0, south, 0.0), (0.3, north, 1.8)), True),
        ("Wand-Ext-OG-4", ((11.7, south, 0.0), (12.0, north, 1.8)), True),
    ]
    for name, box3, external in walls_dach:
        wall_ids[name] = wall(name, box3, dach_placement, external)
        dach_elements.append(wall_ids[name])

    # -- doors ----------------------------------------------------------
    def door(name: str, lo, hi, parent_pl: int, external: bool,
             fire_exit: bool, transmittance: float) -> int:
        placement = w.local_placement(parent_pl, (lo[0] * MM, lo[1] * MM, 0.0))
        solid = w.box_solid(
            (0.0, 0.0, 0.0),
            ((hi[0] - lo[0]) * MM, (hi[1] - lo[1]) * MM, DOOR_HEIGHT * MM),
        )
        shape = w.body_shape([solid], context)
        door_id = w.add(
            "IFCDOOR",
            f"'{w.guid()}',$,'{name}',$,$,#{placement},#{shape},$,"
            f"{format_real(DOOR_HEIGHT * MM)},{format_real((hi[0] - lo[0]) * MM)},"
            f".DOOR.,$,$",
        )
        w.property_set(
            door_id,
            [
                ("IsExternal", t_bool(external)),
                (
                    "ThermalTransmittance",
                    t_real("IFCTHERMALTRANSMITTANCEMEASURE", transmittance),
                ),
                ("FireExit", t_bool(fire_exit)),
            ],
        )
        return door_id

    half_w = DOOR_WIDTH / 2.0
    half_p = DOOR_PANEL / 2.0
    wall_mid_14 = (R1_X[1] + R4_BOX[0][0]) / 2.0  # x = 8.08
    door_specs = {
        "Haustuer": ((0.1, 4.95 - half_w), (0.2, 4.95 + half_w), True, True, 1.4),
        "Terrassentuer": (
            (4.65 - half_w, BAND_Y0 - 0.2),
            (4.65 + half_w, BAND_Y0 - 0.1),
            True, True, 0.9,
        ),
        "Zimmertuer-1": ((2.5 - half_w, 5.82), (2.5 + half_w, 5.92), False, False, 1.8),
        "Zimmertuer-2": ((5.7 - half_w, 5.82), (5.7 + half_w, 5.92), False, False, 1.8),
        "Zimmertuer-3": (
            (wall_mid_14 - half_p, door4_y - half_w),
            (wall_mid_14 + half_p, door4_y + half_w),
            False, False, 1.8,
        ),
    }
    door_ids: dict[str, int] = {}
    for name, (lo, hi, ext, fire, tt) in door_specs.items():
        door_ids[name] = door(name, lo, hi, erdg_placement, ext, fire, tt)
        erdg_elements.append(door_ids[name])

    # -- windows (shared mapped representation) ---------------------------
    window_profile = w.rect_profile(1200.0, 300.0, (600.0, 150.0))
    window_solid = w.extrusion(window_profile, 1400.0)
    map_origin = w.axis_placement((0.0, 0.0, 0.0))
    window_rep = w.add(
        "IFCSHAPEREPRESENTATION",
        f"#{context},'Body','SweptSolid',(#{window_solid})",
    )
    rep_map = w.add("IFCREPRESENTATIONMAP", f"#{map_origin},#{window_rep}")

    def window(name: str, origin_m, storey_pl: int, lift_mm: float = 0.0) -> int:
        target_origin = w.point3(0.0, 0.0, lift_mm)
        operator = w.add(
            "IFCCARTESIANTRANSFORMATIONOPERATOR3D",
            f"$,$,#{target_origin},$,$",
        )
        mapped = w.add("IFCMAPPEDITEM", f"#{rep_map},#{operator}")
        rep = w.add(
            "IFCSHAPEREPRESENTATION",
            f"#{context},'Body','MappedRepresentation',(#{mapped})",
        )
        shape = w.add("IFCPRODUCTDEFINITIONSHAPE", f"$,$,(#{rep})")
        placement = w.local_placement(
            storey_pl, (origin_m[0] * MM, origin_m[1] * MM, origin_m[2] * MM)
        )
        window_id = w.add(
            "IFCWINDOW",
            f"'{w.guid()}',$,'{name}',$,$,#{placement},#{shape},$,1400.,1200.,$,$,$",
        )
        w.property_set(
            window_id,
            [
                ("IsExternal", t_bool(True)),
                (
                    "ThermalTransmittance",
                    t_real("IFCTHERMALTRANSMITTANCEMEASURE", 1.3),
                ),
            ],
        )
        return window_id

    erdg_window_origins = [
        (1.0, south, 0.8), (3.0, south, 0.8), (6.2, south, 0.8),
        (9.0, south, 0.8), (1.2, north - 0.3, 0.8), (5.0, north - 0.3, 0.8),
        (8.8, north - 0.3, 0.8), (11.7, 1.0, 0.8), (11.7, 6.5, 0.8),
    ]
    for i, origin_m in enumerate(erdg_window_origins, start=1):
        lift = 200.0 if i == 1 else 0.0
        erdg_elements.append(window(f"Fenster-ERDG-{i}", origin_m, erdg_placement, lift))
    for i, origin_m in enumerate([(2.0, south, 0.8), (9.5, south, 0.8)], start=1):
        dach_elements.append(window(f"Fenster-OG-{i}", origin_m, dach_placement))

    # -- stair (faceted brep box) ----------------------------------------
    stair_lo = (STAIR_X[0], stair_y - STAIR_HALF_Y, 0.0)
    stair_hi = (STAIR_X[1], stair_y + STAIR_HALF_Y, STAIR_TOP)
    stair_placement = w.local_placement(
        erdg_placement, (stair_lo[0] * MM, stair_lo[1] * MM, 0.0)
    )
    brep = w.faceted_box(
        (0.0, 0.0, 0.0),
        (
            (stair_hi[0] - stair_lo[0]) * MM,
            (stair_hi[1] - stair_lo[1]) * MM,
            stair_hi[2] * MM,
        ),
    )
    stair_rep = w.add(
        "IFCSHAPEREPRESENTATION", f"#{context},'Body','Brep',(#{brep})"
    )
    stair_shape = w.add("IFCPRODUCTDEFINITIONSHAPE", f"$,$,(#{stair_rep})")
    stair = w.add(
        "IFCSTAIR",
        f"'{w.guid()}',$,'Wendeltreppe',$,$,#{stair_placement},#{stair_shape},$,"
        f".SPIRAL_STAIR.",
    )
    w.property_set(
        stair,
        [
            ("Reference", t_label("Wendeltreppe")),
            ("IsExternal", t_bool(False)),
            ("NumberOfRiser", t_int(13)),
            ("NumberOfTreads", t_int(13)),
            ("FireRating", t_label("F30")),
        ],
    )
    erdg_elements.append(stair)

    # -- slabs ------------------------------------------------------------
    def plain_slab(name: str, lo, hi, storey_pl: int, predefined: str,
                   load_bearing: bool) -> int:
        placement = w.local_placement(storey_pl, (lo[0] * MM, lo[1] * MM, 0.0))
        solid = w.box_solid(
            (0.0, 0.0, lo[2] * MM),
            ((hi[0] - lo[0]) * MM, (hi[1] - lo[1]) * MM, hi[2] * MM),
        )
        shape = w.body_shape([solid], context)
        slab_id = w.add(
            "IFCSLAB",
            f"'{w.guid()}',$,'{name}',$,$,#{placement},#{shape},$,.{predefined}.",
        )
        w.property_set(
            slab_id,
            [
                ("LoadBearing", t_bool(load_bearing)),
                ("IsExternal", t_bool(predefined in ("ROOF", "BASESLAB"))),
                ("Thickness", t_real("IFCLENGTHMEASURE", hi[2] - lo[2])),
            ],
        )
        return slab_id

    erdg_elements.append(
        plain_slab("Bodenplatte", (0.0, south, -0.3), (12.0, north, 0.0),
                   erdg_placement, "BASESLAB", True)
    )
    # storey deck straddles the split; its centroid z sits exactly on it
    deck = plain_slab("Geschossdecke", (0.3, BAND_Y0, 2.5), (11.7, 10.7161, 2.9),
                      erdg_placement, "FLOOR", True)
    erdg_elements.append(deck)

    # roof slabs as face sets (one polygonal, one triangulated)
    ridge_y = (ATTIC_FOOT_Y[0] + ATTIC_FOOT_Y[1]) / 2.0
    ridge_z = ATTIC_KNEE + ATTIC_RIDGE  # storey-local
    eave_z = ATTIC_KNEE

    def roof_slab_points(south_side: bool):
        y_low = ATTIC_FOOT_Y[0] if south_side else ATTIC_FOOT_Y[1]
        pts = [
            (ATTIC_FOOT_X[0], y_low, eave_z),
            (ATTIC_FOOT_X[1], y_low, eave_z),
            (ATTIC_FOOT_X[1], ridge_y, ridge_z),
            (ATTIC_FOOT_X[0], ridge_y, ridge_z),
        ]
        top = [(x, y, z + 0.2) for x, y, z in pts]
        return pts + top

    def coord_list(points_m) -> int:
        coords = ",".join(
            f"({format_real(x * MM)},{format_real(y * MM)},{format_real(z * MM)})"
            for x, y, z in points_m
        )
        return w.add("IFCCARTESIANPOINTLIST3D", f"({coords}),$")

    quad_faces = [
        (1, 4, 3, 2), (5, 6, 7, 8), (1, 2, 6, 5),
        (2, 3, 7, 6), (3, 4, 8, 7), (4, 1, 5, 8),
    ]

    def slab_props(slab_id: int) -> None:
        w.property_set(
            slab_id,
            [
                ("LoadBearing", t_bool(True)),
                ("IsExternal", t_bool(True)),
                ("PitchAngle", t_real("IFCPLANEANGLEMEASURE", 35.0)),
            ],
        )

    pts1 = roof_slab_points(True)
    cl1 = coord_list(pts1)
    face_ids = [
        w.add("IFCINDEXEDPOLYGONALFACE", "(" + ",".join(str(i) for i in q) + ")")
        for q in quad_faces
    ]
    pfs = w.add(
        "IFCPOLYGONALFACESET",
        f"#{cl1},.T.,(" + ",".join(f"#{f}" for f in face_ids) + "),$",
    )
    rep1 = w.add(
        "IFCSHAPEREPRESENTATION", f"#{context},'Body','Tessellation',(#{pfs})"
    )
    shape1 = w.add("IFCPRODUCTDEFINITIONSHAPE", f"$,$,(#{rep1})")
    pl1 = w.local_placement(dach_placement, (0.0, 0.0, 0.0))
    slab_roof1 = w.add(
        "IFCSLAB",
        f"'{w.guid()}',$,'Dachplatte-1',$,$,#{pl1},#{shape1},$,.ROOF.",
    )
    slab_props(slab_roof1)
    dach_elements.append(slab_roof1)

    pts2 = roof_slab_points(False)
    cl2 = coord_list(pts2)
    tris = []
    for a, b, c, d in quad_faces:
        tris.append(f"({a},{b},{c})")
        tris.append(f"({a},{c},{d})")
    tfs = w.add(
        "IFCTRIANGULATEDFACESET",
        f"#{cl2},$,.T.,(" + ",".join(tris) + "),$",
    )
    rep2 = w.add(
        "IFCSHAPEREPRESENTATION", f"#{context},'Body','Tessellation',(#{tfs})"
    )
    shape2 = w.add("IFCPRODUCTDEFINITIONSHAPE", f"$,$,(#{rep2})")
    pl2 = w.local_placement(dach_placement, (0.0, 0.0, 0.0))
    slab_roof2 = w.add(
        "IFCSLAB",
        f"'{w.guid()}',$,'Dachplatte-2',$,$,#{pl2},#{shape2},$,.ROOF.",
    )
    slab_props(slab_roof2)
    dach_elements.append(slab_roof2)

    # -- roofs (thin plates near the ridge) -------------------------------
    for i, y0 in ((1, ridge_y - 2.0), (2, ridge_y + 1.0)):
        placement = w.local_placement(dach_placement, (0.3 * MM, y0 * MM, 0.0))
        solid = w.box_solid(
            (0.0, 0.0, (ridge_z + 0.2) * MM),
            (ATTIC_LENGTH * MM, 1000.0, (ridge_z + 0.35) * MM),
        )
        shape = w.body_shape([solid], context)
        roof_id = w.add(
            "IFCROOF",
            f"'{w.guid()}',$,'Dach-{i}',$,$,#{placement},#{shape},$,.GABLE_ROOF.",
        )
        w.property_set(
            roof_id,
            [
                ("IsExternal", t_bool(True)),
                ("ProjectedArea", t_real("IFCAREAMEASURE", 70.0)),
            ],
        )
        dach_elements.append(roof_id)

    # -- rafters and ridge post -------------------------------------------
    beam_profile = w.rect_profile(100.0, 120.0)
    rafter_count = 25
    beam_index = 0
    for side in (0, 1):
        for i in range(rafter_count):
            beam_index += 1
            x = 0.52 + i * (ATTIC_LENGTH - 0.44) / rafter_count
            y0 = ATTIC_FOOT_Y[0] + 0.2 if side == 0 else ridge_y + 0.2
            placement = w.local_placement(
                dach_placement, (x * MM, y0 * MM, 0.45 * MM)
            )
            # extruded along local Z mapped to world +Y: runs across the roof
            position = w.axis_placement(
                (0.0, 0.0, 0.0), axis=(0.0, 1.0, 0.0), ref=(1.0, 0.0, 0.0)
            )
            solid = w.extrusion(beam_profile, 4000.0, position)
            shape = w.body_shape([solid], context)
            beam = w.add(
                "IFCBEAM",
                f"'{w.guid()}',$,'Sparren-{beam_index}',$,$,#{placement},#{shape},$,$",
            )
            w.property_set(
                beam,
                [
                    ("LoadBearing", t_bool(True)),
                    ("Reference", t_label("Sparren")),
                    ("Span", t_real("IFCLENGTHMEASURE", 4.0)),
                ],
            )
            dach_elements.append(beam)
    # ridge beam
    beam_index += 1
    placement = w.local_placement(
        dach_placement, (0.3 * MM, ridge_y * MM, (ridge_z - 0.3) * MM)
    )
    ridge_solid = w.extrusion(
        w.rect_profile(140.0, 180.0), ATTIC_LENGTH * MM,
        w.axis_placement((0.0, 0.0, 0.0), axis=(1.0, 0.0, 0.0), ref=(0.0, 1.0, 0.0)),
    )
    ridge_shape = w.body_shape([ridge_solid], context)
    ridge_beam = w.add(
        "IFCBEAM",
        f"'{w.guid()}',$,'Firstpfette',$,$,#{placement},#{ridge_shape},$,$",
    )
    w.property_set(
        ridge_beam,
        [
            ("LoadBearing", t_bool(True)),
            ("Reference", t_label("Firstpfette")),
            ("Span", t_real("IFCLENGTHMEASURE", 11.4)),
        ],
    )
    dach_elements.append(ridge_beam)

    # ridge post (column)
    placement = w.local_placement(dach_placement, (6.0 * MM, ridge_y * MM, 0.0))
    post_solid = w.extrusion(w.rect_profile(200.0, 200.0), (ridge_z - 0.3) * MM)
    post_shape = w.body_shape([post_solid], context)
    column = w.add(
        "IFCCOLUMN",
        f"'{w.guid()}',$,'Firststuetze',$,$,#{placement},#{post_shape},$,$",
    )
    w.property_set(
        column,
        [
            ("LoadBearing", t_bool(True)),
            ("Reference", t_label("Firststuetze")),
            ("Slope", t_real("IFCPLANEANGLEMEASURE", 0.0)),
        ],
    )
    dach_elements.append(column)

    # -- railings around the stair opening ---------------------------------
    for i, (x0, y0, dx_m, dy_m) in enumerate(
        [
            (5.6, stair_y + STAIR_HALF_Y + 0.1, 1.4, 0.08),
            (5.6, stair_y - STAIR_HALF_Y - 0.18, 1.4, 0.08),
            (5.52, stair_y - STAIR_HALF_Y - 0.18, 0.08, 1.36),
        ],
        start=1,
    ):
        placement = w.local_placement(dach_placement, (x0 * MM, y0 * MM, 0.0))
        solid = w.box_solid((0.0, 0.0, 0.0), (dx_m * MM, dy_m * MM, 1000.0))
        shape = w.body_shape([solid], context)
        railing = w.add(
            "IFCRAILING",
            f"'{w.guid()}',$,'Gelaender-{i}',$,$,#{placement},#{shape},$,"
            f".HANDRAIL.",
        )
        w.property_set(
            railing,
            [
                ("IsExternal", t_bool(False)),
                ("Height", t_real("IFCLENGTHMEASURE", 1.0)),
                ("Reference", t_label("Gelaender")),
                ("HandicapAccessible", t_bool(True)),
            ],
        )
        dach_elements.append(railing)

    # -- containment ------------------------------------------------------
    w.add(
        "IFCRELCONTAINEDINSPATIALSTRUCTURE",
        f"'{w.guid()}',$,$,$,("
        + ",".join(f"#{e}" for e in erdg_elements)
        + f"),#{erdg}",
    )
    w.add(
        "IFCRELCONTAINEDINSPATIALSTRUCTURE",
        f"'{w.guid()}',$,$,$,("
        + ",".join(f"#{e}" for e in dach_elements)
        + f"),#{dach}",
    )

    return w.render()


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


def verify(text: str) -> None:
    from bimql.graph.build import build_graph
    from bimql.graph.query import GraphQuery, run_graph_query
    from bimql.ifc.extract import extract_model
    from bimql.step.parser import parse_step

    file = parse_step(text.encode())
    model = extract_model(file)

    def check(label: str, actual, expected) -> None:
        if actual != expected:
            raise SystemExit(f"FIXTURE MISMATCH {label}: {actual!r} != {expected!r}")
        print(f"  ok {label}: {actual!r}")

    counts = {c: len(model.elements_of_class(c)) for c in
              ("room", "wall", "door", "window", "beam", "column", "slab",
               "roof", "stair", "railing")}
    check("rooms", counts["room"], 7)
    check("walls", counts["wall"], 13)
    check("doors", counts["door"], 5)
    check("windows", counts["window"], 11)
    check("beams", counts["beam"], 51)
    check("columns", counts["column"], 1)
    check("slabs", counts["slab"], 4)
    check("roofs", counts["roof"], 2)
    check("stairs", counts["stair"], 1)
    check("railings", counts["railing"], 3)
    check("storeys", len(model.storeys), 2)
    check("buildings", [b.name for b in model.buildings], ["FZK-Haus"])
    check("property rows", len(model.properties), 321)

    elevations = sorted(s.elevation for s in model.storeys)
    check("elevations", elevations, [0.0, 2.7])

    storey_by_id = {s.storey_id: s for s in model.storeys}
    rooms = {e.name: e for e in model.elements_of_class("room")}
    per_storey: dict[str, int] = {}
    for room in rooms.values():
        name = storey_by_id[room.storey_id].name
        per_storey[name] = per_storey.get(name, 0) + 1
    check("rooms per storey", per_storey, {"Erdgeschoss": 6, "Dachgeschoss": 1})

    volumes = {n: round(r.volume, 2) for n, r in rooms.items()}
    check(
        "room volumes",
        volumes,
        {"1": 30.93, "2": 32.46, "3": 31.26, "4": 55.18, "5": 62.19,
         "6": 43.55, "7": 362.92},
    )
    c4 = rooms["4"].centroid
    assert all(abs(a - b) < 1e-9 for a, b in zip(c4, (9.675, 6.975, 1.25))), c4
    print(f"  ok room 4 centroid: {c4}")
    r2 = rooms["2"].aabb
    assert all(abs(a - b) < 1e-9 for a, b in zip(r2.min, (0.3, 5.99, 0.0))), r2
    assert all(abs(a - b) < 1e-9 for a, b in zip(r2.max, (3.8, 9.7, 2.5))), r2
    print(f"  ok room 2 box: {r2.min} -> {r2.max}")

    slab_names_erdg = sorted(
        e.name for e in model.elements_of_class("slab")
        if storey_by_id[e.storey_id].name == "Erdgeschoss"
    )
    check("bottom storey slabs", slab_names_erdg, ["Bodenplatte"])

    wall_storeys: dict[str, int] = {}
    for e in model.elements_of_class("wall"):
        wall_storeys[storey_by_id[e.storey_id].name] = (
            wall_storeys.get(storey_by_id[e.storey_id].name, 0) + 1
        )
    check("walls per storey", wall_storeys, {"Erdgeschoss": 9, "Dachgeschoss": 4})

    per = lambda cls: {
        s: sum(
            1 for e in model.elements_of_class(cls)
            if storey_by_id[e.storey_id].name == s
        )
        for s in ("Erdgeschoss", "Dachgeschoss")
    }
    check("doors per storey", per("door"), {"Erdgeschoss": 5, "Dachgeschoss": 0})
    check("windows per storey", per("window"), {"Erdgeschoss": 9, "Dachgeschoss": 2})
    check("beams per storey", per("beam"), {"Erdgeschoss": 0, "Dachgeschoss": 51})
    check("columns per storey", per("column"), {"Erdgeschoss": 0, "Dachgeschoss": 1})

    door_props = {
        p.property_name
        for p in model.properties
        if p.element_type == "IfcDoor"
    }
    check("door property names", door_props,
          {"IsExternal", "ThermalTransmittance", "FireExit"})
    wall_props = {
        p.property_name for p in model.properties if p.element_type == "IfcWall"
    }
    check("wall property names", wall_props,
          {"IsExternal", "ThermalTransmittance", "LoadBearing"})

    doors = {e.name: e for e in model.elements_of_class("door")}
    haustuer_props = {
        p.property_name: p.property_value
        for p in model.properties
        if p.element_id == doors["Haustuer"].element_id
    }
    check("Haustuer IsExternal", haustuer_props["IsExternal"], "True")
    check("Haustuer transmittance", haustuer_props["ThermalTransmittance"], "1.4")

    exit_doors = sorted(
        name for name, e in doors.items()
        if {
            p.property_name: p.property_value
            for p in model.properties
            if p.element_id == e.element_id
        }.get("FireExit") == "True"
    )
    check("exit doors", exit_doors, ["Haustuer", "Terrassentuer"])

    # graph layer
    graph = build_graph(model.navigable_elements(), model.storeys)
    check("graph nodes", graph.node_count(), 13)
    by_name = {
        (n.node_type, n.name): n.node_id for n in graph.nodes.values()
    }
    edge_names = set()
    reverse = {v: k for k, v in by_name.items()}
    for a, b in graph.edges:
        edge_names.add(tuple(sorted((str(reverse[a]), str(reverse[b])))))
    expected_edges = {
        tuple(sorted((str(("room", "1")), str(("room", "5"))))),
        tuple(sorted((str(("room", "1")), str(("room", "6"))))),
        tuple(sorted((str(("room", "5")), str(("room", "6"))))),
        tuple(sorted((str(("room", "1")), str(("door", "Haustuer"))))),
        tuple(sorted((str(("room", "1")), str(("door", "Zimmertuer-1"))))),
        tuple(sorted((str(("room", "2")), str(("door", "Zimmertuer-1"))))),
        tuple(sorted((str(("room", "1")), str(("door", "Zimmertuer-2"))))),
        tuple(sorted((str(("room", "3")), str(("door", "Zimmertuer-2"))))),
        tuple(sorted((str(("room", "1")), str(("door", "Zimmertuer-3"))))),
        tuple(sorted((str(("room", "4")), str(("door", "Zimmertuer-3"))))),
        tuple(sorted((str(("room", "5")), str(("door", "Terrassentuer"))))),
        tuple(sorted((str(("room", "5")), str(("stair", "Wendeltreppe"))))),
        tuple(sorted((str(("room", "7")), str(("stair", "Wendeltreppe"))))),
    }
    check("graph edges", edge_names, expected_edges)

    res = run_graph_query(
        graph,
        GraphQuery.from_obj(
            {"neighbors": {"node": {"type": "room", "name": "1"},
                           "type_filter": "room"}}
        ),
    )
    check("rooms touching room 1", sorted(r[2] for r in res.rows), ["5", "6"])
    res = run_graph_query(
        graph,
        GraphQuery.from_obj(
            {"neighbors": {"node": {"type": "room", "name": "1"},
                           "type_filter": "room", "via_type": "door"}}
        ),
    )
    check("rooms by door from room 1", sorted(r[2] for r in res.rows),
          ["2", "3", "4"])
    res = run_graph_query(
        graph,
        GraphQuery.from_obj({"degree_ranking": {"type": "room", "via_type": "door"}}),
    )
    check("most doors", (res.rows[0][1], res.rows[0][2]), ("1", 4))
    res = run_graph_query(graph, GraphQuery.from_obj({"isolated": {"type": "room"}}))
    check("isolated rooms", res.rows, [])

    res = run_graph_query(
        graph,
        GraphQuery.from_obj(
            {"shortest_path": {"from": {"type": "room", "name": "6"},
                               "to": {"type": "room", "name": "7"},
                               "weight": "hops"}}
        ),
    )
    check("6->7 hops", len(res.rows) - 1, 3)
    check("6->7 route", [r[3] for r in res.rows], ["6", "5", "Wendeltreppe", "7"])
    total = res.rows[-1][4]
    assert abs(total - 10.32) < 1e-6, total
    print(f"  ok 6->7 distance: {total}")

    res = run_graph_query(
        graph,
        GraphQuery.from_obj(
            {"shortest_path": {"from": {"type": "room", "name": "1"},
                               "to": {"type": "room", "name": "4"},
                               "weight": "distance"}}
        ),
    )
    total = res.rows[-1][4]
    assert abs(total - TARGET_R1_R4) < 1e-9, total
    print(f"  ok 1->4 distance: {total!r}")

    res = run_graph_query(
        graph,
        GraphQuery.from_obj(
            {"path_exists": {"from": {"type": "room", "name": "2"},
                             "to": {"type": "room", "name": "7"}}}
        ),
    )
    check("2->7 exists/hops", res.rows, [[1, 5]])

    warnings = [w_ for w_ in model.warnings if w_["severity"] != "info"]
    check("ingest warnings", warnings, [])


def main() -> None:
    text = build_fixture()
    OUT_PATH.parent.mkdir(parents=True, exist_ok=True)
    OUT_PATH.write_text(text)
    size = OUT_PATH.stat().st_size
    print(f"wrote {OUT_PATH} ({size} bytes)")
    print("verifying against the pipeline:")
    verify(text)
    print("fixture verified")


if __name__ == "__main__":
    main()
