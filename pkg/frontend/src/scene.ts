// Viewer state and the pure scene -> render-model step. All geometry
// comes verbatim from the scene document; the client only filters and
// colors it.

import type { SceneDocument, Triple } from "./types.js";

export const COLOR_BY_CLASS: Record<string, string> = {
  room: "#2e7d32",
  door: "#f9a825",
  stair: "#c62828",
  ramp: "#6a1b9a",
};
export const HIGHLIGHT_COLOR = "#00e5ff";
const FALLBACK_COLOR = "#607d8b";

export interface LayerToggles {
  rooms: boolean;
  doors: boolean;
  stairs: boolean;
  meshes: boolean;
}

export const DEFAULT_LAYERS: LayerToggles = {
  rooms: true,
  doors: true,
  stairs: true,
  meshes: false,
};

export interface RenderBox {
  kind: "box";
  id: string;
  color: string;
  highlighted: boolean;
  min: Triple;
  max: Triple;
  label: string;
}

export interface RenderMesh {
  kind: "mesh";
  id: string;
  color: string;
  highlighted: boolean;
  vertices: Triple[];
  faces: Triple[];
}

export type RenderItem = RenderBox | RenderMesh;

export interface SceneValidation {
  ok: boolean;
  reason?: string;
}

export function validateScene(doc: unknown): SceneValidation {
  const scene = doc as SceneDocument;
  if (!scene || typeof scene !== "object") {
    return { ok: false, reason: "scene is not an object" };
  }
  if (scene.units !== "meters") {
    return { ok: false, reason: `unexpected units: ${String(scene.units)}` };
  }
  if (!Array.isArray(scene.boxes) || !Array.isArray(scene.highlights)) {
    return { ok: false, reason: "boxes/highlights missing" };
  }
  const ids = new Set<string>();
  for (const box of scene.boxes) {
    if (typeof box.id !== "string" || box.min?.length !== 3 || box.max?.length !== 3) {
      return { ok: false, reason: "malformed box entry" };
    }
    for (let axis = 0; axis < 3; axis++) {
      if (box.min[axis] > box.max[axis]) {
        return { ok: false, reason: `box ${box.id} has min > max` };
      }
    }
    ids.add(box.id);
  }
  for (const highlight of scene.highlights) {
    if (!ids.has(highlight)) {
      return { ok: false, reason: `highlight ${highlight} is not a box` };
    }
  }
  return { ok: true };
}

function layerAllows(layers: LayerToggles, type: string): boolean {
  if (type === "room") return layers.rooms;
  if (type === "door") return layers.doors;
  if (type === "stair" || type === "ramp") return layers.stairs;
  return true;
}

export class ViewerState {
  scene: SceneDocument | null = null;
  layers: LayerToggles = { ...DEFAULT_LAYERS };
  highlights: string[] = [];
  banner: string | null = null;

  loadScene(doc: SceneDocument): boolean {
    const verdict = validateScene(doc);
    if (!verdict.ok) {
      this.banner = `scene rejected: ${verdict.reason}`;
      return false;
    }
    this.scene = doc;
    this.banner = null;
    this.highlights = [...doc.highlights];
    return true;
  }

  /** Highlight ids must reference scene boxes; unknown ids are dropped. */
  setHighlights(ids: string[]): void {
    if (!this.scene) {
      this.highlights = [];
      return;
    }
    const known = new Set(this.scene.boxes.map((box) => box.id));
    this.highlights = ids.filter((id) => known.has(id));
  }

  clearHighlights(): void {
    this.highlights = [];
  }

  toggleLayer(layer: keyof LayerToggles): void {
    this.layers[layer] = !this.layers[layer];
  }

  renderModel(): RenderItem[] {
    if (!this.scene) return [];
    const highlighted = new Set(this.highlights);
    const items: RenderItem[] = [];
    for (const box of this.scene.boxes) {
      if (!layerAllows(this.layers, box.type)) continue;
      items.push({
        kind: "box",
        id: box.id,
        color: COLOR_BY_CLASS[box.color_class] ?? FALLBACK_COLOR,
        highlighted: highlighted.has(box.id),
        min: box.min,
        max: box.max,
        label: `${box.type} ${box.name ?? box.id}`,
      });
    }
    if (this.layers.meshes && this.scene.meshes) {
      for (const mesh of this.scene.meshes) {
        items.push({
          kind: "mesh",
          id: mesh.id,
          color: FALLBACK_COLOR,
          highlighted: highlighted.has(mesh.id),
          vertices: mesh.vertices,
          faces: mesh.faces,
        });
      }
    }
    return items;
  }
}
