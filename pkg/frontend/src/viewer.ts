// three.js adapter: turns a render model into a scene graph. The
// WebGL renderer itself lives in main.ts; everything here also runs
// headless, which is how the tests exercise it.

import * as THREE from "three";

import type { RenderItem } from "./scene.js";
import { HIGHLIGHT_COLOR } from "./scene.js";

export function buildThreeScene(items: RenderItem[]): THREE.Scene {
  const scene = new THREE.Scene();
  scene.add(new THREE.AmbientLight(0xffffff, 0.9));
  for (const item of items) {
    scene.add(item.kind === "box" ? boxObject(item) : meshObject(item));
  }
  return scene;
}

function material(color: string, highlighted: boolean): THREE.Material {
  return new THREE.MeshLambertMaterial({
    color: new THREE.Color(highlighted ? HIGHLIGHT_COLOR : color),
    transparent: true,
    opacity: highlighted ? 0.95 : 0.55,
  });
}

function boxObject(item: Extract<RenderItem, { kind: "box" }>): THREE.Mesh {
  const size = [
    Math.max(item.max[0] - item.min[0], 0.01),
    Math.max(item.max[1] - item.min[1], 0.01),
    Math.max(item.max[2] - item.min[2], 0.01),
  ];
  const geometry = new THREE.BoxGeometry(size[0], size[1], size[2]);
  const mesh = new THREE.Mesh(geometry, material(item.color, item.highlighted));
  mesh.position.set(
    (item.min[0] + item.max[0]) / 2,
    (item.min[1] + item.max[1]) / 2,
    (item.min[2] + item.max[2]) / 2
  );
  mesh.name = item.id;
  mesh.userData = { id: item.id, highlighted: item.highlighted, label: item.label };
  return mesh;
}

function meshObject(item: Extract<RenderItem, { kind: "mesh" }>): THREE.Mesh {
  const geometry = new THREE.BufferGeometry();
  const positions = new Float32Array(item.vertices.length * 3);
  item.vertices.forEach((vertex, i) => positions.set(vertex, i * 3));
  geometry.setAttribute("position", new THREE.BufferAttribute(positions, 3));
  geometry.setIndex(item.faces.flat());
  geometry.computeVertexNormals();
  const mesh = new THREE.Mesh(geometry, material(item.color, item.highlighted));
  mesh.name = `mesh:${item.id}`;
  mesh.userData = { id: item.id, highlighted: item.highlighted };
  return mesh;
}

export function fitCamera(items: RenderItem[]): THREE.PerspectiveCamera {
  const camera = new THREE.PerspectiveCamera(50, 4 / 3, 0.1, 500);
  const bounds = new THREE.Box3();
  for (const item of items) {
    if (item.kind === "box") {
      bounds.expandByPoint(new THREE.Vector3(...item.min));
      bounds.expandByPoint(new THREE.Vector3(...item.max));
    }
  }
  if (bounds.isEmpty()) {
    camera.position.set(10, -10, 10);
    return camera;
  }
  const center = bounds.getCenter(new THREE.Vector3());
  const size = bounds.getSize(new THREE.Vector3()).length();
  camera.position.set(center.x + size, center.y - size, center.z + size * 0.7);
  camera.lookAt(center);
  return camera;
}
