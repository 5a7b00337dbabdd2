// Browser entry: wires the chat panel and the viewer to the service.
// Everything below is DOM plumbing; the logic lives in the tested
// modules (api/chat/trace/scene/viewer).

import * as THREE from "three";

import { ApiClient } from "./api.js";
import { ChatController, ChatMessage } from "./chat.js";
import { ViewerState } from "./scene.js";
import { buildThreeScene, fitCamera } from "./viewer.js";

const SERVICE_URL = (window as any).BIMQL_SERVICE_URL ?? "http://127.0.0.1:8080";

const api = new ApiClient(SERVICE_URL, (url, init) =>
  fetch(url, init as RequestInit)
);
const viewer = new ViewerState();

function repaint(renderer: THREE.WebGLRenderer): void {
  const items = viewer.renderModel();
  const scene = buildThreeScene(items);
  const camera = fitCamera(items);
  renderer.render(scene, camera);
}

function messageNode(message: ChatMessage, onShow: () => void): HTMLElement {
  const node = document.createElement("div");
  node.className = `msg ${message.role}`;
  const text = document.createElement("p");
  text.textContent = message.text;
  node.appendChild(text);
  if (message.badge) {
    const badge = document.createElement("span");
    badge.className = "badge";
    badge.textContent =
      `${message.badge.iterations} iter · ${message.badge.backend}` +
      (message.badge.usedFallback ? " · fallback" : "");
    node.appendChild(badge);
  }
  if (message.pathHighlight) {
    const button = document.createElement("button");
    button.textContent = `show path (${message.pathHighlight.nodeNames.join(" → ")})`;
    button.addEventListener("click", onShow);
    node.appendChild(button);
  }
  return node;
}

async function boot(): Promise<void> {
  const canvas = document.getElementById("viewport") as HTMLCanvasElement;
  const log = document.getElementById("log") as HTMLElement;
  const input = document.getElementById("question") as HTMLInputElement;
  const send = document.getElementById("send") as HTMLButtonElement;
  const banner = document.getElementById("banner") as HTMLElement;
  const meshToggle = document.getElementById("toggle-meshes") as HTMLInputElement;

  const renderer = new THREE.WebGLRenderer({ canvas, antialias: true });
  renderer.setSize(canvas.clientWidth, canvas.clientHeight, false);

  const chat = new ChatController(api, (highlight) => {
    viewer.setHighlights(highlight.nodeIds);
    repaint(renderer);
  });

  const refreshBanner = () => {
    banner.textContent = chat.banner ?? viewer.banner ?? "";
    banner.hidden = !banner.textContent;
  };

  try {
    viewer.loadScene(await api.fetchScene({ meshes: true }));
  } catch {
    viewer.banner = "could not load the scene";
  }
  repaint(renderer);
  refreshBanner();

  await chat.start();

  send.addEventListener("click", async () => {
    const question = input.value.trim();
    if (!question) return;
    const reply = await chat.send(question);
    refreshBanner();
    if (chat.banner === null) input.value = "";
    if (reply) {
      log.appendChild(messageNode({ role: "user", text: question }, () => {}));
      log.appendChild(messageNode(reply, () => chat.showPath(reply)));
      log.scrollTop = log.scrollHeight;
    }
  });

  meshToggle.addEventListener("change", () => {
    viewer.toggleLayer("meshes");
    repaint(renderer);
  });
}

boot().catch((error) => console.error(error));
