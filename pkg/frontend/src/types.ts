// Wire types mirroring the service's JSON API. The client renders
// exclusively from these payloads and never derives geometry or
// distances of its own.

export interface TraceEntry {
  kind: "sql" | "graph";
  query: string;
  columns: string[] | null;
  rows: unknown[][] | null;
  error: string | null;
  guard_notice: string | null;
  via_fallback: boolean;
}

export interface TraceCall {
  phase: string;
  backend: string;
}

export interface Trace {
  user_query: string;
  results: TraceEntry[];
  iterations: number;
  calls: TraceCall[];
  guard_events: unknown[];
  fallback_engaged: boolean;
  incomplete: boolean;
}

export interface MessageResponse {
  answer: string;
  trace: Trace;
}

export type Triple = [number, number, number];

export interface SceneBox {
  id: string;
  type: string;
  name: string | null;
  min: Triple;
  max: Triple;
  color_class: string;
}

export interface SceneMesh {
  id: string;
  type: string;
  vertices: Triple[];
  faces: Triple[];
}

export interface SceneDocument {
  units: string;
  boxes: SceneBox[];
  highlights: string[];
  meshes?: SceneMesh[];
}
