// Read-only interpretation of agent traces for display. Numbers are
// passed through as strings exactly as the service sent them; nothing
// here computes distances or geometry.

import type { Trace, TraceEntry } from "./types.js";

export interface AssistantBadge {
  iterations: number;
  backend: string;
  usedFallback: boolean;
  incomplete: boolean;
}

export function assistantBadge(trace: Trace): AssistantBadge {
  const lastCall = trace.calls[trace.calls.length - 1];
  return {
    iterations: trace.iterations,
    backend: lastCall ? lastCall.backend : "unknown",
    usedFallback: trace.fallback_engaged,
    incomplete: trace.incomplete,
  };
}

export interface PathHighlight {
  nodeIds: string[];
  nodeNames: string[];
  totalDistance: string;
}

const PATH_COLUMNS = ["step", "node_id", "node_type", "name", "distance_from_start"];

function isPathTable(entry: TraceEntry): boolean {
  if (!entry.columns || !entry.rows || entry.rows.length === 0) return false;
  return PATH_COLUMNS.every((column) => entry.columns!.includes(column));
}

/** The last shortest-path style result in the trace, if any. */
export function findPathHighlight(trace: Trace): PathHighlight | null {
  for (let i = trace.results.length - 1; i >= 0; i--) {
    const entry = trace.results[i];
    if (!isPathTable(entry)) continue;
    const idColumn = entry.columns!.indexOf("node_id");
    const nameColumn = entry.columns!.indexOf("name");
    const distanceColumn = entry.columns!.indexOf("distance_from_start");
    const rows = entry.rows!;
    return {
      nodeIds: rows.map((row) => String(row[idColumn])),
      nodeNames: rows.map((row) => String(row[nameColumn])),
      totalDistance: String(rows[rows.length - 1][distanceColumn]),
    };
  }
  return null;
}
