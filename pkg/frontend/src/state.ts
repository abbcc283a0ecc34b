/**
 * View state: loaded export(s), active lens, kinship camera and selection.
 *
 * Rendering is a pure function of (export, state); interactions only
 * produce new states, so replaying an event log reproduces the same DOM.
 */

import { PhyloExport } from "./schema.js";

export type Lens = "macro" | "mezzo" | "micro";

export interface Camera {
  cx: number; // center, normalized kinship coordinates
  cy: number;
  zoom: number;
}

export type Selection =
  | { kind: "branch"; id: string }
  | { kind: "term"; id: string }
  | null;

export interface ViewState {
  exports: PhyloExport[]; // one per level, sorted by level
  levelIndex: number;
  lens: Lens;
  camera: Camera;
  selection: Selection;
}

export function createState(exports: PhyloExport[]): ViewState {
  if (exports.length === 0) throw new Error("at least one export is required");
  const sorted = [...exports].sort((a, b) => a.metadata.level - b.metadata.level);
  return {
    exports: sorted,
    levelIndex: 0,
    lens: "macro",
    camera: { cx: 0.5, cy: 0.5, zoom: 1 },
    selection: null,
  };
}

export function activeExport(state: ViewState): PhyloExport {
  return state.exports[state.levelIndex];
}

export function contentExtent(exp: PhyloExport): { ymax: number } {
  let ymax = 1;
  for (const g of exp.groups) ymax = Math.max(ymax, g.y);
  return { ymax };
}

/** Camera bounds clamp to the content extent; zoom stays in [1, 40]. */
export function clampCamera(camera: Camera, exp: PhyloExport): Camera {
  const { ymax } = contentExtent(exp);
  const zoom = Math.min(Math.max(camera.zoom, 1), 40);
  const half = 0.5 / zoom;
  const cx = Math.min(Math.max(camera.cx, half), 1 - half);
  const cy = Math.min(Math.max(camera.cy, half * ymax), ymax * (1 - half));
  return { cx, cy, zoom };
}

/** Horizontal center of a branch's band of group glyphs. */
export function branchBandCenter(exp: PhyloExport, branchId: string): number {
  const xs = exp.groups.filter((g) => g.branch === branchId).map((g) => g.x);
  if (xs.length === 0) throw new Error(`unknown branch ${branchId}`);
  return (Math.min(...xs) + Math.max(...xs)) / 2;
}

/** Peak click: recenter the kinship camera on the branch's band. */
export function recenterOnBranch(state: ViewState, branchId: string): ViewState {
  const exp = activeExport(state);
  const members = exp.groups.filter((g) => g.branch === branchId);
  const cy = members.reduce((s, g) => s + g.y, 0) / members.length;
  const camera = clampCamera(
    { cx: branchBandCenter(exp, branchId), cy, zoom: state.camera.zoom },
    exp,
  );
  return { ...state, camera, selection: { kind: "branch", id: branchId } };
}

export function selectTerm(state: ViewState, term: string): ViewState {
  const exp = activeExport(state);
  if (!(term in exp.search_index)) return state; // unknown term: no-op
  return { ...state, selection: { kind: "term", id: term } };
}

export function setLens(state: ViewState, lens: Lens): ViewState {
  return { ...state, lens };
}

export function setLevel(state: ViewState, levelIndex: number): ViewState {
  if (levelIndex < 0 || levelIndex >= state.exports.length) return state;
  return { ...state, levelIndex, selection: null };
}
