/**
 * SVG rendering of the two linked views.
 *
 * Seabed on top (fixed map of branch peaks with density isolines), kinship
 * below (groups per period with lineage links, pan/zoomable camera). Plain
 * SVG elements, no rendering framework; every glyph carries the id of the
 * export entity it stands for.
 */

import { Contour, computeIsolines } from "./marchingSquares.js";
import { GroupEntry, PhyloExport } from "./schema.js";
import { Camera, ViewState, activeExport } from "./state.js";

export const VIEW_W = 1000;
export const SEABED_H = 250;
export const ROW_H = 60;
export const NAME_ZOOM_THRESHOLD = 4; // zooming past this reveals full branch names

const SVG_NS = "http://www.w3.org/2000/svg";

function el<K extends keyof SVGElementTagNameMap>(
  name: K,
  attrs: Record<string, string | number>,
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, name);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, String(v));
  return node;
}

function clear(node: Element): void {
  while (node.firstChild) node.removeChild(node.firstChild);
}

export function peakPixel(exp: PhyloExport, branchId: string): { x: number; y: number } {
  const b = exp.branches.find((br) => br.id === branchId);
  if (!b) throw new Error(`unknown branch ${branchId}`);
  return { x: b.peak.x * VIEW_W, y: SEABED_H - b.peak.y * SEABED_H };
}

export function groupPixel(g: GroupEntry): { x: number; y: number } {
  return { x: g.x * VIEW_W, y: (g.y + 0.5) * ROW_H };
}

function contourPath(c: Contour): string {
  const parts = c.points.map(
    (p, i) => `${i === 0 ? "M" : "L"}${(p.x * VIEW_W).toFixed(2)},${(SEABED_H - p.y * SEABED_H).toFixed(2)}`,
  );
  return parts.join("") + (c.closed ? "Z" : "");
}

/** Seabed view: one peak per branch, isolines, labels. Fixed under kinship pan/zoom. */
export function renderSeabed(svg: SVGSVGElement, exp: PhyloExport): void {
  clear(svg);
  svg.setAttribute("viewBox", `0 0 ${VIEW_W} ${SEABED_H}`);
  const isolineLayer = el("g", { class: "isolines" });
  if (exp.branches.length > 1) {
    const peaks = exp.branches.map((b) => ({ x: b.peak.x, y: b.peak.y }));
    for (const c of computeIsolines(peaks)) {
      isolineLayer.appendChild(
        el("path", { class: "isoline", d: contourPath(c), "data-level": c.level.toFixed(6) }),
      );
    }
  }
  svg.appendChild(isolineLayer);
  const peakLayer = el("g", { class: "peaks" });
  for (const b of exp.branches) {
    const { x, y } = peakPixel(exp, b.id);
    const peak = el("path", {
      class: "peak",
      "data-branch": b.id,
      "data-x": x,
      "data-y": y,
      d: `M${x - 6},${y + 9}L${x},${y - 9}L${x + 6},${y + 9}Z`,
    });
    peakLayer.appendChild(peak);
    const label = el("text", { class: "peak-label", x: x + 8, y: y - 4, "data-branch": b.id });
    label.textContent = b.label.join(" ");
    peakLayer.appendChild(label);
  }
  svg.appendChild(peakLayer);
}

function cameraTransform(camera: Camera, yExtent: number): string {
  const scale = camera.zoom;
  const tx = VIEW_W / 2 - camera.cx * VIEW_W * scale;
  const ty = (yExtent * ROW_H) / 2 - camera.cy * yExtent * ROW_H * scale;
  return `translate(${tx.toFixed(3)},${ty.toFixed(3)}) scale(${scale})`;
}

/** Kinship view: period rows of group glyphs with lineage links underneath. */
export function renderKinship(svg: SVGSVGElement, state: ViewState): void {
  const exp = activeExport(state);
  clear(svg);
  const rows = exp.metadata.period_count;
  svg.setAttribute("viewBox", `0 0 ${VIEW_W} ${rows * ROW_H}`);
  const camera = el("g", {
    class: "camera",
    transform: cameraTransform(state.camera, rows),
  });
  svg.appendChild(camera);

  const positions = new Map(exp.groups.map((g) => [g.id, groupPixel(g)]));
  const linkLayer = el("g", { class: "links" });
  for (const l of exp.links) {
    const a = positions.get(l.parent)!;
    const b = positions.get(l.child)!;
    linkLayer.appendChild(
      el("line", {
        class: "link",
        "data-parent": l.parent,
        "data-child": l.child,
        x1: a.x, y1: a.y, x2: b.x, y2: b.y,
      }),
    );
  }
  for (const l of exp.ghost_links) {
    const a = positions.get(l.parent)!;
    const b = positions.get(l.child)!;
    linkLayer.appendChild(
      el("line", {
        class: "ghost-link",
        "data-parent": l.parent,
        "data-child": l.child,
        "data-cut-level": l.cut_level,
        "stroke-dasharray": "4 3",
        x1: a.x, y1: a.y, x2: b.x, y2: b.y,
      }),
    );
  }
  camera.appendChild(linkLayer);

  const groupLayer = el("g", { class: "groups" });
  for (const g of exp.groups) {
    const { x, y } = positions.get(g.id)!;
    groupLayer.appendChild(
      el("circle", {
        class: "group",
        "data-id": g.id,
        "data-branch": g.branch,
        cx: x, cy: y, r: 5,
      }),
    );
  }
  camera.appendChild(groupLayer);

  if (state.lens === "mezzo") camera.appendChild(renderEmergenceLayer(exp));
  if (state.camera.zoom > NAME_ZOOM_THRESHOLD) svg.classList.add("full-names");
}

/** Mezzo overlay: emerging terms at their precomputed barycenters. */
export function renderEmergenceLayer(exp: PhyloExport): SVGGElement {
  const periodIndex = new Map(exp.periods.map((p, i) => [p.id, i]));
  const layer = el("g", { class: "emergence-layer" });
  for (const t of exp.terms) {
    const row = periodIndex.get(t.emergence.period);
    if (row === undefined) continue;
    layer.appendChild(
      el("circle", {
        class: "emergence",
        "data-term": t.id,
        cx: t.emergence.x * VIEW_W,
        cy: (row + 0.5) * ROW_H,
        r: 2 + Math.sqrt(t.group_count),
        fill: t.cross_branch ? "black" : "red",
      }),
    );
  }
  return layer;
}

/** Macro hover: exactly the branch's groups and peak carry the highlight. */
export function applyBranchHighlight(
  kinship: SVGSVGElement,
  seabed: SVGSVGElement,
  branchId: string | null,
): void {
  for (const node of kinship.querySelectorAll(".group")) {
    node.classList.toggle("highlight", node.getAttribute("data-branch") === branchId);
  }
  for (const node of seabed.querySelectorAll(".peak")) {
    node.classList.toggle("highlight", node.getAttribute("data-branch") === branchId);
  }
}

/**
 * Micro term click: paint every kinship link whose both endpoints contain
 * the term, and add light-red lines between branches sharing it.
 */
export function applyTermHighlight(kinship: SVGSVGElement, exp: PhyloExport, term: string): void {
  const carriers = new Set(
    exp.groups.filter((g) => g.terms.some((t) => t.id === term)).map((g) => g.id),
  );
  for (const node of kinship.querySelectorAll(".link, .ghost-link")) {
    const on =
      carriers.has(node.getAttribute("data-parent") ?? "") &&
      carriers.has(node.getAttribute("data-child") ?? "");
    node.classList.toggle("hl-lineage", on);
  }

  const camera = kinship.querySelector(".camera");
  if (!camera) return;
  const old = camera.querySelector(".inter-branch-layer");
  if (old) old.remove();
  const layer = el("g", { class: "inter-branch-layer" });
  const byBranch = new Map<string, GroupEntry>();
  for (const g of exp.groups) {
    if (!carriers.has(g.id)) continue;
    const seen = byBranch.get(g.branch);
    if (!seen || g.period < seen.period) byBranch.set(g.branch, g);
  }
  const anchors = [...byBranch.values()].sort((a, b) => (a.branch < b.branch ? -1 : 1));
  for (let i = 1; i < anchors.length; i++) {
    const a = groupPixel(anchors[i - 1]);
    const b = groupPixel(anchors[i]);
    layer.appendChild(
      el("line", {
        class: "inter-branch",
        "data-term": term,
        stroke: "#ff9999",
        x1: a.x, y1: a.y, x2: b.x, y2: b.y,
      }),
    );
  }
  camera.appendChild(layer);
}
