/**
 * Marching squares contouring of a density field.
 *
 * Produces closed polylines in normalized [0,1] seabed coordinates at the
 * fixed density quantiles; denser clusters of peaks collect more nested
 * contours than isolated ones.
 */

import { DensityField, Point, densityField, fieldQuantiles } from "./density.js";

export interface Contour {
  level: number;
  points: Point[];
  closed: boolean;
}

export const ISOLINE_QUANTILES = [0.5, 0.7, 0.85, 0.95] as const;

type Segment = [Point, Point];

function interpolate(pa: Point, va: number, pb: Point, vb: number, t: number): Point {
  const f = vb === va ? 0.5 : (t - va) / (vb - va);
  return { x: pa.x + (pb.x - pa.x) * f, y: pa.y + (pb.y - pa.y) * f };
}

function cellSegments(field: DensityField, r: number, c: number, t: number): Segment[] {
  const { cols, rows, values } = field;
  const x0 = c / (cols - 1);
  const x1 = (c + 1) / (cols - 1);
  const y0 = r / (rows - 1);
  const y1 = (r + 1) / (rows - 1);
  const tl = { p: { x: x0, y: y0 }, v: values[r * cols + c] };
  const tr = { p: { x: x1, y: y0 }, v: values[r * cols + c + 1] };
  const bl = { p: { x: x0, y: y1 }, v: values[(r + 1) * cols + c] };
  const br = { p: { x: x1, y: y1 }, v: values[(r + 1) * cols + c + 1] };

  let index = 0;
  if (tl.v > t) index |= 1;
  if (tr.v > t) index |= 2;
  if (br.v > t) index |= 4;
  if (bl.v > t) index |= 8;
  if (index === 0 || index === 15) return [];

  const top = () => interpolate(tl.p, tl.v, tr.p, tr.v, t);
  const right = () => interpolate(tr.p, tr.v, br.p, br.v, t);
  const bottom = () => interpolate(bl.p, bl.v, br.p, br.v, t);
  const left = () => interpolate(tl.p, tl.v, bl.p, bl.v, t);

  switch (index) {
    case 1:
    case 14:
      return [[left(), top()]];
    case 2:
    case 13:
      return [[top(), right()]];
    case 3:
    case 12:
      return [[left(), right()]];
    case 4:
    case 11:
      return [[right(), bottom()]];
    case 6:
    case 9:
      return [[top(), bottom()]];
    case 7:
    case 8:
      return [[left(), bottom()]];
    case 5: {
      // saddle: resolve by the cell-center value
      const center = (tl.v + tr.v + bl.v + br.v) / 4;
      return center > t
        ? [[left(), top()], [right(), bottom()]]
        : [[left(), bottom()], [top(), right()]];
    }
    case 10: {
      const center = (tl.v + tr.v + bl.v + br.v) / 4;
      return center > t
        ? [[top(), right()], [bottom(), left()]]
        : [[left(), top()], [right(), bottom()]];
    }
    default:
      return [];
  }
}

const key = (p: Point) => `${Math.round(p.x * 1e7)}:${Math.round(p.y * 1e7)}`;

/** Chain loose segments into polylines by matching endpoints (undirected). */
function chainSegments(segments: Segment[], level: number): Contour[] {
  const byEndpoint = new Map<string, Segment[]>();
  const add = (k: string, s: Segment) => {
    const bucket = byEndpoint.get(k);
    if (bucket) bucket.push(s);
    else byEndpoint.set(k, [s]);
  };
  for (const s of segments) {
    add(key(s[0]), s);
    add(key(s[1]), s);
  }
  const used = new Set<Segment>();
  const contours: Contour[] = [];

  const extend = (points: Point[]): void => {
    for (;;) {
      const tail = points[points.length - 1];
      const next = (byEndpoint.get(key(tail)) ?? []).find((s) => !used.has(s));
      if (!next) return;
      used.add(next);
      points.push(key(next[0]) === key(tail) ? next[1] : next[0]);
    }
  };

  for (const seed of segments) {
    if (used.has(seed)) continue;
    used.add(seed);
    const points: Point[] = [seed[0], seed[1]];
    extend(points);
    // the seed may sit mid-polyline on open contours: grow the other way too
    points.reverse();
    extend(points);
    const closed = key(points[0]) === key(points[points.length - 1]);
    contours.push({ level, points, closed });
  }
  return contours;
}

export function contoursAt(field: DensityField, level: number): Contour[] {
  const segments: Segment[] = [];
  for (let r = 0; r < field.rows - 1; r++) {
    for (let c = 0; c < field.cols - 1; c++) {
      segments.push(...cellSegments(field, r, c, level));
    }
  }
  return chainSegments(segments, level);
}

/** The full isoline set over a peak list at the fixed quantiles. */
export function computeIsolines(
  peaks: readonly Point[],
  bandwidth?: number,
  grid?: [number, number],
): Contour[] {
  const field = densityField(peaks, bandwidth, grid);
  const levels = fieldQuantiles(field, ISOLINE_QUANTILES);
  const out: Contour[] = [];
  for (const level of new Set(levels)) {
    out.push(...contoursAt(field, level));
  }
  return out;
}

/** Ray-casting test for closed contours. */
export function contourContains(contour: Contour, p: Point): boolean {
  if (!contour.closed) return false;
  const pts = contour.points;
  let inside = false;
  for (let i = 0, j = pts.length - 1; i < pts.length; j = i++) {
    const a = pts[i];
    const b = pts[j];
    if (a.y > p.y !== b.y > p.y && p.x < ((b.x - a.x) * (p.y - a.y)) / (b.y - a.y) + a.x) {
      inside = !inside;
    }
  }
  return inside;
}

/** How many contours enclose the point; the nesting depth of a peak. */
export function nestingDepth(contours: readonly Contour[], p: Point): number {
  return contours.filter((c) => contourContains(c, p)).length;
}
