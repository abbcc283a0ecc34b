/**
 * Gaussian kernel density field over the seabed peaks.
 *
 * Fixed defaults: bandwidth 5% of the seabed width, 256x128 grid over the
 * unit square; exposed as advanced settings.
 */

export interface DensityField {
  readonly cols: number;
  readonly rows: number;
  readonly values: Float64Array; // row-major, values[row * cols + col]
}

export interface Point {
  x: number;
  y: number;
}

export const DEFAULT_BANDWIDTH = 0.05;
export const DEFAULT_GRID: [number, number] = [256, 128];

export function densityField(
  peaks: readonly Point[],
  bandwidth: number = DEFAULT_BANDWIDTH,
  grid: [number, number] = DEFAULT_GRID,
): DensityField {
  if (peaks.length === 0) throw new Error("density field needs at least one peak");
  const [cols, rows] = grid;
  const values = new Float64Array(cols * rows);
  const inv = 1 / (2 * bandwidth * bandwidth);
  for (let r = 0; r < rows; r++) {
    const y = r / (rows - 1);
    for (let c = 0; c < cols; c++) {
      const x = c / (cols - 1);
      let v = 0;
      for (const p of peaks) {
        const dx = x - p.x;
        const dy = y - p.y;
        v += Math.exp(-(dx * dx + dy * dy) * inv);
      }
      values[r * cols + c] = v;
    }
  }
  return { cols, rows, values };
}

/**
 * Quantiles of the density values above 1% of the field maximum (linear
 * interpolation). The floor drops the near-zero open-sea background so the
 * quantile levels track the archipelagos: a dense cluster pushes the upper
 * levels past an isolated peak's summit and collects more nested isolines.
 */
export function fieldQuantiles(field: DensityField, qs: readonly number[]): number[] {
  const floor = 0.01 * field.values.reduce((m, v) => (v > m ? v : m), 0);
  const positive = Array.from(field.values).filter((v) => v > floor);
  positive.sort((a, b) => a - b);
  return qs.map((q) => {
    const pos = q * (positive.length - 1);
    const lo = Math.floor(pos);
    const hi = Math.min(lo + 1, positive.length - 1);
    return positive[lo] + (positive[hi] - positive[lo]) * (pos - lo);
  });
}
