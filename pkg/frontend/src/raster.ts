/**
 * Scribble rasterization: freehand strokes become explicit pixel lists so
 * the server sees one input vocabulary (pixels, boxes, seeds).
 */

export interface Point {
  row: number;
  col: number;
}

/** Integer line between two points (Bresenham), endpoints included. */
export function linePixels(a: Point, b: Point): Point[] {
  const out: Point[] = [];
  let r0 = Math.round(a.row);
  let c0 = Math.round(a.col);
  const r1 = Math.round(b.row);
  const c1 = Math.round(b.col);
  const dr = Math.abs(r1 - r0);
  const dc = Math.abs(c1 - c0);
  const sr = r0 < r1 ? 1 : -1;
  const sc = c0 < c1 ? 1 : -1;
  let err = (dc > dr ? dc : -dr) / 2;
  for (;;) {
    out.push({ row: r0, col: c0 });
    if (r0 === r1 && c0 === c1) break;
    const e = err;
    if (e > -dc) {
      err -= dr;
      c0 += sc;
    }
    if (e < dr) {
      err += dc;
      r0 += sr;
    }
  }
  return out;
}

/**
 * Pixels covered by stamping a disc of the given radius along a stroke,
 * clipped to the image and deduplicated. Radius 0 is the bare line.
 */
export function strokePixels(
  stroke: Point[],
  radius: number,
  width: number,
  height: number
): Point[] {
  if (stroke.length === 0) return [];
  const offsets: Point[] = [];
  const r = Math.max(0, Math.floor(radius));
  for (let dr = -r; dr <= r; dr++) {
    for (let dc = -r; dc <= r; dc++) {
      if (dr * dr + dc * dc <= r * r) offsets.push({ row: dr, col: dc });
    }
  }
  const seen = new Set<number>();
  const out: Point[] = [];
  const stamp = (p: Point) => {
    for (const o of offsets) {
      const row = p.row + o.row;
      const col = p.col + o.col;
      if (row < 0 || row >= height || col < 0 || col >= width) continue;
      const key = row * width + col;
      if (!seen.has(key)) {
        seen.add(key);
        out.push({ row, col });
      }
    }
  };
  let prev = stroke[0];
  stamp({ row: Math.round(prev.row), col: Math.round(prev.col) });
  for (let i = 1; i < stroke.length; i++) {
    for (const p of linePixels(prev, stroke[i])) stamp(p);
    prev = stroke[i];
  }
  return out;
}
