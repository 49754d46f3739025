/**
 * Pure-pixel overlay compositing: image layer, per-label tint at a given
 * opacity, and superpixel boundary lines. Operating on raw RGBA buffers
 * keeps this deterministic and testable without a canvas.
 */

/** Matches the palette the service uses for label maps (index = label). */
export const LABEL_COLORS: Array<[number, number, number]> = [
  [0, 0, 0],
  [230, 25, 75],
  [60, 180, 75],
  [255, 225, 25],
  [0, 130, 200],
  [245, 130, 48],
  [145, 30, 180],
  [70, 240, 240],
  [240, 50, 230],
  [210, 245, 60],
  [250, 190, 212],
  [0, 128, 128],
  [220, 190, 255],
  [170, 110, 40],
  [255, 250, 200],
  [128, 0, 0],
  [170, 255, 195],
];

export function labelColor(label: number): [number, number, number] {
  return LABEL_COLORS[label % LABEL_COLORS.length];
}

/** True where a pixel differs from its right or bottom neighbor. */
export function boundaryMask(
  assignment: Int32Array,
  width: number,
  height: number
): Uint8Array {
  const out = new Uint8Array(width * height);
  for (let r = 0; r < height; r++) {
    for (let c = 0; c < width; c++) {
      const i = r * width + c;
      if (c + 1 < width && assignment[i] !== assignment[i + 1]) out[i] = 1;
      if (r + 1 < height && assignment[i] !== assignment[i + width]) out[i] = 1;
    }
  }
  return out;
}

export interface OverlayOptions {
  image: Uint8ClampedArray; // RGBA, width * height * 4
  width: number;
  height: number;
  assignment: Int32Array; // per-pixel superpixel id
  superpixelLabels: ArrayLike<number>; // per-superpixel region label
  opacity: number; // 0 = raw image, 1 = solid tint
  showBoundaries: boolean;
}

export function compositeOverlay(opts: OverlayOptions): Uint8ClampedArray {
  const { image, width, height, assignment, superpixelLabels, opacity } = opts;
  const n = width * height;
  if (image.length !== n * 4) throw new Error("image buffer size mismatch");
  if (assignment.length !== n) throw new Error("assignment size mismatch");
  if (opacity < 0 || opacity > 1) throw new Error("opacity outside [0, 1]");
  const out = new Uint8ClampedArray(n * 4);
  const bounds = opts.showBoundaries ? boundaryMask(assignment, width, height) : null;
  for (let i = 0; i < n; i++) {
    const o = i * 4;
    if (bounds && bounds[i]) {
      out[o] = out[o + 1] = out[o + 2] = 255;
      out[o + 3] = 255;
      continue;
    }
    const label = superpixelLabels[assignment[i]] ?? 0;
    const tint = labelColor(label);
    out[o] = (1 - opacity) * image[o] + opacity * tint[0];
    out[o + 1] = (1 - opacity) * image[o + 1] + opacity * tint[1];
    out[o + 2] = (1 - opacity) * image[o + 2] + opacity * tint[2];
    out[o + 3] = 255;
  }
  return out;
}

/** Distinct tint colors present in a composited overlay (for legends). */
export function presentLabels(superpixelLabels: ArrayLike<number>): number[] {
  const seen = new Set<number>();
  for (let i = 0; i < superpixelLabels.length; i++) seen.add(superpixelLabels[i]);
  return [...seen].sort((a, b) => a - b);
}
