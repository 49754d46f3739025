import { describe, expect, it } from "vitest";

import {
  boundaryMask,
  compositeOverlay,
  labelColor,
  presentLabels,
} from "../src/overlay.js";

function flatImage(width: number, height: number, rgb: [number, number, number]) {
  const out = new Uint8ClampedArray(width * height * 4);
  for (let i = 0; i < width * height; i++) {
    out.set([...rgb, 255], i * 4);
  }
  return out;
}

// 4x2 image split into two superpixels (left/right halves)
const WIDTH = 4;
const HEIGHT = 2;
const ASSIGNMENT = Int32Array.from([0, 0, 1, 1, 0, 0, 1, 1]);

describe("compositeOverlay", () => {
  it("opacity zero shows the raw image away from boundaries", () => {
    const image = flatImage(WIDTH, HEIGHT, [10, 20, 30]);
    const out = compositeOverlay({
      image,
      width: WIDTH,
      height: HEIGHT,
      assignment: ASSIGNMENT,
      superpixelLabels: [1, 2],
      opacity: 0,
      showBoundaries: false,
    });
    expect([...out]).toEqual([...image]);
  });

  it("renders one tint per label", () => {
    const out = compositeOverlay({
      image: flatImage(WIDTH, HEIGHT, [0, 0, 0]),
      width: WIDTH,
      height: HEIGHT,
      assignment: ASSIGNMENT,
      superpixelLabels: [1, 2],
      opacity: 1,
      showBoundaries: false,
    });
    const colors = new Set<string>();
    for (let i = 0; i < WIDTH * HEIGHT; i++) {
      colors.add([out[i * 4], out[i * 4 + 1], out[i * 4 + 2]].join(","));
    }
    expect(colors.size).toBe(2);
    expect(colors.has(labelColor(1).join(","))).toBe(true);
    expect(colors.has(labelColor(2).join(","))).toBe(true);
  });

  it("boundary toggle controls the white seams", () => {
    const base = {
      image: flatImage(WIDTH, HEIGHT, [0, 0, 0]),
      width: WIDTH,
      height: HEIGHT,
      assignment: ASSIGNMENT,
      superpixelLabels: [1, 1],
      opacity: 0,
    };
    const off = compositeOverlay({ ...base, showBoundaries: false });
    expect([...off].filter((v, i) => i % 4 === 0 && v === 255)).toHaveLength(0);
    const on = compositeOverlay({ ...base, showBoundaries: true });
    // column 1 touches column 2 across the superpixel edge in both rows
    expect(on[(0 * WIDTH + 1) * 4]).toBe(255);
    expect(on[(1 * WIDTH + 1) * 4]).toBe(255);
  });

  it("is deterministic", () => {
    const opts = {
      image: flatImage(WIDTH, HEIGHT, [90, 10, 50]),
      width: WIDTH,
      height: HEIGHT,
      assignment: ASSIGNMENT,
      superpixelLabels: [2, 1],
      opacity: 0.4,
      showBoundaries: true,
    };
    expect([...compositeOverlay(opts)]).toEqual([...compositeOverlay(opts)]);
  });

  it("validates its buffers", () => {
    expect(() =>
      compositeOverlay({
        image: new Uint8ClampedArray(4),
        width: WIDTH,
        height: HEIGHT,
        assignment: ASSIGNMENT,
        superpixelLabels: [1, 2],
        opacity: 0.5,
        showBoundaries: false,
      })
    ).toThrow(/mismatch/);
  });
});

describe("boundaryMask", () => {
  it("marks the superpixel seam", () => {
    const mask = boundaryMask(ASSIGNMENT, WIDTH, HEIGHT);
    expect([...mask]).toEqual([0, 1, 0, 0, 0, 1, 0, 0]);
  });

  it("uniform assignment has no boundaries", () => {
    expect([...boundaryMask(Int32Array.from([3, 3, 3, 3]), 2, 2)]).toEqual([0, 0, 0, 0]);
  });
});

describe("presentLabels", () => {
  it("lists distinct labels sorted", () => {
    expect(presentLabels([2, 1, 2, 4])).toEqual([1, 2, 4]);
  });
});
