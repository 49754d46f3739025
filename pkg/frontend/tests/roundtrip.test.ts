/**
 * Scripted session against the real service: upload a synthetic image,
 * place one seed per region, run, render the two-label overlay, then fix
 * one superpixel and watch the click counter and accuracy move.
 *
 * Spawns `python -m dglseg.cli serve` (the package must be installed) and
 * generates the test data with the `synth` verb.
 */

import { execFileSync, spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { PNG } from "pngjs";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { SegmentationApi } from "../src/api.js";
import { compositeOverlay, LABEL_COLORS, presentLabels } from "../src/overlay.js";
import { decodeRle } from "../src/rle.js";

const PYTHON = process.env.DGLSEG_PYTHON ?? "python3";
const PORT = 8900 + (process.pid % 500);

let server: ChildProcess;
let dataDir: string;
let api: SegmentationApi;

function readPng(path: string): { width: number; height: number; rgba: Uint8ClampedArray } {
  const png = PNG.sync.read(readFileSync(path));
  return {
    width: png.width,
    height: png.height,
    rgba: new Uint8ClampedArray(png.data),
  };
}

/** Label maps are indexed PNGs; recover labels by matching palette colors. */
function labelsFromPng(path: string): { width: number; height: number; labels: Int32Array } {
  const { width, height, rgba } = readPng(path);
  const byColor = new Map<string, number>(
    LABEL_COLORS.map((c, label) => [c.join(","), label])
  );
  const labels = new Int32Array(width * height);
  for (let i = 0; i < width * height; i++) {
    const key = [rgba[i * 4], rgba[i * 4 + 1], rgba[i * 4 + 2]].join(",");
    const label = byColor.get(key);
    if (label === undefined) throw new Error(`unexpected palette color ${key}`);
    labels[i] = label;
  }
  return { width, height, labels };
}

function centerOf(labels: Int32Array, width: number, target: number): { row: number; col: number } {
  const rows: number[] = [];
  const cols: number[] = [];
  for (let i = 0; i < labels.length; i++) {
    if (labels[i] === target) {
      rows.push(Math.floor(i / width));
      cols.push(i % width);
    }
  }
  rows.sort((a, b) => a - b);
  cols.sort((a, b) => a - b);
  return { row: rows[Math.floor(rows.length / 2)], col: cols[Math.floor(cols.length / 2)] };
}

beforeAll(async () => {
  dataDir = mkdtempSync(join(tmpdir(), "dglseg-ui-"));
  execFileSync(PYTHON, [
    "-m", "dglseg.cli", "synth", "--out", dataDir, "--count", "1",
    "--style", "iid", "--regions", "2", "--width", "96", "--height", "72",
    "--tv", "0.85", "--seed", "3",
  ]);
  server = spawn(PYTHON, ["-m", "dglseg.cli", "serve", "--port", String(PORT)], {
    stdio: "ignore",
  });
  api = new SegmentationApi(`http://127.0.0.1:${PORT}`);
  for (let attempt = 0; ; attempt++) {
    try {
      await api.health();
      break;
    } catch {
      if (attempt > 80) throw new Error("service did not come up");
      await new Promise((resolve) => setTimeout(resolve, 250));
    }
  }
}, 60_000);

afterAll(() => {
  server?.kill();
  rmSync(dataDir, { recursive: true, force: true });
});

describe("live round trip", () => {
  it("upload, seed two regions, run, render overlay, refine", async () => {
    const imagePath = join(dataDir, "iid_000.png");
    const gtPath = join(dataDir, "iid_000_gt.png");
    const imageBytes = new Uint8Array(readFileSync(imagePath));
    const gtBytes = new Uint8Array(readFileSync(gtPath));

    const session = await api.createSession(imageBytes);
    expect(session.width).toBe(96);
    expect(session.height).toBe(72);

    expect((await api.setGroundTruth(session.session_id, gtBytes)).n_regions).toBe(2);

    // one seed per region, placed at the region's median pixel
    const gt = labelsFromPng(gtPath);
    const regions = [1, 2].map((label) => {
      const { row, col } = centerOf(gt.labels, gt.width, label);
      return { label, seeds: [{ row, col, side: 14 }], boxes: [], pixels: [] };
    });
    const inputs = await api.submitInputs(session.session_id, { regions, reset: true });
    expect(inputs.regions.map((r) => r.label)).toEqual([1, 2]);

    const params = {
      color_space: "RGB",
      channel_selection: [0, 1, 2],
      bins_per_channel: [8, 8, 8],
      n_superpixels: 60,
      compactness: 100.0,
    };
    const seg = await api.segment(session.session_id, params);
    expect(seg.clicks).toBe(0);
    expect(presentLabels(seg.labels)).toEqual([1, 2]); // a two-label result
    expect(seg.accuracy).not.toBeNull();
    const accuracyBefore = seg.accuracy!;

    // client-side overlay: image + partition + labels -> two distinct tints
    const sp = await api.superpixels(session.session_id, params.n_superpixels, params.compactness);
    const assignment = decodeRle(sp.assignment_rle, sp.width * sp.height);
    const image = readPng(imagePath);
    const overlay = compositeOverlay({
      image: image.rgba,
      width: image.width,
      height: image.height,
      assignment,
      superpixelLabels: seg.labels,
      opacity: 0.6,
      showBoundaries: false,
    });
    const tints = new Set<string>();
    for (let i = 0; i < image.width * image.height; i++) {
      tints.add([overlay[i * 4], overlay[i * 4 + 1], overlay[i * 4 + 2]].join(","));
    }
    expect(tints.size).toBeGreaterThanOrEqual(2);

    // pick a correction: the server's hint, or locate one from the ground truth
    let target = seg.refinement_hint;
    if (!target) {
      outer: for (let k = 0; k < seg.labels.length; k++) {
        const counts = new Map<number, number>();
        for (let i = 0; i < assignment.length; i++) {
          if (assignment[i] === k && gt.labels[i] > 0) {
            counts.set(gt.labels[i], (counts.get(gt.labels[i]) ?? 0) + 1);
          }
        }
        for (const [label, count] of counts) {
          if (label !== seg.labels[k] && count > (counts.get(seg.labels[k]) ?? 0)) {
            target = { superpixel: k, label };
            break outer;
          }
        }
      }
    }
    expect(target, "no correctable superpixel found").not.toBeNull();

    const relabel = await api.relabel(session.session_id, target!.superpixel, target!.label);
    expect(relabel.clicks).toBe(2); // click counter advanced by the click cost
    expect(relabel.accuracy).not.toBeNull();
    expect(relabel.accuracy!).toBeGreaterThan(accuracyBefore);

    // the server-side overlay is a decodable PNG too
    const png = await api.overlayPng(session.session_id, 0.5);
    expect([...png.slice(0, 4)]).toEqual([0x89, 0x50, 0x4e, 0x47]);
  }, 60_000);
});
