/**
 * Annotation tool state: the active tool, the active region, and the
 * pending inputs drawn per region before they are committed to the server.
 */

import { strokePixels, type Point } from "./raster.js";
import type { BoxInput, InputsPayload, SeedInput } from "./types.js";

export type Tool = "seed" | "box" | "scribble" | "relabel" | "pan";

export const TOOLS: Tool[] = ["seed", "box", "scribble", "relabel", "pan"];

export interface RegionDraft {
  label: number;
  seeds: SeedInput[];
  boxes: BoxInput[];
  strokes: Point[][];
}

export class ToolState {
  private tool: Tool = "seed";
  private region = 1;
  private regions = 2;
  private drafts = new Map<number, RegionDraft>();

  seedSide = 30;
  brushRadius = 3;

  get activeTool(): Tool {
    return this.tool;
  }

  setTool(tool: Tool): void {
    if (!TOOLS.includes(tool)) throw new Error(`unknown tool ${tool}`);
    this.tool = tool;
  }

  get activeRegion(): number {
    return this.region;
  }

  setActiveRegion(label: number): void {
    if (!Number.isInteger(label) || label < 1 || label > this.regions) {
      throw new Error(`region ${label} outside [1, ${this.regions}]`);
    }
    this.region = label;
  }

  get regionCount(): number {
    return this.regions;
  }

  /** Declaring more regions never clears existing inputs. */
  setRegionCount(m: number): void {
    if (!Number.isInteger(m) || m < 2) throw new Error("need at least 2 regions");
    for (const label of this.drafts.keys()) {
      if (label > m) throw new Error(`region ${label} already has inputs`);
    }
    this.regions = m;
    if (this.region > m) this.region = m;
  }

  private draft(label: number): RegionDraft {
    let d = this.drafts.get(label);
    if (!d) {
      d = { label, seeds: [], boxes: [], strokes: [] };
      this.drafts.set(label, d);
    }
    return d;
  }

  addSeed(row: number, col: number): void {
    this.draft(this.region).seeds.push({ row, col, side: this.seedSide });
  }

  addBox(r1: number, c1: number, r2: number, c2: number): void {
    this.draft(this.region).boxes.push({
      r1: Math.min(r1, r2),
      c1: Math.min(c1, c2),
      r2: Math.max(r1, r2),
      c2: Math.max(c1, c2),
    });
  }

  addStroke(points: Point[]): void {
    if (points.length) this.draft(this.region).strokes.push(points);
  }

  regionsWithInputs(): number[] {
    return [...this.drafts.keys()]
      .filter((label) => {
        const d = this.drafts.get(label)!;
        return d.seeds.length + d.boxes.length + d.strokes.length > 0;
      })
      .sort((a, b) => a - b);
  }

  clear(): void {
    this.drafts.clear();
  }

  draftFor(label: number): RegionDraft | undefined {
    return this.drafts.get(label);
  }

  /**
   * Serialize pending inputs: seeds and boxes pass through, strokes are
   * rasterized to explicit pixel lists with the current brush radius.
   */
  toPayload(width: number, height: number): InputsPayload {
    const regions = this.regionsWithInputs().map((label) => {
      const d = this.drafts.get(label)!;
      const pixels: Array<[number, number]> = [];
      for (const stroke of d.strokes) {
        for (const p of strokePixels(stroke, this.brushRadius, width, height)) {
          pixels.push([p.row, p.col]);
        }
      }
      return { label, seeds: [...d.seeds], boxes: [...d.boxes], pixels };
    });
    return { regions, reset: true };
  }
}
