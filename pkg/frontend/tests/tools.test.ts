import { describe, expect, it } from "vitest";

import { ToolState } from "../src/tools.js";

describe("ToolState", () => {
  it("starts with the seed tool and region 1 of 2", () => {
    const t = new ToolState();
    expect(t.activeTool).toBe("seed");
    expect(t.activeRegion).toBe(1);
    expect(t.regionCount).toBe(2);
  });

  it("holds exactly one active tool", () => {
    const t = new ToolState();
    t.setTool("box");
    expect(t.activeTool).toBe("box");
    t.setTool("relabel");
    expect(t.activeTool).toBe("relabel");
    expect(() => t.setTool("lasso" as never)).toThrow(/unknown tool/);
  });

  it("bounds the active region by the declared count", () => {
    const t = new ToolState();
    expect(() => t.setActiveRegion(3)).toThrow(/outside/);
    t.setRegionCount(3);
    t.setActiveRegion(3);
    expect(t.activeRegion).toBe(3);
  });

  it("adding regions resets nothing", () => {
    const t = new ToolState();
    t.addSeed(4, 5);
    t.setRegionCount(5);
    expect(t.draftFor(1)?.seeds).toHaveLength(1);
  });

  it("refuses to drop regions that already have inputs", () => {
    const t = new ToolState();
    t.setRegionCount(3);
    t.setActiveRegion(3);
    t.addSeed(1, 1);
    expect(() => t.setRegionCount(2)).toThrow(/already has inputs/);
  });

  it("tracks which regions have inputs", () => {
    const t = new ToolState();
    t.setRegionCount(3);
    expect(t.regionsWithInputs()).toEqual([]);
    t.addSeed(2, 2);
    t.setActiveRegion(3);
    t.addBox(5, 5, 2, 9);
    expect(t.regionsWithInputs()).toEqual([1, 3]);
  });

  it("normalizes box corners", () => {
    const t = new ToolState();
    t.addBox(9, 7, 2, 3);
    expect(t.draftFor(1)?.boxes[0]).toEqual({ r1: 2, c1: 3, r2: 9, c2: 7 });
  });

  it("serializes seeds, boxes, and rasterized strokes", () => {
    const t = new ToolState();
    t.seedSide = 10;
    t.brushRadius = 0;
    t.addSeed(4, 4);
    t.setActiveRegion(2);
    t.addStroke([
      { row: 0, col: 0 },
      { row: 0, col: 3 },
    ]);
    const payload = t.toPayload(20, 20);
    expect(payload.reset).toBe(true);
    expect(payload.regions).toHaveLength(2);
    expect(payload.regions[0]).toEqual({
      label: 1,
      seeds: [{ row: 4, col: 4, side: 10 }],
      boxes: [],
      pixels: [],
    });
    expect(payload.regions[1].pixels).toEqual([
      [0, 0],
      [0, 1],
      [0, 2],
      [0, 3],
    ]);
  });

  it("ignores empty strokes", () => {
    const t = new ToolState();
    t.addStroke([]);
    expect(t.regionsWithInputs()).toEqual([]);
  });
});
