/**
 * Interactive annotation app: one session per page, seeds/boxes/scribbles
 * per region, live segmentation overlay, click-to-relabel refinement.
 *
 * Label state is owned by the server; relabels are applied optimistically
 * on the canvas and reconciled with (or rolled back to) the server reply.
 */

import { ApiError, SegmentationApi } from "./api.js";
import { compositeOverlay, labelColor, presentLabels } from "./overlay.js";
import { decodeRle } from "./rle.js";
import { ToolState, TOOLS, type Tool } from "./tools.js";
import type { Point } from "./raster.js";
import type { SegmentInfo } from "./types.js";

interface SessionView {
  id: string;
  width: number;
  height: number;
  imageRgba: Uint8ClampedArray;
  assignment: Int32Array | null;
  labels: number[] | null;
  clicks: number;
  accuracy: number | null;
  hasGroundTruth: boolean;
}

export class App {
  private readonly tools = new ToolState();
  private view: SessionView | null = null;
  private running = false; // at most one in-flight segmentation
  private opacity = 0.45;
  private showBoundaries = true;
  private dragStart: Point | null = null;
  private stroke: Point[] = [];

  private canvas!: HTMLCanvasElement;
  private status!: HTMLElement;
  private meter!: HTMLElement;
  private legend!: HTMLElement;
  private runButton!: HTMLButtonElement;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: SegmentationApi
  ) {
    this.buildDom();
  }

  // ------------------------------------------------------------------ DOM

  private buildDom(): void {
    this.root.innerHTML = `
      <header>
        <h1>dglseg</h1>
        <label class="file">open image<input type="file" id="file" accept="image/png"></label>
        <label class="file">ground truth<input type="file" id="gt" accept="image/png"></label>
        <label>regions <input type="number" id="regions" min="2" value="2"></label>
        <label>active <select id="active-region"></select></label>
        <span id="tool-buttons"></span>
        <button id="run" disabled>run segmentation</button>
      </header>
      <main>
        <canvas id="canvas"></canvas>
        <aside>
          <div id="status">open a PNG to start</div>
          <div id="meter"></div>
          <label>overlay opacity
            <input type="range" id="opacity" min="0" max="100" value="45">
          </label>
          <label><input type="checkbox" id="boundaries" checked> superpixel boundaries</label>
          <div id="legend"></div>
        </aside>
      </main>`;
    this.canvas = this.root.querySelector("#canvas")!;
    this.status = this.root.querySelector("#status")!;
    this.meter = this.root.querySelector("#meter")!;
    this.legend = this.root.querySelector("#legend")!;
    this.runButton = this.root.querySelector("#run")!;

    const toolBox = this.root.querySelector("#tool-buttons")!;
    for (const tool of TOOLS) {
      const b = document.createElement("button");
      b.textContent = tool;
      b.dataset.tool = tool;
      b.onclick = () => this.selectTool(tool);
      toolBox.appendChild(b);
    }
    this.selectTool("seed");

    (this.root.querySelector("#file") as HTMLInputElement).onchange = (e) =>
      void this.openImage(e.target as HTMLInputElement);
    (this.root.querySelector("#gt") as HTMLInputElement).onchange = (e) =>
      void this.openGroundTruth(e.target as HTMLInputElement);
    (this.root.querySelector("#regions") as HTMLInputElement).onchange = (e) =>
      this.declareRegions(Number((e.target as HTMLInputElement).value));
    (this.root.querySelector("#opacity") as HTMLInputElement).oninput = (e) => {
      this.opacity = Number((e.target as HTMLInputElement).value) / 100;
      this.render();
    };
    (this.root.querySelector("#boundaries") as HTMLInputElement).onchange = (e) => {
      this.showBoundaries = (e.target as HTMLInputElement).checked;
      this.render();
    };
    this.runButton.onclick = () => void this.commitAndRun();

    this.canvas.addEventListener("pointerdown", (e) => this.pointerDown(e));
    this.canvas.addEventListener("pointermove", (e) => this.pointerMove(e));
    this.canvas.addEventListener("pointerup", (e) => void this.pointerUp(e));
  }

  private selectTool(tool: Tool): void {
    this.tools.setTool(tool);
    for (const b of this.root.querySelectorAll<HTMLButtonElement>("[data-tool]")) {
      b.classList.toggle("active", b.dataset.tool === tool);
    }
  }

  private declareRegions(m: number): void {
    try {
      this.tools.setRegionCount(m);
    } catch (err) {
      this.say(String(err));
      return;
    }
    const select = this.root.querySelector<HTMLSelectElement>("#active-region")!;
    select.innerHTML = "";
    for (let label = 1; label <= m; label++) {
      const opt = document.createElement("option");
      opt.value = String(label);
      opt.textContent = `region ${label}`;
      opt.style.color = cssColor(label);
      select.appendChild(opt);
    }
    select.onchange = () => this.tools.setActiveRegion(Number(select.value));
    this.updateRunButton();
  }

  // ------------------------------------------------------------- session

  private async openImage(input: HTMLInputElement): Promise<void> {
    const file = input.files?.[0];
    if (!file) return;
    const bytes = new Uint8Array(await file.arrayBuffer());
    try {
      const info = await this.api.createSession(bytes);
      const imageRgba = await decodePngToRgba(bytes, info.width, info.height);
      this.view = {
        id: info.session_id,
        width: info.width,
        height: info.height,
        imageRgba,
        assignment: null,
        labels: null,
        clicks: 0,
        accuracy: null,
        hasGroundTruth: false,
      };
      this.canvas.width = info.width;
      this.canvas.height = info.height;
      this.tools.clear();
      this.declareRegions(this.tools.regionCount);
      this.say(`session ready: ${info.width} x ${info.height}`);
      this.render();
    } catch (err) {
      this.say(describe(err));
    }
  }

  private async openGroundTruth(input: HTMLInputElement): Promise<void> {
    const file = input.files?.[0];
    if (!file || !this.view) return;
    try {
      const info = await this.api.setGroundTruth(
        this.view.id,
        new Uint8Array(await file.arrayBuffer())
      );
      this.view.hasGroundTruth = true;
      this.say(`ground truth attached (${info.n_regions} regions)`);
    } catch (err) {
      this.say(describe(err));
    }
  }

  // -------------------------------------------------------------- inputs

  private canvasPoint(e: PointerEvent): Point | null {
    if (!this.view) return null;
    const rect = this.canvas.getBoundingClientRect();
    const col = Math.floor(((e.clientX - rect.left) / rect.width) * this.view.width);
    const row = Math.floor(((e.clientY - rect.top) / rect.height) * this.view.height);
    if (row < 0 || row >= this.view.height || col < 0 || col >= this.view.width) {
      return null; // clicks outside the image are ignored
    }
    return { row, col };
  }

  private pointerDown(e: PointerEvent): void {
    const p = this.canvasPoint(e);
    if (!p || !this.view) return;
    switch (this.tools.activeTool) {
      case "seed":
        this.tools.addSeed(p.row, p.col);
        this.updateRunButton();
        this.render();
        break;
      case "box":
        this.dragStart = p;
        break;
      case "scribble":
        this.stroke = [p];
        this.canvas.setPointerCapture(e.pointerId);
        break;
      default:
        break;
    }
  }

  private pointerMove(e: PointerEvent): void {
    if (this.tools.activeTool !== "scribble" || this.stroke.length === 0) return;
    const p = this.canvasPoint(e);
    if (p) this.stroke.push(p);
  }

  private async pointerUp(e: PointerEvent): Promise<void> {
    const p = this.canvasPoint(e);
    switch (this.tools.activeTool) {
      case "box":
        if (this.dragStart && p) {
          this.tools.addBox(this.dragStart.row, this.dragStart.col, p.row, p.col);
          this.updateRunButton();
          this.render();
        }
        this.dragStart = null;
        break;
      case "scribble":
        this.tools.addStroke(this.stroke);
        this.stroke = [];
        this.updateRunButton();
        this.render();
        break;
      case "relabel":
        if (p) await this.relabelAt(p);
        break;
      default:
        break;
    }
  }

  private updateRunButton(): void {
    const ready =
      this.view !== null && this.tools.regionsWithInputs().length >= 2 && !this.running;
    this.runButton.disabled = !ready;
    const missing = this.tools.regionsWithInputs().length;
    if (this.view && missing < 2) {
      this.say(`annotate at least 2 regions (${missing} so far)`);
    }
  }

  // ----------------------------------------------------------- segmenting

  private async commitAndRun(): Promise<void> {
    if (!this.view || this.running) return;
    const withInputs = this.tools.regionsWithInputs();
    if (withInputs.length < 2) {
      this.say("annotate at least 2 regions before running");
      return;
    }
    this.running = true;
    this.updateRunButton();
    this.say("segmenting...");
    try {
      const payload = this.tools.toPayload(this.view.width, this.view.height);
      await this.api.submitInputs(this.view.id, payload);
      const sp = await this.api.superpixels(this.view.id);
      this.view.assignment = decodeRle(
        sp.assignment_rle,
        this.view.width * this.view.height
      );
      const seg = await this.api.segment(this.view.id, {});
      this.applySegmentInfo(seg);
      this.say(`labeled ${seg.k_actual} superpixels in ${seg.timing_ms.toFixed(0)} ms`);
    } catch (err) {
      this.say(describe(err));
    } finally {
      this.running = false;
      this.updateRunButton();
      this.render();
    }
  }

  private applySegmentInfo(seg: SegmentInfo): void {
    if (!this.view) return;
    this.view.labels = seg.labels;
    this.view.clicks = seg.clicks;
    this.view.accuracy = seg.accuracy;
    this.renderLegend(seg.labels);
    this.renderMeter();
  }

  private async relabelAt(p: Point): Promise<void> {
    const v = this.view;
    if (!v || !v.assignment || !v.labels) return;
    const superpixel = v.assignment[p.row * v.width + p.col];
    const target = this.tools.activeRegion;
    const previous = v.labels[superpixel];
    v.labels[superpixel] = target; // optimistic patch
    this.render();
    try {
      const info = await this.api.relabel(v.id, superpixel, target);
      v.labels[superpixel] = info.label; // reconcile with the server
      v.clicks = info.clicks;
      v.accuracy = info.accuracy;
      this.renderMeter();
      this.render();
    } catch (err) {
      v.labels[superpixel] = previous; // roll back
      this.render();
      this.say(describe(err));
    }
  }

  // ------------------------------------------------------------ rendering

  private render(): void {
    const v = this.view;
    if (!v) return;
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return;
    let rgba = v.imageRgba;
    if (v.assignment && v.labels) {
      rgba = compositeOverlay({
        image: v.imageRgba,
        width: v.width,
        height: v.height,
        assignment: v.assignment,
        superpixelLabels: v.labels,
        opacity: this.opacity,
        showBoundaries: this.showBoundaries,
      });
    }
    ctx.putImageData(new ImageData(rgba.slice(), v.width, v.height), 0, 0);
    this.drawPendingInputs(ctx);
  }

  private drawPendingInputs(ctx: CanvasRenderingContext2D): void {
    for (let label = 1; label <= this.tools.regionCount; label++) {
      const draft = this.tools.draftFor(label);
      if (!draft) continue;
      ctx.strokeStyle = cssColor(label);
      ctx.fillStyle = cssColor(label);
      for (const s of draft.seeds) {
        ctx.strokeRect(s.col - s.side / 2, s.row - s.side / 2, s.side, s.side);
        ctx.fillRect(s.col - 1, s.row - 1, 3, 3);
      }
      for (const b of draft.boxes) {
        ctx.strokeRect(b.c1, b.r1, b.c2 - b.c1 + 1, b.r2 - b.r1 + 1);
      }
      for (const stroke of draft.strokes) {
        ctx.beginPath();
        stroke.forEach((pt, i) =>
          i === 0 ? ctx.moveTo(pt.col, pt.row) : ctx.lineTo(pt.col, pt.row)
        );
        ctx.stroke();
      }
    }
  }

  private renderLegend(labels: number[]): void {
    const entries = presentLabels(labels)
      .map((l) => `<span class="chip" style="background:${cssColor(l)}"></span> region ${l}`)
      .join("<br>");
    this.legend.innerHTML = entries;
  }

  private renderMeter(): void {
    const v = this.view;
    if (!v) return;
    const acc = v.accuracy === null ? "n/a (no ground truth)" : v.accuracy.toFixed(4);
    this.meter.innerHTML = `clicks: <b>${v.clicks}</b><br>accuracy: <b>${acc}</b>`;
  }

  private say(message: string): void {
    this.status.textContent = message;
  }
}

function describe(err: unknown): string {
  if (err instanceof ApiError) return err.message;
  return err instanceof Error ? err.message : String(err);
}

function cssColor(label: number): string {
  const [r, g, b] = labelColor(label);
  return `rgb(${r}, ${g}, ${b})`;
}

/** Decode PNG bytes to RGBA via an offscreen canvas (browser path). */
async function decodePngToRgba(
  bytes: Uint8Array<ArrayBuffer>,
  width: number,
  height: number
): Promise<Uint8ClampedArray> {
  const blob = new Blob([bytes], { type: "image/png" });
  const bitmap = await createImageBitmap(blob);
  const canvas = document.createElement("canvas");
  canvas.width = width;
  canvas.height = height;
  const ctx = canvas.getContext("2d")!;
  ctx.drawImage(bitmap, 0, 0);
  return ctx.getImageData(0, 0, width, height).data;
}
