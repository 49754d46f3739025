/**
 * Typed client for the segmentation service under /v1. Every response is
 * validated against the wire schemas before it reaches the UI.
 */

import {
  GroundTruthInfoSchema,
  HealthSchema,
  InputsInfoSchema,
  RelabelInfoSchema,
  SegmentInfoSchema,
  SessionInfoSchema,
  SuperpixelsInfoSchema,
  type GroundTruthInfo,
  type InputsInfo,
  type InputsPayload,
  type RelabelInfo,
  type SegmentInfo,
  type SegmentParams,
  type SessionInfo,
  type SuperpixelsInfo,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string
  ) {
    super(`service error ${status}: ${detail}`);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class SegmentationApi {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (...args) => fetch(...args)
  ) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const resp = await this.fetchFn(`${this.baseUrl}/v1${path}`, init);
    if (!resp.ok) {
      let detail = resp.statusText;
      try {
        const body = await resp.json();
        if (typeof body?.detail === "string") detail = body.detail;
        else if (body?.detail) detail = JSON.stringify(body.detail);
      } catch {
        /* non-JSON error body; keep the status text */
      }
      throw new ApiError(resp.status, detail);
    }
    return resp;
  }

  private async json<T>(path: string, schema: { parse: (v: unknown) => T }, init?: RequestInit): Promise<T> {
    const resp = await this.request(path, init);
    return schema.parse(await resp.json());
  }

  health(): Promise<{ status: "ok" }> {
    return this.json("/health", HealthSchema);
  }

  createSession(png: Uint8Array<ArrayBuffer> | ArrayBuffer): Promise<SessionInfo> {
    return this.json("/session", SessionInfoSchema, {
      method: "POST",
      headers: { "Content-Type": "image/png" },
      body: png,
    });
  }

  superpixels(sessionId: string, k = 500, compactness = 10.0): Promise<SuperpixelsInfo> {
    const q = new URLSearchParams({ k: String(k), compactness: String(compactness) });
    return this.json(`/session/${sessionId}/superpixels?${q}`, SuperpixelsInfoSchema);
  }

  submitInputs(sessionId: string, payload: InputsPayload): Promise<InputsInfo> {
    return this.json(`/session/${sessionId}/inputs`, InputsInfoSchema, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  segment(sessionId: string, params: SegmentParams = {}): Promise<SegmentInfo> {
    return this.json(`/session/${sessionId}/segment`, SegmentInfoSchema, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(params),
    });
  }

  relabel(sessionId: string, superpixel: number, label: number): Promise<RelabelInfo> {
    return this.json(`/session/${sessionId}/relabel`, RelabelInfoSchema, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ superpixel, label }),
    });
  }

  setGroundTruth(sessionId: string, png: Uint8Array<ArrayBuffer> | ArrayBuffer): Promise<GroundTruthInfo> {
    return this.json(`/session/${sessionId}/groundtruth`, GroundTruthInfoSchema, {
      method: "POST",
      headers: { "Content-Type": "image/png" },
      body: png,
    });
  }

  async overlayPng(sessionId: string, opacity = 0.5): Promise<Uint8Array> {
    const resp = await this.request(
      `/session/${sessionId}/overlay?opacity=${opacity}`
    );
    return new Uint8Array(await resp.arrayBuffer());
  }
}
