/**
 * Wire types for the segmentation service (/v1) plus their zod schemas.
 * Every server payload is validated against these before the UI touches it.
 */

import { z } from "zod";

export const SessionInfoSchema = z.object({
  session_id: z.string().min(1),
  width: z.number().int().positive(),
  height: z.number().int().positive(),
  channels: z.number().int().positive(),
});
export type SessionInfo = z.infer<typeof SessionInfoSchema>;

const RlePair = z.tuple([z.number().int().nonnegative(), z.number().int().positive()]);

export const SuperpixelsInfoSchema = z.object({
  k_actual: z.number().int().positive(),
  width: z.number().int().positive(),
  height: z.number().int().positive(),
  assignment_rle: z.array(RlePair),
});
export type SuperpixelsInfo = z.infer<typeof SuperpixelsInfoSchema>;

export const InputsInfoSchema = z.object({
  regions: z.array(
    z.object({
      label: z.number().int().positive(),
      pixel_count: z.number().int().positive(),
    })
  ),
});
export type InputsInfo = z.infer<typeof InputsInfoSchema>;

export const RefinementHintSchema = z.object({
  superpixel: z.number().int().nonnegative(),
  label: z.number().int().positive(),
});
export type RefinementHint = z.infer<typeof RefinementHintSchema>;

export const SegmentInfoSchema = z.object({
  k_actual: z.number().int().positive(),
  n_regions: z.number().int().positive(),
  labels: z.array(z.number().int().positive()),
  clicks: z.number().int().nonnegative(),
  timing_ms: z.number().nonnegative(),
  accuracy: z.number().min(0).max(1).nullable(),
  refinement_hint: RefinementHintSchema.nullable(),
  stale: z.boolean(),
});
export type SegmentInfo = z.infer<typeof SegmentInfoSchema>;

export const RelabelInfoSchema = z.object({
  clicks: z.number().int().nonnegative(),
  accuracy: z.number().min(0).max(1).nullable(),
  label: z.number().int().positive(),
});
export type RelabelInfo = z.infer<typeof RelabelInfoSchema>;

export const GroundTruthInfoSchema = z.object({
  n_regions: z.number().int().positive(),
});
export type GroundTruthInfo = z.infer<typeof GroundTruthInfoSchema>;

export const HealthSchema = z.object({ status: z.literal("ok") });

/** Request bodies (mirrored from the service's pydantic models). */

export interface SeedInput {
  row: number;
  col: number;
  side: number;
}

export interface BoxInput {
  r1: number;
  c1: number;
  r2: number;
  c2: number;
}

export interface RegionInputsPayload {
  label: number;
  seeds: SeedInput[];
  boxes: BoxInput[];
  pixels: Array<[number, number]>;
}

export interface InputsPayload {
  regions: RegionInputsPayload[];
  reset: boolean;
}

export interface SegmentParams {
  color_space?: string;
  channel_selection?: number[];
  bins_per_channel?: number[];
  reduce_to_linear?: boolean;
  n_superpixels?: number;
  compactness?: number;
  click_cost?: number;
}
