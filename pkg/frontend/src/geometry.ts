/**
 * Pixel-to-normalized mapping against the live video element geometry.
 * Coordinates are fractions of the frame in [0, 1], y growing downward;
 * pointer positions outside the frame are clamped onto its edge.
 */

import type { NormPoint } from "./protocol.js";

export interface FrameRect {
  left: number;
  top: number;
  width: number;
  height: number;
}

export function normalizePointer(clientX: number, clientY: number, rect: FrameRect): NormPoint {
  const x = (clientX - rect.left) / rect.width;
  const y = (clientY - rect.top) / rect.height;
  return { x: clamp01(x), y: clamp01(y) };
}

export function toPixels(point: NormPoint, rect: FrameRect): { x: number; y: number } {
  return { x: rect.left + point.x * rect.width, y: rect.top + point.y * rect.height };
}

function clamp01(v: number): number {
  return v < 0 ? 0 : v > 1 ? 1 : v;
}

/** Worst-case normalized error of one device pixel at this geometry. */
export function onePixelEpsilon(rect: FrameRect): number {
  return 1 / Math.min(rect.width, rect.height);
}
