/**
 * Pixel-to-normalized mapping against the live video element geometry.
 * Coordinates are fractions of the frame in [0, 1], y growing downward;
 * pointer positions outside the frame are clamped onto its edge.
 */
export function normalizePointer(clientX, clientY, rect) {
    const x = (clientX - rect.left) / rect.width;
    const y = (clientY - rect.top) / rect.height;
    return { x: clamp01(x), y: clamp01(y) };
}
export function toPixels(point, rect) {
    return { x: rect.left + point.x * rect.width, y: rect.top + point.y * rect.height };
}
function clamp01(v) {
    return v < 0 ? 0 : v > 1 ? 1 : v;
}
/** Worst-case normalized error of one device pixel at this geometry. */
export function onePixelEpsilon(rect) {
    return 1 / Math.min(rect.width, rect.height);
}
