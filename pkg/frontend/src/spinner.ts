/**
 * Latency spinner: the countdown shown at the interaction point while the
 * input travels the broadcast pipeline. Its duration equals the configured
 * broadcast latency exactly; rendering is driven by an injectable frame
 * callback so tests can step time deterministically.
 */

export interface SpinnerHandle {
  /** 0 -> 1 over the spinner's lifetime. */
  progress(nowMs: number): number;
  done(nowMs: number): boolean;
  readonly durationMs: number;
  readonly startedMs: number;
}

export function startSpinner(nowMs: number, latencyMs: number): SpinnerHandle {
  const duration = Math.max(0, latencyMs);
  return {
    durationMs: duration,
    startedMs: nowMs,
    progress(t: number): number {
      if (duration === 0) return 1;
      const p = (t - nowMs) / duration;
      return p < 0 ? 0 : p > 1 ? 1 : p;
    },
    done(t: number): boolean {
      return t - nowMs >= duration;
    },
  };
}

export interface SpinnerScheduler {
  active: SpinnerHandle[];
  start(nowMs: number, latencyMs: number): SpinnerHandle;
  /** Drop finished spinners; returns the still-running ones to draw. */
  sweep(nowMs: number): SpinnerHandle[];
}

export function makeScheduler(): SpinnerScheduler {
  const active: SpinnerHandle[] = [];
  return {
    active,
    start(nowMs: number, latencyMs: number): SpinnerHandle {
      const handle = startSpinner(nowMs, latencyMs);
      active.push(handle);
      return handle;
    },
    sweep(nowMs: number): SpinnerHandle[] {
      for (let i = active.length - 1; i >= 0; i--) {
        if (active[i].done(nowMs)) active.splice(i, 1);
      }
      return [...active];
    },
  };
}
