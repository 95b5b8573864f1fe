export interface Camera {
  centerX: number;
  centerY: number;
  zoom: number;
}

export interface MapBounds {
  x0: number;
  y0: number;
  x1: number;
  y1: number;
}

export const MIN_ZOOM = 0.5;
export const MAX_ZOOM = 40;
export const SEARCH_ANIMATION_MS = 600;

export function easeOutCubic(t: number): number {
  const u = t - 1;
  return u * u * u + 1;
}

/** Clamp zoom to [MIN_ZOOM, MAX_ZOOM] and center to the padded map bounds. */
export function clampCamera(camera: Camera, bounds: MapBounds): Camera {
  const pad = 0.05 * Math.max(bounds.x1 - bounds.x0, bounds.y1 - bounds.y0);
  return {
    centerX: Math.min(bounds.x1 + pad, Math.max(bounds.x0 - pad, camera.centerX)),
    centerY: Math.min(bounds.y1 + pad, Math.max(bounds.y0 - pad, camera.centerY)),
    zoom: Math.min(MAX_ZOOM, Math.max(MIN_ZOOM, camera.zoom)),
  };
}

export interface AnimatorClock {
  now(): number;
  /** Schedule a frame callback; receives the current timestamp. */
  schedule(cb: (timestamp: number) => void): void;
}

function defaultClock(): AnimatorClock {
  if (typeof requestAnimationFrame === "function") {
    return {
      now: () => performance.now(),
      schedule: (cb) => requestAnimationFrame(cb),
    };
  }
  return {
    now: () => Date.now(),
    schedule: (cb) => setTimeout(() => cb(Date.now()), 16),
  };
}

/**
 * Interpolates the camera toward a target over a fixed duration. Starting a
 * new animation cancels the running one (last-write-wins), which is the
 * contract search relies on: a second search immediately retargets.
 */
export class CameraAnimator {
  private readonly clock: AnimatorClock;
  private generation = 0;

  constructor(clock?: AnimatorClock) {
    this.clock = clock ?? defaultClock();
  }

  get animating(): boolean {
    return this.activeGeneration !== null;
  }

  private activeGeneration: number | null = null;

  animateTo(
    from: Camera,
    to: Camera,
    onFrame: (camera: Camera) => void,
    onDone?: () => void,
    durationMs: number = SEARCH_ANIMATION_MS,
  ): () => void {
    const generation = ++this.generation;
    this.activeGeneration = generation;
    const start = this.clock.now();

    const step = (timestamp: number) => {
      if (generation !== this.generation) return; // superseded or cancelled
      const t = Math.min(1, (timestamp - start) / durationMs);
      const eased = easeOutCubic(t);
      onFrame({
        centerX: from.centerX + (to.centerX - from.centerX) * eased,
        centerY: from.centerY + (to.centerY - from.centerY) * eased,
        zoom: from.zoom + (to.zoom - from.zoom) * eased,
      });
      if (t >= 1) {
        this.activeGeneration = null;
        onDone?.();
      } else {
        this.clock.schedule(step);
      }
    };
    this.clock.schedule(step);

    return () => {
      if (generation === this.generation) {
        this.generation++;
        this.activeGeneration = null;
      }
    };
  }
}
