import type { Camera } from "./camera.js";
import { CONTOUR_COLOR, groupColor, HIGHLIGHT_COLOR, LABEL_COLOR } from "./colors.js";
import type { MapPayload } from "./types.js";

/** The tiny drawing surface the renderer needs; canvas 2D or a test stub. */
export interface DrawSurface {
  readonly width: number;
  readonly height: number;
  clear(): void;
  strokePath(points: Array<[number, number]>, color: string, lineWidth: number): void;
  fillCircle(x: number, y: number, radius: number, color: string): void;
  fillText(text: string, x: number, y: number, font: string, color: string): void;
  notice(message: string): void;
}

export interface RenderOptions {
  /** Screen pixels per map unit at zoom 1; must match the server's value. */
  pixelsPerUnit: number;
  /** Label font size in px; must match the server's bbox constants. */
  fontPx: number;
  /** Project ids to pulse (search hits). */
  highlight?: ReadonlySet<string>;
  dotRadius?: number;
}

export interface RenderStats {
  dotCount: number;
  /** Exactly the label texts drawn, in draw order. */
  labelTexts: string[];
  skipped: boolean;
}

export function worldToScreen(
  camera: Camera,
  surface: { width: number; height: number },
  pixelsPerUnit: number,
  x: number,
  y: number,
): [number, number] {
  const scale = camera.zoom * pixelsPerUnit;
  return [
    surface.width / 2 + (x - camera.centerX) * scale,
    surface.height / 2 - (y - camera.centerY) * scale,
  ];
}

function isMalformed(payload: MapPayload): boolean {
  return (
    !payload ||
    !Array.isArray(payload.projects) ||
    !Array.isArray(payload.labels) ||
    !Array.isArray(payload.contours) ||
    payload.projects.some(
      (p) => typeof p.x !== "number" || typeof p.y !== "number" || !p.id,
    )
  );
}

/**
 * Draw one frame: contours underneath, then dots colored by group, then the
 * server-placed labels. Labels come exclusively from the payload — the
 * client never adds, drops, or re-occludes them, so the UI and server can
 * never disagree about visibility.
 */
export function renderMap(
  surface: DrawSurface,
  payload: MapPayload,
  camera: Camera,
  options: RenderOptions,
): RenderStats {
  if (isMalformed(payload)) {
    surface.notice("map data malformed; skipping render");
    return { dotCount: 0, labelTexts: [], skipped: true };
  }

  surface.clear();
  const { pixelsPerUnit, fontPx } = options;
  const dotRadius = options.dotRadius ?? 3;
  const toScreen = (x: number, y: number) =>
    worldToScreen(camera, surface, pixelsPerUnit, x, y);

  for (const contour of payload.contours) {
    for (const path of contour.paths) {
      surface.strokePath(
        path.map(([x, y]) => toScreen(x, y)),
        CONTOUR_COLOR,
        1,
      );
    }
  }

  let dotCount = 0;
  for (const project of payload.projects) {
    const [sx, sy] = toScreen(project.x, project.y);
    if (options.highlight?.has(project.id)) {
      surface.fillCircle(sx, sy, dotRadius * 2.2, HIGHLIGHT_COLOR);
    }
    surface.fillCircle(sx, sy, dotRadius, groupColor(project.group));
    dotCount++;
  }

  const labelTexts: string[] = [];
  for (const label of payload.labels) {
    const [sx, sy] = toScreen(label.x, label.y);
    surface.fillText(label.text, sx, sy, `${fontPx}px sans-serif`, LABEL_COLOR);
    labelTexts.push(label.text);
  }

  return { dotCount, labelTexts, skipped: false };
}

/** CanvasRenderingContext2D-backed surface for the real app. */
export class CanvasSurface implements DrawSurface {
  constructor(
    private readonly ctx: CanvasRenderingContext2D,
    private readonly onNotice: (message: string) => void = () => {},
  ) {}

  get width(): number {
    return this.ctx.canvas.width;
  }

  get height(): number {
    return this.ctx.canvas.height;
  }

  clear(): void {
    this.ctx.clearRect(0, 0, this.width, this.height);
  }

  strokePath(points: Array<[number, number]>, color: string, lineWidth: number): void {
    if (points.length < 2) return;
    this.ctx.beginPath();
    this.ctx.moveTo(points[0][0], points[0][1]);
    for (let i = 1; i < points.length; i++) {
      this.ctx.lineTo(points[i][0], points[i][1]);
    }
    this.ctx.strokeStyle = color;
    this.ctx.lineWidth = lineWidth;
    this.ctx.stroke();
  }

  fillCircle(x: number, y: number, radius: number, color: string): void {
    this.ctx.beginPath();
    this.ctx.arc(x, y, radius, 0, 2 * Math.PI);
    this.ctx.fillStyle = color;
    this.ctx.fill();
  }

  fillText(text: string, x: number, y: number, font: string, color: string): void {
    this.ctx.font = font;
    this.ctx.fillStyle = color;
    this.ctx.textAlign = "center";
    this.ctx.textBaseline = "middle";
    this.ctx.fillText(text, x, y);
  }

  notice(message: string): void {
    this.onNotice(message);
  }
}
