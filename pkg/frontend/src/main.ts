import { ApiClient, ApiRequestError, SUPERSEDED } from "./api.js";
import {
  type Camera,
  CameraAnimator,
  clampCamera,
  type MapBounds,
} from "./camera.js";
import { debounce } from "./debounce.js";
import { Quadtree } from "./quadtree.js";
import { CanvasSurface, renderMap, worldToScreen } from "./render.js";
import { TimelineModel } from "./timeline.js";
import type { MapPayload, ProjectDot } from "./types.js";
import { ASPECTS, WorkbenchModel } from "./workbench.js";

const MAP_REFETCH_MS = 150;
const HIGHLIGHT_PULSE_MS = 2500;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

class App {
  private readonly api = new ApiClient("");
  private readonly animator = new CameraAnimator();
  private readonly workbench = new WorkbenchModel();
  private readonly canvas = el<HTMLCanvasElement>("map-canvas");
  private readonly surface: CanvasSurface;

  private camera: Camera = { centerX: 0, centerY: 0, zoom: 1 };
  private bounds: MapBounds = { x0: -10, y0: -10, x1: 10, y1: 10 };
  private payload: MapPayload | null = null;
  private hits = new Set<string>();
  private pixelsPerUnit = 50;
  private fontPx = 14;
  private timeline: TimelineModel | null = null;
  private hitIndex: Quadtree<ProjectDot> | null = null;

  private readonly refetchMap = debounce(() => void this.fetchMap(), MAP_REFETCH_MS);

  constructor() {
    const ctx = this.canvas.getContext("2d");
    if (!ctx) throw new Error("2D canvas unavailable");
    this.surface = new CanvasSurface(ctx, (msg) => this.toast(msg));
  }

  async start(): Promise<void> {
    const health = await this.api.health();
    if (health !== SUPERSEDED) {
      // label fonts must match the server's bbox constants
      this.pixelsPerUnit = health.label_metrics.pixels_per_unit;
      this.fontPx = health.label_metrics.font_px;
    }
    await this.fetchMap();
    this.fitToData();
    this.setupTimeline();
    this.bindCanvas();
    this.bindSearch();
    this.bindWorkbench();
    this.draw();
  }

  // --- data ---------------------------------------------------------------

  private async fetchMap(): Promise<void> {
    const range = this.timeline?.range;
    const windowed = this.timeline !== null && !this.timeline.isFullRange;
    try {
      const payload = await this.api.map({
        zoom: this.camera.zoom,
        ...(windowed && range ? { start: range.start, end: range.end } : {}),
      });
      if (payload === SUPERSEDED) return;
      this.payload = payload;
      this.rebuildHitIndex();
      this.draw();
    } catch (err) {
      this.toast(err instanceof ApiRequestError ? err.message : "map request failed");
    }
  }

  private rebuildHitIndex(): void {
    if (!this.payload || this.payload.projects.length === 0) {
      this.hitIndex = null;
      return;
    }
    const xs = this.payload.projects.map((p) => p.x);
    const ys = this.payload.projects.map((p) => p.y);
    this.bounds = {
      x0: Math.min(...xs),
      y0: Math.min(...ys),
      x1: Math.max(...xs),
      y1: Math.max(...ys),
    };
    this.hitIndex = new Quadtree<ProjectDot>(
      this.bounds.x0, this.bounds.y0, this.bounds.x1, this.bounds.y1,
    );
    for (const project of this.payload.projects) {
      this.hitIndex.insert(project.x, project.y, project);
    }
  }

  private fitToData(): void {
    this.camera = clampCamera(
      {
        centerX: (this.bounds.x0 + this.bounds.x1) / 2,
        centerY: (this.bounds.y0 + this.bounds.y1) / 2,
        zoom: 1,
      },
      this.bounds,
    );
  }

  private draw(): void {
    if (!this.payload) return;
    renderMap(this.surface, this.payload, this.camera, {
      pixelsPerUnit: this.pixelsPerUnit,
      fontPx: this.fontPx,
      highlight: this.hits,
    });
  }

  // --- map interaction ------------------------------------------------------

  private bindCanvas(): void {
    let dragging = false;
    let lastX = 0;
    let lastY = 0;

    this.canvas.addEventListener("mousedown", (event) => {
      dragging = true;
      lastX = event.offsetX;
      lastY = event.offsetY;
    });
    window.addEventListener("mouseup", () => {
      dragging = false;
    });
    this.canvas.addEventListener("mousemove", (event) => {
      if (dragging) {
        const scale = this.camera.zoom * this.pixelsPerUnit;
        this.camera = clampCamera(
          {
            centerX: this.camera.centerX - (event.offsetX - lastX) / scale,
            centerY: this.camera.centerY + (event.offsetY - lastY) / scale,
            zoom: this.camera.zoom,
          },
          this.bounds,
        );
        lastX = event.offsetX;
        lastY = event.offsetY;
        this.draw();
        this.refetchMap();
      } else {
        this.showHover(event.offsetX, event.offsetY);
      }
    });
    this.canvas.addEventListener("wheel", (event) => {
      event.preventDefault();
      const factor = Math.exp(-event.deltaY * 0.0015);
      const before = this.camera.zoom;
      this.camera = clampCamera(
        { ...this.camera, zoom: this.camera.zoom * factor },
        this.bounds,
      );
      if (this.camera.zoom !== before) {
        this.draw();
        this.refetchMap(); // re-issues the label request with the new zoom
      }
    });
    this.canvas.addEventListener("click", (event) => {
      const dot = this.dotAt(event.offsetX, event.offsetY);
      if (dot) void this.openDetail(dot.id);
    });
  }

  private dotAt(sx: number, sy: number): ProjectDot | null {
    if (!this.hitIndex) return null;
    const scale = this.camera.zoom * this.pixelsPerUnit;
    const wx = this.camera.centerX + (sx - this.canvas.width / 2) / scale;
    const wy = this.camera.centerY - (sy - this.canvas.height / 2) / scale;
    return this.hitIndex.nearest(wx, wy, 8 / scale)?.data ?? null;
  }

  private showHover(sx: number, sy: number): void {
    const tooltip = el<HTMLDivElement>("tooltip");
    const dot = this.dotAt(sx, sy);
    if (!dot) {
      tooltip.hidden = true;
      return;
    }
    tooltip.hidden = false;
    tooltip.textContent = dot.title;
    tooltip.style.left = `${sx + 12}px`;
    tooltip.style.top = `${sy + 12}px`;
  }

  private async openDetail(projectId: string): Promise<void> {
    const detail = await this.api.project(projectId);
    if (detail === SUPERSEDED) return;
    const drawer = el<HTMLDivElement>("detail-drawer");
    drawer.hidden = false;
    el<HTMLHeadingElement>("detail-title").textContent = detail.title;
    el<HTMLParagraphElement>("detail-description").textContent = detail.description;
    el<HTMLSpanElement>("detail-meta").textContent =
      `${detail.group}${detail.date ? ` · ${detail.date}` : ""}`;

    const aspectRow = el<HTMLDivElement>("detail-aspects");
    aspectRow.replaceChildren();
    for (const aspect of ASPECTS) {
      const button = document.createElement("button");
      button.textContent = `add: ${aspect.replace("_", " ")}`;
      button.addEventListener("click", () => {
        const result = this.workbench.addItem(detail.id, detail.title, aspect);
        if (!result.ok) {
          const hints = {
            duplicate: "already in the recipe with that aspect",
            full: "recipe is full (8 items max)",
            bad_aspect: "unknown aspect",
          } as const;
          this.toast(hints[result.reason]);
        }
        this.renderWorkbench();
      });
      aspectRow.appendChild(button);
    }
  }

  // --- search ----------------------------------------------------------------

  private bindSearch(): void {
    const input = el<HTMLInputElement>("search-input");
    const run = () => void this.runSearch(input.value);
    el<HTMLButtonElement>("search-button").addEventListener("click", run);
    input.addEventListener("keydown", (event) => {
      if (event.key === "Enter") run();
    });
  }

  private async runSearch(query: string): Promise<void> {
    if (!query.trim()) return; // empty query ignored
    let result;
    try {
      result = await this.api.search(query);
    } catch (err) {
      // camera unchanged on failure; offer a retry
      this.toast(
        err instanceof ApiRequestError
          ? `${err.message} — try again`
          : "search failed — try again",
      );
      return;
    }
    if (result === SUPERSEDED) return;

    this.hits = new Set(result.hits.map((hit) => hit.id));
    setTimeout(() => {
      this.hits = new Set();
      this.draw();
    }, HIGHLIGHT_PULSE_MS);

    const hitsNode = el<HTMLUListElement>("search-hits");
    hitsNode.replaceChildren(
      ...result.hits.map((hit) => {
        const item = document.createElement("li");
        const title =
          this.payload?.projects.find((p) => p.id === hit.id)?.title ?? hit.id;
        item.textContent = `${title} (${hit.score.toFixed(3)})`;
        item.addEventListener("click", () => void this.openDetail(hit.id));
        return item;
      }),
    );
    void this.loadRegionSummary();

    const target = clampCamera(
      { centerX: result.x, centerY: result.y, zoom: Math.max(this.camera.zoom, 4) },
      this.bounds,
    );
    this.animator.animateTo(this.camera, target, (camera) => {
      this.camera = camera;
      this.draw();
    }, () => this.refetchMap());
  }

  private async loadRegionSummary(): Promise<void> {
    try {
      const summary = await this.api.summary();
      if (summary === SUPERSEDED) return;
      el<HTMLParagraphElement>("region-summary").textContent = summary.summary;
    } catch {
      el<HTMLParagraphElement>("region-summary").textContent = "";
    }
  }

  // --- timeline ----------------------------------------------------------------

  private setupTimeline(): void {
    const dates = (this.payload?.projects ?? [])
      .map((p) => p.date)
      .filter((d): d is string => d !== null)
      .sort();
    if (dates.length === 0) return;

    this.timeline = new TimelineModel(dates[0], dates[dates.length - 1], () => {
      void this.fetchMap();
    });
    const startInput = el<HTMLInputElement>("timeline-start");
    const endInput = el<HTMLInputElement>("timeline-end");
    startInput.min = endInput.min = dates[0];
    startInput.max = endInput.max = dates[dates.length - 1];
    startInput.value = dates[0];
    endInput.value = dates[dates.length - 1];

    startInput.addEventListener("input", () => {
      this.timeline?.setStart(startInput.value);
      startInput.value = this.timeline!.range.start;
    });
    endInput.addEventListener("input", () => {
      this.timeline?.setEnd(endInput.value);
      endInput.value = this.timeline!.range.end;
    });
  }

  // --- workbench ------------------------------------------------------------------

  private bindWorkbench(): void {
    el<HTMLButtonElement>("generate-button").addEventListener("click", () => {
      void this.generate();
    });
    el<HTMLButtonElement>("provenance-toggle").addEventListener("click", () => {
      this.workbench.toggleProvenance();
      this.renderWorkbench();
    });
    this.renderWorkbench();
  }

  private async generate(): Promise<void> {
    try {
      await this.workbench.generate(this.api);
    } catch (err) {
      // recipe left intact for retry
      this.toast(err instanceof ApiRequestError ? err.message : "generation failed");
    }
    this.renderWorkbench();
  }

  private renderWorkbench(): void {
    const chips = el<HTMLDivElement>("recipe-chips");
    chips.replaceChildren(
      ...this.workbench.items.map((chip, index) => {
        const node = document.createElement("span");
        node.className = "chip";
        node.textContent = `${chip.title} · ${chip.aspect.replace("_", " ")} ✕`;
        node.addEventListener("click", () => {
          this.workbench.removeItem(index);
          this.renderWorkbench();
        });
        return node;
      }),
    );
    el<HTMLButtonElement>("generate-button").disabled = !this.workbench.canGenerate;

    const idea = this.workbench.lastIdea;
    el<HTMLHeadingElement>("idea-title").textContent = idea?.title ?? "";
    el<HTMLParagraphElement>("idea-description").textContent =
      idea?.description ?? "";
    el<HTMLButtonElement>("provenance-toggle").hidden = idea === null;
    const panel = el<HTMLPreElement>("provenance-panel");
    panel.hidden = !this.workbench.provenanceVisible || idea === null;
    panel.textContent = idea?.prompt_used ?? ""; // displayed verbatim
  }

  // --- misc -----------------------------------------------------------------------

  private toast(message: string): void {
    const node = el<HTMLDivElement>("toast");
    node.textContent = message;
    node.hidden = false;
    setTimeout(() => {
      node.hidden = true;
    }, 4000);
  }
}

if (typeof document !== "undefined" && document.getElementById("map-canvas")) {
  void new App().start();
}

export { App, worldToScreen };
