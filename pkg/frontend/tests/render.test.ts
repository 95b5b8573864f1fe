import { describe, expect, it } from "vitest";

import type { Camera } from "../src/camera.js";
import { type DrawSurface, renderMap, worldToScreen } from "../src/render.js";
import type { MapPayload } from "../src/types.js";

type Call =
  | { op: "clear" }
  | { op: "path"; points: Array<[number, number]>; color: string }
  | { op: "circle"; x: number; y: number; r: number; color: string }
  | { op: "text"; text: string; x: number; y: number }
  | { op: "notice"; message: string };

class RecordingSurface implements DrawSurface {
  readonly width = 800;
  readonly height = 600;
  readonly calls: Call[] = [];

  clear() {
    this.calls.push({ op: "clear" });
  }
  strokePath(points: Array<[number, number]>, color: string) {
    this.calls.push({ op: "path", points, color });
  }
  fillCircle(x: number, y: number, r: number, color: string) {
    this.calls.push({ op: "circle", x, y, r, color });
  }
  fillText(text: string, x: number, y: number) {
    this.calls.push({ op: "text", text, x, y });
  }
  notice(message: string) {
    this.calls.push({ op: "notice", message });
  }
}

const CAMERA: Camera = { centerX: 0, centerY: 0, zoom: 1 };
const OPTS = { pixelsPerUnit: 50, fontPx: 14 };

function payloadWith(n: number): MapPayload {
  return {
    projects: Array.from({ length: n }, (_, i) => ({
      id: `p${i}`,
      title: `P${i}`,
      group: i % 2 ? "music" : "robotics",
      x: (i % 10) - 5,
      y: Math.floor(i / 10) - 5,
      date: "2020-01-01",
    })),
    labels: [
      { text: "robotics", count: 9, x: 0, y: 0 },
      { text: "music", count: 4, x: 2, y: 2 },
    ],
    contours: [
      { level: 0.1, paths: [[[0, 0], [1, 0], [1, 1]]] },
    ],
  };
}

describe("renderMap", () => {
  it("draws one dot per project (50 projects → 50 dots)", () => {
    const surface = new RecordingSurface();
    const stats = renderMap(surface, payloadWith(50), CAMERA, OPTS);
    expect(stats.dotCount).toBe(50);
    expect(surface.calls.filter((c) => c.op === "circle").length).toBe(50);
  });

  it("renders exactly the payload's labels — no additions or removals", () => {
    const surface = new RecordingSurface();
    const payload = payloadWith(20);
    const stats = renderMap(surface, payload, CAMERA, OPTS);
    const drawn = surface.calls
      .filter((c): c is Extract<Call, { op: "text" }> => c.op === "text")
      .map((c) => c.text);
    expect(drawn).toEqual(payload.labels.map((l) => l.text));
    expect(stats.labelTexts).toEqual(["robotics", "music"]);
  });

  it("draws contours before dots, and dots before labels", () => {
    const surface = new RecordingSurface();
    renderMap(surface, payloadWith(5), CAMERA, OPTS);
    const order = surface.calls.map((c) => c.op);
    expect(order.lastIndexOf("path")).toBeLessThan(order.indexOf("circle"));
    expect(order.lastIndexOf("circle")).toBeLessThan(order.indexOf("text"));
  });

  it("same group gets the same color, different groups differ", () => {
    const surface = new RecordingSurface();
    renderMap(surface, payloadWith(4), CAMERA, OPTS);
    const circles = surface.calls.filter(
      (c): c is Extract<Call, { op: "circle" }> => c.op === "circle",
    );
    expect(circles[0].color).toBe(circles[2].color); // robotics, robotics
    expect(circles[1].color).toBe(circles[3].color); // music, music
    expect(circles[0].color).not.toBe(circles[1].color);
  });

  it("highlighted hits get a pulse ring under the dot", () => {
    const surface = new RecordingSurface();
    renderMap(surface, payloadWith(3), CAMERA, {
      ...OPTS,
      highlight: new Set(["p1"]),
    });
    expect(surface.calls.filter((c) => c.op === "circle").length).toBe(4);
  });

  it("skips rendering with an on-screen notice when the payload is malformed", () => {
    const surface = new RecordingSurface();
    const bad = { projects: [{ id: "p", x: "oops" }] } as unknown as MapPayload;
    const stats = renderMap(surface, bad, CAMERA, OPTS);
    expect(stats.skipped).toBe(true);
    expect(surface.calls).toEqual([
      { op: "notice", message: "map data malformed; skipping render" },
    ]);
  });
});

describe("worldToScreen", () => {
  it("maps the camera center to the canvas center", () => {
    const surface = { width: 800, height: 600 };
    expect(worldToScreen(CAMERA, surface, 50, 0, 0)).toEqual([400, 300]);
  });

  it("scales with zoom and flips the y axis", () => {
    const surface = { width: 800, height: 600 };
    const [sx, sy] = worldToScreen({ ...CAMERA, zoom: 2 }, surface, 50, 1, 1);
    expect(sx).toBe(400 + 100);
    expect(sy).toBe(300 - 100);
  });
});
