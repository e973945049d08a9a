import { describe, expect, it } from "vitest";

import {
  clampSlider,
  dragImage,
  initialViewState,
  panBy,
  resetUnpinnedOverrides,
  setPinned,
  setSlider,
  zoomAt,
} from "../src/state.js";

describe("slider clamping", () => {
  it("enforces the 0.5..3 bounds", () => {
    expect(clampSlider(1.0)).toBe(1.0);
    expect(clampSlider(0.5)).toBe(0.5);
    expect(clampSlider(3.0)).toBe(3.0);
    expect(clampSlider(9.0)).toBe(3.0);
    expect(clampSlider(0.1)).toBe(0.5);
    expect(clampSlider(-2)).toBe(0.5);
    expect(clampSlider(Number.NaN)).toBe(1.0);
  });

  it("setSlider stores the clamped value", () => {
    const state = setSlider(initialViewState(), 7.5);
    expect(state.slider).toBe(3.0);
  });
});

describe("viewport", () => {
  it("zoomAt keeps the world point under the cursor fixed", () => {
    let state = initialViewState();
    state = { ...state, viewport: { centerX: 100, centerY: 50, zoom: 1 } };
    const before = {
      x: state.viewport.centerX + (300 - 400) / state.viewport.zoom,
      y: state.viewport.centerY + (200 - 300) / state.viewport.zoom,
    };
    const zoomed = zoomAt(state, 300, 200, 2.0, 800, 600);
    const after = {
      x: zoomed.viewport.centerX + (300 - 400) / zoomed.viewport.zoom,
      y: zoomed.viewport.centerY + (200 - 300) / zoomed.viewport.zoom,
    };
    expect(after.x).toBeCloseTo(before.x, 9);
    expect(after.y).toBeCloseTo(before.y, 9);
    expect(zoomed.viewport.zoom).toBe(2.0);
  });

  it("zoom clamps at its bounds", () => {
    const state = initialViewState();
    let zoomed = state;
    for (let i = 0; i < 40; i += 1) zoomed = zoomAt(zoomed, 0, 0, 4, 800, 600);
    expect(zoomed.viewport.zoom).toBeLessThanOrEqual(8.0);
  });

  it("panBy moves the center opposite the drag, in world units", () => {
    let state = initialViewState();
    state = { ...state, viewport: { centerX: 0, centerY: 0, zoom: 2 } };
    const panned = panBy(state, 10, -6);
    expect(panned.viewport.centerX).toBeCloseTo(-5);
    expect(panned.viewport.centerY).toBeCloseTo(3);
  });
});

describe("drag overrides", () => {
  it("accumulate per image without touching anything else", () => {
    let state = initialViewState();
    state = dragImage(state, "img-a", 10, 0);
    state = dragImage(state, "img-a", 5, -3);
    expect(state.overrides.get("img-a")).toEqual({ dx: 15, dy: -3, pinned: false });
    expect(state.overrides.size).toBe(1);
  });

  it("unpinned overrides reset on fresh layouts, pins survive", () => {
    let state = initialViewState();
    state = dragImage(state, "img-a", 10, 0);
    state = dragImage(state, "img-b", 1, 1);
    state = setPinned(state, "img-b", true);
    state = resetUnpinnedOverrides(state);
    expect(state.overrides.has("img-a")).toBe(false);
    expect(state.overrides.get("img-b")?.pinned).toBe(true);
  });
});
