/** Client view state. Never authoritative: a full reload from the API
 *  reproduces the identical scene. Drags live here as overrides only. */

export const SLIDER_MIN = 0.5;
export const SLIDER_MAX = 3.0;
export const ZOOM_MIN = 0.05;
export const ZOOM_MAX = 8.0;

/** Zoom level at or above which tiles swap to the full 512px asset. */
export const FULL_RES_ZOOM = 1.5;

export interface Viewport {
  centerX: number;
  centerY: number;
  zoom: number;
}

export interface DragOverride {
  dx: number;
  dy: number;
  pinned: boolean;
}

export interface ViewState {
  viewport: Viewport;
  slider: number;
  selectedImage: string | null;
  openMenu: { imageId: string; tab: "image" | "cluster" | "unique" } | null;
  /** Client-side drag offsets in world units, keyed by image id. */
  overrides: Map<string, DragOverride>;
}

export function initialViewState(): ViewState {
  return {
    viewport: { centerX: 0, centerY: 0, zoom: 0.5 },
    slider: 1.0,
    selectedImage: null,
    openMenu: null,
    overrides: new Map(),
  };
}

export function clampSlider(value: number): number {
  if (Number.isNaN(value)) return 1.0;
  return Math.min(Math.max(value, SLIDER_MIN), SLIDER_MAX);
}

export function clampZoom(value: number): number {
  return Math.min(Math.max(value, ZOOM_MIN), ZOOM_MAX);
}

export function setSlider(state: ViewState, value: number): ViewState {
  return { ...state, slider: clampSlider(value) };
}

export function zoomAt(
  state: ViewState,
  screenX: number,
  screenY: number,
  factor: number,
  canvasWidth: number,
  canvasHeight: number,
): ViewState {
  const { viewport } = state;
  const newZoom = clampZoom(viewport.zoom * factor);
  if (newZoom === viewport.zoom) return state;
  // keep the world point under the cursor fixed while zooming
  const worldX = viewport.centerX + (screenX - canvasWidth / 2) / viewport.zoom;
  const worldY = viewport.centerY + (screenY - canvasHeight / 2) / viewport.zoom;
  return {
    ...state,
    viewport: {
      zoom: newZoom,
      centerX: worldX - (screenX - canvasWidth / 2) / newZoom,
      centerY: worldY - (screenY - canvasHeight / 2) / newZoom,
    },
  };
}

export function panBy(state: ViewState, dxScreen: number, dyScreen: number): ViewState {
  const { viewport } = state;
  return {
    ...state,
    viewport: {
      ...viewport,
      centerX: viewport.centerX - dxScreen / viewport.zoom,
      centerY: viewport.centerY - dyScreen / viewport.zoom,
    },
  };
}

/** Record a drag as a client-side override; the server layout is untouched. */
export function dragImage(
  state: ViewState,
  imageId: string,
  dxWorld: number,
  dyWorld: number,
): ViewState {
  const overrides = new Map(state.overrides);
  const previous = overrides.get(imageId) ?? { dx: 0, dy: 0, pinned: false };
  overrides.set(imageId, {
    dx: previous.dx + dxWorld,
    dy: previous.dy + dyWorld,
    pinned: previous.pinned,
  });
  return { ...state, overrides };
}

export function setPinned(state: ViewState, imageId: string, pinned: boolean): ViewState {
  const overrides = new Map(state.overrides);
  const previous = overrides.get(imageId) ?? { dx: 0, dy: 0, pinned: false };
  overrides.set(imageId, { ...previous, pinned });
  return { ...state, overrides };
}

/** Drop all drag offsets (e.g. when a fresh layout arrives); pins survive. */
export function resetUnpinnedOverrides(state: ViewState): ViewState {
  const overrides = new Map<string, DragOverride>();
  for (const [id, override] of state.overrides) {
    if (override.pinned) overrides.set(id, override);
  }
  return { ...state, overrides };
}
