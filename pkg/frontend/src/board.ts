/** Canvas board geometry: pure tile computation, then thin drawing.
 *
 * Tile positions come straight from the API layout (which already applied
 * the requested scale); an optimistic factor covers the gap between the
 * slider and the last fetched scale until the refetch lands. Above
 * VIRTUALIZE_THRESHOLD images, only viewport-intersecting tiles are kept.
 */

import type { LayoutWire } from "./api.js";
import { clusterColor } from "./colors.js";
import { FULL_RES_ZOOM, type ViewState } from "./state.js";

export const TILE_WORLD_SIZE = 128;
export const VIRTUALIZE_THRESHOLD = 200;

export interface Tile {
  id: string;
  cluster: number;
  color: string;
  /** Screen-space center and size in CSS pixels. */
  screenX: number;
  screenY: number;
  size: number;
  isExemplar: boolean;
  wantsFullRes: boolean;
}

export interface TileComputation {
  tiles: Tile[];
  culled: number;
  virtualized: boolean;
}

export function worldToScreen(
  worldX: number,
  worldY: number,
  view: ViewState,
  canvasWidth: number,
  canvasHeight: number,
): [number, number] {
  const { viewport } = view;
  return [
    (worldX - viewport.centerX) * viewport.zoom + canvasWidth / 2,
    (worldY - viewport.centerY) * viewport.zoom + canvasHeight / 2,
  ];
}

export function screenToWorld(
  screenX: number,
  screenY: number,
  view: ViewState,
  canvasWidth: number,
  canvasHeight: number,
): [number, number] {
  const { viewport } = view;
  return [
    viewport.centerX + (screenX - canvasWidth / 2) / viewport.zoom,
    viewport.centerY + (screenY - canvasHeight / 2) / viewport.zoom,
  ];
}

export function computeTiles(
  layout: LayoutWire,
  view: ViewState,
  canvasWidth: number,
  canvasHeight: number,
): TileComputation {
  const colorByCluster = new Map<number, number>();
  const exemplars = new Set<string>();
  for (const cluster of layout.clusters) {
    colorByCluster.set(cluster.id, cluster.color);
    exemplars.add(cluster.exemplar);
  }

  // optimistic slider: layout.scale is what the server applied; the slider
  // may have moved since the last fetch
  const optimistic = layout.scale > 0 ? view.slider / layout.scale : 1.0;

  const virtualized = layout.images.length > VIRTUALIZE_THRESHOLD;
  const size = TILE_WORLD_SIZE * view.viewport.zoom;
  const tiles: Tile[] = [];
  let culled = 0;
  for (const image of layout.images) {
    const override = view.overrides.get(image.id);
    const worldX = image.x * optimistic + (override?.dx ?? 0);
    const worldY = image.y * optimistic + (override?.dy ?? 0);
    const [screenX, screenY] = worldToScreen(
      worldX,
      worldY,
      view,
      canvasWidth,
      canvasHeight,
    );
    if (virtualized) {
      const half = size / 2;
      const offscreen =
        screenX + half < 0 ||
        screenY + half < 0 ||
        screenX - half > canvasWidth ||
        screenY - half > canvasHeight;
      if (offscreen) {
        culled += 1;
        continue;
      }
    }
    tiles.push({
      id: image.id,
      cluster: image.cluster,
      color: clusterColor(colorByCluster.get(image.cluster) ?? image.cluster),
      screenX,
      screenY,
      size,
      isExemplar: exemplars.has(image.id),
      wantsFullRes: view.viewport.zoom >= FULL_RES_ZOOM,
    });
  }
  return { tiles, culled, virtualized };
}

export function tileAt(
  tiles: Tile[],
  screenX: number,
  screenY: number,
): Tile | null {
  // iterate back-to-front so the topmost (last drawn) tile wins
  for (let i = tiles.length - 1; i >= 0; i -= 1) {
    const tile = tiles[i];
    const half = tile.size / 2;
    if (
      Math.abs(screenX - tile.screenX) <= half &&
      Math.abs(screenY - tile.screenY) <= half
    ) {
      return tile;
    }
  }
  return null;
}

/** The subset of CanvasRenderingContext2D the board uses; tests pass a
 *  recording fake, the app passes the real context. */
export interface DrawContext {
  fillStyle: string | CanvasGradient | CanvasPattern;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  clearRect(x: number, y: number, w: number, h: number): void;
  fillRect(x: number, y: number, w: number, h: number): void;
  strokeRect(x: number, y: number, w: number, h: number): void;
  drawImage(
    image: CanvasImageSource,
    dx: number,
    dy: number,
    dw: number,
    dh: number,
  ): void;
}

export interface ImageSourceLookup {
  (tile: Tile): CanvasImageSource | null;
}

export function drawBoard(
  ctx: DrawContext,
  computation: TileComputation,
  canvasWidth: number,
  canvasHeight: number,
  lookupImage: ImageSourceLookup,
  selectedImage: string | null,
): void {
  ctx.fillStyle = "#14151a";
  ctx.clearRect(0, 0, canvasWidth, canvasHeight);
  ctx.fillRect(0, 0, canvasWidth, canvasHeight);
  for (const tile of computation.tiles) {
    const half = tile.size / 2;
    const x = tile.screenX - half;
    const y = tile.screenY - half;
    const source = lookupImage(tile);
    if (source) {
      ctx.drawImage(source, x, y, tile.size, tile.size);
    } else {
      // missing asset: placeholder tile
      ctx.fillStyle = "#3a3d46";
      ctx.fillRect(x, y, tile.size, tile.size);
    }
    ctx.strokeStyle = tile.color;
    ctx.lineWidth = tile.id === selectedImage ? 5 : tile.isExemplar ? 4 : 2;
    ctx.strokeRect(x, y, tile.size, tile.size);
  }
}
