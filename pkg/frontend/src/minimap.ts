/** Minimap: cluster markers + bounding boxes + the viewport rectangle. */

import type { LayoutWire } from "./api.js";
import { clusterColor } from "./colors.js";
import type { DrawContext } from "./board.js";
import type { ViewState } from "./state.js";

export interface MinimapTransform {
  scale: number;
  offsetX: number;
  offsetY: number;
}

/** Fit the layout's world extent into the minimap box with a margin. */
export function fitTransform(
  layout: LayoutWire,
  width: number,
  height: number,
  margin = 8,
): MinimapTransform {
  if (layout.images.length === 0) {
    return { scale: 1, offsetX: width / 2, offsetY: height / 2 };
  }
  const xs = layout.images.map((img) => img.x);
  const ys = layout.images.map((img) => img.y);
  const minX = Math.min(...xs);
  const maxX = Math.max(...xs);
  const minY = Math.min(...ys);
  const maxY = Math.max(...ys);
  const spanX = Math.max(maxX - minX, 1);
  const spanY = Math.max(maxY - minY, 1);
  const scale = Math.min(
    (width - 2 * margin) / spanX,
    (height - 2 * margin) / spanY,
  );
  return {
    scale,
    offsetX: margin - minX * scale + (width - 2 * margin - spanX * scale) / 2,
    offsetY: margin - minY * scale + (height - 2 * margin - spanY * scale) / 2,
  };
}

export function project(
  transform: MinimapTransform,
  x: number,
  y: number,
): [number, number] {
  return [x * transform.scale + transform.offsetX, y * transform.scale + transform.offsetY];
}

export function drawMinimap(
  ctx: DrawContext,
  layout: LayoutWire,
  view: ViewState,
  width: number,
  height: number,
  mainCanvasWidth: number,
  mainCanvasHeight: number,
): void {
  ctx.fillStyle = "#1d1f26";
  ctx.clearRect(0, 0, width, height);
  ctx.fillRect(0, 0, width, height);
  const transform = fitTransform(layout, width, height);

  const colorByCluster = new Map<number, number>();
  for (const cluster of layout.clusters) {
    colorByCluster.set(cluster.id, cluster.color);
  }
  for (const image of layout.images) {
    const [x, y] = project(transform, image.x, image.y);
    ctx.fillStyle = clusterColor(colorByCluster.get(image.cluster) ?? image.cluster);
    ctx.fillRect(x - 2, y - 2, 4, 4);
  }
  for (const entry of layout.minimap ?? []) {
    const [x0, y0] = project(transform, entry.bounding_box[0], entry.bounding_box[1]);
    const [x1, y1] = project(transform, entry.bounding_box[2], entry.bounding_box[3]);
    ctx.strokeStyle = clusterColor(entry.color);
    ctx.lineWidth = 1;
    ctx.strokeRect(x0, y0, Math.max(x1 - x0, 2), Math.max(y1 - y0, 2));
  }

  // viewport rectangle: what the main canvas currently shows, in world units
  const { viewport } = view;
  const halfW = mainCanvasWidth / 2 / viewport.zoom;
  const halfH = mainCanvasHeight / 2 / viewport.zoom;
  const [vx0, vy0] = project(transform, viewport.centerX - halfW, viewport.centerY - halfH);
  const [vx1, vy1] = project(transform, viewport.centerX + halfW, viewport.centerY + halfH);
  ctx.strokeStyle = "#ffffff";
  ctx.lineWidth = 1;
  ctx.strokeRect(vx0, vy0, vx1 - vx0, vy1 - vy0);
}
