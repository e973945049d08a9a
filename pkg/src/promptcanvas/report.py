"""Session reports: layout figures plus delimited data files.

Writes, for one session directory:
    layout.csv      one row per laid-out image (id, x, y, cluster, color, ...)
    clusters.csv    one row per cluster (id, color, exemplar, centroid, bbox)
    layout.png      the canvas scatter, cluster-colored, exemplars ringed
    minimap.png     cluster centroids and bounding boxes, viewport-style
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .layout import CanvasLayout, minimap_summary
from .session.model import Session

PALETTE = plt.get_cmap("tab10")


def _color_for(index: int):
    return PALETTE(index % 10)


def write_layout_csv(session: Session, layout: CanvasLayout, path: Path) -> int:
    cluster_of = {}
    color_of = {}
    for cluster in layout.clusters:
        for member in cluster.member_ids:
            cluster_of[member] = cluster.id
            color_of[member] = cluster.color
    prompt_of = {}
    seed_of = {}
    for batch in session.batches:
        for image in batch.images:
            prompt_of[image.id] = batch.prompt_id
            seed_of[image.id] = image.seed
    rows = 0
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["image_id", "x", "y", "cluster", "color", "prompt_id", "seed"])
        for image_id, (x, y) in layout.positions.items():
            writer.writerow([
                image_id, f"{x:.6f}", f"{y:.6f}", cluster_of[image_id],
                color_of[image_id], prompt_of.get(image_id, ""),
                seed_of.get(image_id, ""),
            ])
            rows += 1
    return rows


def write_clusters_csv(layout: CanvasLayout, path: Path) -> int:
    entries = minimap_summary(layout)
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow([
            "cluster_id", "color", "exemplar_id", "size",
            "centroid_x", "centroid_y", "min_x", "min_y", "max_x", "max_y",
        ])
        by_id = {c.id: c for c in layout.clusters}
        for entry in entries:
            cluster = by_id[entry.cluster_id]
            writer.writerow([
                entry.cluster_id, entry.color, cluster.exemplar_id,
                len(cluster.member_ids),
                f"{entry.centroid[0]:.6f}", f"{entry.centroid[1]:.6f}",
                f"{entry.bounding_box[0]:.6f}", f"{entry.bounding_box[1]:.6f}",
                f"{entry.bounding_box[2]:.6f}", f"{entry.bounding_box[3]:.6f}",
            ])
    return len(entries)


def render_layout_figure(layout: CanvasLayout, path: Path, title: str = "") -> None:
    fig, ax = plt.subplots(figsize=(8, 8))
    exemplars = {c.exemplar_id for c in layout.clusters}
    for cluster in layout.clusters:
        xs = [layout.positions[m][0] for m in cluster.member_ids]
        ys = [layout.positions[m][1] for m in cluster.member_ids]
        ax.scatter(xs, ys, s=90, color=_color_for(cluster.color),
                   label=f"cluster {cluster.id}", alpha=0.85, edgecolors="none")
    for image_id in exemplars:
        x, y = layout.positions[image_id]
        ax.scatter([x], [y], s=220, facecolors="none", edgecolors="black",
                   linewidths=1.4, zorder=3)
    ax.set_aspect("equal")
    ax.set_xlabel("canvas x (px)")
    ax.set_ylabel("canvas y (px)")
    if title:
        ax.set_title(title)
    if layout.clusters:
        ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_minimap_figure(layout: CanvasLayout, path: Path) -> None:
    fig, ax = plt.subplots(figsize=(4, 4))
    for entry in minimap_summary(layout):
        x0, y0, x1, y1 = entry.bounding_box
        color = _color_for(entry.color)
        ax.add_patch(plt.Rectangle((x0, y0), max(x1 - x0, 1.0), max(y1 - y0, 1.0),
                                   fill=False, edgecolor=color, linewidth=1.2))
        ax.scatter([entry.centroid[0]], [entry.centroid[1]], s=40, color=color)
    ax.set_aspect("equal")
    ax.autoscale_view()
    ax.relim()
    ax.set_xticks([])
    ax.set_yticks([])
    ax.set_title("minimap")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_session_report(session: Session, out_dir: str | Path,
                         scale: float | None = None) -> dict:
    """Render figures and delimited files; returns a manifest of outputs."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    layout = session.current_layout
    if layout is None:
        raise ValueError("session has no layout to report")
    if scale is not None:
        from .layout import apply_scale

        layout = apply_scale(layout, scale)
    outputs = {}
    outputs["layout_csv"] = str(out_dir / "layout.csv")
    rows = write_layout_csv(session, layout, out_dir / "layout.csv")
    outputs["clusters_csv"] = str(out_dir / "clusters.csv")
    clusters = write_clusters_csv(layout, out_dir / "clusters.csv")
    outputs["layout_png"] = str(out_dir / "layout.png")
    render_layout_figure(
        layout, out_dir / "layout.png",
        title=f"session {session.id} ({rows} images, {clusters} clusters)",
    )
    outputs["minimap_png"] = str(out_dir / "minimap.png")
    render_minimap_figure(layout, out_dir / "minimap.png")
    outputs["images"] = rows
    outputs["clusters"] = clusters
    return outputs
