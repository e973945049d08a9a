"""2D canvas layout: spacing, slider scaling, clustering, minimap.

Pipeline order is fixed: reduce to 2D, rescale so the closest pair of
images sits exactly MIN_SPACING_PX apart, cluster the on-screen positions
with affinity propagation, assign stable colors by cluster id. The scale
slider multiplies base positions and never feeds back into clustering.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ..embeddings import EmbeddingVector
from ..errors import ContractViolation
from .affinity import affinity_propagation
from .reduce import reduce_2d

MIN_SPACING_PX = 128.0
SCALE_MIN = 0.5
SCALE_MAX = 3.0


@dataclass
class Cluster:
    id: int
    member_ids: list[str]
    exemplar_id: str
    color: int

    def __post_init__(self):
        if not self.member_ids:
            raise ContractViolation("cluster must have at least one member")
        if self.exemplar_id not in self.member_ids:
            raise ContractViolation("exemplar must be a cluster member")


@dataclass
class ClusterResult:
    clusters: list[Cluster]
    degenerate: bool = False


@dataclass
class CanvasLayout:
    positions: dict[str, tuple[float, float]]
    base_positions: dict[str, tuple[float, float]]
    scale: float
    clusters: list[Cluster]
    reduction_seed: int
    scale_clamped: bool = False
    degenerate_clustering: bool = False

    def image_ids(self) -> list[str]:
        return list(self.base_positions.keys())

    def cluster_of(self, image_id: str) -> Cluster:
        for cluster in self.clusters:
            if image_id in cluster.member_ids:
                return cluster
        raise KeyError(image_id)

    def to_wire(self) -> dict:
        """The JSON shape consumed by the UI and `layout export`."""
        cluster_index = {}
        for cluster in self.clusters:
            for member in cluster.member_ids:
                cluster_index[member] = cluster.id
        return {
            "images": [
                {"id": image_id, "x": x, "y": y, "cluster": cluster_index[image_id]}
                for image_id, (x, y) in self.positions.items()
            ],
            "clusters": [
                {"id": c.id, "color": c.color, "exemplar": c.exemplar_id}
                for c in self.clusters
            ],
            "scale": self.scale,
        }

    def to_dict(self) -> dict:
        return {
            "positions": {k: [x, y] for k, (x, y) in self.positions.items()},
            "base_positions": {k: [x, y] for k, (x, y) in self.base_positions.items()},
            "scale": self.scale,
            "clusters": [
                {
                    "id": c.id,
                    "member_ids": list(c.member_ids),
                    "exemplar_id": c.exemplar_id,
                    "color": c.color,
                }
                for c in self.clusters
            ],
            "reduction_seed": self.reduction_seed,
            "scale_clamped": self.scale_clamped,
            "degenerate_clustering": self.degenerate_clustering,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "CanvasLayout":
        return cls(
            positions={k: (v[0], v[1]) for k, v in raw["positions"].items()},
            base_positions={k: (v[0], v[1]) for k, v in raw["base_positions"].items()},
            scale=float(raw["scale"]),
            clusters=[
                Cluster(
                    id=int(c["id"]),
                    member_ids=list(c["member_ids"]),
                    exemplar_id=str(c["exemplar_id"]),
                    color=int(c["color"]),
                )
                for c in raw["clusters"]
            ],
            reduction_seed=int(raw["reduction_seed"]),
            scale_clamped=bool(raw.get("scale_clamped", False)),
            degenerate_clustering=bool(raw.get("degenerate_clustering", False)),
        )


def _min_pairwise_distance(coords: np.ndarray) -> float:
    diff = coords[:, None, :] - coords[None, :, :]
    d2 = np.sum(diff * diff, axis=2)
    np.fill_diagonal(d2, np.inf)
    return float(np.sqrt(d2.min()))


def normalize_spacing(
    coords: Sequence[tuple[float, float]],
    min_dist: float = MIN_SPACING_PX,
    jitter_seed: int = 0,
) -> list[tuple[float, float]]:
    """Uniformly rescale so the minimum pairwise distance equals min_dist.

    Exactly coincident points are first jittered by a seeded perturbation
    of magnitude 1e-3 so the scale factor is well defined.
    """
    points = np.asarray(coords, dtype=np.float64).reshape(len(coords), 2)
    if len(coords) <= 1:
        return [tuple(p) for p in points]

    seen: dict[tuple[float, float], int] = {}
    rng = np.random.RandomState(jitter_seed)
    for i in range(points.shape[0]):
        key = (float(points[i, 0]), float(points[i, 1]))
        count = seen.get(key, 0)
        seen[key] = count + 1
        if count:
            angle = rng.uniform(0.0, 2.0 * np.pi)
            points[i] += 1e-3 * count * np.array([np.cos(angle), np.sin(angle)])

    current = _min_pairwise_distance(points)
    if current == 0.0:
        raise ContractViolation("coincident points persisted after jitter")
    factor = min_dist / current
    return [(float(x * factor), float(y * factor)) for x, y in points]


def clamp_scale(s: float) -> tuple[float, bool]:
    clamped = min(max(s, SCALE_MIN), SCALE_MAX)
    return clamped, clamped != s


def apply_scale(layout: CanvasLayout, s: float) -> CanvasLayout:
    """Slider transform: positions = base_positions * clamp(s)."""
    value, was_clamped = clamp_scale(s)
    return CanvasLayout(
        positions={
            k: (x * value, y * value) for k, (x, y) in layout.base_positions.items()
        },
        base_positions=dict(layout.base_positions),
        scale=value,
        clusters=layout.clusters,
        reduction_seed=layout.reduction_seed,
        scale_clamped=was_clamped,
        degenerate_clustering=layout.degenerate_clustering,
    )


def cluster_positions(
    coords: Sequence[tuple[float, float]],
    ids: Sequence[str] | None = None,
    seed: int = 0,
) -> ClusterResult:
    """Affinity propagation over screen positions.

    Similarity is negative squared Euclidean distance, preference the
    median pairwise similarity; the cluster count is not an input.
    """
    n = len(coords)
    if ids is None:
        ids = [str(i) for i in range(n)]
    if len(ids) != n:
        raise ContractViolation("ids and coords must have equal length")
    if n == 0:
        return ClusterResult(clusters=[])
    points = np.asarray(coords, dtype=np.float64).reshape(n, 2)
    diff = points[:, None, :] - points[None, :, :]
    similarity = -np.sum(diff * diff, axis=2)
    result = affinity_propagation(similarity, seed=seed)
    clusters = []
    for k, exemplar_idx in enumerate(result.exemplars):
        member_idx = np.flatnonzero(result.labels == k)
        clusters.append(
            Cluster(
                id=k,
                member_ids=[ids[i] for i in member_idx],
                exemplar_id=ids[int(exemplar_idx)],
                color=k,
            )
        )
    return ClusterResult(clusters=clusters, degenerate=not result.converged)


def layout_pipeline(
    entries: Sequence[tuple[str, EmbeddingVector]],
    seed: int,
    reducer: Callable[[list[EmbeddingVector], int], list[tuple[float, float]]] = reduce_2d,
) -> CanvasLayout:
    """reduce -> normalize_spacing -> cluster_positions -> colors.

    The reducer is a hook; the shipped default is the exact t-SNE.
    """
    ids = [image_id for image_id, _ in entries]
    if len(set(ids)) != len(ids):
        raise ContractViolation("duplicate image ids in layout input")
    embeddings = [vec for _, vec in entries]
    raw = reducer(embeddings, seed)
    spaced = normalize_spacing(raw, MIN_SPACING_PX, jitter_seed=seed)
    clustering = cluster_positions(spaced, ids=ids, seed=seed)
    base = {image_id: (x, y) for image_id, (x, y) in zip(ids, spaced)}
    return CanvasLayout(
        positions=dict(base),
        base_positions=base,
        scale=1.0,
        clusters=clustering.clusters,
        reduction_seed=seed,
        degenerate_clustering=clustering.degenerate,
    )


@dataclass
class MinimapEntry:
    cluster_id: int
    color: int
    centroid: tuple[float, float]
    bounding_box: tuple[float, float, float, float]  # min_x, min_y, max_x, max_y


def minimap_summary(layout: CanvasLayout) -> list[MinimapEntry]:
    """One entry per cluster: centroid is the mean member position."""
    entries = []
    for cluster in layout.clusters:
        pts = np.asarray([layout.positions[m] for m in cluster.member_ids])
        centroid = pts.mean(axis=0)
        entries.append(
            MinimapEntry(
                cluster_id=cluster.id,
                color=cluster.color,
                centroid=(float(centroid[0]), float(centroid[1])),
                bounding_box=(
                    float(pts[:, 0].min()),
                    float(pts[:, 1].min()),
                    float(pts[:, 0].max()),
                    float(pts[:, 1].max()),
                ),
            )
        )
    return entries


def validate_layout(layout: CanvasLayout) -> list[str]:
    """Check CanvasLayout invariants; returns human-readable violations."""
    problems = []
    ids = set(layout.base_positions.keys())
    if set(layout.positions.keys()) != ids:
        problems.append("positions and base_positions cover different ids")
    if not SCALE_MIN <= layout.scale <= SCALE_MAX:
        problems.append(f"scale {layout.scale} outside [{SCALE_MIN}, {SCALE_MAX}]")
    for image_id in ids:
        bx, by = layout.base_positions[image_id]
        px, py = layout.positions[image_id]
        if abs(px - bx * layout.scale) > 1e-9 or abs(py - by * layout.scale) > 1e-9:
            problems.append(f"{image_id}: positions != base_positions * scale")
            break
    if len(ids) >= 2:
        pts = np.asarray(list(layout.base_positions.values()))
        dmin = _min_pairwise_distance(pts)
        if abs(dmin - MIN_SPACING_PX) > 1e-6:
            problems.append(
                f"base min pairwise distance {dmin} != {MIN_SPACING_PX}"
            )
    covered: set[str] = set()
    colors = set()
    for cluster in layout.clusters:
        members = set(cluster.member_ids)
        if covered & members:
            problems.append(f"cluster {cluster.id} overlaps another cluster")
        covered |= members
        if cluster.color in colors:
            problems.append(f"duplicate cluster color {cluster.color}")
        colors.add(cluster.color)
    if covered != ids:
        problems.append("clusters do not partition the image ids")
    return problems
