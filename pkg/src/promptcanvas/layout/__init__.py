from .canvas import (
    MIN_SPACING_PX,
    SCALE_MAX,
    SCALE_MIN,
    CanvasLayout,
    Cluster,
    ClusterResult,
    MinimapEntry,
    apply_scale,
    clamp_scale,
    cluster_positions,
    layout_pipeline,
    minimap_summary,
    normalize_spacing,
    validate_layout,
)
from .reduce import auto_perplexity, reduce_2d
from .affinity import AffinityResult, affinity_propagation, median_pairwise

__all__ = [
    "CanvasLayout",
    "Cluster",
    "ClusterResult",
    "MinimapEntry",
    "AffinityResult",
    "reduce_2d",
    "auto_perplexity",
    "normalize_spacing",
    "apply_scale",
    "clamp_scale",
    "cluster_positions",
    "layout_pipeline",
    "minimap_summary",
    "validate_layout",
    "affinity_propagation",
    "median_pairwise",
    "MIN_SPACING_PX",
    "SCALE_MIN",
    "SCALE_MAX",
]
