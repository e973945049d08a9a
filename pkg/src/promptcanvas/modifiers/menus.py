"""Per-image, per-cluster, and cluster-unique modifier menus."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..embeddings import CaptionProvider, EmbeddingVector
from ..errors import SessionLookupError
from ..layout import CanvasLayout
from .corpus import ModifierCorpus, score_modifiers

DEFAULT_TOP_N = 15


@dataclass
class ModifierMenu:
    image_modifiers: list[tuple[str, float]]
    cluster_modifiers: list[tuple[str, float]]
    cluster_unique_modifiers: list[tuple[str, float]]
    caption: str

    def to_dict(self) -> dict:
        return {
            "image_modifiers": [[p, s] for p, s in self.image_modifiers],
            "cluster_modifiers": [[p, s] for p, s in self.cluster_modifiers],
            "cluster_unique_modifiers": [
                [p, s] for p, s in self.cluster_unique_modifiers
            ],
            "caption": self.caption,
        }


def aggregate_cluster(
    corpus: ModifierCorpus,
    member_embeddings: list[EmbeddingVector],
    top_n: int = DEFAULT_TOP_N,
) -> list[tuple[str, float]]:
    """Score per modifier = mean cosine similarity over cluster members."""
    if not member_embeddings:
        raise SessionLookupError("cluster aggregation needs at least one member")
    if top_n <= 0 or not len(corpus):
        return []
    members = np.stack([
        vec.values if vec.normalized else vec.values / np.linalg.norm(vec.values)
        for vec in member_embeddings
    ])
    sims = (corpus.matrix @ members.T).mean(axis=1)
    order = sorted(range(len(corpus)),
                   key=lambda i: (-sims[i], corpus.entries[i].phrase))
    return [(corpus.entries[i].phrase, float(sims[i])) for i in order[:top_n]]


def image_menu(
    image_id: str,
    layout: CanvasLayout,
    corpus: ModifierCorpus,
    caption_provider: CaptionProvider,
    embeddings: dict[str, EmbeddingVector],
    image_pixels: bytes | None,
    top_n: int = DEFAULT_TOP_N,
) -> ModifierMenu:
    """Menus for one image: its own ranking, its cluster's, and what is
    unique to that cluster versus every other cluster's aggregated set."""
    if image_id not in layout.base_positions:
        raise SessionLookupError(f"image {image_id!r} is not in the current layout")
    own = layout.cluster_of(image_id)

    aggregated: dict[int, list[tuple[str, float]]] = {}
    for cluster in layout.clusters:
        members = [embeddings[m] for m in cluster.member_ids if m in embeddings]
        aggregated[cluster.id] = aggregate_cluster(corpus, members, top_n)

    other_phrases: set[str] = set()
    for cluster_id, ranking in aggregated.items():
        if cluster_id != own.id:
            other_phrases.update(phrase for phrase, _ in ranking)

    cluster_modifiers = aggregated[own.id]
    unique = [(p, s) for p, s in cluster_modifiers if p not in other_phrases]

    caption = caption_provider.caption_image(image_pixels) if image_pixels else ""
    return ModifierMenu(
        image_modifiers=score_modifiers(corpus, embeddings[image_id], top_n),
        cluster_modifiers=cluster_modifiers,
        cluster_unique_modifiers=unique,
        caption=caption,
    )
