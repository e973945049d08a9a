"""Modifier corpus: phrases and artist names scored against image embeddings.

The corpus file is UTF-8 lines of `phrase<TAB>category` with category one
of {phrase, artist}. All entries are embedded once at load, into the same
joint space the image embeddings live in.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..embeddings import EmbeddingProvider, EmbeddingVector
from ..errors import ContractViolation, DimensionMismatchError, FormatError

CATEGORIES = ("phrase", "artist")
DEFAULT_CORPUS_PATH = Path(__file__).parent.parent / "data" / "modifier_corpus.tsv"


@dataclass
class ModifierEntry:
    phrase: str
    category: str

    def __post_init__(self):
        if self.category not in CATEGORIES:
            raise ContractViolation(f"unknown modifier category {self.category!r}")


class ModifierCorpus:
    """Immutable after load; scoring is read-only and safely concurrent."""

    def __init__(self, entries: list[ModifierEntry], matrix: np.ndarray,
                 provider_id: str):
        if len(entries) != matrix.shape[0]:
            raise ContractViolation("entries and embedding matrix disagree on length")
        self.entries = entries
        self.matrix = matrix
        self.provider_id = provider_id

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def dimension(self) -> int:
        return self.matrix.shape[1] if len(self.entries) else 0

    @property
    def phrases(self) -> list[str]:
        return [e.phrase for e in self.entries]

    @classmethod
    def from_entries(cls, entries: list[ModifierEntry],
                     provider: EmbeddingProvider) -> "ModifierCorpus":
        unique: dict[str, ModifierEntry] = {}
        for entry in entries:
            unique.setdefault(entry.phrase.lower(), entry)
        kept = list(unique.values())
        if not kept:
            return cls([], np.zeros((0, 0)), provider.provider_id)
        matrix = np.stack([provider.embed_text(e.phrase).values for e in kept])
        return cls(kept, matrix, provider.provider_id)

    @classmethod
    def load_tsv(cls, path: str | Path, provider: EmbeddingProvider) -> "ModifierCorpus":
        entries = []
        try:
            lines = Path(path).read_text(encoding="utf-8").splitlines()
        except OSError as exc:
            raise FormatError(f"cannot read modifier corpus {path}: {exc}") from exc
        for lineno, line in enumerate(lines, start=1):
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 2 or parts[1] not in CATEGORIES:
                raise FormatError(
                    f"{path}:{lineno}: expected 'phrase<TAB>phrase|artist', got {line!r}"
                )
            entries.append(ModifierEntry(phrase=parts[0].strip(), category=parts[1]))
        return cls.from_entries(entries, provider)


def score_modifiers(
    corpus: ModifierCorpus, image_embedding: EmbeddingVector, top_n: int
) -> list[tuple[str, float]]:
    """Top-n corpus phrases by cosine similarity, descending; ties by phrase."""
    if image_embedding.modality != "image":
        raise ContractViolation("modifier scoring expects an image-modality embedding")
    if top_n <= 0 or not len(corpus):
        return []
    if image_embedding.dimension != corpus.dimension:
        raise DimensionMismatchError(
            f"embedding dimension {image_embedding.dimension} != corpus "
            f"dimension {corpus.dimension}"
        )
    q = image_embedding.values
    if not image_embedding.normalized:
        q = q / np.linalg.norm(q)
    sims = corpus.matrix @ q
    order = sorted(range(len(corpus)),
                   key=lambda i: (-sims[i], corpus.entries[i].phrase))
    return [(corpus.entries[i].phrase, float(sims[i])) for i in order[:top_n]]
