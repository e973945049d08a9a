"""Embedding vector type and similarity math.

Vectors are plain float64 numpy arrays wrapped with provenance (modality,
provider id). Providers L2-normalize at ingestion so cosine similarity
reduces to a dot product everywhere downstream.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ContractViolation, DimensionMismatchError, ZeroVectorError

NORM_TOLERANCE = 1e-6


@dataclass(frozen=True)
class EmbeddingVector:
    """A fixed-dimension real vector with provenance."""

    values: np.ndarray
    modality: str  # "text" | "image"
    provider_id: str
    normalized: bool = field(default=False)

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", arr)
        if arr.ndim != 1 or arr.shape[0] < 2:
            raise ContractViolation(
                f"embedding must be a 1-D vector with dimension >= 2, got shape {arr.shape}"
            )
        if not np.all(np.isfinite(arr)):
            raise ContractViolation("embedding contains non-finite components")
        if self.modality not in ("text", "image"):
            raise ContractViolation(f"unknown modality {self.modality!r}")
        if self.normalized:
            norm = float(np.linalg.norm(arr))
            if abs(norm - 1.0) > NORM_TOLERANCE:
                raise ContractViolation(
                    f"vector flagged normalized but has norm {norm!r}"
                )

    @property
    def dimension(self) -> int:
        return int(self.values.shape[0])

    def __eq__(self, other) -> bool:
        if not isinstance(other, EmbeddingVector):
            return NotImplemented
        return (
            self.modality == other.modality
            and self.provider_id == other.provider_id
            and self.normalized == other.normalized
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self):
        return hash((self.modality, self.provider_id, self.values.tobytes()))


def l2_normalize(values: np.ndarray) -> np.ndarray:
    """Scale to unit Euclidean norm. Raises on the zero vector."""
    arr = np.asarray(values, dtype=np.float64)
    norm = float(np.linalg.norm(arr))
    if norm == 0.0:
        raise ZeroVectorError("cannot normalize the zero vector")
    return arr / norm


def cosine_similarity(a: EmbeddingVector, b: EmbeddingVector) -> float:
    """dot(a, b) / (|a| |b|), in [-1, 1]. Symmetric in its arguments."""
    if a.dimension != b.dimension:
        raise DimensionMismatchError(
            f"dimension mismatch: {a.dimension} vs {b.dimension}"
        )
    na = float(np.linalg.norm(a.values))
    nb = float(np.linalg.norm(b.values))
    if na == 0.0 or nb == 0.0:
        raise ZeroVectorError("cosine similarity is undefined for the zero vector")
    sim = float(np.dot(a.values, b.values) / (na * nb))
    # guard against rounding drifting a hair past the mathematical range
    return max(-1.0, min(1.0, sim))
