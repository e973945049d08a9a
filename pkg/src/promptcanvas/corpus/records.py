"""Community prompt records."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..embeddings import EmbeddingVector
from ..errors import ContractViolation


def split_segments(text: str) -> list[str]:
    """Split on commas, trim whitespace, drop empty segments."""
    return [seg.strip() for seg in text.split(",") if seg.strip()]


@dataclass
class PromptRecord:
    """One community prompt with its NSFW score and comma-split segments."""

    id: str
    text: str
    nsfw_score: float
    segments: list[str] = field(default_factory=list)
    embedding: EmbeddingVector | None = None

    def __post_init__(self):
        if not self.segments:
            self.segments = split_segments(self.text)
        if not 0.0 <= self.nsfw_score <= 1.0:
            raise ContractViolation(
                f"nsfw_score must be in [0, 1], got {self.nsfw_score}"
            )
