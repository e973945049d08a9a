"""Generation request/result types.

Request defaults mirror the standard study settings: 50 denoising steps,
CFG scale 7.5, Euler A sampling, 512x512.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..embeddings import EmbeddingVector
from ..errors import ContractViolation

MAX_BATCH_SIZE = 100


@dataclass
class GenerationRequest:
    prompt: str
    negative_prompt: str = ""
    seed: int | None = None  # None = random per image
    steps: int = 50
    cfg_scale: float = 7.5
    sampler_id: str = "euler_a"
    width: int = 512
    height: int = 512
    batch_size: int = 1

    def __post_init__(self):
        if not self.prompt or not self.prompt.strip():
            raise ContractViolation("prompt must be non-empty")
        if not 1 <= self.batch_size <= MAX_BATCH_SIZE:
            raise ContractViolation(
                f"batch_size must be in [1, {MAX_BATCH_SIZE}], got {self.batch_size}"
            )
        if self.steps < 1 or self.cfg_scale <= 0 or self.width < 1 or self.height < 1:
            raise ContractViolation("steps, cfg_scale, width, height must be positive")

    def to_dict(self) -> dict:
        return {
            "prompt": self.prompt,
            "negative_prompt": self.negative_prompt,
            "seed": self.seed,
            "steps": self.steps,
            "cfg_scale": self.cfg_scale,
            "sampler_id": self.sampler_id,
            "width": self.width,
            "height": self.height,
            "batch_size": self.batch_size,
        }


@dataclass
class GeneratedImage:
    id: str
    pixels: bytes | None
    source_prompt_id: str
    seed: int
    embedding: EmbeddingVector | None = None
    blocked: bool = False
    failed: bool = False
    error: str | None = None
    missing: bool = False  # set when a persisted pixel file is gone at load
