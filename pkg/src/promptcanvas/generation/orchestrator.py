"""Batch generation and embedding attachment."""

from __future__ import annotations

import uuid
from typing import Callable

from ..embeddings import EmbeddingProvider
from ..errors import GenerationError, InputError, ProviderError
from .backends import ImageBackend
from .requests import GeneratedImage, GenerationRequest

SafetyFilter = Callable[[str, bytes], bool]  # returns True when blocked


def substring_safety_filter(needle: str) -> SafetyFilter:
    """Toy filter flagging any prompt containing the needle."""

    def check(prompt: str, _pixels: bytes) -> bool:
        return needle.lower() in prompt.lower()

    return check


def generate_batch(
    backend: ImageBackend,
    request: GenerationRequest,
    safety_filter: SafetyFilter | None = None,
) -> list[GeneratedImage]:
    """Exactly batch_size results in submission order.

    Blocked images are flagged, never dropped; a per-image backend failure
    flags that image and the batch continues.
    """
    raw_images = backend.generate(request)
    if len(raw_images) != request.batch_size:
        raise GenerationError(
            f"backend returned {len(raw_images)} images for batch_size "
            f"{request.batch_size}"
        )
    results = []
    for raw in raw_images:
        image = GeneratedImage(
            id=uuid.uuid4().hex[:12],
            pixels=raw.png,
            source_prompt_id="",
            seed=raw.seed,
            failed=raw.error is not None,
            error=raw.error,
        )
        if image.pixels is not None and safety_filter is not None:
            image.blocked = safety_filter(request.prompt, image.pixels)
        results.append(image)
    return results


def embed_batch(
    provider: EmbeddingProvider, images: list[GeneratedImage]
) -> list[GeneratedImage]:
    """Attach an image-modality embedding to every unblocked image.

    Idempotent: images that already carry an embedding are left untouched
    (no provider calls). Blocked and failed images are skipped. A provider
    failure flags the image and continues.
    """
    for image in images:
        if image.blocked or image.failed or image.embedding is not None:
            continue
        if image.pixels is None:
            image.failed = True
            image.error = image.error or "no pixels to embed"
            continue
        try:
            image.embedding = provider.embed_image(image.pixels)
        except (ProviderError, InputError) as exc:
            image.failed = True
            image.error = f"embedding failed: {exc}"
    return images
