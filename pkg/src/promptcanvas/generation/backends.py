"""Image generation backends.

MockImageBackend renders seeded value-noise tinted by a prompt-keyed base
color: images from one prompt share a palette while distinct prompts look
clearly different, which keeps layouts and thumbnails meaningful without a
GPU. Pixel bytes are a pure function of (prompt, seed, width, height).

HttpImageBackend speaks a txt2img-style JSON exchange: the request carries
every GenerationRequest field, the response returns base64 PNGs + seeds.
"""

from __future__ import annotations

import base64
import hashlib
import io
import random
from dataclasses import dataclass

import numpy as np
from PIL import Image

from .._http import TOKEN_ENV, post_json
from ..errors import GenerationError, ProviderError
from .requests import GenerationRequest


@dataclass
class RawImage:
    png: bytes | None
    seed: int
    error: str | None = None


class ImageBackend:
    def generate(self, request: GenerationRequest) -> list[RawImage]:
        raise NotImplementedError


def _seed_sequence(request: GenerationRequest) -> list[int]:
    if request.seed is not None:
        return [request.seed + i for i in range(request.batch_size)]
    rng = random.SystemRandom()
    seeds: set[int] = set()
    while len(seeds) < request.batch_size:
        seeds.add(rng.randrange(0, 2**31))
    return sorted(seeds)


class MockImageBackend(ImageBackend):
    """Deterministic offline renderer."""

    def __init__(self, fail_seeds: set[int] | None = None):
        self.fail_seeds = fail_seeds or set()

    def generate(self, request: GenerationRequest) -> list[RawImage]:
        results = []
        for seed in _seed_sequence(request):
            if seed in self.fail_seeds:
                results.append(RawImage(png=None, seed=seed,
                                        error=f"mock failure for seed {seed}"))
                continue
            png = render_mock_image(request.prompt, seed, request.width, request.height)
            results.append(RawImage(png=png, seed=seed))
        return results


def render_mock_image(prompt: str, seed: int, width: int, height: int) -> bytes:
    base_digest = hashlib.blake2b(prompt.encode("utf-8"), digest_size=8).digest()
    base = np.array([40 + b % 176 for b in base_digest[:3]], dtype=np.float64)

    noise_key = f"{prompt}|{seed}|{width}|{height}".encode("utf-8")
    noise_seed = int.from_bytes(
        hashlib.blake2b(noise_key, digest_size=4).digest(), "little"
    )
    rng = np.random.RandomState(noise_seed)
    coarse = rng.uniform(-1.0, 1.0, size=(8, 8)).astype(np.float32)
    smooth = Image.fromarray(coarse, mode="F").resize((width, height), Image.BILINEAR)
    noise = np.asarray(smooth, dtype=np.float64)

    channels = [
        np.clip(base[c] + noise * (30.0 + 8.0 * c), 0, 255).astype(np.uint8)
        for c in range(3)
    ]
    img = Image.fromarray(np.stack(channels, axis=-1), mode="RGB")
    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return buf.getvalue()


class HttpImageBackend(ImageBackend):
    def __init__(self, endpoint: str, token_env: str = TOKEN_ENV):
        self.endpoint = endpoint
        self.token_env = token_env

    def generate(self, request: GenerationRequest) -> list[RawImage]:
        try:
            body = post_json(self.endpoint, request.to_dict(), self.token_env)
        except ProviderError as exc:
            raise GenerationError(f"image backend unreachable: {exc}") from exc
        try:
            images = body["images"]
            seeds = body["seeds"]
        except (KeyError, TypeError) as exc:
            raise GenerationError(f"malformed backend response: {body!r}") from exc
        if len(images) != len(seeds):
            raise GenerationError("backend returned mismatched images/seeds")
        results = []
        for b64, seed in zip(images, seeds):
            if b64 is None:
                results.append(RawImage(png=None, seed=int(seed),
                                        error="backend returned no image"))
                continue
            try:
                results.append(RawImage(png=base64.b64decode(b64), seed=int(seed)))
            except (ValueError, TypeError):
                results.append(RawImage(png=None, seed=int(seed),
                                        error="undecodable base64 image"))
        return results
