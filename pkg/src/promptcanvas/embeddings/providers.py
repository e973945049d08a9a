"""Embedding and caption providers.

Two flavors of each: a remote HTTP client speaking a one-shot JSON
exchange, and a deterministic offline stub. Stubs are byte-reproducible
across runs for a fixed seed (all hashing goes through keyed blake2b, never
Python's randomized hash()).
"""

from __future__ import annotations

import base64
import hashlib
import io

import numpy as np
from PIL import Image, UnidentifiedImageError

from .._http import TOKEN_ENV, post_json
from ..errors import InputError, ProviderError
from .vectors import EmbeddingVector, l2_normalize


class EmbeddingProvider:
    """Base provider: validates inputs, normalizes outputs.

    Subclasses implement the raw per-input vector computation.
    """

    kind = "abstract"

    def __init__(self, dimension: int, provider_id: str):
        if dimension < 2:
            raise ValueError("embedding dimension must be >= 2")
        self.dimension = dimension
        self.provider_id = provider_id

    def embed_text(self, text: str) -> EmbeddingVector:
        if not text or not text.strip():
            raise InputError("cannot embed empty text")
        values = self._embed_text_raw(text)
        return self._wrap(values, "text")

    def embed_image(self, image: bytes) -> EmbeddingVector:
        pixels = decode_image(image)
        values = self._embed_image_raw(pixels)
        return self._wrap(values, "image")

    def _wrap(self, values: np.ndarray, modality: str) -> EmbeddingVector:
        values = np.asarray(values, dtype=np.float64)
        if values.shape != (self.dimension,):
            raise ProviderError(
                f"provider {self.provider_id!r} returned shape {values.shape}, "
                f"expected ({self.dimension},)"
            )
        return EmbeddingVector(
            values=l2_normalize(values),
            modality=modality,
            provider_id=self.provider_id,
            normalized=True,
        )

    def _embed_text_raw(self, text: str) -> np.ndarray:
        raise NotImplementedError

    def _embed_image_raw(self, pixels: Image.Image) -> np.ndarray:
        raise NotImplementedError


def decode_image(payload: bytes) -> Image.Image:
    """Decode image bytes to RGB, or raise InputError."""
    try:
        img = Image.open(io.BytesIO(payload))
        img.load()
    except (UnidentifiedImageError, OSError, ValueError) as exc:
        raise InputError(f"undecodable image payload: {exc}") from exc
    return img.convert("RGB")


def _scatter(tokens: list[str], dimension: int, seed: int) -> np.ndarray:
    """Hash tokens into signed buckets (feature-hashing trick)."""
    key = seed.to_bytes(8, "little", signed=True)
    vec = np.zeros(dimension, dtype=np.float64)
    for tok in tokens:
        digest = hashlib.blake2b(tok.encode("utf-8"), key=key, digest_size=8).digest()
        idx = int.from_bytes(digest[:4], "little") % dimension
        sign = 1.0 if digest[4] & 1 else -1.0
        vec[idx] += sign
    if not np.any(vec):
        # pathological cancellation; pin a single bucket so the norm is nonzero
        fallback = hashlib.blake2b(b"|".join(t.encode() for t in tokens), key=key,
                                   digest_size=8).digest()
        vec[int.from_bytes(fallback[:4], "little") % dimension] = 1.0
    return vec


class StubEmbeddingProvider(EmbeddingProvider):
    """Deterministic offline embedder.

    Text: character n-grams (3..5, word-boundary marked) of lower-cased
    words, plus whole words and word bigrams, scattered into D signed
    buckets and L2-normalized. Texts sharing wordstems land near each
    other; unrelated strings are near-orthogonal.

    Images: an 8x8 fixed-stride pixel subsample, coarsely quantized, with
    position-tagged tokens through the same scatter.
    """

    kind = "deterministic_stub"

    def __init__(self, dimension: int = 64, seed: int = 0, provider_id: str | None = None):
        super().__init__(dimension, provider_id or f"stub-{dimension}-{seed}")
        self.seed = seed

    def _embed_text_raw(self, text: str) -> np.ndarray:
        words = text.lower().split()
        tokens: list[str] = []
        for word in words:
            tokens.append(f"w:{word}")
            marked = f"<{word}>"
            for n in (3, 4, 5):
                for i in range(len(marked) - n + 1):
                    tokens.append(f"c{n}:{marked[i:i + n]}")
        for a, b in zip(words, words[1:]):
            tokens.append(f"b:{a} {b}")
        return _scatter(tokens, self.dimension, self.seed)

    def _embed_image_raw(self, pixels: Image.Image) -> np.ndarray:
        w, h = pixels.size
        tokens: list[str] = []
        for j in range(8):
            for i in range(8):
                x = (i * w) // 8
                y = (j * h) // 8
                r, g, b = pixels.getpixel((x, y))
                tokens.append(f"p:{i}:{j}:{r // 32}:{g // 32}:{b // 32}")
        return _scatter(tokens, self.dimension, self.seed)


class HttpEmbeddingProvider(EmbeddingProvider):
    """Remote embedder: POST {"inputs": [...]} -> {"vectors": [[...]]}.

    Images are sent base64-encoded. Bearer token read from the environment.
    """

    kind = "remote_http"

    def __init__(self, endpoint: str, dimension: int, provider_id: str,
                 token_env: str = TOKEN_ENV):
        super().__init__(dimension, provider_id)
        self.endpoint = endpoint
        self.token_env = token_env

    def _fetch(self, inputs: list[str]) -> np.ndarray:
        body = post_json(self.endpoint, {"inputs": inputs}, self.token_env)
        try:
            vector = body["vectors"][0]
        except (KeyError, IndexError, TypeError) as exc:
            raise ProviderError(f"malformed embedding response: {body!r}") from exc
        return np.asarray(vector, dtype=np.float64)

    def _embed_text_raw(self, text: str) -> np.ndarray:
        return self._fetch([text])

    def embed_image(self, image: bytes) -> EmbeddingVector:
        decode_image(image)  # validate payload before shipping it anywhere
        values = self._fetch([base64.b64encode(image).decode("ascii")])
        return self._wrap(values, "image")

    def _embed_image_raw(self, pixels):  # pragma: no cover - unused override
        raise NotImplementedError


class CaptionProvider:
    """Turns image bytes into a one-line caption."""

    kind = "abstract"

    def caption_image(self, image: bytes) -> str:
        decode_image(image)
        caption = self._caption_raw(image)
        if not caption:
            raise ProviderError("caption provider returned an empty caption")
        return caption

    def _caption_raw(self, image: bytes) -> str:
        raise NotImplementedError


class StubCaptionProvider(CaptionProvider):
    """Deterministic caption: "image " + first 8 hex of the content hash."""

    kind = "deterministic_stub"

    def _caption_raw(self, image: bytes) -> str:
        return f"image {hashlib.sha256(image).hexdigest()[:8]}"


class StaticCaptionProvider(CaptionProvider):
    """Fixture caption provider returning one canned string."""

    kind = "transcript_fixture"

    def __init__(self, caption: str):
        self.caption = caption

    def _caption_raw(self, image: bytes) -> str:
        return self.caption


class HttpCaptionProvider(CaptionProvider):
    """Remote captioner: POST {"inputs": [b64]} -> {"captions": ["..."]}."""

    kind = "remote_http"

    def __init__(self, endpoint: str, token_env: str = TOKEN_ENV):
        self.endpoint = endpoint
        self.token_env = token_env

    def _caption_raw(self, image: bytes) -> str:
        payload = {"inputs": [base64.b64encode(image).decode("ascii")]}
        body = post_json(self.endpoint, payload, self.token_env)
        try:
            return str(body["captions"][0])
        except (KeyError, IndexError, TypeError) as exc:
            raise ProviderError(f"malformed caption response: {body!r}") from exc
