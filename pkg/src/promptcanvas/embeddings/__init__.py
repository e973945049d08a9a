from .vectors import EmbeddingVector, cosine_similarity, l2_normalize
from .providers import (
    CaptionProvider,
    EmbeddingProvider,
    HttpCaptionProvider,
    HttpEmbeddingProvider,
    StaticCaptionProvider,
    StubCaptionProvider,
    StubEmbeddingProvider,
)

__all__ = [
    "EmbeddingVector",
    "cosine_similarity",
    "l2_normalize",
    "EmbeddingProvider",
    "CaptionProvider",
    "StubEmbeddingProvider",
    "StubCaptionProvider",
    "StaticCaptionProvider",
    "HttpEmbeddingProvider",
    "HttpCaptionProvider",
]
