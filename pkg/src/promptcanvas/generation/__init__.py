from .requests import GenerationRequest, GeneratedImage
from .backends import HttpImageBackend, ImageBackend, MockImageBackend, RawImage
from .orchestrator import embed_batch, generate_batch, substring_safety_filter

__all__ = [
    "GenerationRequest",
    "GeneratedImage",
    "ImageBackend",
    "MockImageBackend",
    "HttpImageBackend",
    "RawImage",
    "generate_batch",
    "embed_batch",
    "substring_safety_filter",
]
