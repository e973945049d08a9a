"""Service construction from a JSON config file.

Every provider defaults to its deterministic offline stand-in; a config
file swaps any of them for remote HTTP providers (URL + bearer-token env
var). Example:

    {
      "embedding": {"kind": "remote_http", "endpoint": "https://...",
                    "dimension": 384, "provider_id": "minilm"},
      "chat": {"kind": "remote_http", "endpoint": "https://...",
               "model_id": "gpt-3.5-turbo", "temperature": 0.7},
      "caption": {"kind": "remote_http", "endpoint": "https://..."},
      "image_backend": {"kind": "remote_http", "endpoint": "http://.../txt2img"},
      "prompt_corpus": "path/to/corpus.jsonl",
      "modifier_corpus": "path/to/modifiers.tsv"
    }
"""

from __future__ import annotations

import json
from pathlib import Path

from .corpus import ingest, read_prompt_jsonl
from .embeddings import (
    HttpCaptionProvider,
    HttpEmbeddingProvider,
    StubCaptionProvider,
    StubEmbeddingProvider,
)
from .errors import FormatError
from .generation import HttpImageBackend, MockImageBackend
from .modifiers import ModifierCorpus
from .modifiers.corpus import DEFAULT_CORPUS_PATH
from .session.service import SAMPLE_CORPUS_PATH, WorkbenchService
from .suggest import (
    HttpChatProvider,
    PromptSuggestionEngine,
    StubChatProvider,
    TranscriptFixtureProvider,
)


def load_config(path: str | Path | None) -> dict:
    if path is None:
        return {}
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read config {path}: {exc}") from exc


def _build_embedder(cfg: dict):
    kind = cfg.get("kind", "deterministic_stub")
    if kind == "deterministic_stub":
        return StubEmbeddingProvider(
            dimension=int(cfg.get("dimension", 64)),
            seed=int(cfg.get("seed", 0)),
        )
    if kind == "remote_http":
        return HttpEmbeddingProvider(
            endpoint=cfg["endpoint"],
            dimension=int(cfg["dimension"]),
            provider_id=cfg.get("provider_id", "remote"),
            token_env=cfg.get("token_env", "PROMPTCANVAS_API_TOKEN"),
        )
    raise FormatError(f"unknown embedding provider kind {kind!r}")


def _build_chat(cfg: dict):
    kind = cfg.get("kind", "deterministic_stub")
    if kind == "deterministic_stub":
        return StubChatProvider()
    if kind == "remote_http":
        return HttpChatProvider(
            endpoint=cfg["endpoint"],
            model_id=cfg.get("model_id", "gpt-3.5-turbo"),
            temperature=float(cfg.get("temperature", 0.7)),
            token_env=cfg.get("token_env", "PROMPTCANVAS_API_TOKEN"),
        )
    if kind == "transcript_fixture":
        return TranscriptFixtureProvider.load(cfg["path"])
    raise FormatError(f"unknown chat provider kind {kind!r}")


def _build_captioner(cfg: dict):
    kind = cfg.get("kind", "deterministic_stub")
    if kind == "deterministic_stub":
        return StubCaptionProvider()
    if kind == "remote_http":
        return HttpCaptionProvider(
            endpoint=cfg["endpoint"],
            token_env=cfg.get("token_env", "PROMPTCANVAS_API_TOKEN"),
        )
    raise FormatError(f"unknown caption provider kind {kind!r}")


def _build_backend(cfg: dict):
    kind = cfg.get("kind", "mock")
    if kind == "mock":
        return MockImageBackend()
    if kind == "remote_http":
        return HttpImageBackend(
            endpoint=cfg["endpoint"],
            token_env=cfg.get("token_env", "PROMPTCANVAS_API_TOKEN"),
        )
    raise FormatError(f"unknown image backend kind {kind!r}")


def build_service(data_dir: str | Path, config: dict | None = None) -> WorkbenchService:
    config = config or {}
    embedder = _build_embedder(config.get("embedding", {}))
    chat = _build_chat(config.get("chat", {}))
    captioner = _build_captioner(config.get("caption", {}))
    backend = _build_backend(config.get("image_backend", {}))

    corpus_path = Path(config.get("prompt_corpus", SAMPLE_CORPUS_PATH))
    corpus = ingest(
        read_prompt_jsonl(corpus_path),
        provider=embedder,
        nsfw_threshold=float(config.get("nsfw_threshold", 0.1)),
        min_segments=int(config.get("min_segments", 6)),
    )
    modifier_path = Path(config.get("modifier_corpus", DEFAULT_CORPUS_PATH))
    modifiers = ModifierCorpus.load_tsv(modifier_path, embedder)

    engine = PromptSuggestionEngine(chat=chat, embedder=embedder)
    return WorkbenchService(
        engine=engine,
        embedder=embedder,
        captioner=captioner,
        image_backend=backend,
        prompt_corpus=corpus,
        modifier_corpus=modifiers,
        data_dir=data_dir,
    )
