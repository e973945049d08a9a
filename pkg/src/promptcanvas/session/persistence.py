"""Session directory persistence.

Layout on disk:
    <dir>/session.json            everything except pixel bytes
    <dir>/images/<image_id>.png   one file per image that has pixels
    <dir>/transcripts/transcripts.json

Blocked images never export pixels. Loading a session whose image file
vanished flags that image as missing instead of failing the whole load.
"""

from __future__ import annotations

import json
from pathlib import Path

from ..embeddings import EmbeddingVector
from ..errors import FormatError
from ..generation import GeneratedImage
from ..layout import CanvasLayout
from ..suggest import ChatExchange
from ..suggest.engine import SuggestionSet
from .model import Batch, PromptEntry, Session

SCHEMA_VERSION = 1


def _embedding_to_dict(vec: EmbeddingVector | None) -> dict | None:
    if vec is None:
        return None
    return {
        "values": [float(v) for v in vec.values],
        "modality": vec.modality,
        "provider_id": vec.provider_id,
        "normalized": vec.normalized,
    }


def _embedding_from_dict(raw: dict | None) -> EmbeddingVector | None:
    if raw is None:
        return None
    return EmbeddingVector(
        values=raw["values"],
        modality=raw["modality"],
        provider_id=raw["provider_id"],
        normalized=raw["normalized"],
    )


def save_session(session: Session, directory: str | Path) -> None:
    directory = Path(directory)
    images_dir = directory / "images"
    transcripts_dir = directory / "transcripts"
    images_dir.mkdir(parents=True, exist_ok=True)
    transcripts_dir.mkdir(parents=True, exist_ok=True)

    batches = []
    for batch in session.batches:
        entries = []
        for image in batch.images:
            file_ref = None
            if image.pixels is not None and not image.blocked:
                file_ref = f"images/{image.id}.png"
                (directory / file_ref).write_bytes(image.pixels)
            entries.append({
                "id": image.id,
                "file": file_ref,
                "source_prompt_id": image.source_prompt_id,
                "seed": image.seed,
                "embedding": _embedding_to_dict(image.embedding),
                "blocked": image.blocked,
                "failed": image.failed,
                "error": image.error,
            })
        batches.append({"prompt_id": batch.prompt_id, "images": entries})

    doc = {
        "schema_version": SCHEMA_VERSION,
        "id": session.id,
        "layout_seed": session.layout_seed,
        "created_at": session.created_at,
        "current_prompt": session.current_prompt,
        "prompt_history": [
            {
                "prompt_id": e.prompt_id,
                "prompt": e.prompt,
                "negative_prompt": e.negative_prompt,
                "visible": e.visible,
            }
            for e in session.prompt_history
        ],
        "batches": batches,
        "layout": session.current_layout.to_dict() if session.current_layout else None,
        "suggestion_state": (
            {
                "suggestions": session.suggestion_state.suggestions,
                "transcript": [[r, c] for r, c in session.suggestion_state.transcript],
            }
            if session.suggestion_state
            else None
        ),
    }
    (directory / "session.json").write_text(
        json.dumps(doc, indent=2, ensure_ascii=False), encoding="utf-8"
    )
    (transcripts_dir / "transcripts.json").write_text(
        json.dumps([t.to_dict() for t in session.transcripts], indent=2,
                   ensure_ascii=False),
        encoding="utf-8",
    )


def load_session(directory: str | Path) -> Session:
    directory = Path(directory)
    session_file = directory / "session.json"
    try:
        doc = json.loads(session_file.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read session file {session_file}: {exc}") from exc
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise FormatError(
            f"session schema version {version!r} is not supported "
            f"(this build reads version {SCHEMA_VERSION})"
        )

    batches = []
    for raw_batch in doc["batches"]:
        images = []
        for raw in raw_batch["images"]:
            pixels = None
            missing = False
            if raw["file"] is not None:
                pixel_path = directory / raw["file"]
                if pixel_path.exists():
                    pixels = pixel_path.read_bytes()
                else:
                    missing = True
            images.append(
                GeneratedImage(
                    id=raw["id"],
                    pixels=pixels,
                    source_prompt_id=raw["source_prompt_id"],
                    seed=int(raw["seed"]),
                    embedding=_embedding_from_dict(raw["embedding"]),
                    blocked=bool(raw["blocked"]),
                    failed=bool(raw["failed"]),
                    error=raw["error"],
                    missing=missing,
                )
            )
        batches.append(Batch(prompt_id=raw_batch["prompt_id"], images=images))

    transcripts_file = directory / "transcripts" / "transcripts.json"
    transcripts = []
    if transcripts_file.exists():
        raw_transcripts = json.loads(transcripts_file.read_text(encoding="utf-8"))
        transcripts = [ChatExchange.from_dict(t) for t in raw_transcripts]

    suggestion_state = None
    if doc.get("suggestion_state"):
        raw_state = doc["suggestion_state"]
        suggestion_state = SuggestionSet(
            suggestions=list(raw_state["suggestions"]),
            transcript=[(r, c) for r, c in raw_state["transcript"]],
        )

    return Session(
        id=doc["id"],
        layout_seed=int(doc["layout_seed"]),
        created_at=doc["created_at"],
        prompt_history=[
            PromptEntry(
                prompt_id=e["prompt_id"],
                prompt=e["prompt"],
                negative_prompt=e["negative_prompt"],
                visible=bool(e["visible"]),
            )
            for e in doc["prompt_history"]
        ],
        batches=batches,
        current_layout=(
            CanvasLayout.from_dict(doc["layout"]) if doc["layout"] else None
        ),
        transcripts=transcripts,
        suggestion_state=suggestion_state,
        current_prompt=doc.get("current_prompt", ""),
    )
