"""Session state: append-only prompt history, batches, layout, transcripts.

History is append-or-toggle only; nothing ever deletes a prompt or an
image. The layout always covers exactly the unblocked images of visible
prompts, recomputed with the session's fixed layout seed so visibility
toggles replay deterministically.
"""

from __future__ import annotations

import re
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone

from ..errors import SessionLookupError
from ..generation import GeneratedImage
from ..layout import CanvasLayout, layout_pipeline, validate_layout
from ..suggest import ChatExchange
from ..suggest.engine import SuggestionSet


@dataclass
class PromptEntry:
    prompt_id: str
    prompt: str
    negative_prompt: str
    visible: bool = True


@dataclass
class Batch:
    prompt_id: str
    images: list[GeneratedImage]


@dataclass
class Session:
    id: str
    layout_seed: int
    created_at: str
    prompt_history: list[PromptEntry] = field(default_factory=list)
    batches: list[Batch] = field(default_factory=list)
    current_layout: CanvasLayout | None = None
    transcripts: list[ChatExchange] = field(default_factory=list)
    suggestion_state: SuggestionSet | None = None
    current_prompt: str = ""

    def prompt_entry(self, prompt_id: str) -> PromptEntry:
        for entry in self.prompt_history:
            if entry.prompt_id == prompt_id:
                return entry
        raise SessionLookupError(f"unknown prompt id {prompt_id!r}")

    def image_by_id(self, image_id: str) -> GeneratedImage:
        for batch in self.batches:
            for image in batch.images:
                if image.id == image_id:
                    return image
        raise SessionLookupError(f"unknown image id {image_id!r}")

    def layout_entries(self) -> list[tuple[str, object]]:
        """(id, embedding) for every image the layout must cover."""
        visible = {e.prompt_id for e in self.prompt_history if e.visible}
        entries = []
        for batch in self.batches:
            if batch.prompt_id not in visible:
                continue
            for image in batch.images:
                if image.blocked or image.failed or image.embedding is None:
                    continue
                entries.append((image.id, image.embedding))
        return entries


def create_session(layout_seed: int | None = None) -> Session:
    if layout_seed is None:
        layout_seed = uuid.uuid4().int % (2**31)
    return Session(
        id=uuid.uuid4().hex[:12],
        layout_seed=layout_seed,
        created_at=datetime.now(timezone.utc).isoformat(),
    )


def next_prompt_id(session: Session) -> str:
    return f"p{len(session.prompt_history) + 1}"


def recompute_layout(session: Session) -> None:
    session.current_layout = layout_pipeline(
        session.layout_entries(), session.layout_seed
    )


def record_generation(
    session: Session,
    prompt: str,
    negative_prompt: str,
    images: list[GeneratedImage],
) -> tuple[str, str | None]:
    """Append a prompt (visible) and its batch, then recompute the layout.

    Returns (prompt_id, layout_error). A layout failure leaves the previous
    layout intact and is surfaced as a message, never as a lost batch.
    """
    prompt_id = next_prompt_id(session)
    session.prompt_history.append(
        PromptEntry(prompt_id=prompt_id, prompt=prompt,
                    negative_prompt=negative_prompt, visible=True)
    )
    for image in images:
        image.source_prompt_id = prompt_id
    session.batches.append(Batch(prompt_id=prompt_id, images=images))
    previous = session.current_layout
    try:
        recompute_layout(session)
        return prompt_id, None
    except Exception as exc:  # layout must never eat a recorded batch
        session.current_layout = previous
        return prompt_id, f"layout recomputation failed: {exc}"


def toggle_prompt(
    session: Session, prompt_id: str, visible: bool
) -> tuple[bool, str | None]:
    """Set visibility; recompute layout only when the value changed.

    Returns (changed, layout_error).
    """
    entry = session.prompt_entry(prompt_id)
    if entry.visible == visible:
        return False, None
    entry.visible = visible
    previous = session.current_layout
    try:
        recompute_layout(session)
        return True, None
    except Exception as exc:
        session.current_layout = previous
        return True, f"layout recomputation failed: {exc}"


_PROMPT_ID_RE = re.compile(r"^p(\d+)$")


def validate_session(session: Session) -> list[str]:
    """Check every Session invariant; returns violations (empty = healthy)."""
    problems = []
    seen_ids = set()
    last_ordinal = 0
    for entry in session.prompt_history:
        if entry.prompt_id in seen_ids:
            problems.append(f"duplicate prompt id {entry.prompt_id}")
        seen_ids.add(entry.prompt_id)
        match = _PROMPT_ID_RE.match(entry.prompt_id)
        if not match:
            problems.append(f"malformed prompt id {entry.prompt_id}")
            continue
        ordinal = int(match.group(1))
        if ordinal <= last_ordinal:
            problems.append(f"prompt id {entry.prompt_id} breaks creation order")
        last_ordinal = ordinal

    for batch in session.batches:
        if batch.prompt_id not in seen_ids:
            problems.append(f"batch references unknown prompt {batch.prompt_id}")
        for image in batch.images:
            if image.source_prompt_id != batch.prompt_id:
                problems.append(
                    f"image {image.id} carries source_prompt_id "
                    f"{image.source_prompt_id!r}, expected {batch.prompt_id!r}"
                )

    expected = {image_id for image_id, _ in session.layout_entries()}
    if session.current_layout is None:
        if expected:
            problems.append("layout missing while visible unblocked images exist")
    else:
        covered = set(session.current_layout.base_positions.keys())
        if covered != expected:
            problems.append(
                f"layout covers {sorted(covered)} but visible unblocked images "
                f"are {sorted(expected)}"
            )
        problems.extend(validate_layout(session.current_layout))
    return problems
