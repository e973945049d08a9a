"""High-level workbench service shared by the HTTP API and the CLI.

Owns the providers, the loaded corpora, and the live sessions. One writer
per session (a lock per session id); reads are cheap projections. Every
mutating call persists the session directory before returning.
"""

from __future__ import annotations

import threading
import time
from pathlib import Path

from ..corpus import FilteredCorpus, ingest, read_prompt_jsonl
from ..embeddings import (
    CaptionProvider,
    EmbeddingProvider,
    StubCaptionProvider,
    StubEmbeddingProvider,
)
from ..errors import IntegrationError, SessionLookupError
from ..generation import (
    GenerationRequest,
    ImageBackend,
    MockImageBackend,
    embed_batch,
    generate_batch,
)
from ..generation.orchestrator import SafetyFilter
from ..layout import apply_scale, minimap_summary
from ..modifiers import ModifierCorpus, image_menu
from ..modifiers.corpus import DEFAULT_CORPUS_PATH
from ..suggest import ChatExchange, PromptSuggestionEngine, StubChatProvider
from ..suggest.engine import EngineConfig, naive_integrate
from .jobs import Job, JobRegistry
from .model import (
    Session,
    create_session,
    record_generation,
    toggle_prompt,
    validate_session,
)
from .persistence import load_session, save_session

SAMPLE_CORPUS_PATH = Path(__file__).parent.parent / "data" / "prompt_corpus_sample.jsonl"


class WorkbenchService:
    def __init__(
        self,
        engine: PromptSuggestionEngine,
        embedder: EmbeddingProvider,
        captioner: CaptionProvider,
        image_backend: ImageBackend,
        prompt_corpus: FilteredCorpus,
        modifier_corpus: ModifierCorpus,
        data_dir: str | Path,
        safety_filter: SafetyFilter | None = None,
        menu_top_n: int = 15,
    ):
        self.engine = engine
        self.embedder = embedder
        self.captioner = captioner
        self.image_backend = image_backend
        self.prompt_corpus = prompt_corpus
        self.modifier_corpus = modifier_corpus
        self.data_dir = Path(data_dir)
        self.safety_filter = safety_filter
        self.menu_top_n = menu_top_n
        self.jobs = JobRegistry()
        self._sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    @classmethod
    def with_mocks(
        cls,
        data_dir: str | Path,
        stub_seed: int = 0,
        stub_dimension: int = 64,
        corpus_path: str | Path | None = None,
        modifier_path: str | Path | None = None,
        engine_config: EngineConfig | None = None,
    ) -> "WorkbenchService":
        """Fully offline service: deterministic stubs for every provider."""
        embedder = StubEmbeddingProvider(dimension=stub_dimension, seed=stub_seed)
        engine = PromptSuggestionEngine(
            chat=StubChatProvider(),
            embedder=embedder,
            config=engine_config,
        )
        corpus = ingest(
            read_prompt_jsonl(corpus_path or SAMPLE_CORPUS_PATH), provider=embedder
        )
        modifiers = ModifierCorpus.load_tsv(
            modifier_path or DEFAULT_CORPUS_PATH, embedder
        )
        return cls(
            engine=engine,
            embedder=embedder,
            captioner=StubCaptionProvider(),
            image_backend=MockImageBackend(),
            prompt_corpus=corpus,
            modifier_corpus=modifiers,
            data_dir=data_dir,
        )

    # -- session registry ----------------------------------------------------

    def _lock_for(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(session_id, threading.Lock())

    def session_dir(self, session_id: str) -> Path:
        return self.data_dir / session_id

    def get_session(self, session_id: str) -> Session:
        session = self._sessions.get(session_id)
        if session is None:
            directory = self.session_dir(session_id)
            if not (directory / "session.json").exists():
                raise SessionLookupError(f"unknown session {session_id!r}")
            session = load_session(directory)
            self._sessions[session_id] = session
        return session

    def _persist(self, session: Session) -> None:
        save_session(session, self.session_dir(session.id))

    def new_session(self, layout_seed: int | None = None) -> Session:
        session = create_session(layout_seed)
        self._sessions[session.id] = session
        self._persist(session)
        return session

    # -- suggestion features ---------------------------------------------------

    def ideate(self, session_id: str, subject: str) -> dict:
        session = self.get_session(session_id)
        with self._lock_for(session_id):
            suggestions = self.engine.ideate_subjects(subject, log=session.transcripts)
            session.suggestion_state = suggestions
            session.current_prompt = suggestions.suggestions[0]
            self._persist(session)
        return {
            "suggestions": suggestions.suggestions,
            "prompt": session.current_prompt,
        }

    def steer(self, session_id: str, instruction: str) -> dict:
        session = self.get_session(session_id)
        if session.suggestion_state is None:
            raise SessionLookupError("no suggestion set to steer; call ideate first")
        with self._lock_for(session_id):
            suggestions = self.engine.steer_subjects(
                session.suggestion_state, instruction, log=session.transcripts
            )
            session.suggestion_state = suggestions
            self._persist(session)
        return {
            "suggestions": suggestions.suggestions,
            "prompt": session.current_prompt,
        }

    def extend_style(
        self,
        session_id: str,
        atomic_style: str,
        subject_index: int | None = None,
        subject: str | None = None,
    ) -> dict:
        session = self.get_session(session_id)
        if subject is None:
            if session.suggestion_state is None:
                raise SessionLookupError(
                    "no suggestion set; pass an explicit subject or ideate first"
                )
            index = 0 if subject_index is None else subject_index
            if not 0 <= index < len(session.suggestion_state.suggestions):
                raise SessionLookupError(f"subject_index {index} out of range")
            subject = session.suggestion_state.suggestions[index].rstrip(".")
        with self._lock_for(session_id):
            result = self.engine.extend_style(
                self.prompt_corpus, subject, atomic_style, log=session.transcripts
            )
            session.current_prompt = result.styled.serialize()
            self._persist(session)
        return {
            "prompt": session.current_prompt,
            "subject": result.styled.subject,
            "modifiers": result.styled.style_modifiers,
            "zero_shot_fallback": result.zero_shot_fallback,
            "examples_used": result.examples_used,
        }

    # -- generation --------------------------------------------------------------

    def generate(
        self,
        session_id: str,
        prompt: str,
        negative_prompt: str = "",
        batch_size: int = 10,
        seed: int | None = None,
    ) -> dict:
        session = self.get_session(session_id)
        request = GenerationRequest(
            prompt=prompt,
            negative_prompt=negative_prompt,
            seed=seed,
            batch_size=batch_size,
        )
        started = time.perf_counter()
        images = generate_batch(self.image_backend, request, self.safety_filter)
        embed_batch(self.embedder, images)
        with self._lock_for(session_id):
            prompt_id, layout_error = record_generation(
                session, prompt, negative_prompt, images
            )
            session.current_prompt = prompt
            self._persist(session)
        return {
            "prompt_id": prompt_id,
            "image_ids": [image.id for image in images],
            "blocked": sum(1 for image in images if image.blocked),
            "failed": sum(1 for image in images if image.failed),
            "layout_error": layout_error,
            "elapsed_seconds": time.perf_counter() - started,
        }

    def start_generate_job(self, session_id: str, **kwargs) -> Job:
        self.get_session(session_id)  # fail fast on unknown ids
        return self.jobs.submit(lambda: self.generate(session_id, **kwargs))

    # -- projections -----------------------------------------------------------

    def layout(self, session_id: str, scale: float | None = None) -> dict:
        session = self.get_session(session_id)
        layout = session.current_layout
        if layout is None:
            return {"images": [], "clusters": [], "scale": 1.0, "clamped": False}
        if scale is not None:
            layout = apply_scale(layout, scale)
        wire = layout.to_wire()
        wire["clamped"] = layout.scale_clamped
        wire["minimap"] = [
            {
                "cluster": entry.cluster_id,
                "color": entry.color,
                "centroid": list(entry.centroid),
                "bounding_box": list(entry.bounding_box),
            }
            for entry in minimap_summary(layout)
        ]
        return wire

    def menu(self, session_id: str, image_id: str) -> dict:
        session = self.get_session(session_id)
        if session.current_layout is None:
            raise SessionLookupError("session has no layout yet")
        image = session.image_by_id(image_id)
        embeddings = {
            entry_id: vec for entry_id, vec in session.layout_entries()
        }
        menu = image_menu(
            image_id,
            session.current_layout,
            self.modifier_corpus,
            self.captioner,
            embeddings,
            image.pixels,
            top_n=self.menu_top_n,
        )
        return menu.to_dict()

    def session_state(self, session_id: str) -> dict:
        session = self.get_session(session_id)
        return {
            "id": session.id,
            "created_at": session.created_at,
            "layout_seed": session.layout_seed,
            "current_prompt": session.current_prompt,
            "suggestions": (
                session.suggestion_state.suggestions
                if session.suggestion_state
                else []
            ),
            "prompt_history": [
                {
                    "prompt_id": e.prompt_id,
                    "prompt": e.prompt,
                    "negative_prompt": e.negative_prompt,
                    "visible": e.visible,
                }
                for e in session.prompt_history
            ],
            "batches": [
                {
                    "prompt_id": b.prompt_id,
                    "images": [
                        {
                            "id": img.id,
                            "seed": img.seed,
                            "blocked": img.blocked,
                            "failed": img.failed,
                            "missing": img.missing,
                        }
                        for img in b.images
                    ],
                }
                for b in session.batches
            ],
            "layout": self.layout(session_id),
        }

    # -- refinement ----------------------------------------------------------------

    def integrate(self, session_id: str, modifier: str,
                  prompt: str | None = None) -> dict:
        session = self.get_session(session_id)
        if prompt is None:
            prompt = session.current_prompt
        if not prompt:
            raise SessionLookupError("no current prompt to integrate into")
        with self._lock_for(session_id):
            try:
                merged = self.engine.integrate_modifier(
                    prompt, modifier, log=session.transcripts
                )
                fallback = False
            except IntegrationError as exc:
                merged = naive_integrate(prompt, modifier)
                fallback = True
                session.transcripts.append(
                    ChatExchange(kind="integrate-fallback", messages=[],
                                 response=str(exc))
                )
            session.current_prompt = merged
            self._persist(session)
        return {"merged": merged, "fallback": fallback}

    def set_prompt_visibility(self, session_id: str, prompt_id: str,
                              visible: bool) -> dict:
        session = self.get_session(session_id)
        with self._lock_for(session_id):
            changed, layout_error = toggle_prompt(session, prompt_id, visible)
            if changed:
                self._persist(session)
        result = self.layout(session_id)
        result["changed"] = changed
        if layout_error:
            result["layout_error"] = layout_error
        return result

    def validate(self, session_id: str) -> list[str]:
        return validate_session(self.get_session(session_id))

    # -- end-to-end workflow ---------------------------------------------------------

    def pipeline_run(
        self,
        subject: str,
        style: str,
        batch_size: int = 10,
        seed: int | None = 0,
        layout_seed: int = 7,
    ) -> dict:
        """The full workflow: ideate, extend, generate, layout, menu, integrate."""
        session = self.new_session(layout_seed=layout_seed)
        steps: list[str] = []

        ideated = self.ideate(session.id, subject)
        steps.append(f"ideated 3 subjects; first: {ideated['suggestions'][0][:60]}")

        extended = self.extend_style(session.id, style, subject_index=0)
        steps.append(
            f"extended style with {len(extended['modifiers'])} modifiers"
            + (" (zero-shot fallback)" if extended["zero_shot_fallback"] else "")
        )

        generated = self.generate(
            session.id, extended["prompt"], batch_size=batch_size, seed=seed
        )
        steps.append(
            f"generated {len(generated['image_ids'])} images as {generated['prompt_id']}"
        )

        layout = self.layout(session.id)
        steps.append(
            f"layout has {len(layout['images'])} tiles in {len(layout['clusters'])} clusters"
        )

        first_image = generated["image_ids"][0]
        menu = self.menu(session.id, first_image)
        steps.append(
            f"menu for {first_image}: top modifier {menu['image_modifiers'][0][0]!r}"
        )

        integrated = self.integrate(
            session.id, menu["image_modifiers"][0][0]
        )
        steps.append(f"integrated into prompt: {integrated['merged'][:60]}")

        problems = self.validate(session.id)
        return {
            "session_id": session.id,
            "session_dir": str(self.session_dir(session.id)),
            "steps": steps,
            "suggestions": ideated["suggestions"],
            "prompt": integrated["merged"],
            "layout": layout,
            "menu": menu,
            "validation_problems": problems,
        }
