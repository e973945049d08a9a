"""Subject ideation, corpus-grounded style extension, modifier integration.

Every provider exchange is appended to the caller's log before the
response is parsed (log-then-return), so transcripts stay complete even
when parsing fails. Malformed output earns exactly one re-ask, then a
SuggestionError carrying the raw response.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..corpus import FilteredCorpus, knn, split_segments
from ..embeddings import EmbeddingProvider
from ..errors import IntegrationError, ProviderError, SuggestionError
from .chat import ChatExchange, ChatProvider, Message
from .templates import TemplateSet, load_default_templates

SUGGESTION_COUNT = 3


@dataclass
class StyledPrompt:
    """subject + ordered style modifiers; serializes comma-joined."""

    subject: str
    style_modifiers: list[str]

    def serialize(self) -> str:
        return ", ".join([self.subject] + list(self.style_modifiers))

    @classmethod
    def parse(cls, text: str) -> "StyledPrompt":
        segments = split_segments(text)
        if not segments:
            return cls(subject="", style_modifiers=[])
        return cls(subject=segments[0], style_modifiers=segments[1:])


@dataclass
class SuggestionSet:
    suggestions: list[str]
    transcript: list[tuple[str, str]]  # (role, message), verbatim, append-only


@dataclass
class FewShotPrompt:
    preamble: str
    examples: list[str]
    query_suffix: str
    zero_shot_fallback: bool = False

    def render(self) -> str:
        parts = [self.preamble, ""]
        parts.extend(self.examples)
        parts.append(self.query_suffix)
        return "\n".join(parts)


@dataclass
class ExtendResult:
    styled: StyledPrompt
    zero_shot_fallback: bool
    examples_used: int


@dataclass
class EngineConfig:
    ideation_temperature: float = 0.7
    style_temperature: float = 0.7
    integration_temperature: float = 0.2
    min_style_modifiers: int = 3
    retrieval_k: int = 10


def naive_integrate(prompt: str, modifier: str) -> str:
    """Fallback integration: plain comma-append."""
    return f"{prompt}, {modifier}"


def parse_numbered_suggestions(text: str) -> list[str] | None:
    """Extract '1. ...' style lines; None unless exactly three are found."""
    found = []
    for line in text.splitlines():
        match = re.match(r"\s*\d+\s*[.)]\s*(.+?)\s*$", line)
        if match:
            found.append(match.group(1))
    return found if len(found) == SUGGESTION_COUNT else None


def build_style_fewshot(
    examples: list[str],
    subject: str,
    atomic_style: str,
    templates: TemplateSet | None = None,
) -> FewShotPrompt:
    """Assemble the autocomplete prompt from retrieved examples.

    Examples keep retrieval order; embedded newlines are collapsed to
    spaces. With zero examples the preamble falls back to a zero-shot
    instruction and the result is flagged.
    """
    templates = templates or load_default_templates()
    cleaned = [" ".join(ex.split()) for ex in examples[:10]]
    query_suffix = f"{subject}, {atomic_style},"
    if not cleaned:
        return FewShotPrompt(
            preamble=templates.style_zero_shot,
            examples=[],
            query_suffix=query_suffix,
            zero_shot_fallback=True,
        )
    return FewShotPrompt(
        preamble=templates.style_preamble,
        examples=cleaned,
        query_suffix=query_suffix,
    )


class PromptSuggestionEngine:
    """Orchestrates the chat provider for all three suggestion features."""

    def __init__(
        self,
        chat: ChatProvider,
        embedder: EmbeddingProvider | None = None,
        templates: TemplateSet | None = None,
        config: EngineConfig | None = None,
    ):
        self.chat = chat
        self.embedder = embedder
        self.templates = templates or load_default_templates()
        self.config = config or EngineConfig()

    # -- shared plumbing ---------------------------------------------------

    def _complete(self, kind: str, messages: list[Message], temperature: float,
                  log: list[ChatExchange] | None) -> str:
        response = self.chat.complete(messages, temperature=temperature)
        if log is not None:
            log.append(ChatExchange(kind=kind, messages=list(messages),
                                    response=response))
        return response

    # -- subject ideation ---------------------------------------------------

    def ideation_messages(self, atomic_subject: str) -> list[Message]:
        content = self.templates.ideation.format(subject=atomic_subject.strip())
        return [{"role": "user", "content": content}]

    def ideate_subjects(self, atomic_subject: str,
                        log: list[ChatExchange] | None = None) -> SuggestionSet:
        if not atomic_subject or not atomic_subject.strip():
            raise SuggestionError("atomic subject must be non-empty")
        messages = self.ideation_messages(atomic_subject)
        return self._request_suggestions("ideate", messages, transcript=[], log=log)

    def steer_subjects(self, current: SuggestionSet, instruction: str,
                       log: list[ChatExchange] | None = None) -> SuggestionSet:
        if not instruction or not instruction.strip():
            raise SuggestionError("steering instruction must be non-empty")
        if not current.transcript:
            raise SuggestionError("cannot steer a suggestion set without a transcript")
        messages = [{"role": role, "content": content}
                    for role, content in current.transcript]
        messages.append({"role": "user", "content": instruction})
        return self._request_suggestions(
            "steer", messages, transcript=list(current.transcript), log=log
        )

    def _request_suggestions(self, kind: str, messages: list[Message],
                             transcript: list[tuple[str, str]],
                             log: list[ChatExchange] | None) -> SuggestionSet:
        response = self._complete(kind, messages, self.config.ideation_temperature, log)
        transcript = transcript + [("user", messages[-1]["content"]),
                                   ("assistant", response)]
        suggestions = parse_numbered_suggestions(response)
        if suggestions is None:
            reask = self.templates.reask_subjects
            retry_messages = messages + [{"role": "assistant", "content": response},
                                         {"role": "user", "content": reask}]
            try:
                second = self._complete(kind + "-reask", retry_messages,
                                        self.config.ideation_temperature, log)
            except ProviderError as exc:
                raise SuggestionError(
                    "provider output could not be parsed into three suggestions",
                    raw_response=response,
                ) from exc
            transcript = transcript + [("user", reask), ("assistant", second)]
            suggestions = parse_numbered_suggestions(second)
            if suggestions is None:
                raise SuggestionError(
                    "provider output could not be parsed into three suggestions "
                    "after one re-ask",
                    raw_response=second,
                )
        return SuggestionSet(suggestions=suggestions, transcript=transcript)

    # -- style extension ----------------------------------------------------

    def extend_style(self, corpus: FilteredCorpus, subject: str, atomic_style: str,
                     log: list[ChatExchange] | None = None) -> ExtendResult:
        if not subject.strip() or not atomic_style.strip():
            raise SuggestionError("subject and atomic style must be non-empty")
        examples: list[str] = []
        if len(corpus):
            if self.embedder is None:
                raise SuggestionError("style extension needs an embedding provider")
            query = self.embedder.embed_text(atomic_style)
            hits = knn(corpus, query, k=self.config.retrieval_k)
            examples = [corpus.record_by_id(rid).text for rid, _ in hits]
        fewshot = build_style_fewshot(examples, subject, atomic_style, self.templates)
        messages = [{"role": "user", "content": fewshot.render()}]
        response = self._complete("extend-style", messages,
                                  self.config.style_temperature, log)
        modifiers = self._parse_style_completion(response, subject, atomic_style)
        if modifiers is None:
            retry_messages = messages + [
                {"role": "assistant", "content": response},
                {"role": "user", "content": self.templates.reask_style},
            ]
            try:
                second = self._complete("extend-style-reask", retry_messages,
                                        self.config.style_temperature, log)
            except ProviderError as exc:
                raise SuggestionError(
                    "style completion had too few modifiers", raw_response=response
                ) from exc
            modifiers = self._parse_style_completion(second, subject, atomic_style)
            if modifiers is None:
                raise SuggestionError(
                    "style completion had too few modifiers after one re-ask",
                    raw_response=second,
                )
        styled = StyledPrompt(subject=subject, style_modifiers=modifiers)
        return ExtendResult(
            styled=styled,
            zero_shot_fallback=fewshot.zero_shot_fallback,
            examples_used=len(fewshot.examples),
        )

    def _parse_style_completion(self, completion: str, subject: str,
                                atomic_style: str) -> list[str] | None:
        """Completion continues '<subject>, <style>,'; rebuild the modifier tail.

        The tail is atomic_style + completion joined as raw text, so a
        completion that opens mid-word (" style, ...") extends the atomic
        style itself, while one opening with a comma starts a new modifier.
        """
        text = completion.rstrip()
        stripped = text.strip()
        if stripped.lower().startswith(subject.strip().lower()):
            stripped = stripped[len(subject.strip()):].lstrip(" ,")
            if stripped.lower().startswith(atomic_style.strip().lower()):
                stripped = stripped[len(atomic_style.strip()):]
            text = stripped
        tail = atomic_style + text
        segments = split_segments(tail)
        subject_lower = subject.strip().lower()
        seen: set[str] = set()
        modifiers = []
        for seg in segments:
            key = seg.lower()
            if key == subject_lower or key in seen:
                continue
            seen.add(key)
            modifiers.append(seg)
        if len(modifiers) < self.config.min_style_modifiers:
            return None
        return modifiers

    # -- modifier integration -------------------------------------------------

    def integration_messages(self, current_prompt: str, modifier: str) -> list[Message]:
        blocks = [self.templates.integration_preamble, ""]
        for example in self.templates.integration_examples:
            blocks.append(f"Prompt: {example['prompt']}")
            blocks.append(f"Modifier: {example['modifier']}")
            blocks.append(f"Integrated: {example['integrated']}")
            blocks.append("")
        blocks.append(f"Prompt: {current_prompt}")
        blocks.append(f"Modifier: {modifier}")
        blocks.append("Integrated:")
        return [{"role": "user", "content": "\n".join(blocks)}]

    def integrate_modifier(self, current_prompt: str, modifier: str,
                           log: list[ChatExchange] | None = None) -> str:
        if not current_prompt.strip() or not modifier.strip():
            raise IntegrationError("prompt and modifier must be non-empty")
        if modifier.strip().lower() in current_prompt.lower():
            return current_prompt  # already present verbatim; skip the provider
        messages = self.integration_messages(current_prompt, modifier)
        try:
            response = self._complete("integrate", messages,
                                      self.config.integration_temperature, log)
        except ProviderError as exc:
            raise IntegrationError(f"integration provider failed: {exc}") from exc
        merged = response.strip().splitlines()[0].strip() if response.strip() else ""
        if not merged:
            raise IntegrationError("integration provider returned an empty prompt")
        return merged
