from .chat import (
    ChatExchange,
    ChatProvider,
    HttpChatProvider,
    StubChatProvider,
    TranscriptFixtureProvider,
    canonical_request_hash,
)
from .engine import (
    FewShotPrompt,
    PromptSuggestionEngine,
    StyledPrompt,
    SuggestionSet,
    build_style_fewshot,
    naive_integrate,
)
from .templates import TemplateSet, load_default_templates

__all__ = [
    "ChatProvider",
    "ChatExchange",
    "HttpChatProvider",
    "StubChatProvider",
    "TranscriptFixtureProvider",
    "canonical_request_hash",
    "StyledPrompt",
    "SuggestionSet",
    "FewShotPrompt",
    "PromptSuggestionEngine",
    "build_style_fewshot",
    "naive_integrate",
    "TemplateSet",
    "load_default_templates",
]
