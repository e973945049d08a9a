from .model import (
    Batch,
    PromptEntry,
    Session,
    create_session,
    record_generation,
    toggle_prompt,
    validate_session,
)
from .persistence import load_session, save_session
from .service import WorkbenchService

__all__ = [
    "Session",
    "PromptEntry",
    "Batch",
    "create_session",
    "record_generation",
    "toggle_prompt",
    "validate_session",
    "save_session",
    "load_session",
    "WorkbenchService",
]
