from .records import PromptRecord, split_segments
from .store import (
    FilteredCorpus,
    IngestReport,
    ingest,
    knn,
    load_corpus,
    read_prompt_jsonl,
    save_corpus,
)

__all__ = [
    "PromptRecord",
    "split_segments",
    "FilteredCorpus",
    "IngestReport",
    "ingest",
    "knn",
    "save_corpus",
    "load_corpus",
    "read_prompt_jsonl",
]
