"""Corpus ingestion, exact KNN retrieval, and persistence.

A FilteredCorpus is immutable after ingest: every surviving record carries
an L2-normalized embedding from one provider, stacked into a matrix so
cosine KNN is a single matrix-vector product.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from ..embeddings import EmbeddingProvider, EmbeddingVector
from ..errors import ContractViolation, DimensionMismatchError, FormatError, ProviderError
from .records import PromptRecord

FORMAT_NAME = "promptcanvas-corpus"
FORMAT_VERSION = 1

DEFAULT_NSFW_THRESHOLD = 0.1
DEFAULT_MIN_SEGMENTS = 6

# Similarities closer than this are one tie group, ordered by record id.
# Float dot products of the same vectors differ across BLAS kernels by ~1e-16,
# so exact equality is not a usable tie notion; 1e-9 sits far above that noise
# and far below any meaningful similarity gap, making result order reproducible
# across platforms.
TIE_EPSILON = 1e-9


@dataclass
class IngestReport:
    seen: int = 0
    survivors: int = 0
    rejected_nsfw: int = 0
    rejected_segments: int = 0
    skipped_malformed: int = 0


@dataclass
class FilteredCorpus:
    records: list[PromptRecord]
    nsfw_threshold: float
    min_segments: int
    embedding_provider_id: str
    ingest_report: IngestReport | None = None
    _matrix: np.ndarray = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self._matrix is None:
            if self.records:
                self._matrix = np.stack([r.embedding.values for r in self.records])
            else:
                self._matrix = np.zeros((0, 0), dtype=np.float64)

    def __len__(self) -> int:
        return len(self.records)

    @property
    def dimension(self) -> int:
        return self._matrix.shape[1] if len(self.records) else 0

    def record_by_id(self, record_id: str) -> PromptRecord:
        for rec in self.records:
            if rec.id == record_id:
                return rec
        raise KeyError(record_id)


def _coerce_record(raw) -> PromptRecord | None:
    """Build a PromptRecord from a raw dict, or None if malformed."""
    if isinstance(raw, PromptRecord):
        return raw
    if not isinstance(raw, dict):
        return None
    try:
        return PromptRecord(
            id=str(raw["id"]),
            text=str(raw["text"]),
            nsfw_score=float(raw["nsfw_score"]),
        )
    except (KeyError, TypeError, ValueError, ContractViolation):
        return None


def ingest(
    records: Iterable,
    provider: EmbeddingProvider,
    nsfw_threshold: float = DEFAULT_NSFW_THRESHOLD,
    min_segments: int = DEFAULT_MIN_SEGMENTS,
) -> FilteredCorpus:
    """Filter the stream and embed every survivor.

    Keeps exactly the records with nsfw_score <= nsfw_threshold ("larger
    than the threshold" is filtered, equality kept) and at least
    min_segments comma-separated phrases. Malformed records are skipped and
    counted; a provider failure aborts with the partial progress attached.
    """
    report = IngestReport()
    survivors: list[PromptRecord] = []
    for raw in records:
        report.seen += 1
        rec = _coerce_record(raw)
        if rec is None:
            report.skipped_malformed += 1
            continue
        if rec.nsfw_score > nsfw_threshold:
            report.rejected_nsfw += 1
            continue
        if len(rec.segments) < min_segments:
            report.rejected_segments += 1
            continue
        try:
            embedding = provider.embed_text(rec.text)
        except ProviderError as exc:
            exc.progress = report
            raise
        survivors.append(
            PromptRecord(
                id=rec.id,
                text=rec.text,
                nsfw_score=rec.nsfw_score,
                segments=list(rec.segments),
                embedding=embedding,
            )
        )
        report.survivors += 1
    if report.skipped_malformed:
        warnings.warn(
            f"skipped {report.skipped_malformed} malformed record(s) during ingest",
            stacklevel=2,
        )
    return FilteredCorpus(
        records=survivors,
        nsfw_threshold=nsfw_threshold,
        min_segments=min_segments,
        embedding_provider_id=provider.provider_id,
        ingest_report=report,
    )


def knn(
    corpus: FilteredCorpus, query: EmbeddingVector, k: int = 10
) -> list[tuple[str, float]]:
    """Exact top-k by cosine similarity, descending; ties by ascending id.

    Ties are similarity groups within TIE_EPSILON of the group's best value.
    """
    if k < 1:
        raise ContractViolation(f"k must be >= 1, got {k}")
    if not corpus.records:
        return []
    if query.dimension != corpus.dimension:
        raise DimensionMismatchError(
            f"query dimension {query.dimension} != corpus dimension {corpus.dimension}"
        )
    if query.provider_id != corpus.embedding_provider_id:
        raise ContractViolation(
            f"query embedded by {query.provider_id!r} but corpus uses "
            f"{corpus.embedding_provider_id!r}; mixing providers is rejected"
        )
    q = query.values
    if not query.normalized:
        q = q / np.linalg.norm(q)
    sims = corpus._matrix @ q  # rows are unit vectors, so this is cosine
    by_similarity = sorted(range(len(corpus.records)), key=lambda i: -sims[i])
    ordered: list[int] = []
    group: list[int] = []
    group_head = 0.0
    for i in by_similarity:
        if not group or group_head - sims[i] <= TIE_EPSILON:
            if not group:
                group_head = sims[i]
            group.append(i)
            continue
        ordered.extend(sorted(group, key=lambda j: corpus.records[j].id))
        group = [i]
        group_head = sims[i]
    ordered.extend(sorted(group, key=lambda j: corpus.records[j].id))
    top = ordered[: min(k, len(ordered))]
    return [(corpus.records[i].id, float(sims[i])) for i in top]


def read_prompt_jsonl(path: str | Path) -> Iterator[dict | None]:
    """Yield one dict per JSONL line; malformed lines yield None."""
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if not line:
                continue
            try:
                yield json.loads(line)
            except json.JSONDecodeError:
                yield None


def _corpus_paths(path: str | Path) -> tuple[Path, Path]:
    base = Path(path)
    if base.suffix == ".jsonl":
        base = base.with_suffix("")
    return base.with_suffix(".jsonl"), base.with_suffix(".npy")


def save_corpus(corpus: FilteredCorpus, path: str | Path) -> None:
    """Versioned JSON-lines plus a binary .npy sidecar for the vectors."""
    records_path, vectors_path = _corpus_paths(path)
    header = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "provider_id": corpus.embedding_provider_id,
        "dimension": corpus.dimension,
        "nsfw_threshold": corpus.nsfw_threshold,
        "min_segments": corpus.min_segments,
        "count": len(corpus.records),
    }
    with open(records_path, "w", encoding="utf-8") as handle:
        handle.write(json.dumps(header) + "\n")
        for rec in corpus.records:
            handle.write(
                json.dumps({"id": rec.id, "text": rec.text, "nsfw_score": rec.nsfw_score})
                + "\n"
            )
    matrix = corpus._matrix if len(corpus.records) else np.zeros((0, 0))
    np.save(vectors_path, matrix)


def load_corpus(path: str | Path, expected_provider_id: str | None = None) -> FilteredCorpus:
    """Inverse of save_corpus; bit-exact round trip or FormatError."""
    records_path, vectors_path = _corpus_paths(path)
    try:
        with open(records_path, "r", encoding="utf-8") as handle:
            lines = handle.read().splitlines()
    except OSError as exc:
        raise FormatError(f"cannot read corpus file {records_path}: {exc}") from exc
    if not lines:
        raise FormatError(f"{records_path} is empty")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise FormatError(f"bad corpus header: {exc}") from exc
    if header.get("format") != FORMAT_NAME:
        raise FormatError(f"{records_path} is not a corpus file")
    if header.get("version") != FORMAT_VERSION:
        raise FormatError(
            f"corpus format version {header.get('version')} is not supported "
            f"(expected {FORMAT_VERSION})"
        )
    count = int(header["count"])
    body = lines[1:]
    if len(body) != count:
        raise FormatError(
            f"corpus truncated: header promises {count} records, file has {len(body)}"
        )
    try:
        matrix = np.load(vectors_path)
    except (OSError, ValueError) as exc:
        raise FormatError(f"cannot read vector sidecar {vectors_path}: {exc}") from exc
    if count and matrix.shape != (count, int(header["dimension"])):
        raise FormatError(
            f"vector sidecar shape {matrix.shape} does not match header "
            f"({count}, {header['dimension']})"
        )
    provider_id = str(header["provider_id"])
    if expected_provider_id is not None and provider_id != expected_provider_id:
        warnings.warn(
            f"corpus was embedded by {provider_id!r} but {expected_provider_id!r} "
            "is configured; queries must use the corpus provider",
            stacklevel=2,
        )
    records = []
    for i, line in enumerate(body):
        try:
            raw = json.loads(line)
        except json.JSONDecodeError as exc:
            raise FormatError(f"bad record on line {i + 2}: {exc}") from exc
        records.append(
            PromptRecord(
                id=str(raw["id"]),
                text=str(raw["text"]),
                nsfw_score=float(raw["nsfw_score"]),
                embedding=EmbeddingVector(
                    values=matrix[i],
                    modality="text",
                    provider_id=provider_id,
                    normalized=True,
                ),
            )
        )
    return FilteredCorpus(
        records=records,
        nsfw_threshold=float(header["nsfw_threshold"]),
        min_segments=int(header["min_segments"]),
        embedding_provider_id=provider_id,
    )
