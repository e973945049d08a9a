from __future__ import annotations

import json
import random

import numpy as np
import pytest

from promptcanvas.corpus import (
    FilteredCorpus,
    PromptRecord,
    ingest,
    knn,
    load_corpus,
    read_prompt_jsonl,
    save_corpus,
    split_segments,
)
from promptcanvas.embeddings import EmbeddingVector, StubEmbeddingProvider
from promptcanvas.errors import (
    ContractViolation,
    DimensionMismatchError,
    FormatError,
    ProviderError,
)

from .oracles import filter_oracle, knn_oracle


class TestSplitSegments:
    def test_basic(self):
        assert split_segments("a cat, oil paint, 4k") == ["a cat", "oil paint", "4k"]

    def test_empty_segments_dropped(self):
        assert split_segments("a cat,, 4k ,") == ["a cat", "4k"]

    def test_empty_string(self):
        assert split_segments("") == []


def synthetic_records(n: int, seed: int = 7) -> list[dict]:
    rng = random.Random(seed)
    records = []
    for i in range(n):
        segments = rng.randint(1, 12)
        text = ", ".join(f"phrase {i} {j}" for j in range(segments))
        # bias scores around the 0.1 boundary to exercise the strict reading
        nsfw = rng.choice([0.0, 0.05, 0.0999, 0.1, 0.1001, 0.3, 0.9])
        records.append({"id": f"r{i:04d}", "text": text, "nsfw_score": nsfw})
    return records


class TestIngest:
    def test_nsfw_above_threshold_rejected(self, stub_embedder):
        rec = {"id": "a", "text": ", ".join(["x"] * 8), "nsfw_score": 0.2}
        corpus = ingest([rec], provider=stub_embedder)
        assert len(corpus) == 0
        assert corpus.ingest_report.rejected_nsfw == 1

    def test_boundary_score_kept(self, stub_embedder):
        # "larger than 0.1" is filtered, so exactly 0.1 survives
        rec = {"id": "a", "text": ", ".join(["x"] * 8), "nsfw_score": 0.1}
        assert len(ingest([rec], provider=stub_embedder)) == 1

    def test_segment_minimum(self, stub_embedder):
        five = {"id": "a", "text": ", ".join(f"s{i}" for i in range(5)),
                "nsfw_score": 0.05}
        six = {"id": "b", "text": ", ".join(f"s{i}" for i in range(6)),
               "nsfw_score": 0.05}
        corpus = ingest([five, six], provider=stub_embedder)
        assert [r.id for r in corpus.records] == ["b"]

    def test_thousand_records_match_oracle(self, stub_embedder):
        records = synthetic_records(1000)
        corpus = ingest(records, provider=stub_embedder)
        assert [r.id for r in corpus.records] == filter_oracle(records, 0.1, 6)

    def test_malformed_records_skipped_with_warning(self, stub_embedder):
        good = {"id": "a", "text": ", ".join(["x"] * 8), "nsfw_score": 0.0}
        with pytest.warns(UserWarning, match="malformed"):
            corpus = ingest([good, {"id": "b"}, None, {"id": "c", "text": "t",
                                                       "nsfw_score": 2.0}],
                            provider=stub_embedder)
        assert len(corpus) == 1
        assert corpus.ingest_report.skipped_malformed == 3

    def test_provider_failure_aborts_with_progress(self):
        class ExplodingProvider(StubEmbeddingProvider):
            def __init__(self):
                super().__init__(dimension=8, seed=0)
                self.calls = 0

            def _embed_text_raw(self, text):
                self.calls += 1
                if self.calls >= 3:
                    raise ProviderError("remote down", retries=2)
                return super()._embed_text_raw(text)

        records = [{"id": f"r{i}", "text": ", ".join(["x"] * 8), "nsfw_score": 0.0}
                   for i in range(5)]
        with pytest.raises(ProviderError) as info:
            ingest(records, provider=ExplodingProvider())
        assert info.value.progress.survivors == 2

    def test_filter_idempotent(self, stub_embedder):
        records = synthetic_records(200, seed=3)
        once = ingest(records, provider=stub_embedder)
        twice = ingest(once.records, provider=stub_embedder)
        assert [r.id for r in twice.records] == [r.id for r in once.records]
        assert len(once) <= len(records)

    def test_all_embedded_same_dimension(self, stub_embedder):
        corpus = ingest(synthetic_records(50), provider=stub_embedder)
        dims = {r.embedding.dimension for r in corpus.records}
        assert dims == {64}


def random_corpus(n: int, dim: int = 16, seed: int = 5) -> FilteredCorpus:
    rng = np.random.RandomState(seed)
    records = []
    for i in range(n):
        raw = rng.randn(dim)
        raw /= np.linalg.norm(raw)
        records.append(PromptRecord(
            id=f"v{i:05d}", text=f"text {i}", nsfw_score=0.0,
            embedding=EmbeddingVector(values=raw, modality="text",
                                      provider_id="rand", normalized=True),
        ))
    return FilteredCorpus(records=records, nsfw_threshold=0.1, min_segments=6,
                          embedding_provider_id="rand")


class TestKnn:
    def test_exact_match_ranks_first(self, stub_embedder):
        corpus = ingest(synthetic_records(30), provider=stub_embedder)
        target = corpus.records[3]
        hits = knn(corpus, target.embedding, k=5)
        assert hits[0][0] == target.id
        assert hits[0][1] == pytest.approx(1.0, abs=1e-9)

    def test_matches_bruteforce_on_random_vectors(self):
        corpus = random_corpus(10_000)
        matrix = np.stack([r.embedding.values for r in corpus.records])
        ids = [r.id for r in corpus.records]
        rng = np.random.RandomState(11)
        for _ in range(5):
            q = rng.randn(16)
            q /= np.linalg.norm(q)
            query = EmbeddingVector(values=q, modality="text",
                                    provider_id="rand", normalized=True)
            expected = knn_oracle(ids, matrix, q, 10)
            got = [rid for rid, _ in knn(corpus, query, k=10)]
            assert got == expected

    def test_ties_broken_by_ascending_id(self):
        base = np.array([1.0, 0.0, 0.0, 0.0])
        records = [
            PromptRecord(id=name, text=name, nsfw_score=0.0,
                         embedding=EmbeddingVector(values=base, modality="text",
                                                   provider_id="p",
                                                   normalized=True))
            for name in ["zz", "aa", "mm"]
        ]
        corpus = FilteredCorpus(records=records, nsfw_threshold=0.1,
                                min_segments=6, embedding_provider_id="p")
        query = EmbeddingVector(values=base, modality="text", provider_id="p",
                                normalized=True)
        assert [rid for rid, _ in knn(corpus, query, k=3)] == ["aa", "mm", "zz"]

    def test_k_clamped_to_corpus_size(self):
        corpus = random_corpus(2)
        query = corpus.records[0].embedding
        assert len(knn(corpus, query, k=3)) == 2

    def test_empty_corpus_returns_empty(self):
        corpus = FilteredCorpus(records=[], nsfw_threshold=0.1, min_segments=6,
                                embedding_provider_id="rand")
        query = EmbeddingVector(values=np.array([1.0, 0.0]), modality="text",
                                provider_id="rand", normalized=True)
        assert knn(corpus, query, k=10) == []

    def test_dimension_mismatch(self):
        corpus = random_corpus(5, dim=16)
        query = EmbeddingVector(values=np.ones(8) / np.sqrt(8), modality="text",
                                provider_id="rand", normalized=True)
        with pytest.raises(DimensionMismatchError):
            knn(corpus, query, k=3)

    def test_mixed_provider_rejected(self):
        corpus = random_corpus(5)
        query = EmbeddingVector(values=corpus.records[0].embedding.values,
                                modality="text", provider_id="other",
                                normalized=True)
        with pytest.raises(ContractViolation):
            knn(corpus, query, k=1)

    def test_invalid_k(self):
        corpus = random_corpus(5)
        with pytest.raises(ContractViolation):
            knn(corpus, corpus.records[0].embedding, k=0)

    def test_results_are_prefix_of_full_ordering(self):
        corpus = random_corpus(200, seed=9)
        query = corpus.records[17].embedding
        full = [rid for rid, _ in knn(corpus, query, k=200)]
        for k in (1, 5, 50):
            assert [rid for rid, _ in knn(corpus, query, k=k)] == full[:k]


class TestPersistence:
    def test_round_trip(self, stub_embedder, tmp_path):
        corpus = ingest(synthetic_records(100, seed=2), provider=stub_embedder)
        base = tmp_path / "corpus"
        save_corpus(corpus, base)
        loaded = load_corpus(base)
        assert len(loaded) == len(corpus)
        assert loaded.nsfw_threshold == corpus.nsfw_threshold
        assert loaded.min_segments == corpus.min_segments
        assert loaded.embedding_provider_id == corpus.embedding_provider_id
        for a, b in zip(corpus.records, loaded.records):
            assert a.id == b.id
            assert a.text == b.text
            assert a.nsfw_score == b.nsfw_score
            assert a.segments == b.segments
            assert np.array_equal(a.embedding.values, b.embedding.values)

    def test_truncated_file_rejected(self, stub_embedder, tmp_path):
        corpus = ingest(synthetic_records(50, seed=2), provider=stub_embedder)
        base = tmp_path / "corpus"
        save_corpus(corpus, base)
        jsonl = base.with_suffix(".jsonl")
        lines = jsonl.read_text().splitlines()
        jsonl.write_text("\n".join(lines[:-3]) + "\n")
        with pytest.raises(FormatError, match="truncated"):
            load_corpus(base)

    def test_version_mismatch_rejected(self, stub_embedder, tmp_path):
        corpus = ingest(synthetic_records(10, seed=2), provider=stub_embedder)
        base = tmp_path / "corpus"
        save_corpus(corpus, base)
        jsonl = base.with_suffix(".jsonl")
        lines = jsonl.read_text().splitlines()
        header = json.loads(lines[0])
        header["version"] = 99
        jsonl.write_text("\n".join([json.dumps(header)] + lines[1:]) + "\n")
        with pytest.raises(FormatError, match="version"):
            load_corpus(base)

    def test_provider_mismatch_warns(self, stub_embedder, tmp_path):
        corpus = ingest(synthetic_records(10, seed=2), provider=stub_embedder)
        base = tmp_path / "corpus"
        save_corpus(corpus, base)
        with pytest.warns(UserWarning, match="embedded by"):
            load_corpus(base, expected_provider_id="someone-else")


class TestJsonlReader:
    def test_reads_objects_and_flags_bad_lines(self, tmp_path):
        path = tmp_path / "in.jsonl"
        path.write_text('{"id": "a", "text": "t", "nsfw_score": 0.0}\n'
                        "not json at all\n"
                        '{"id": "b", "text": "t2", "nsfw_score": 0.1}\n')
        rows = list(read_prompt_jsonl(path))
        assert rows[0]["id"] == "a"
        assert rows[1] is None
        assert rows[2]["id"] == "b"
