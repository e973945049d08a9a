from __future__ import annotations

import numpy as np
import pytest

from promptcanvas.embeddings import EmbeddingVector, StubCaptionProvider
from promptcanvas.errors import ContractViolation, SessionLookupError
from promptcanvas.layout import CanvasLayout, Cluster
from promptcanvas.modifiers import (
    ModifierCorpus,
    ModifierEntry,
    aggregate_cluster,
    image_menu,
    score_modifiers,
)
from promptcanvas.modifiers.corpus import DEFAULT_CORPUS_PATH

from .oracles import cluster_mean_rank_oracle, modifier_rank_oracle


def unit(values) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    return arr / np.linalg.norm(arr)


def image_vec(values) -> EmbeddingVector:
    return EmbeddingVector(values=unit(values), modality="image",
                           provider_id="t", normalized=True)


def corpus_from_matrix(phrases: list[str], matrix: np.ndarray) -> ModifierCorpus:
    entries = [ModifierEntry(phrase=p, category="phrase") for p in phrases]
    return ModifierCorpus(entries, matrix, provider_id="t")


class TestScoreModifiers:
    def test_exact_match_scores_one(self):
        target = unit([1.0, 2.0, 3.0, 4.0])
        matrix = np.stack([unit([1, 0, 0, 0]), target, unit([0, 0, 1, 1])])
        corpus = corpus_from_matrix(["a", "b", "c"], matrix)
        ranked = score_modifiers(corpus, image_vec(target), top_n=3)
        assert ranked[0][0] == "b"
        assert ranked[0][1] == pytest.approx(1.0, abs=1e-9)

    def test_thousand_entry_oracle_equality(self):
        rng = np.random.RandomState(3)
        matrix = rng.randn(1000, 32)
        matrix /= np.linalg.norm(matrix, axis=1, keepdims=True)
        phrases = [f"phrase {i:04d}" for i in range(1000)]
        corpus = corpus_from_matrix(phrases, matrix)
        query = unit(rng.randn(32))
        expected = modifier_rank_oracle(phrases, matrix, query, 25)
        got = [p for p, _ in score_modifiers(corpus, image_vec(query), top_n=25)]
        assert got == expected

    def test_top_n_zero_is_empty(self):
        matrix = np.eye(4)[:2]
        corpus = corpus_from_matrix(["a", "b"], matrix)
        assert score_modifiers(corpus, image_vec([1, 0, 0, 0]), top_n=0) == []

    def test_ties_broken_by_phrase(self):
        row = unit([1.0, 0.0])
        matrix = np.stack([row, row, row])
        corpus = corpus_from_matrix(["zebra", "apple", "mango"], matrix)
        ranked = score_modifiers(corpus, image_vec([1.0, 0.0]), top_n=3)
        assert [p for p, _ in ranked] == ["apple", "mango", "zebra"]

    def test_text_modality_rejected(self):
        matrix = np.eye(4)[:2]
        corpus = corpus_from_matrix(["a", "b"], matrix)
        text_vec = EmbeddingVector(values=unit([1, 0, 0, 0]), modality="text",
                                   provider_id="t", normalized=True)
        with pytest.raises(ContractViolation):
            score_modifiers(corpus, text_vec, top_n=2)


class TestAggregateCluster:
    def test_single_member_equals_score_modifiers(self):
        rng = np.random.RandomState(1)
        matrix = rng.randn(50, 16)
        matrix /= np.linalg.norm(matrix, axis=1, keepdims=True)
        phrases = [f"m{i:02d}" for i in range(50)]
        corpus = corpus_from_matrix(phrases, matrix)
        member = image_vec(rng.randn(16))
        assert aggregate_cluster(corpus, [member], top_n=10) == \
            score_modifiers(corpus, member, top_n=10)

    def test_identical_members_equal_single(self):
        rng = np.random.RandomState(2)
        matrix = rng.randn(30, 8)
        matrix /= np.linalg.norm(matrix, axis=1, keepdims=True)
        corpus = corpus_from_matrix([f"m{i}" for i in range(30)], matrix)
        member = image_vec(rng.randn(8))
        single = aggregate_cluster(corpus, [member], top_n=8)
        double = aggregate_cluster(corpus, [member, member], top_n=8)
        assert [p for p, _ in double] == [p for p, _ in single]
        for (_, a), (_, b) in zip(single, double):
            assert a == pytest.approx(b, abs=1e-12)

    def test_mean_ranking_matches_oracle(self):
        rng = np.random.RandomState(5)
        matrix = rng.randn(50, 12)
        matrix /= np.linalg.norm(matrix, axis=1, keepdims=True)
        phrases = [f"mod {i:02d}" for i in range(50)]
        corpus = corpus_from_matrix(phrases, matrix)
        members_raw = [unit(rng.randn(12)) for _ in range(5)]
        members = [image_vec(m) for m in members_raw]
        expected = cluster_mean_rank_oracle(phrases, matrix, members_raw, 15)
        got = [p for p, _ in aggregate_cluster(corpus, members, top_n=15)]
        assert got == expected

    def test_empty_cluster_rejected(self):
        corpus = corpus_from_matrix(["a", "b"], np.eye(4)[:2])
        with pytest.raises(SessionLookupError):
            aggregate_cluster(corpus, [], top_n=5)


def layout_for(groups: dict[int, list[str]]) -> CanvasLayout:
    positions = {}
    clusters = []
    x = 0.0
    for cluster_id, members in groups.items():
        for member in members:
            positions[member] = (x, 0.0)
            x += 128.0
        clusters.append(Cluster(id=cluster_id, member_ids=list(members),
                                exemplar_id=members[0], color=cluster_id))
    return CanvasLayout(positions=dict(positions), base_positions=positions,
                        scale=1.0, clusters=clusters, reduction_seed=0)


def engineered_setup():
    """Two clusters whose images score disjoint halves of the corpus."""
    dim = 8
    phrases = [f"p{i}" for i in range(6)]
    matrix = np.zeros((6, dim))
    for i in range(3):
        matrix[i, i] = 1.0          # modifiers 0-2 align with cluster A
    for i in range(3, 6):
        matrix[i, i] = 1.0          # modifiers 3-5 align with cluster B
    corpus = corpus_from_matrix(phrases, matrix)

    a_axis = np.zeros(dim)
    a_axis[:3] = 1.0
    b_axis = np.zeros(dim)
    b_axis[3:6] = 1.0
    embeddings = {
        "a0": image_vec(a_axis + [0.02, 0, 0, 0, 0, 0, 0, 0]),
        "a1": image_vec(a_axis + [0, 0.02, 0, 0, 0, 0, 0, 0]),
        "b0": image_vec(b_axis + [0, 0, 0, 0.02, 0, 0, 0, 0]),
        "b1": image_vec(b_axis + [0, 0, 0, 0, 0.02, 0, 0, 0]),
    }
    layout = layout_for({0: ["a0", "a1"], 1: ["b0", "b1"]})
    return corpus, layout, embeddings


class TestImageMenu:
    def test_engineered_disjoint_uniques(self):
        corpus, layout, embeddings = engineered_setup()
        captioner = StubCaptionProvider()
        from promptcanvas.generation.backends import render_mock_image

        pixels = render_mock_image("x", 0, 32, 32)
        menu_a = image_menu("a0", layout, corpus, captioner, embeddings,
                            pixels, top_n=3)
        menu_b = image_menu("b0", layout, corpus, captioner, embeddings,
                            pixels, top_n=3)
        unique_a = {p for p, _ in menu_a.cluster_unique_modifiers}
        unique_b = {p for p, _ in menu_b.cluster_unique_modifiers}
        assert unique_a == {"p0", "p1", "p2"}
        assert unique_b == {"p3", "p4", "p5"}
        assert unique_a.isdisjoint(unique_b)

    def test_unique_subset_of_cluster(self):
        corpus, layout, embeddings = engineered_setup()
        menu = image_menu("a1", layout, corpus, StubCaptionProvider(),
                          embeddings, None, top_n=4)
        cluster_set = {p for p, _ in menu.cluster_modifiers}
        unique_set = {p for p, _ in menu.cluster_unique_modifiers}
        assert unique_set <= cluster_set

    def test_single_cluster_unique_equals_cluster(self):
        corpus, _, embeddings = engineered_setup()
        layout = layout_for({0: ["a0", "a1", "b0", "b1"]})
        menu = image_menu("a0", layout, corpus, StubCaptionProvider(),
                          embeddings, None, top_n=4)
        assert menu.cluster_unique_modifiers == menu.cluster_modifiers

    def test_single_image_layout_cluster_equals_image_list(self):
        corpus, _, embeddings = engineered_setup()
        layout = layout_for({0: ["a0"]})
        menu = image_menu("a0", layout, corpus, StubCaptionProvider(),
                          {"a0": embeddings["a0"]}, None, top_n=4)
        assert [p for p, _ in menu.cluster_modifiers] == \
            [p for p, _ in menu.image_modifiers]
        assert menu.cluster_unique_modifiers == menu.cluster_modifiers

    def test_unknown_image_rejected(self):
        corpus, layout, embeddings = engineered_setup()
        with pytest.raises(SessionLookupError):
            image_menu("nope", layout, corpus, StubCaptionProvider(),
                       embeddings, None)

    def test_caption_from_provider(self):
        corpus, layout, embeddings = engineered_setup()
        from promptcanvas.generation.backends import render_mock_image

        pixels = render_mock_image("x", 0, 32, 32)
        menu = image_menu("a0", layout, corpus, StubCaptionProvider(),
                          embeddings, pixels, top_n=2)
        assert menu.caption.startswith("image ")

    def test_every_menu_phrase_exists_in_corpus(self):
        corpus, layout, embeddings = engineered_setup()
        menu = image_menu("b1", layout, corpus, StubCaptionProvider(),
                          embeddings, None, top_n=6)
        vocabulary = set(corpus.phrases)
        for ranking in (menu.image_modifiers, menu.cluster_modifiers,
                        menu.cluster_unique_modifiers):
            assert {p for p, _ in ranking} <= vocabulary


class TestBundledCorpusFile:
    def test_loads_with_categories(self, stub_embedder):
        corpus = ModifierCorpus.load_tsv(DEFAULT_CORPUS_PATH, stub_embedder)
        assert len(corpus) > 1500
        categories = {e.category for e in corpus.entries}
        assert categories == {"phrase", "artist"}
        artists = sum(1 for e in corpus.entries if e.category == "artist")
        assert artists >= 150

    def test_phrases_unique_case_insensitively(self, stub_embedder):
        corpus = ModifierCorpus.load_tsv(DEFAULT_CORPUS_PATH, stub_embedder)
        lowered = [e.phrase.lower() for e in corpus.entries]
        assert len(lowered) == len(set(lowered))
