import pytest
from hypothesis import given
from hypothesis import strategies as st

from semcomp.segmentation import (
    build_blocks,
    count_length,
    get_length_counter,
    register_length_counter,
    split_sentences,
)


class TestSplitSentences:
    def test_basic_terminators(self):
        assert [s.text for s in split_sentences("A. B! C?")] == ["A.", "B!", "C?"]

    def test_empty_input(self):
        assert split_sentences("") == []
        assert split_sentences("   \n\t ") == []

    def test_abbreviations_split_naively(self):
        # punctuation-only rule: no abbreviation awareness by design
        texts = [s.text for s in split_sentences("Dr. Smith arrived. He sat.")]
        assert texts == ["Dr.", "Smith arrived.", "He sat."]

    def test_semicolon_and_colon_split_subsentences(self):
        texts = [s.text for s in split_sentences("First part; second part: third.")]
        assert texts == ["First part;", "second part:", "third."]

    def test_trailing_fragment_kept(self):
        texts = [s.text for s in split_sentences("Done. trailing words")]
        assert texts == ["Done.", "trailing words"]

    def test_whitespace_normalized(self):
        texts = [s.text for s in split_sentences("a  b.\n\n c\td.")]
        assert texts == ["a b.", "c d."]

    def test_indices_consecutive_and_lengths(self):
        sentences = split_sentences("one two. three. four five six.")
        assert [s.index for s in sentences] == [0, 1, 2]
        assert [s.length for s in sentences] == [2, 1, 3]

    @given(st.text(max_size=300))
    def test_join_reproduces_normalized_document(self, text):
        sentences = split_sentences(text)
        assert " ".join(s.text for s in sentences) == " ".join(text.split())

    @given(st.text(max_size=300))
    def test_split_is_idempotent_over_join(self, text):
        once = split_sentences(text)
        again = split_sentences(" ".join(s.text for s in once))
        assert [s.text for s in again] == [s.text for s in once]

    @given(st.text(max_size=300))
    def test_sentences_non_empty(self, text):
        assert all(s.text.strip() for s in split_sentences(text))


class TestCountLength:
    def test_word_count(self):
        assert count_length("the sky is blue") == 4

    def test_empty(self):
        assert count_length("") == 0

    def test_whitespace_runs_collapse(self):
        assert count_length("a  b\n c") == 3

    @given(st.text(max_size=120), st.text(max_size=120))
    def test_additive_over_spaced_concatenation(self, a, b):
        # guard: only when both halves are themselves non-empty words-wise
        assert count_length(f"{a} {b}") == count_length(a) + count_length(b)

    def test_registry_roundtrip(self):
        register_length_counter("chars", len)
        assert get_length_counter("chars")("abcd") == 4
        assert get_length_counter()("a b") == 2
        with pytest.raises(KeyError):
            get_length_counter("nope")


class TestBuildBlocks:
    def test_greedy_packing_closes_at_target(self):
        sentences = split_sentences("a b c. d e f. g h i.")
        blocks = build_blocks(sentences, 5)
        assert [b.sentence_span for b in blocks] == [(0, 2), (2, 3)]
        assert [b.length for b in blocks] == [6, 3]

    def test_single_oversize_sentence(self):
        sentences = split_sentences("one two three four five six seven eight nine ten eleven twelve.")
        blocks = build_blocks(sentences, 5)
        assert len(blocks) == 1
        assert blocks[0].length == 12

    def test_empty_sentences(self):
        assert build_blocks([], 5) == []

    def test_rejects_zero_target(self):
        with pytest.raises(ValueError):
            build_blocks(split_sentences("a."), 0)

    def test_block_text_is_joined_sentences(self):
        sentences = split_sentences("a b. c d. e.")
        blocks = build_blocks(sentences, 4)
        assert blocks[0].text == "a b. c d."

    @given(st.text(max_size=500), st.integers(min_value=1, max_value=40))
    def test_partition_property(self, text, target):
        sentences = split_sentences(text)
        blocks = build_blocks(sentences, target)
        spans = [b.sentence_span for b in blocks]
        # contiguous, ordered, exact cover
        expected_start = 0
        for start, stop in spans:
            assert start == expected_start
            assert stop > start
            expected_start = stop
        assert expected_start == len(sentences)
        assert [b.index for b in blocks] == list(range(len(blocks)))

    @given(st.text(max_size=500), st.integers(min_value=1, max_value=40))
    def test_length_floor_except_last(self, text, target):
        blocks = build_blocks(split_sentences(text), target)
        for block in blocks[:-1]:
            assert block.length >= target
