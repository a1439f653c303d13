"""Rule-based sentence splitting and sequential block packing.

Splitting is deliberately naive (punctuation only, no abbreviation
handling): mis-splits only shrink granularity, which the block packer
absorbs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

__all__ = [
    "Sentence",
    "SentenceBlock",
    "split_sentences",
    "count_length",
    "register_length_counter",
    "get_length_counter",
    "build_blocks",
]

# A sentence ends at ., !, ?, ; or : followed by whitespace (or end of text).
_SENTENCE_BOUNDARY = re.compile(r"(?<=[.!?;:])\s+")


@dataclass(frozen=True)
class Sentence:
    """One sentence (or sub-sentence) of the normalized document."""

    index: int
    text: str
    length: int


@dataclass(frozen=True)
class SentenceBlock:
    """Consecutive sentences packed to a target length; a graph node."""

    index: int
    sentence_span: tuple[int, int]  # half-open range of sentence indices
    text: str
    length: int


def count_length(text: str) -> int:
    """Length of ``text`` in whitespace-delimited words."""
    return len(text.split())


_LENGTH_COUNTERS: dict[str, Callable[[str], int]] = {"words": count_length}


def register_length_counter(name: str, counter: Callable[[str], int]) -> None:
    """Register an alternative length unit under ``name``."""
    _LENGTH_COUNTERS[name] = counter


def get_length_counter(name: str = "words") -> Callable[[str], int]:
    try:
        return _LENGTH_COUNTERS[name]
    except KeyError:
        raise KeyError(f"unknown length counter {name!r}") from None


def split_sentences(text: str) -> list[Sentence]:
    """Split text into sentences at terminator-plus-whitespace boundaries.

    Whitespace runs are normalized to single spaces first, so joining the
    returned sentence texts with single spaces reproduces the normalized
    document exactly.
    """
    normalized = " ".join(text.split())
    if not normalized:
        return []
    pieces = _SENTENCE_BOUNDARY.split(normalized)
    return [
        Sentence(index=i, text=piece, length=count_length(piece))
        for i, piece in enumerate(pieces)
    ]


def _make_block(index: int, sentences: list[Sentence], start: int, stop: int) -> SentenceBlock:
    text = " ".join(s.text for s in sentences[start:stop])
    # single-space joins add no words, so block length is the plain sum
    length = sum(s.length for s in sentences[start:stop])
    return SentenceBlock(index=index, sentence_span=(start, stop), text=text, length=length)


def build_blocks(sentences: list[Sentence], target_block_len: int) -> list[SentenceBlock]:
    """Greedily pack sentences into blocks, closing each at >= target length.

    Every block except possibly the last reaches ``target_block_len``; a
    single oversize sentence forms its own block.
    """
    if target_block_len < 1:
        raise ValueError(f"target_block_len must be >= 1, got {target_block_len}")
    blocks: list[SentenceBlock] = []
    start = 0
    acc = 0
    for i, sentence in enumerate(sentences):
        acc += sentence.length
        if acc >= target_block_len:
            blocks.append(_make_block(len(blocks), sentences, start, i + 1))
            start, acc = i + 1, 0
    if start < len(sentences):
        blocks.append(_make_block(len(blocks), sentences, start, len(sentences)))
    return blocks
