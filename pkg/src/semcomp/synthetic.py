"""Seeded synthetic multi-topic documents for benchmarks and tests.

Each topic owns a disjoint vocabulary and a small pool of sentences; the
document is a shuffled sequence of single-topic sections whose sentences
are sampled from the pool. Re-sampling from a small pool gives the
redundancy that makes these documents compressible, mirroring how real
prose repeats itself.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .segmentation import SentenceBlock

__all__ = ["SyntheticDocument", "synthetic_topic_document", "block_topic_labels"]

_TOPIC_STEMS = (
    "alder", "basalt", "cumin", "delta", "ember", "fjord",
    "garnet", "heron", "indigo", "juniper", "krill", "lichen",
)


@dataclass(frozen=True)
class SyntheticDocument:
    seed: int
    n_topics: int
    text: str
    # (topic id, word count) per section, in document order
    sections: tuple[tuple[int, int], ...]

    @property
    def total_words(self) -> int:
        return sum(words for _, words in self.sections)


def _topic_vocab(topic: int, vocab_size: int) -> list[str]:
    stem = _TOPIC_STEMS[topic % len(_TOPIC_STEMS)]
    suffix = "" if topic < len(_TOPIC_STEMS) else str(topic // len(_TOPIC_STEMS))
    return [f"{stem}{suffix}{i:02d}" for i in range(vocab_size)]


def synthetic_topic_document(
    seed: int,
    n_topics: int = 4,
    sections_per_topic: int = 2,
    section_words: int = 2560,
    sentence_words: int = 8,
    pool_size: int = 8,
    vocab_size: int = 40,
) -> SyntheticDocument:
    """Generate a multi-topic document with disjoint per-topic vocabularies.

    section_words should be a multiple of sentence_words; picking block
    targets that divide section_words keeps block boundaries aligned with
    topic boundaries, which makes ground-truth block labels exact.
    """
    if n_topics < 1:
        raise ValueError("n_topics must be >= 1")
    if section_words % sentence_words != 0:
        raise ValueError("section_words must be a multiple of sentence_words")
    rng = random.Random(seed)

    pools: list[list[str]] = []
    for topic in range(n_topics):
        vocab = _topic_vocab(topic, vocab_size)
        pool = [
            " ".join(rng.choices(vocab, k=sentence_words)) + "."
            for _ in range(pool_size)
        ]
        pools.append(pool)

    order = [t for t in range(n_topics) for _ in range(sections_per_topic)]
    rng.shuffle(order)

    sentences_per_section = section_words // sentence_words
    parts: list[str] = []
    sections: list[tuple[int, int]] = []
    for topic in order:
        for _ in range(sentences_per_section):
            parts.append(rng.choice(pools[topic]))
        sections.append((topic, section_words))

    return SyntheticDocument(
        seed=seed,
        n_topics=n_topics,
        text=" ".join(parts),
        sections=tuple(sections),
    )


def block_topic_labels(
    doc: SyntheticDocument, blocks: list[SentenceBlock]
) -> list[int]:
    """Majority ground-truth topic per block, by word position."""
    word_topics: list[int] = []
    for topic, words in doc.sections:
        word_topics.extend([topic] * words)
    labels = []
    offset = 0
    for block in blocks:
        span = word_topics[offset : offset + block.length]
        labels.append(max(set(span), key=span.count))
        offset += block.length
    return labels
