"""Per-chunk compression with a deterministic extractive fallback.

Chunks are compressed independently. Backend failures degrade down a
ladder (external -> extractive fallback -> passthrough) instead of
aborting a long-document job.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol, Sequence

import numpy as np

from .chunking import ACTION_PASSTHROUGH, TopicChunk
from .graph import EmbeddingBackend
from .segmentation import Sentence, count_length, split_sentences

__all__ = [
    "CompressorSpec",
    "CompressedSegment",
    "CompressedDocument",
    "SummarizerBackend",
    "IdentityCompressor",
    "ExtractiveCompressor",
    "extractive_fallback",
    "compress_chunk",
    "assemble",
]

KIND_EXTERNAL = "external_abstractive"
KIND_FALLBACK = "extractive_fallback"
KIND_IDENTITY = "identity"


class SummarizerBackend(Protocol):
    name: str

    def summarize(self, text: str, max_len: int) -> str: ...


@dataclass(frozen=True)
class CompressorSpec:
    """Compressor kind plus its operating bounds.

    min_input/max_input are the summarizer's accepted input range (gamma1,
    gamma2); summary_cap is the per-chunk output budget; dedup_threshold is
    the cosine similarity above which the fallback drops a sentence as a
    near-duplicate.
    """

    kind: str = KIND_FALLBACK
    min_input: float = 60.0
    max_input: float = 600.0
    summary_cap: float = 150.0
    dedup_threshold: float = 0.95

    def __post_init__(self):
        if self.kind not in (KIND_EXTERNAL, KIND_FALLBACK, KIND_IDENTITY):
            raise ValueError(f"unknown compressor kind {self.kind!r}")
        if self.min_input >= self.max_input:
            raise ValueError(
                f"min_input={self.min_input} must be < max_input={self.max_input}"
            )
        if self.summary_cap > self.max_input:
            raise ValueError(
                f"summary_cap={self.summary_cap} must be <= max_input={self.max_input}"
            )
        if not 0.0 < self.dedup_threshold <= 1.0:
            raise ValueError(
                f"dedup_threshold must be in (0, 1], got {self.dedup_threshold}"
            )


@dataclass(frozen=True)
class CompressedSegment:
    chunk_id: int
    original_length: int
    compressed_text: str
    compressed_length: int
    action_taken: str  # "compressed" or "passthrough"
    min_block_index: int
    block_indices: tuple[int, ...] = ()
    warning: str = ""


@dataclass(frozen=True)
class CompressedDocument:
    segments: tuple[CompressedSegment, ...]
    text: str
    total_original_length: int
    total_compressed_length: int
    realized_ratio: float


def extractive_fallback(
    sentences: Sequence[Sentence],
    embeddings: Sequence[Sequence[float]],
    budget: float,
    dedup_threshold: float = 0.95,
) -> str:
    """Deterministic two-pass extractive compressor.

    Pass 1 scans in original order and drops any sentence whose cosine
    similarity to an already-kept sentence exceeds ``dedup_threshold``.
    Pass 2, only if the survivors still exceed ``budget``, ranks them by
    similarity to the survivors' centroid (ties to the earlier index) and
    keeps top-ranked sentences until the budget is met. Output preserves
    original order, so rare outliers survive as long as they fit.
    """
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    if len(embeddings) != len(sentences):
        raise ValueError(
            f"{len(embeddings)} embeddings for {len(sentences)} sentences"
        )
    if not sentences:
        return ""

    arr = np.asarray(embeddings, dtype=float)
    norms = np.linalg.norm(arr, axis=1)
    unit = np.zeros_like(arr)
    nonzero = norms > 0.0
    unit[nonzero] = arr[nonzero] / norms[nonzero, None]
    sims = np.clip(unit @ unit.T, -1.0, 1.0)

    kept: list[int] = []
    for i in range(len(sentences)):
        if kept and bool(np.any(sims[i, kept] > dedup_threshold)):
            continue
        kept.append(i)

    total = sum(sentences[i].length for i in kept)
    if total > budget:
        centroid = arr[kept].mean(axis=0)
        cnorm = float(np.linalg.norm(centroid))
        if cnorm > 0.0:
            scores = unit[kept] @ (centroid / cnorm)
        else:
            scores = np.zeros(len(kept))
        score_of = dict(zip(kept, scores))
        ranked = sorted(kept, key=lambda i: (-score_of[i], i))
        chosen: list[int] = []
        used = 0
        for i in ranked:
            length = sentences[i].length
            if chosen and used + length > budget:
                break
            chosen.append(i)
            used += length
            if used >= budget:
                break
        kept = sorted(chosen)

    return " ".join(sentences[i].text for i in kept)


class IdentityCompressor:
    """Returns the input unchanged; useful for plumbing tests."""

    name = "identity"

    def summarize(self, text: str, max_len: int) -> str:
        return text


class ExtractiveCompressor:
    """Backend wrapper: split, embed, and run the extractive fallback."""

    def __init__(self, embedder: EmbeddingBackend, dedup_threshold: float = 0.95):
        self.embedder = embedder
        self.dedup_threshold = dedup_threshold
        self.name = f"extractive({embedder.name})"

    def summarize(self, text: str, max_len: int) -> str:
        sentences = split_sentences(text)
        vectors = self.embedder.embed_batch([s.text for s in sentences])
        return extractive_fallback(sentences, vectors, max_len, self.dedup_threshold)


def _passthrough(chunk: TopicChunk, warning: str = "") -> CompressedSegment:
    return CompressedSegment(
        chunk_id=chunk.chunk_id,
        original_length=chunk.length,
        compressed_text=chunk.text,
        compressed_length=chunk.length,
        action_taken="passthrough",
        min_block_index=chunk.min_block_index,
        block_indices=chunk.block_indices,
        warning=warning,
    )


def compress_chunk(
    chunk: TopicChunk,
    spec: CompressorSpec,
    backend: SummarizerBackend,
    fallback: SummarizerBackend | None = None,
) -> CompressedSegment:
    """Compress one chunk within spec.summary_cap, degrading on failure.

    The output never expands: a summary longer than the chunk is replaced
    by the chunk itself.
    """
    if chunk.action == ACTION_PASSTHROUGH:
        return _passthrough(chunk)

    budget = int(spec.summary_cap)
    warning = ""
    output: str | None = None
    try:
        candidate = backend.summarize(chunk.text, max_len=budget)
        if candidate.strip():
            output = candidate
        else:
            warning = f"backend {backend.name} returned empty output"
    except Exception as exc:
        warning = f"backend {backend.name} failed: {exc}"

    if output is None and fallback is not None:
        try:
            candidate = fallback.summarize(chunk.text, max_len=budget)
            if candidate.strip():
                output = candidate
            else:
                warning += f"; fallback {fallback.name} returned empty output"
        except Exception as exc:
            warning += f"; fallback {fallback.name} failed: {exc}"

    if output is None:
        return _passthrough(chunk, warning=warning)

    out_len = count_length(output)
    if out_len > chunk.length:
        return _passthrough(chunk, warning=warning)

    return CompressedSegment(
        chunk_id=chunk.chunk_id,
        original_length=chunk.length,
        compressed_text=output,
        compressed_length=out_len,
        action_taken="compressed",
        min_block_index=chunk.min_block_index,
        block_indices=chunk.block_indices,
        warning=warning,
    )


def assemble(
    segments: Sequence[CompressedSegment], separator: str = "\n"
) -> CompressedDocument:
    """Join segments in original document order and total up the accounting."""
    if not segments:
        raise ValueError("cannot assemble an empty segment list")
    ids = [s.chunk_id for s in segments]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate chunk_id in segments")
    ordered = tuple(sorted(segments, key=lambda s: s.min_block_index))
    text = separator.join(s.compressed_text for s in ordered)
    total_original = sum(s.original_length for s in ordered)
    total_compressed = sum(s.compressed_length for s in ordered)
    return CompressedDocument(
        segments=ordered,
        text=text,
        total_original_length=total_original,
        total_compressed_length=total_compressed,
        realized_ratio=total_compressed / total_original,
    )
