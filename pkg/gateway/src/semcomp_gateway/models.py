"""Embedding and summarization model backends served by the gateway.

Two families: deterministic built-ins that load instantly and need no
weights (hashed bag-of-words embedder, lead-sentence extractive
summarizer), and optional wrappers around the pre-trained Hugging Face
models (all-MiniLM-L6-v2, distilbart-cnn-12-6) for deployments where the
weights are available. Both families satisfy the same wire contract:
unit-norm vectors (zero for empty text), summaries capped at max_len,
deterministic outputs.
"""

from __future__ import annotations

import hashlib
import re
from typing import Sequence

import numpy as np

_TOKEN_RE = re.compile(r"\w+")
_SENTENCE_BOUNDARY = re.compile(r"(?<=[.!?;:])\s+")


class HashedBowEmbedder:
    """Keyed-hash bag-of-words embedder; stable across platforms."""

    def __init__(self, dim: int = 384, seed: int = 0):
        if dim < 8:
            raise ValueError(f"dim must be >= 8, got {dim}")
        self.dim = dim
        self.name = f"hashed-bow-v1(dim={dim}, seed={seed})"
        self._key = seed.to_bytes(16, "big", signed=True)

    def _bucket(self, token: str) -> int:
        digest = hashlib.blake2b(
            token.encode("utf-8"), digest_size=8, key=self._key
        ).digest()
        return int.from_bytes(digest, "big") % self.dim

    def embed(self, texts: Sequence[str]) -> np.ndarray:
        out = np.zeros((len(texts), self.dim))
        for row, text in enumerate(texts):
            tokens = _TOKEN_RE.findall(text.lower())
            if not tokens:
                continue
            for token in tokens:
                out[row, self._bucket(token)] += 1.0
            out[row] /= np.linalg.norm(out[row])
        return out


class MiniLMEmbedder:
    """sentence-transformers/all-MiniLM-L6-v2; requires downloadable weights."""

    model_id = "sentence-transformers/all-MiniLM-L6-v2"

    def __init__(self):
        from sentence_transformers import SentenceTransformer

        self._model = SentenceTransformer(self.model_id)
        self.dim = int(self._model.get_sentence_embedding_dimension())
        self.name = self.model_id

    def embed(self, texts: Sequence[str]) -> np.ndarray:
        vectors = self._model.encode(
            list(texts), normalize_embeddings=True, show_progress_bar=False
        )
        out = np.asarray(vectors, dtype=float)
        # contract: empty text maps to the zero vector
        for row, text in enumerate(texts):
            if not text.strip():
                out[row] = 0.0
        return out


class LeadExtractiveSummarizer:
    """Deterministic lead-sentence summarizer; length unit is words.

    Takes whole sentences in order while they fit under max_len words; if
    even the first sentence does not fit, truncates it at the word level so
    the cap always holds.
    """

    name = "lead-extractive-v1"

    def summarize(self, text: str, max_len: int, min_len: int = 1) -> str:
        normalized = " ".join(text.split())
        sentences = _SENTENCE_BOUNDARY.split(normalized) if normalized else []
        picked: list[str] = []
        used = 0
        for sentence in sentences:
            words = sentence.split()
            if used + len(words) > max_len:
                break
            picked.append(sentence)
            used += len(words)
        if not picked and normalized:
            return " ".join(normalized.split()[:max_len])
        return " ".join(picked)


class DistilBartSummarizer:
    """sshleifer/distilbart-cnn-12-6 with greedy decoding; units are tokens."""

    model_id = "sshleifer/distilbart-cnn-12-6"

    def __init__(self):
        from transformers import pipeline

        self._pipe = pipeline("summarization", model=self.model_id)
        self.name = self.model_id

    def summarize(self, text: str, max_len: int, min_len: int = 1) -> str:
        result = self._pipe(
            text,
            max_length=max_len,
            min_length=min(min_len, max_len),
            do_sample=False,
            num_beams=1,
            truncation=True,
        )
        return result[0]["summary_text"].strip()


def build_embedder(spec: str, dim: int = 384, seed: int = 0):
    if spec == "hashed":
        return HashedBowEmbedder(dim=dim, seed=seed)
    if spec == "minilm":
        return MiniLMEmbedder()
    raise ValueError(f"unknown embedder spec {spec!r} (expected hashed|minilm)")


def build_summarizer(spec: str):
    if spec == "lead":
        return LeadExtractiveSummarizer()
    if spec == "distilbart":
        return DistilBartSummarizer()
    raise ValueError(f"unknown summarizer spec {spec!r} (expected lead|distilbart)")
