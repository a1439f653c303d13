"""Block embeddings and the pairwise cosine-similarity graph.

The graph is a dense symmetric matrix: node counts are small (blocks, not
sentences) and the clustering stage consumes every pairwise weight.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from typing import Protocol, Sequence

import numpy as np

__all__ = [
    "SimilarityGraph",
    "EmbeddingBackend",
    "cosine_similarity",
    "build_graph",
    "hashed_bow_embed",
    "HashedBowEmbedder",
]

_TOKEN_RE = re.compile(r"\w+")


class EmbeddingBackend(Protocol):
    """Batch text embedder; outputs are unit-norm (or zero for empty text)."""

    name: str

    def embed_batch(self, texts: Sequence[str]) -> np.ndarray: ...


@dataclass(frozen=True)
class SimilarityGraph:
    """Symmetric weighted graph over blocks; weights are cosine similarities."""

    n: int
    weights: np.ndarray  # (n, n), entries in [-1, 1], diag 1 for nonzero nodes


def cosine_similarity(u: Sequence[float], v: Sequence[float]) -> float:
    """Cosine of the angle between two vectors; 0 if either has zero norm."""
    ua = np.asarray(u, dtype=float)
    va = np.asarray(v, dtype=float)
    if ua.shape != va.shape:
        raise ValueError(f"dimension mismatch: {ua.shape} vs {va.shape}")
    nu = float(np.linalg.norm(ua))
    nv = float(np.linalg.norm(va))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    sim = float(np.dot(ua / nu, va / nv))
    return min(1.0, max(-1.0, sim))


def build_graph(vectors: Sequence[Sequence[float]]) -> SimilarityGraph:
    """Build the full pairwise cosine-similarity matrix over ``vectors``."""
    if len(vectors) == 0:
        raise ValueError("cannot build a graph from an empty vector list")
    arr = np.asarray(vectors, dtype=float)
    if arr.ndim != 2:
        raise ValueError("embedding vectors must all have the same dimension")
    n = arr.shape[0]
    norms = np.linalg.norm(arr, axis=1)
    unit = np.zeros_like(arr)
    nonzero = norms > 0.0
    unit[nonzero] = arr[nonzero] / norms[nonzero, None]
    weights = unit @ unit.T
    weights = (weights + weights.T) / 2.0  # exact symmetry
    np.clip(weights, -1.0, 1.0, out=weights)
    diag = np.where(nonzero, 1.0, 0.0)
    weights[np.arange(n), np.arange(n)] = diag
    return SimilarityGraph(n=n, weights=weights)


def _bucket(token: str, dim: int, key: bytes) -> int:
    digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8, key=key).digest()
    return int.from_bytes(digest, "big") % dim


def _seed_key(seed: int) -> bytes:
    # blake2b keys are capped at 64 bytes; 16 covers any practical seed
    return seed.to_bytes(16, "big", signed=True)


def hashed_bow_embed(text: str, dim: int = 256, seed: int = 0) -> np.ndarray:
    """Deterministic hashed bag-of-words embedding, L2-normalized.

    Stand-in for a pre-trained sentence embedder: same (text, dim, seed)
    gives the identical vector on every platform. Empty text maps to the
    zero vector.
    """
    if dim < 8:
        raise ValueError(f"dim must be >= 8, got {dim}")
    vec = np.zeros(dim)
    tokens = _TOKEN_RE.findall(text.lower())
    if not tokens:
        return vec
    key = _seed_key(seed)
    for token in tokens:
        vec[_bucket(token, dim, key)] += 1.0
    return vec / np.linalg.norm(vec)


class HashedBowEmbedder:
    """Batch backend around :func:`hashed_bow_embed` with a token cache."""

    def __init__(self, dim: int = 256, seed: int = 0):
        if dim < 8:
            raise ValueError(f"dim must be >= 8, got {dim}")
        self.dim = dim
        self.seed = seed
        self.name = f"hashed-bow(dim={dim}, seed={seed})"
        self._key = _seed_key(seed)
        self._buckets: dict[str, int] = {}

    def _token_bucket(self, token: str) -> int:
        bucket = self._buckets.get(token)
        if bucket is None:
            bucket = _bucket(token, self.dim, self._key)
            self._buckets[token] = bucket
        return bucket

    def embed_batch(self, texts: Sequence[str]) -> np.ndarray:
        out = np.zeros((len(texts), self.dim))
        for row, text in enumerate(texts):
            tokens = _TOKEN_RE.findall(text.lower())
            if not tokens:
                continue
            for token in tokens:
                out[row, self._token_bucket(token)] += 1.0
            out[row] /= np.linalg.norm(out[row])
        return out
