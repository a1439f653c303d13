"""End-to-end orchestration: text -> blocks -> graph -> plan -> compression.

Also computes the per-run cost accounting (summarizer-cost bound and
quadratic inference cost of the compressed context). The figures are
model cost units, not seconds: the quadratic attention model is an
accounting identity here, not a measurement.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Sequence

from .chunking import ChunkingConfig, choose_cluster_count, plan_chunks
from .compression import (
    KIND_EXTERNAL,
    KIND_FALLBACK,
    KIND_IDENTITY,
    CompressedDocument,
    CompressedSegment,
    CompressorSpec,
    ExtractiveCompressor,
    IdentityCompressor,
    SummarizerBackend,
    assemble,
    compress_chunk,
)
from .graph import EmbeddingBackend, HashedBowEmbedder, build_graph
from .segmentation import build_blocks, split_sentences

__all__ = [
    "PipelineConfig",
    "CostReport",
    "compress_document",
    "complexity_report",
    "make_embedder",
    "make_compressor",
    "run_report",
    "RUN_REPORT_SCHEMA",
]


@dataclass(frozen=True)
class PipelineConfig:
    """All pipeline knobs, flat so config files and CLI flags mirror it 1:1."""

    target_block_len: int = 64
    gamma1: float = 60.0
    gamma2: float = 600.0
    alpha: float = 0.15
    s_max: float = 150.0
    max_depth: int = 3
    contiguous_chunks: bool = False
    passthrough_threshold: int = 4096
    embedder: str = "stub"  # stub | gateway
    embed_dim: int = 256
    compressor: str = "fallback"  # fallback | identity | gateway
    dedup_threshold: float = 0.95
    seed: int = 0
    separator: str = "\n"
    gateway_url: str = ""
    gateway_timeout: float = 30.0

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must be in (0, 1], got {self.alpha}")
        if self.gamma1 >= self.gamma2:
            raise ValueError(f"gamma1={self.gamma1} must be < gamma2={self.gamma2}")
        if self.s_max > self.gamma2:
            raise ValueError(f"s_max={self.s_max} must be <= gamma2={self.gamma2}")
        if self.target_block_len < 1:
            raise ValueError("target_block_len must be >= 1")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if self.embedder not in ("stub", "gateway"):
            raise ValueError(f"unknown embedder {self.embedder!r}")
        if self.compressor not in ("fallback", "identity", "gateway"):
            raise ValueError(f"unknown compressor {self.compressor!r}")

    def compressor_spec(self) -> CompressorSpec:
        kind = {
            "fallback": KIND_FALLBACK,
            "identity": KIND_IDENTITY,
            "gateway": KIND_EXTERNAL,
        }[self.compressor]
        return CompressorSpec(
            kind=kind,
            min_input=self.gamma1,
            max_input=self.gamma2,
            summary_cap=self.s_max,
            dedup_threshold=self.dedup_threshold,
        )


@dataclass(frozen=True)
class CostReport:
    """Cost accounting for one run, in model cost units.

    compress_bound is the summarizer-cost ceiling (gamma2^2 / gamma1) * L;
    inference_cost is the quadratic cost of the compressed context,
    (alpha * L)^2. bound_satisfied records whether sum_sq actually stayed
    under the ceiling (it must whenever all chunk lengths fall inside
    [gamma1, gamma2]).
    """

    total_length: float
    chunk_lengths: tuple[float, ...]
    sum_sq: float
    compress_bound: float
    inference_cost: float
    total_bound: float
    bound_satisfied: bool
    alpha: float
    gamma1: float
    gamma2: float

    def to_dict(self) -> dict:
        return {
            "L": self.total_length,
            "chunk_lengths": list(self.chunk_lengths),
            "sum_sq": self.sum_sq,
            "compress_bound": self.compress_bound,
            "inference_cost": self.inference_cost,
            "total_bound": self.total_bound,
            "bound_satisfied": self.bound_satisfied,
            "alpha": self.alpha,
            "gamma1": self.gamma1,
            "gamma2": self.gamma2,
        }


def complexity_report(
    chunk_lengths: Sequence[float], alpha: float, gamma1: float, gamma2: float
) -> CostReport:
    """Cost accounting for a chunking with lengths l_i summing to L."""
    if not chunk_lengths:
        raise ValueError("chunk_lengths must be non-empty")
    if any(l <= 0 for l in chunk_lengths):
        raise ValueError("all chunk lengths must be positive")
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must be in (0, 1], got {alpha}")
    if gamma1 >= gamma2:
        raise ValueError(f"gamma1={gamma1} must be < gamma2={gamma2}")
    total = float(sum(chunk_lengths))
    sum_sq = float(sum(l * l for l in chunk_lengths))
    compress_bound = (gamma2 * gamma2 / gamma1) * total
    inference_cost = (alpha * total) ** 2
    return CostReport(
        total_length=total,
        chunk_lengths=tuple(float(l) for l in chunk_lengths),
        sum_sq=sum_sq,
        compress_bound=compress_bound,
        inference_cost=inference_cost,
        total_bound=compress_bound + inference_cost,
        bound_satisfied=sum_sq <= compress_bound,
        alpha=alpha,
        gamma1=gamma1,
        gamma2=gamma2,
    )


def make_embedder(config: PipelineConfig) -> EmbeddingBackend:
    if config.embedder == "stub":
        return HashedBowEmbedder(dim=config.embed_dim, seed=config.seed)
    from .gateway_client import GatewayClient, GatewayEmbedder

    if not config.gateway_url:
        raise ValueError("gateway embedder requires gateway_url")
    return GatewayEmbedder(GatewayClient(config.gateway_url, config.gateway_timeout))


def make_compressor(
    config: PipelineConfig, embedder: EmbeddingBackend
) -> tuple[SummarizerBackend, SummarizerBackend | None]:
    """Build (backend, fallback) per config.

    The automatic fallback always embeds with the offline stub so a gateway
    outage degrades to a fully local compressor.
    """
    if config.compressor == "identity":
        return IdentityCompressor(), None
    if config.compressor == "fallback":
        return ExtractiveCompressor(embedder, config.dedup_threshold), None
    from .gateway_client import GatewayClient, GatewaySummarizer

    if not config.gateway_url:
        raise ValueError("gateway compressor requires gateway_url")
    backend = GatewaySummarizer(GatewayClient(config.gateway_url, config.gateway_timeout))
    fallback = ExtractiveCompressor(
        HashedBowEmbedder(dim=config.embed_dim, seed=config.seed),
        config.dedup_threshold,
    )
    return backend, fallback


def _passthrough_document(text: str, length: int) -> CompressedDocument:
    segment = CompressedSegment(
        chunk_id=0,
        original_length=length,
        compressed_text=text,
        compressed_length=length,
        action_taken="passthrough",
        min_block_index=0,
        block_indices=(0,),
    )
    return CompressedDocument(
        segments=(segment,),
        text=text,
        total_original_length=length,
        total_compressed_length=length,
        realized_ratio=1.0,
    )


def compress_document(
    text: str,
    config: PipelineConfig | None = None,
    embedder: EmbeddingBackend | None = None,
    compressor: SummarizerBackend | None = None,
    fallback: SummarizerBackend | None = None,
    timings_ms: dict | None = None,
) -> tuple[CompressedDocument, CostReport]:
    """Run the full pipeline on one document.

    Inputs at or under config.passthrough_threshold (the base context
    window) are returned unchanged with ratio 1. Pass ``timings_ms`` a dict
    to receive per-stage wall-clock timings.
    """
    config = config or PipelineConfig()
    if not text or not text.strip():
        raise ValueError("input text is empty")

    def mark(stage: str, since: float) -> float:
        now = time.perf_counter()
        if timings_ms is not None:
            timings_ms[stage] = (now - since) * 1000.0
        return now

    t = time.perf_counter()
    sentences = split_sentences(text)
    total_len = sum(s.length for s in sentences)
    t = mark("segmentation", t)

    if total_len <= config.passthrough_threshold:
        doc = _passthrough_document(text, total_len)
        report = complexity_report(
            [total_len], config.alpha, config.gamma1, config.gamma2
        )
        mark("total", t)
        return doc, report

    blocks = build_blocks(sentences, config.target_block_len)
    t = mark("blocking", t)

    if embedder is None:
        embedder = make_embedder(config)
    vectors = embedder.embed_batch([b.text for b in blocks])
    graph = build_graph(vectors)
    t = mark("embedding", t)

    k = choose_cluster_count(total_len, config.alpha, config.s_max, len(blocks))
    plan = plan_chunks(
        blocks,
        graph,
        ChunkingConfig(
            gamma1=config.gamma1,
            gamma2=config.gamma2,
            k=k,
            max_depth=config.max_depth,
            contiguous=config.contiguous_chunks,
        ),
    )
    t = mark("chunking", t)

    if compressor is None:
        compressor, auto_fallback = make_compressor(config, embedder)
        if fallback is None:
            fallback = auto_fallback
    spec = config.compressor_spec()
    segments = [
        compress_chunk(chunk, spec, compressor, fallback) for chunk in plan.leaves
    ]
    doc = assemble(segments, config.separator)
    t = mark("compression", t)

    report = complexity_report(
        [chunk.length for chunk in plan.leaves],
        config.alpha,
        config.gamma1,
        config.gamma2,
    )
    return doc, report


RUN_REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "semcomp run report",
    "type": "object",
    "required": ["input_length", "output_length", "ratio", "chunks", "cost"],
    "properties": {
        "input_length": {"type": "number", "minimum": 0},
        "output_length": {"type": "number", "minimum": 0},
        "ratio": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
        "chunks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "blocks", "length", "action"],
                "properties": {
                    "id": {"type": "integer", "minimum": 0},
                    "blocks": {
                        "type": "array",
                        "items": {"type": "integer", "minimum": 0},
                    },
                    "length": {"type": "number", "minimum": 0},
                    "action": {"enum": ["compressed", "passthrough"]},
                },
                "additionalProperties": False,
            },
        },
        "cost": {
            "type": "object",
            "required": [
                "L",
                "chunk_lengths",
                "sum_sq",
                "compress_bound",
                "inference_cost",
                "total_bound",
                "bound_satisfied",
            ],
            "properties": {
                "L": {"type": "number"},
                "chunk_lengths": {"type": "array", "items": {"type": "number"}},
                "sum_sq": {"type": "number"},
                "compress_bound": {"type": "number"},
                "inference_cost": {"type": "number"},
                "total_bound": {"type": "number"},
                "bound_satisfied": {"type": "boolean"},
                "alpha": {"type": "number"},
                "gamma1": {"type": "number"},
                "gamma2": {"type": "number"},
            },
        },
        "warnings": {"type": "array", "items": {"type": "string"}},
        "timings_ms": {
            "type": "object",
            "additionalProperties": {"type": "number"},
        },
    },
    "additionalProperties": False,
}


def run_report(
    doc: CompressedDocument,
    cost: CostReport,
    timings_ms: dict | None = None,
) -> dict:
    """Machine-readable run report; validates against RUN_REPORT_SCHEMA."""
    chunk_entries = [
        {
            "id": s.chunk_id,
            "blocks": list(s.block_indices),
            "length": s.original_length,
            "action": s.action_taken,
        }
        for s in doc.segments
    ]
    report = {
        "input_length": doc.total_original_length,
        "output_length": doc.total_compressed_length,
        "ratio": doc.realized_ratio,
        "chunks": chunk_entries,
        "cost": cost.to_dict(),
    }
    warnings = [s.warning for s in doc.segments if s.warning]
    if warnings:
        report["warnings"] = warnings
    if timings_ms:
        report["timings_ms"] = dict(timings_ms)
    return report
