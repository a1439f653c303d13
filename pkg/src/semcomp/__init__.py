"""Topic-aware semantic compression for long-document LLM preprocessing.

Pipeline: split text into sentences, pack them into fixed-size blocks,
embed the blocks, cluster the pairwise-similarity graph to recover topic
structure, compress each topic chunk independently, and reassemble the
results in original order.
"""

from .benchmarks import (
    PasskeyCase,
    RetrievalScore,
    extract_passkey,
    generate_passkey_case,
    perplexity,
    score_retrieval,
)
from .chunking import (
    ChunkingConfig,
    ChunkPlan,
    ClusterAssignment,
    TopicChunk,
    choose_cluster_count,
    cluster_blocks,
    flatten,
    form_chunks,
    plan_chunks,
)
from .compression import (
    CompressedDocument,
    CompressedSegment,
    CompressorSpec,
    ExtractiveCompressor,
    IdentityCompressor,
    assemble,
    compress_chunk,
    extractive_fallback,
)
from .graph import (
    HashedBowEmbedder,
    SimilarityGraph,
    build_graph,
    cosine_similarity,
    hashed_bow_embed,
)
from .pipeline import (
    CostReport,
    PipelineConfig,
    RUN_REPORT_SCHEMA,
    complexity_report,
    compress_document,
    run_report,
)
from .segmentation import (
    Sentence,
    SentenceBlock,
    build_blocks,
    count_length,
    split_sentences,
)

__version__ = "0.1.0"
