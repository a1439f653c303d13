"""Topic structure recovery: cluster the block graph, form chunks, recurse.

Clustering is agglomerative with average linkage on d = 1 - similarity.
That choice is deterministic (no RNG), consumes the similarity graph
directly, and admits an exact brute-force oracle for testing. Ties are
broken by the lexicographically smallest pair of minimum member indices,
so identical inputs give identical merges on every platform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .graph import SimilarityGraph
from .segmentation import SentenceBlock

__all__ = [
    "ClusterAssignment",
    "TopicChunk",
    "ChunkNode",
    "ChunkPlan",
    "ChunkingConfig",
    "cluster_blocks",
    "form_chunks",
    "plan_chunks",
    "flatten",
    "choose_cluster_count",
]

ACTION_COMPRESS = "compress"
ACTION_PASSTHROUGH = "passthrough"


@dataclass(frozen=True)
class ClusterAssignment:
    """Cluster ids per block; ids are dense in [0, k), ordered by first member."""

    labels: tuple[int, ...]
    k: int


@dataclass(frozen=True)
class TopicChunk:
    """Blocks of one cluster, in document order; the unit of compression."""

    chunk_id: int
    block_indices: tuple[int, ...]
    text: str
    length: int
    depth: int
    action: str  # ACTION_COMPRESS or ACTION_PASSTHROUGH

    @property
    def min_block_index(self) -> int:
        return self.block_indices[0]


@dataclass
class ChunkNode:
    """Tree node of a chunk plan; children are the sub-level re-chunking."""

    chunk: TopicChunk
    children: list["ChunkNode"] = field(default_factory=list)

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass(frozen=True)
class ChunkPlan:
    """Chunk tree plus its flattened (document-ordered) leaves."""

    roots: tuple[ChunkNode, ...]
    bounds: tuple[float, float]  # (gamma1, gamma2)
    leaves: tuple[TopicChunk, ...]


@dataclass(frozen=True)
class ChunkingConfig:
    """Bounds and recursion controls for chunk planning.

    gamma1/gamma2 are the compressor's min/max input lengths; chunks under
    gamma1 pass through verbatim, chunks over gamma2 are re-chunked.
    max_depth counts clustering passes (>= 1).
    """

    gamma1: float
    gamma2: float
    k: int
    max_depth: int = 3
    contiguous: bool = False

    def __post_init__(self):
        if self.gamma1 >= self.gamma2:
            raise ValueError(f"invalid bounds: gamma1={self.gamma1} >= gamma2={self.gamma2}")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.max_depth < 1:
            raise ValueError(f"max_depth must be >= 1, got {self.max_depth}")


def cluster_blocks(graph: SimilarityGraph, k: int) -> ClusterAssignment:
    """Agglomerative average-linkage clustering down to k clusters.

    Distance between clusters is the mean of pairwise d = 1 - weight over
    their members. At each step the closest pair merges; exact-distance
    ties resolve to the smallest (min member index, min member index) pair.
    """
    n = graph.n
    if k < 1 or k > n:
        raise ValueError(f"k must be in [1, {n}], got {k}")

    dist = 1.0 - graph.weights
    # dsum[i][j] = summed pairwise distance between clusters at slots i, j;
    # average linkage = dsum / (size_i * size_j). Merging keeps the slot
    # with the smaller minimum member index, so slot order == min-member
    # order and numpy's first-minimum argmin applies the tie-break rule.
    dsum = dist.copy()
    sizes = np.ones(n)
    active = np.ones(n, dtype=bool)
    members: list[list[int]] = [[i] for i in range(n)]
    avg = dist.copy()
    idx = np.arange(n)
    avg[idx, idx] = np.inf

    for _ in range(n - k):
        flat = int(np.argmin(avg))
        a, b = divmod(flat, n)
        if b < a:
            a, b = b, a
        dsum[a, :] += dsum[b, :]
        dsum[:, a] += dsum[:, b]
        sizes[a] += sizes[b]
        members[a].extend(members[b])
        active[b] = False
        avg[b, :] = np.inf
        avg[:, b] = np.inf
        row = dsum[a, :] / (sizes[a] * sizes)
        row[~active] = np.inf
        row[a] = np.inf
        avg[a, :] = row
        avg[:, a] = row

    labels = [0] * n
    for label, slot in enumerate(i for i in range(n) if active[i]):
        for member in members[slot]:
            labels[member] = label
    return ClusterAssignment(labels=tuple(labels), k=k)


def _make_chunk(
    chunk_id: int,
    blocks: list[SentenceBlock],
    depth: int,
    passthrough_below: float | None,
) -> TopicChunk:
    text = " ".join(b.text for b in blocks)
    length = sum(b.length for b in blocks)
    action = ACTION_COMPRESS
    if passthrough_below is not None and length < passthrough_below:
        action = ACTION_PASSTHROUGH
    return TopicChunk(
        chunk_id=chunk_id,
        block_indices=tuple(b.index for b in blocks),
        text=text,
        length=length,
        depth=depth,
        action=action,
    )


def form_chunks(
    assignment: ClusterAssignment,
    blocks: list[SentenceBlock],
    *,
    passthrough_below: float | None = None,
    depth: int = 0,
    contiguous: bool = False,
) -> list[TopicChunk]:
    """Group blocks by cluster label into chunks ordered by first block.

    With ``contiguous`` set, each cluster is split into its maximal runs of
    consecutive blocks so every chunk is a contiguous span.
    """
    labels = assignment.labels
    if len(labels) != len(blocks):
        raise ValueError(
            f"assignment labels {len(labels)} != block count {len(blocks)}"
        )
    seen = set(labels)
    if seen and (len(seen) != assignment.k or min(seen) < 0 or max(seen) >= assignment.k):
        raise ValueError("malformed assignment: labels are not dense in [0, k)")

    groups: dict[int, list[SentenceBlock]] = {}
    for label, block in zip(labels, blocks):
        groups.setdefault(label, []).append(block)

    member_lists: list[list[SentenceBlock]] = []
    for group in groups.values():
        group.sort(key=lambda b: b.index)
        if contiguous:
            run = [group[0]]
            for block in group[1:]:
                if block.index == run[-1].index + 1:
                    run.append(block)
                else:
                    member_lists.append(run)
                    run = [block]
            member_lists.append(run)
        else:
            member_lists.append(group)

    member_lists.sort(key=lambda g: g[0].index)
    return [
        _make_chunk(i, group, depth, passthrough_below)
        for i, group in enumerate(member_lists)
    ]


def _greedy_split(
    chunk: TopicChunk,
    blocks: list[SentenceBlock],
    config: ChunkingConfig,
    depth: int,
) -> list[TopicChunk]:
    """Split an oversize chunk at block boundaries into pieces <= gamma2."""
    pieces: list[list[SentenceBlock]] = []
    current: list[SentenceBlock] = []
    acc = 0
    for index in chunk.block_indices:
        block = blocks[index]
        if current and acc + block.length > config.gamma2:
            pieces.append(current)
            current, acc = [], 0
        current.append(block)
        acc += block.length
    if current:
        pieces.append(current)
    return [
        _make_chunk(i, piece, depth, config.gamma1) for i, piece in enumerate(pieces)
    ]


def _grow(
    chunk: TopicChunk,
    blocks: list[SentenceBlock],
    graph: SimilarityGraph,
    config: ChunkingConfig,
    depth: int,
) -> ChunkNode:
    node = ChunkNode(chunk=chunk)
    if chunk.length <= config.gamma2 or len(chunk.block_indices) == 1:
        return node
    if depth < config.max_depth - 1:
        sub_indices = list(chunk.block_indices)
        k_sub = min(math.ceil(chunk.length / config.gamma2), len(sub_indices))
        sub_graph = SimilarityGraph(
            n=len(sub_indices),
            weights=graph.weights[np.ix_(sub_indices, sub_indices)],
        )
        sub_assignment = cluster_blocks(sub_graph, k_sub)
        sub_blocks = [blocks[i] for i in sub_indices]
        sub_chunks = form_chunks(
            sub_assignment,
            sub_blocks,
            passthrough_below=config.gamma1,
            depth=depth + 1,
            contiguous=config.contiguous,
        )
        node.children = [
            _grow(sc, blocks, graph, config, depth + 1) for sc in sub_chunks
        ]
    else:
        # clustering budget exhausted: force termination at block boundaries
        node.children = [
            ChunkNode(chunk=piece)
            for piece in _greedy_split(chunk, blocks, config, depth + 1)
        ]
    return node


def _collect_leaves(node: ChunkNode, out: list[TopicChunk]) -> None:
    if node.is_leaf:
        out.append(node.chunk)
        return
    for child in node.children:
        _collect_leaves(child, out)


def plan_chunks(
    blocks: list[SentenceBlock],
    graph: SimilarityGraph,
    config: ChunkingConfig,
) -> ChunkPlan:
    """Cluster blocks into a chunk tree and flatten it in document order.

    Oversize chunks (> gamma2) are re-clustered on their induced sub-graph
    with k' = ceil(length / gamma2) until the clustering-pass budget
    (max_depth) runs out, after which they are split greedily at block
    boundaries. Leaf ids are assigned in flattened order.
    """
    if not blocks:
        raise ValueError("cannot plan chunks for an empty block list")
    if graph.n != len(blocks):
        raise ValueError(f"graph has {graph.n} nodes for {len(blocks)} blocks")
    k = min(config.k, len(blocks))
    assignment = cluster_blocks(graph, k)
    top_chunks = form_chunks(
        assignment,
        blocks,
        passthrough_below=config.gamma1,
        depth=0,
        contiguous=config.contiguous,
    )
    roots = tuple(_grow(c, blocks, graph, config, 0) for c in top_chunks)

    leaf_nodes: list[ChunkNode] = []

    def collect_nodes(node: ChunkNode) -> None:
        if node.is_leaf:
            leaf_nodes.append(node)
        else:
            for child in node.children:
                collect_nodes(child)

    for root in roots:
        collect_nodes(root)
    leaf_nodes.sort(key=lambda nd: nd.chunk.min_block_index)
    for i, node in enumerate(leaf_nodes):
        node.chunk = replace(node.chunk, chunk_id=i)

    return ChunkPlan(
        roots=roots,
        bounds=(config.gamma1, config.gamma2),
        leaves=tuple(node.chunk for node in leaf_nodes),
    )


def flatten(plan: ChunkPlan) -> list[TopicChunk]:
    """Leaves of the plan sorted by minimum block index."""
    leaves: list[TopicChunk] = []
    for root in plan.roots:
        _collect_leaves(root, leaves)
    leaves.sort(key=lambda c: c.min_block_index)
    return leaves


def choose_cluster_count(
    total_len: float, alpha: float, s_max: float, n_blocks: int
) -> int:
    """Cluster count that budgets k summaries of s_max words to hit ratio alpha."""
    if total_len <= 0:
        raise ValueError(f"total_len must be positive, got {total_len}")
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must be in (0, 1], got {alpha}")
    if s_max < 1:
        raise ValueError(f"s_max must be >= 1, got {s_max}")
    if n_blocks < 1:
        raise ValueError(f"n_blocks must be >= 1, got {n_blocks}")
    k = math.ceil(alpha * total_len / s_max)
    return max(1, min(k, n_blocks))
