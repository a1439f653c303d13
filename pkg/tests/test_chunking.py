import numpy as np
import pytest

from oracles import average_linkage_oracle
from semcomp.chunking import (
    ACTION_COMPRESS,
    ACTION_PASSTHROUGH,
    ChunkingConfig,
    ClusterAssignment,
    choose_cluster_count,
    cluster_blocks,
    flatten,
    form_chunks,
    plan_chunks,
    ChunkNode,
    ChunkPlan,
)
from semcomp.graph import SimilarityGraph, build_graph
from semcomp.segmentation import SentenceBlock


def mk_blocks(lengths):
    """Blocks with given word counts; text is a repeated marker word."""
    return [
        SentenceBlock(
            index=i,
            sentence_span=(i, i + 1),
            text=" ".join([f"w{i}"] * n),
            length=n,
        )
        for i, n in enumerate(lengths)
    ]


def random_graph(rng, n):
    return build_graph(rng.normal(size=(n, 6)))


class TestClusterBlocks:
    def test_k_equals_n_gives_singletons(self):
        g = random_graph(np.random.default_rng(0), 5)
        assignment = cluster_blocks(g, 5)
        assert assignment.labels == (0, 1, 2, 3, 4)

    def test_k_equals_one(self):
        g = random_graph(np.random.default_rng(1), 6)
        assert cluster_blocks(g, 1).labels == (0,) * 6

    def test_two_topic_example(self):
        # brute-force simulated by hand: {0,1} merge at d=0.1, {2,3} at d=0.2
        w = np.array(
            [
                [1.0, 0.9, 0.1, 0.1],
                [0.9, 1.0, 0.1, 0.1],
                [0.1, 0.1, 1.0, 0.8],
                [0.1, 0.1, 0.8, 1.0],
            ]
        )
        assignment = cluster_blocks(SimilarityGraph(n=4, weights=w), 2)
        assert assignment.labels == (0, 0, 1, 1)

    def test_invalid_k(self):
        g = random_graph(np.random.default_rng(2), 3)
        with pytest.raises(ValueError):
            cluster_blocks(g, 0)
        with pytest.raises(ValueError):
            cluster_blocks(g, 4)

    def test_deterministic_bitwise(self):
        g = random_graph(np.random.default_rng(3), 12)
        first = cluster_blocks(g, 4)
        second = cluster_blocks(SimilarityGraph(n=g.n, weights=g.weights.copy()), 4)
        assert first == second

    def test_labels_dense_and_ordered_by_first_member(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            n = int(rng.integers(2, 12))
            k = int(rng.integers(1, n + 1))
            labels = cluster_blocks(random_graph(rng, n), k).labels
            assert len(set(labels)) == k
            assert labels[0] == 0
            seen_max = 0
            for label in labels:
                assert label <= seen_max + 1
                seen_max = max(seen_max, label)

    def test_matches_exact_oracle(self):
        rng = np.random.default_rng(5)
        for _ in range(150):
            n = int(rng.integers(2, 9))
            k = int(rng.integers(1, n + 1))
            g = random_graph(rng, n)
            assert list(cluster_blocks(g, k).labels) == average_linkage_oracle(
                g.weights.tolist(), k
            )

    def test_matches_oracle_on_tie_heavy_graphs(self):
        rng = np.random.default_rng(6)
        for _ in range(100):
            n = int(rng.integers(2, 9))
            w = rng.integers(0, 4, size=(n, n)) / 4.0
            w = (w + w.T) / 2.0
            np.fill_diagonal(w, 1.0)
            k = int(rng.integers(1, n + 1))
            g = SimilarityGraph(n=n, weights=w)
            assert list(cluster_blocks(g, k).labels) == average_linkage_oracle(
                w.tolist(), k
            )


class TestFormChunks:
    def test_contiguous_labels(self):
        chunks = form_chunks(
            ClusterAssignment(labels=(0, 0, 1, 1), k=2), mk_blocks([10, 10, 10, 10])
        )
        assert [c.block_indices for c in chunks] == [(0, 1), (2, 3)]

    def test_interleaved_labels_ordered_by_min_index(self):
        chunks = form_chunks(
            ClusterAssignment(labels=(0, 1, 0, 1), k=2), mk_blocks([10] * 4)
        )
        assert [c.block_indices for c in chunks] == [(0, 2), (1, 3)]

    def test_single_block(self):
        chunks = form_chunks(ClusterAssignment(labels=(0,), k=1), mk_blocks([7]))
        assert [c.block_indices for c in chunks] == [(0,)]
        assert chunks[0].length == 7

    def test_malformed_assignment_rejected(self):
        with pytest.raises(ValueError):
            form_chunks(ClusterAssignment(labels=(0, 0), k=2), mk_blocks([5, 5]))
        with pytest.raises(ValueError):
            form_chunks(ClusterAssignment(labels=(0,), k=1), mk_blocks([5, 5]))

    def test_chunk_text_and_length_aggregate_members(self):
        blocks = mk_blocks([2, 3])
        chunks = form_chunks(ClusterAssignment(labels=(0, 0), k=1), blocks)
        assert chunks[0].text == f"{blocks[0].text} {blocks[1].text}"
        assert chunks[0].length == 5

    def test_contiguous_mode_splits_runs(self):
        chunks = form_chunks(
            ClusterAssignment(labels=(0, 1, 0, 1), k=2),
            mk_blocks([10] * 4),
            contiguous=True,
        )
        assert [c.block_indices for c in chunks] == [(0,), (1,), (2,), (3,)]

    def test_passthrough_threshold_sets_action(self):
        chunks = form_chunks(
            ClusterAssignment(labels=(0, 1), k=2),
            mk_blocks([10, 80]),
            passthrough_below=60,
        )
        assert chunks[0].action == ACTION_PASSTHROUGH
        assert chunks[1].action == ACTION_COMPRESS


class TestPlanChunks:
    def test_small_chunks_stay_depth_zero(self):
        blocks = mk_blocks([40, 40, 40])
        g = build_graph(np.eye(3))
        plan = plan_chunks(blocks, g, ChunkingConfig(gamma1=60, gamma2=200, k=3))
        assert all(node.is_leaf for node in plan.roots)
        assert all(leaf.depth == 0 for leaf in plan.leaves)

    def test_threshold_example_passthrough_vs_compress(self):
        # clusters {0},{1,2}: leaf of 40 words passes through, leaf of 80 compresses
        blocks = mk_blocks([40, 40, 40])
        w = np.array([[1.0, 0.1, 0.1], [0.1, 1.0, 0.9], [0.1, 0.9, 1.0]])
        plan = plan_chunks(
            blocks,
            SimilarityGraph(n=3, weights=w),
            ChunkingConfig(gamma1=60, gamma2=200, k=2),
        )
        leaves = plan.leaves
        assert [l.block_indices for l in leaves] == [(0,), (1, 2)]
        assert leaves[0].action == ACTION_PASSTHROUGH
        assert leaves[1].action == ACTION_COMPRESS

    def test_oversize_chunk_reclustered_with_ceil_rule(self):
        # one root chunk of 3.5 * gamma2 -> k' = 4 children
        blocks = mk_blocks([50] * 7)  # 350 words, gamma2=100
        g = random_graph(np.random.default_rng(8), 7)
        plan = plan_chunks(blocks, g, ChunkingConfig(gamma1=10, gamma2=100, k=1))
        root = plan.roots[0]
        assert not root.is_leaf
        assert len(root.children) == 4

    def test_invalid_bounds_rejected(self):
        with pytest.raises(ValueError):
            ChunkingConfig(gamma1=200, gamma2=100, k=1)

    def test_single_indivisible_block_may_exceed_gamma2(self):
        blocks = mk_blocks([500, 20])
        g = build_graph(np.eye(2))
        plan = plan_chunks(blocks, g, ChunkingConfig(gamma1=30, gamma2=100, k=2))
        lengths = sorted(leaf.length for leaf in plan.leaves)
        assert lengths == [20, 500]

    def test_greedy_split_at_clustering_budget(self):
        # identical blocks cannot be separated semantically; max_depth=1 forces
        # an immediate greedy block-boundary split
        blocks = mk_blocks([50] * 8)
        w = np.ones((8, 8))
        plan = plan_chunks(
            blocks,
            SimilarityGraph(n=8, weights=w),
            ChunkingConfig(gamma1=20, gamma2=100, k=1, max_depth=1),
        )
        assert all(leaf.length <= 100 for leaf in plan.leaves)
        assert [leaf.block_indices for leaf in plan.leaves] == [
            (0, 1),
            (2, 3),
            (4, 5),
            (6, 7),
        ]
        assert all(leaf.depth == 1 for leaf in plan.leaves)

    def test_tree_depth_bounded_by_max_depth(self):
        rng = np.random.default_rng(9)
        blocks = mk_blocks([64] * 30)
        g = random_graph(rng, 30)
        config = ChunkingConfig(gamma1=60, gamma2=150, k=2, max_depth=3)
        plan = plan_chunks(blocks, g, config)

        def max_depth_of(node):
            if node.is_leaf:
                return node.chunk.depth
            return max(max_depth_of(c) for c in node.children)

        assert max(max_depth_of(r) for r in plan.roots) <= config.max_depth

    def test_leaf_ids_sequential_in_flattened_order(self):
        g = random_graph(np.random.default_rng(10), 12)
        plan = plan_chunks(
            mk_blocks([30] * 12), g, ChunkingConfig(gamma1=20, gamma2=90, k=3)
        )
        assert [leaf.chunk_id for leaf in plan.leaves] == list(range(len(plan.leaves)))
        mins = [leaf.min_block_index for leaf in plan.leaves]
        assert mins == sorted(mins)

    def test_cover_partition_property(self):
        rng = np.random.default_rng(11)
        for _ in range(60):
            n = int(rng.integers(1, 25))
            lengths = rng.integers(5, 120, size=n).tolist()
            k = int(rng.integers(1, n + 1))
            contiguous = bool(rng.integers(0, 2))
            plan = plan_chunks(
                mk_blocks(lengths),
                random_graph(rng, n),
                ChunkingConfig(gamma1=40, gamma2=160, k=k, contiguous=contiguous),
            )
            census = sorted(i for leaf in plan.leaves for i in leaf.block_indices)
            assert census == list(range(n))

    def test_bound_satisfaction_property(self):
        rng = np.random.default_rng(12)
        for _ in range(40):
            n = int(rng.integers(1, 25))
            lengths = rng.integers(5, 120, size=n).tolist()
            k = int(rng.integers(1, n + 1))
            plan = plan_chunks(
                mk_blocks(lengths),
                random_graph(rng, n),
                ChunkingConfig(gamma1=40, gamma2=160, k=k),
            )
            for leaf in plan.leaves:
                assert leaf.length <= 160 or len(leaf.block_indices) == 1
                if leaf.action == ACTION_COMPRESS:
                    assert leaf.length >= 40
                else:
                    assert leaf.length < 40

    def test_monotone_budget_in_k(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            n = int(rng.integers(3, 15))
            g = random_graph(rng, n)
            blocks = mk_blocks([30] * n)
            counts = []
            for k in range(1, n + 1):
                plan = plan_chunks(
                    blocks, g, ChunkingConfig(gamma1=20, gamma2=1000, k=k)
                )
                counts.append(len(plan.leaves))
            assert counts == sorted(counts)


class TestFlatten:
    def test_single_leaf(self):
        g = build_graph(np.eye(1))
        plan = plan_chunks(mk_blocks([10]), g, ChunkingConfig(gamma1=5, gamma2=50, k=1))
        assert flatten(plan) == list(plan.leaves)

    def test_orders_by_min_block_index(self):
        chunks = form_chunks(
            ClusterAssignment(labels=(0, 1, 2, 1, 0), k=3), mk_blocks([10] * 5)
        )
        # roots deliberately scrambled: min indices [4->0, 0, 2]
        scrambled = [chunks[2], chunks[0], chunks[1]]
        plan = ChunkPlan(
            roots=tuple(ChunkNode(chunk=c) for c in scrambled),
            bounds=(5, 50),
            leaves=(),
        )
        assert [c.min_block_index for c in flatten(plan)] == [0, 1, 2]

    def test_census_matches_plan_leaves(self):
        rng = np.random.default_rng(14)
        for _ in range(25):
            n = int(rng.integers(1, 20))
            plan = plan_chunks(
                mk_blocks([25] * n),
                random_graph(rng, n),
                ChunkingConfig(gamma1=20, gamma2=80, k=int(rng.integers(1, n + 1))),
            )
            assert flatten(plan) == list(plan.leaves)


class TestChooseClusterCount:
    def test_budget_arithmetic(self):
        assert choose_cluster_count(8000, 0.15, 150, n_blocks=100) == 8

    def test_alpha_one_small_doc(self):
        assert choose_cluster_count(120, 1.0, 150, n_blocks=10) == 1

    def test_clamped_to_n_blocks(self):
        assert choose_cluster_count(100000, 0.5, 10, n_blocks=7) == 7

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            choose_cluster_count(0, 0.5, 10, 5)
        with pytest.raises(ValueError):
            choose_cluster_count(100, 0.0, 10, 5)
        with pytest.raises(ValueError):
            choose_cluster_count(100, 1.5, 10, 5)
        with pytest.raises(ValueError):
            choose_cluster_count(100, 0.5, 0, 5)
