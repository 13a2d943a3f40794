"""Channel data model, structure predicates, capacity."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import brute
from zuecap.channel import (
    Channel,
    InputPMF,
    bipartite_acyclic,
    canonical_channel,
    channel_graph,
    epsilon_of,
    factorize,
    feedback_zue,
    format_channel,
    load_channel,
    merge_outputs,
    product_channel,
    shannon_capacity,
    zue_positive,
)
from zuecap.digraph import DirectedGraph, graphs_equal, strong_power
from zuecap.errors import CapExceededError, FormatError

TRIANGLE = DirectedGraph(3, frozenset([(0, 1), (1, 2), (2, 0)]))


def entropy2(p):
    return -p * math.log(p) - (1 - p) * math.log(1 - p)


@st.composite
def channels(draw, max_inputs=4, max_outputs=4):
    x = draw(st.integers(1, max_inputs))
    y = draw(st.integers(1, max_outputs))
    cells = draw(
        st.lists(
            st.integers(0, 5), min_size=x * y, max_size=x * y
        )
    )
    mat = np.array(cells, dtype=float).reshape(x, y)
    for row in mat:
        if row.sum() == 0.0:
            row[0] = 1.0
    mat /= mat.sum(axis=1, keepdims=True)
    return Channel(mat)


@st.composite
def digraphs(draw, max_vertices=4):
    n = draw(st.integers(1, max_vertices))
    pairs = brute.all_pairs(n)
    mask = draw(st.integers(0, (1 << len(pairs)) - 1))
    return DirectedGraph(
        n, frozenset(p for i, p in enumerate(pairs) if mask >> i & 1)
    )


class TestConstruction:
    def test_rejects_negative(self):
        with pytest.raises(FormatError):
            Channel(np.array([[1.2, -0.2]]))

    def test_rejects_bad_row_sum(self):
        with pytest.raises(FormatError, match="sums to"):
            Channel(np.array([[0.5, 0.4]]))

    def test_identified_needs_enough_outputs(self):
        with pytest.raises(FormatError):
            Channel(np.ones((3, 1)), identified=True)

    def test_matrix_is_frozen(self):
        ch = Channel(np.array([[0.5, 0.5]]))
        with pytest.raises(ValueError):
            ch.matrix[0, 0] = 1.0

    def test_support_is_exact_zero(self):
        ch = Channel(np.array([[1.0, 0.0], [1e-300, 1.0 - 1e-300]]))
        assert ch.support().tolist() == [[True, False], [True, True]]


class TestInputPMF:
    def test_rejects_bad_sum(self):
        with pytest.raises(FormatError):
            InputPMF(np.array([0.5, 0.4]))

    def test_support(self):
        assert InputPMF(np.array([0.5, 0.0, 0.5])).support == (0, 2)

    def test_uniform_on(self):
        pmf = InputPMF.uniform_on([2, 0], 3)
        assert pmf.p.tolist() == [0.5, 0.0, 0.5]
        with pytest.raises(FormatError):
            InputPMF.uniform_on([3], 3)
        with pytest.raises(FormatError):
            InputPMF.uniform_on([], 3)


class TestFormat:
    @given(channels())
    def test_round_trip_is_exact(self, ch):
        back = load_channel(format_channel(ch))
        assert back.identified == ch.identified
        assert np.array_equal(back.matrix, ch.matrix)

    def test_comments_and_exact_zeros(self):
        text = "# a channel\nchannel 2 2 1\n1 0\n0.5 0.5  # trailing\n"
        ch = load_channel(text)
        assert ch.identified
        assert ch.matrix[0, 1] == 0.0

    @pytest.mark.parametrize(
        "text",
        [
            "",
            "channel 2 2\n1 0\n0 1\n",
            "channel a 2 0\n",
            "channel 2 2 2\n1 0\n0 1\n",
            "channel 0 2 0\n",
            "channel 2 2 0\n1 0\n",
            "channel 2 2 0\n1 0 0\n0 1\n",
            "channel 2 2 0\n1 x\n0 1\n",
        ],
    )
    def test_rejects_malformed(self, text):
        with pytest.raises(FormatError):
            load_channel(text)


class TestEpsilonAndGraph:
    def test_epsilon_of_canonical(self):
        assert epsilon_of(canonical_channel(TRIANGLE, 0.1)) == pytest.approx(
            0.1, abs=1e-15
        )

    def test_epsilon_requires_identified(self):
        with pytest.raises(ValueError):
            epsilon_of(Channel(np.array([[0.5, 0.5]])))

    def test_epsilon_requires_positive_diagonal(self):
        ch = Channel(np.array([[0.0, 1.0], [0.0, 1.0]]), identified=True)
        with pytest.raises(ValueError):
            epsilon_of(ch)

    @given(digraphs(), st.floats(0.01, 0.99))
    @settings(deadline=None)
    def test_canonical_channel_inverts_channel_graph(self, g, eps):
        ch = canonical_channel(g, eps)
        assert graphs_equal(channel_graph(ch), g)
        if g.edges:
            assert epsilon_of(ch) == pytest.approx(eps, abs=1e-12)
        else:
            assert epsilon_of(ch) == 0.0

    def test_canonical_rejects_extreme_eps(self):
        for eps in (0.0, 1.0, -0.1):
            with pytest.raises(ValueError):
                canonical_channel(TRIANGLE, eps)

    def test_canonical_sink_row_is_deterministic(self):
        g = DirectedGraph(2, frozenset([(0, 1)]))
        ch = canonical_channel(g, 0.25)
        assert ch.matrix.tolist() == [[0.75, 0.25], [0.0, 1.0]]


class TestProduct:
    def test_n1_is_identity(self):
        ch = canonical_channel(TRIANGLE, 0.1)
        assert product_channel(ch, 1) is ch

    @given(channels(max_inputs=3, max_outputs=3))
    @settings(deadline=None)
    def test_square_is_memoryless(self, ch):
        sq = product_channel(ch, 2)
        y = ch.output_count
        for x1 in range(ch.input_count):
            for x2 in range(ch.input_count):
                for y1 in range(y):
                    for y2 in range(y):
                        assert sq.matrix[
                            x1 * ch.input_count + x2, y1 * y + y2
                        ] == pytest.approx(
                            ch.matrix[x1, y1] * ch.matrix[x2, y2], abs=1e-15
                        )

    def test_identified_square_keeps_word_alignment(self):
        ch = canonical_channel(TRIANGLE, 0.2)
        sq = product_channel(ch, 2)
        assert sq.identified
        for x1 in range(3):
            for x2 in range(3):
                i = x1 * 3 + x2
                assert sq.matrix[i, i] == pytest.approx(
                    ch.matrix[x1, x1] * ch.matrix[x2, x2]
                )

    def test_confusability_graph_of_power_is_power_of_graph(self):
        ch = canonical_channel(TRIANGLE, 0.2)
        got = channel_graph(product_channel(ch, 2))
        assert graphs_equal(got, strong_power(TRIANGLE, 2))

    def test_output_cap(self):
        wide = Channel(np.full((2, 101), 1.0 / 101))
        with pytest.raises(CapExceededError):
            product_channel(wide, 3)


class TestMerge:
    def test_merges_equal_support_columns(self):
        ch = Channel(np.array([[0.5, 0.0, 0.25, 0.25], [0.0, 0.5, 0.25, 0.25]]))
        merged, merge_map = merge_outputs(ch)
        assert merged.output_count == 3
        assert merge_map.tolist() == [0, 1, 2, 2]
        assert merged.matrix[:, 2].tolist() == [0.5, 0.5]

    def test_identified_block_is_protected(self):
        ch = Channel(np.array([[0.5, 0.5], [0.5, 0.5]]), identified=True)
        merged, merge_map = merge_outputs(ch)
        assert merged.output_count == 2
        assert merge_map.tolist() == [0, 1]
        # without identification the two columns collapse
        loose, _ = merge_outputs(Channel(ch.matrix.copy()))
        assert loose.output_count == 1

    @given(channels())
    def test_idempotent(self, ch):
        once, _ = merge_outputs(ch)
        twice, merge_map = merge_outputs(once)
        assert np.array_equal(once.matrix, twice.matrix)
        assert merge_map.tolist() == list(range(once.output_count))


class TestStructure:
    def test_bipartite_acyclic(self, z_channel):
        assert bipartite_acyclic(z_channel)
        assert not bipartite_acyclic(canonical_channel(TRIANGLE, 0.1))
        bsc = Channel(np.array([[0.9, 0.1], [0.1, 0.9]]))
        assert not bipartite_acyclic(bsc)
        assert bipartite_acyclic(Channel(np.array([[0.5, 0.5]])))

    def test_factorize_two_letter_rows(self, fig_channel):
        got = factorize(fig_channel)
        assert got is not None
        a, b = got
        assert (a > 0).all() and (b > 0).all()
        supp = fig_channel.support()
        err = np.abs(np.outer(a, b) - fig_channel.matrix)[supp]
        assert float(err.max()) < 1e-9

    def test_factorize_refuses_bsc(self):
        assert factorize(Channel(np.array([[0.7, 0.3], [0.3, 0.7]]))) is None

    def test_factorize_refuses_canonical_triangle(self):
        assert factorize(canonical_channel(TRIANGLE, 0.1)) is None

    def test_identity_channel_factorizes(self):
        assert factorize(Channel(np.eye(3))) is not None

    def test_zue_positive(self):
        assert not zue_positive(Channel(np.full((2, 2), 0.5)))
        assert zue_positive(Channel(np.eye(2)))


class TestCapacity:
    def test_identity(self):
        value, pmf = shannon_capacity(Channel(np.eye(3)))
        assert value == pytest.approx(math.log(3), abs=1e-8)
        assert pmf.p == pytest.approx(np.full(3, 1 / 3), abs=1e-4)

    def test_bsc(self):
        delta = 0.1
        ch = Channel(np.array([[1 - delta, delta], [delta, 1 - delta]]))
        value, _ = shannon_capacity(ch)
        assert value == pytest.approx(math.log(2) - entropy2(delta), abs=1e-8)

    def test_z_channel(self, z_channel):
        # delta = 1/2: ln(1 + (1-d) d^(d/(1-d))) = ln(5/4)
        value, _ = shannon_capacity(z_channel)
        assert value == pytest.approx(math.log(1.25), abs=1e-8)

    def test_useless_channel(self):
        value, _ = shannon_capacity(Channel(np.full((3, 4), 0.25)))
        assert value == pytest.approx(0.0, abs=1e-9)

    @given(channels())
    @settings(deadline=None, max_examples=40)
    def test_value_is_attained_by_returned_pmf(self, ch):
        value, pmf = shannon_capacity(ch)
        # mutual information of the returned input distribution
        p = pmf.p
        q = p @ ch.matrix
        supp = ch.matrix > 0
        mi = 0.0
        for x in range(ch.input_count):
            if p[x] == 0:
                continue
            for y in range(ch.output_count):
                if supp[x, y]:
                    mi += p[x] * ch.matrix[x, y] * math.log(
                        ch.matrix[x, y] / q[y]
                    )
        assert mi <= value + 1e-6
        assert mi >= value - 1e-6

    def test_feedback_value(self, z_channel):
        assert feedback_zue(z_channel) == pytest.approx(
            math.log(1.25), abs=1e-8
        )
        assert feedback_zue(Channel(np.full((2, 2), 0.5))) == 0.0
