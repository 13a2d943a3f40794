"""Graph-level solver API: exact numbers, witnesses, probabilistic bounds."""

import math
from fractions import Fraction

import numpy as np
import pytest

import brute
from zuecap.digraph import (
    DirectedGraph,
    complement,
    strong_power,
    topological_order,
    induced_subgraph,
)
from zuecap.errors import CapExceededError
from zuecap.gsolve import (
    acyclic_set_from_order,
    caro_wei_sum,
    max_acyclic_induced,
    max_independent_set,
    random_order_acyclic_mean,
    sperner_report,
    symmetric_clique,
    transitive_clique,
    weight_partition_independent_set,
)

TRIANGLE = DirectedGraph(3, frozenset([(0, 1), (1, 2), (2, 0)]))


def random_graphs(seed, count, max_vertices=7, p=0.5):
    rng = np.random.Generator(np.random.Philox(seed))
    return [
        brute.random_digraph(rng, int(rng.integers(1, max_vertices + 1)), p)
        for _ in range(count)
    ]


class TestExactSolvers:
    def test_independent_matches_brute(self):
        for g in random_graphs(101, 40):
            size, witness = max_independent_set(g)
            bsize, bvs = brute.max_independent(g)
            assert size == bsize
            assert tuple(sorted(witness)) == bvs

    def test_acyclic_matches_brute(self):
        for g in random_graphs(102, 40):
            size, witness = max_acyclic_induced(g)
            assert size == brute.max_acyclic(g)
            assert len(witness) == size
            assert brute.subset_acyclic(g, witness)

    def test_symmetric_clique_matches_brute(self):
        for g in random_graphs(103, 30, 6):
            assert symmetric_clique(g)[0] == brute.max_symmetric_clique(g)

    def test_transitive_clique_matches_brute(self):
        for g in random_graphs(104, 30, 6):
            assert transitive_clique(g)[0] == brute.max_transitive_clique(g)

    def test_hint_shortcut_keeps_answer(self):
        for g in random_graphs(105, 15, 6):
            size, witness = max_acyclic_induced(g)
            assert max_acyclic_induced(g, lower_hint=size) == (size, witness)

    def test_vertex_cap(self):
        with pytest.raises(CapExceededError):
            max_independent_set(DirectedGraph(65))
        # an explicit larger cap lifts the limit
        size, _ = max_independent_set(DirectedGraph(65), cap=65)
        assert size == 65


class TestDualities:
    def test_independent_is_symmetric_clique_of_complement(self):
        for g in random_graphs(111, 30, 6):
            assert (
                max_independent_set(g)[0]
                == symmetric_clique(complement(g))[0]
            )

    def test_acyclic_is_transitive_clique_of_complement(self):
        for g in random_graphs(112, 30, 6):
            assert (
                max_acyclic_induced(g)[0]
                == transitive_clique(complement(g))[0]
            )


class TestCaroWei:
    def test_triangle_value(self):
        assert caro_wei_sum(TRIANGLE) == pytest.approx(1.5)

    def test_never_exceeds_acyclic_number(self):
        for g in random_graphs(121, 40):
            assert caro_wei_sum(g) <= max_acyclic_induced(g)[0] + 1e-12

    def test_exact_fraction_arithmetic(self):
        # indegrees 0,1,1,3 -> 1 + 1/2 + 1/2 + 1/4
        g = DirectedGraph(
            4,
            frozenset([(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)]),
        )
        assert caro_wei_sum(g) == float(Fraction(9, 4))


class TestRandomOrders:
    def test_acyclic_set_from_order_definition(self):
        # a vertex joins iff its in-neighbours all come later in the order
        assert acyclic_set_from_order(TRIANGLE, (0, 1, 2)) == frozenset({0})
        got = acyclic_set_from_order(TRIANGLE, (2, 0, 1))
        assert got == frozenset({2})
        assert brute.subset_acyclic(TRIANGLE, got)

    def test_order_must_be_permutation(self):
        with pytest.raises(ValueError):
            acyclic_set_from_order(TRIANGLE, (0, 1, 1))

    def test_sets_are_acyclic_on_random_graphs(self):
        rng = np.random.Generator(np.random.Philox(131))
        for g in random_graphs(132, 15, 6):
            order = tuple(rng.permutation(g.vertex_count).tolist())
            assert brute.subset_acyclic(g, acyclic_set_from_order(g, order))

    def test_mc_mean_is_deterministic_given_seed(self):
        g = random_graphs(133, 1, 6)[0]
        a = random_order_acyclic_mean(g, 2000, seed=9)
        b = random_order_acyclic_mean(g, 2000, seed=9)
        assert a == b
        assert random_order_acyclic_mean(g, 2000, seed=10) != a

    def test_mc_mean_agrees_with_expectation(self):
        for g in random_graphs(134, 5, 6):
            mean, stderr = random_order_acyclic_mean(g, 40_000, seed=1)
            assert abs(mean - caro_wei_sum(g)) <= 4 * max(stderr, 1e-9)

    def test_mc_needs_two_trials(self):
        with pytest.raises(ValueError):
            random_order_acyclic_mean(TRIANGLE, 1, seed=0)


class TestWeightPartition:
    def test_triangle_edgeless_pair(self):
        # {0, 1} in the triangle is acyclic; words of equal label weight
        g = TRIANGLE
        got = weight_partition_independent_set(g, [0, 1], 2)
        power = strong_power(g, 2)
        assert len(got) >= 4 / (2 * 2 - 2 + 1)
        for u in got:
            for v in got:
                if u != v:
                    assert not power.has_edge(u, v)

    def test_rejects_cyclic_seed(self):
        with pytest.raises(ValueError):
            weight_partition_independent_set(TRIANGLE, [0, 1, 2], 2)

    def test_empty_seed(self):
        assert weight_partition_independent_set(TRIANGLE, [], 2) == frozenset()

    def test_acyclic_graph_class_size_and_independence(self):
        rng = np.random.Generator(np.random.Philox(141))
        found = 0
        while found < 10:
            g = brute.random_digraph(rng, 4, 0.4)
            if topological_order(g) is None:
                continue
            found += 1
            for n in (1, 2, 3):
                got = weight_partition_independent_set(
                    g, range(g.vertex_count), n
                )
                k = g.vertex_count
                assert len(got) >= k**n / (n * k - n + 1)
                power = strong_power(g, n)
                members = sorted(got)
                for u in members:
                    for v in members:
                        if u != v:
                            assert not power.has_edge(u, v)


class TestSpernerReport:
    def test_triangle_table(self):
        est = sperner_report(TRIANGLE, 3)
        table = [(r.n, r.alpha, r.rho) for r in est.rows]
        assert table == [(1, 1, 2), (2, 3, 4), (3, 4, 8)]
        assert est.truncated_at is None
        assert est.best_lower_rate == pytest.approx(math.log(3) / 2)
        assert est.best_upper_rate == pytest.approx(math.log(2))

    def test_truncation_past_the_cap(self):
        est = sperner_report(TRIANGLE, 4)
        assert len(est.rows) == 3
        assert est.truncated_at == 4

    def test_witnesses_are_feasible(self):
        est = sperner_report(TRIANGLE, 2)
        for row in est.rows:
            power = strong_power(TRIANGLE, row.n)
            assert brute.subset_independent(power, row.alpha_witness)
            assert brute.subset_acyclic(power, row.rho_witness)
            assert len(row.alpha_witness) == row.alpha
            assert len(row.rho_witness) == row.rho

    def test_rows_match_direct_solves(self):
        # the hint and partition plumbing must not change any value
        for g in random_graphs(151, 8, 3):
            est = sperner_report(g, 3)
            for row in est.rows:
                power = strong_power(g, row.n)
                assert row.alpha == max_independent_set(power)[0]
                assert row.rho == max_acyclic_induced(power)[0]

    def test_csv_shape(self):
        est = sperner_report(TRIANGLE, 2)
        lines = est.to_csv().splitlines()
        assert lines[0] == "n,alpha,rho,alpha_rate,rho_rate"
        assert lines[1] == "1,1,2,0,0.69314718056"
        assert len(lines) == 3

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            sperner_report(TRIANGLE, 0)
        with pytest.raises(ValueError):
            sperner_report(DirectedGraph(0), 1)
