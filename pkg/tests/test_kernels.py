"""Both kernel backends against brute force and against each other."""

import numpy as np
import pytest

import brute
from zuecap import _kernels
from zuecap._kernels import reference

needs_compiled = pytest.mark.skipif(
    not _kernels.HAVE_COMPILED, reason="compiled extension not built"
)


def conflict_masks(g):
    n = g.vertex_count
    return [
        (g.out_masks[v] | g.in_masks[v]) & ~(1 << v) for v in range(n)
    ]


def random_graphs(seed, count, max_vertices=8, p=0.5):
    rng = np.random.Generator(np.random.Philox(seed))
    out = []
    for _ in range(count):
        n = int(rng.integers(1, max_vertices + 1))
        out.append(brute.random_digraph(rng, n, p))
    return out


def set_of(mask):
    return tuple(v for v in range(mask.bit_length()) if mask >> v & 1)


class TestReferenceIndependent:
    @pytest.mark.parametrize("seed,p", [(11, 0.3), (12, 0.5), (13, 0.8)])
    def test_matches_brute_with_lex_least_witness(self, seed, p):
        for g in random_graphs(seed, 40, 7, p):
            size, mask = reference.solve_independent(
                g.vertex_count, conflict_masks(g)
            )
            bsize, bvs = brute.max_independent(g)
            assert size == bsize
            assert set_of(mask) == bvs

    def test_exact_hint_keeps_answer(self):
        for g in random_graphs(21, 25, 7):
            conf = conflict_masks(g)
            size, mask = reference.solve_independent(g.vertex_count, conf)
            again = reference.solve_independent(
                g.vertex_count, conf, lower_hint=size
            )
            assert again == (size, mask)

    def test_overshoot_hint_raises(self):
        g = brute.random_digraph(
            np.random.Generator(np.random.Philox(5)), 6, 0.5
        )
        conf = conflict_masks(g)
        size, _ = reference.solve_independent(g.vertex_count, conf)
        with pytest.raises(ValueError, match="lower_hint"):
            reference.solve_independent(
                g.vertex_count, conf, lower_hint=size + 1
            )


class TestReferenceAcyclic:
    @pytest.mark.parametrize("seed,p", [(31, 0.3), (32, 0.5), (33, 0.8)])
    def test_matches_brute_with_valid_witness(self, seed, p):
        for g in random_graphs(seed, 40, 7, p):
            size, mask = reference.solve_acyclic(
                g.vertex_count, list(g.out_masks), list(g.in_masks)
            )
            assert size == brute.max_acyclic(g)
            members = set_of(mask)
            assert len(members) == size
            assert brute.subset_acyclic(g, members)

    def test_stop_first_with_exact_hint(self):
        for g in random_graphs(41, 25, 7):
            size, _ = reference.solve_acyclic(
                g.vertex_count, list(g.out_masks), list(g.in_masks)
            )
            early_size, early_mask = reference.solve_acyclic(
                g.vertex_count,
                list(g.out_masks),
                list(g.in_masks),
                lower_hint=size,
                stop_first=True,
            )
            assert early_size == size
            assert brute.subset_acyclic(g, set_of(early_mask))

    def test_overshoot_hint_raises(self):
        g = brute.random_digraph(
            np.random.Generator(np.random.Philox(6)), 6, 0.6
        )
        size, _ = reference.solve_acyclic(
            g.vertex_count, list(g.out_masks), list(g.in_masks)
        )
        with pytest.raises(ValueError, match="lower_hint"):
            reference.solve_acyclic(
                g.vertex_count,
                list(g.out_masks),
                list(g.in_masks),
                lower_hint=size + 1,
            )

    def test_valid_partition_caps_keep_answer(self):
        from zuecap.digraph import induced_subgraph

        # split the vertices in two; cap each part at its own true maximum
        # (sound: a feasible set restricted to a part stays acyclic)
        for g in random_graphs(51, 20, 6):
            n = g.vertex_count
            size, _ = reference.solve_acyclic(
                n, list(g.out_masks), list(g.in_masks)
            )
            family = []
            for r in (0, 1):
                part = [v for v in range(n) if v % 2 == r]
                if not part:
                    continue
                cap = brute.max_acyclic(induced_subgraph(g, part))
                family.append((sum(1 << v for v in part), cap))
            capped, _ = reference.solve_acyclic(
                n,
                list(g.out_masks),
                list(g.in_masks),
                partitions=(family,),
            )
            assert capped == size


@needs_compiled
class TestCompiledLockstep:
    def test_independent_identical(self):
        from zuecap._kernels import _speedups

        for g in random_graphs(61, 60, 9, 0.45):
            conf = conflict_masks(g)
            ref = reference.solve_independent(g.vertex_count, conf)
            fast = _speedups.solve_independent(g.vertex_count, conf, 0, ())
            assert fast == ref

    def test_acyclic_identical(self):
        from zuecap._kernels import _speedups

        for seed, p in ((62, 0.3), (63, 0.55), (64, 0.85)):
            for g in random_graphs(seed, 40, 9, p):
                args = (g.vertex_count, list(g.out_masks), list(g.in_masks))
                ref = reference.solve_acyclic(*args)
                fast = _speedups.solve_acyclic(*args, 0, (), False)
                assert fast == ref

    def test_acyclic_identical_with_hints_and_partitions(self):
        from zuecap._kernels import _speedups

        for g in random_graphs(65, 30, 8, 0.5):
            n = g.vertex_count
            args = (n, list(g.out_masks), list(g.in_masks))
            size, mask = reference.solve_acyclic(*args)
            family = [[(sum(1 << v for v in range(n)), size)]]
            fast = _speedups.solve_acyclic(*args, size, tuple(family), False)
            assert fast == (size, mask)

    def test_overshoot_hint_raises(self):
        from zuecap._kernels import _speedups

        with pytest.raises(ValueError, match="lower_hint"):
            _speedups.solve_acyclic(3, [2, 4, 1], [4, 1, 2], 4, (), False)

    def test_sixty_four_vertex_boundary(self):
        from zuecap._kernels import _speedups

        n = 64
        no_edges = [0] * n
        assert _speedups.solve_independent(n, no_edges, 0, ())[0] == n
        assert _speedups.solve_acyclic(n, no_edges, no_edges, 0, (), False)[
            0
        ] == n
        # one long cycle through all 64 vertices: drop exactly one vertex
        out = [1 << ((v + 1) % n) for v in range(n)]
        inn = [1 << ((v - 1) % n) for v in range(n)]
        size, mask = _speedups.solve_acyclic(n, out, inn, 0, (), False)
        assert size == n - 1
        assert mask.bit_count() == n - 1


class TestDispatch:
    def test_forced_python(self, monkeypatch):
        monkeypatch.setenv("ZUECAP_KERNEL", "python")
        assert _kernels.active_kernel(4) == "python"

    def test_auto_prefers_compiled_when_built(self, monkeypatch):
        monkeypatch.delenv("ZUECAP_KERNEL", raising=False)
        expected = "compiled" if _kernels.HAVE_COMPILED else "python"
        assert _kernels.active_kernel(4) == expected
        # beyond 64 vertices only the reference kernel applies
        assert _kernels.active_kernel(65) == "python"

    @needs_compiled
    def test_forced_compiled_rejects_large_instance(self, monkeypatch):
        monkeypatch.setenv("ZUECAP_KERNEL", "compiled")
        with pytest.raises(ValueError, match="64"):
            _kernels.solve_independent(65, [0] * 65)

    def test_dispatch_results_match_reference(self, monkeypatch):
        g = brute.random_digraph(
            np.random.Generator(np.random.Philox(7)), 7, 0.5
        )
        conf = conflict_masks(g)
        monkeypatch.setenv("ZUECAP_KERNEL", "python")
        viaenv = _kernels.solve_independent(g.vertex_count, conf)
        monkeypatch.delenv("ZUECAP_KERNEL")
        assert _kernels.solve_independent(g.vertex_count, conf) == viaenv
