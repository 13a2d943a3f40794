"""Exact independent-set and acyclic-set solvers with product-table reports.

The exact solvers decompose the instance first: independence constraints
never cross connected components of the conflict relation, and directed
cycles never cross strongly connected components. Each piece then goes to
the branch-and-bound kernels in zuecap._kernels. Per-piece witnesses are
lexicographically least, and joining the per-piece minima yields the
lexicographically least global witness: at the smallest vertex where two
unions of per-piece sets differ, the union holding that vertex restricted
to its piece is lexicographically smaller there too.

Strong-power tables (sperner_report) feed each row's search with two kinds
of hints derived from earlier rows, both of which only prune:

* a size hint from the best product of two earlier rows, and
* per-block caps: fixing the letter at any one position of a length-n word
  gives |V| blocks, each inducing a copy of the (n-1)st power, so the
  previous row's exact value caps every block. Each position yields its
  own partition family and the kernels prune with the tightest one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .digraph import (
    DirectedGraph,
    VERTEX_CAP,
    induced_subgraph,
    strong_power,
    strongly_connected_components,
    topological_order,
)
from .errors import CapExceededError

Partitions = Sequence[Sequence[tuple[int, int]]]


def _check_cap(g: DirectedGraph, cap: int) -> None:
    if g.vertex_count > cap:
        raise CapExceededError(
            f"graph has {g.vertex_count} vertices, solver cap is {cap}"
        )


def _conflict_masks(g: DirectedGraph) -> list[int]:
    masks = [0] * g.vertex_count
    for u, v in g.edges:
        masks[u] |= 1 << v
        masks[v] |= 1 << u
    return masks


def _conflict_components(n: int, masks: Sequence[int]) -> list[list[int]]:
    seen = 0
    components = []
    for start in range(n):
        if seen >> start & 1:
            continue
        frontier = 1 << start
        comp = frontier
        while frontier:
            nxt = 0
            m = frontier
            while m:
                b = m & -m
                nxt |= masks[b.bit_length() - 1]
                m ^= b
            frontier = nxt & ~comp
            comp |= frontier
        seen |= comp
        components.append([v for v in range(n) if comp >> v & 1])
    return components


def _local_partitions(vs: Sequence[int], partitions: Partitions) -> list[list[tuple[int, int]]]:
    local = []
    for fam in partitions:
        lf = []
        for mask, cap in fam:
            lm = 0
            for i, v in enumerate(vs):
                if mask >> v & 1:
                    lm |= 1 << i
            if lm:
                lf.append((lm, cap))
        if lf:
            local.append(lf)
    return local


def _compose(
    n: int,
    components: list[list[int]],
    lower_hint: int,
    partitions: Partitions,
    solve_component,
) -> tuple[int, int]:
    # Solve the largest pieces first so the global hint, reduced by what
    # the other pieces could at most contribute, bites where it matters.
    order = sorted(range(len(components)), key=lambda i: -len(components[i]))
    values = [0] * len(components)
    masks = [0] * len(components)
    solved_total = 0
    unsolved_sizes = sum(len(components[i]) for i in order)
    for i in order:
        vs = components[i]
        unsolved_sizes -= len(vs)
        if len(vs) == 1:
            values[i], masks[i] = 1, 1 << vs[0]
            solved_total += 1
            continue
        hint = lower_hint - solved_total - unsolved_sizes
        size, local_mask = solve_component(vs, max(hint, 0))
        gm = 0
        for j, v in enumerate(vs):
            if local_mask >> j & 1:
                gm |= 1 << v
        values[i], masks[i] = size, gm
        solved_total += size
    total = sum(values)
    if total < lower_hint:
        raise ValueError("lower_hint exceeds the true maximum")
    mask = 0
    for gm in masks:
        mask |= gm
    return total, mask


def _mask_to_set(mask: int) -> frozenset[int]:
    out = set()
    while mask:
        b = mask & -mask
        out.add(b.bit_length() - 1)
        mask ^= b
    return frozenset(out)


def max_independent_set(
    g: DirectedGraph,
    *,
    cap: int = 64,
    lower_hint: int = 0,
    partitions: Partitions = (),
) -> tuple[int, frozenset[int]]:
    """Largest set with no edge in either direction between its members.

    Returns (size, vertices) with the lexicographically least witness.
    ``lower_hint`` must be a size known to be achievable. ``partitions``
    are optional families of (vertex_mask, cap) pruning facts, masks
    disjoint within a family; a cap asserts no feasible set holds more of
    that mask's vertices.
    """
    _check_cap(g, cap)
    n = g.vertex_count
    if n == 0:
        return 0, frozenset()
    conflict = _conflict_masks(g)
    components = _conflict_components(n, conflict)

    def solve_component(vs: list[int], hint: int) -> tuple[int, int]:
        sub = [0] * len(vs)
        index = {v: i for i, v in enumerate(vs)}
        for i, v in enumerate(vs):
            m = conflict[v]
            while m:
                b = m & -m
                sub[i] |= 1 << index[b.bit_length() - 1]
                m ^= b
        return _kernels.solve_independent(
            len(vs), sub, hint, _local_partitions(vs, partitions)
        )

    size, mask = _compose(n, components, lower_hint, partitions, solve_component)
    witness = _mask_to_set(mask)
    assert all(
        not g.has_edge(u, v) for u in witness for v in witness if u != v
    ), "kernel returned a non-independent witness"
    return size, witness


def max_acyclic_induced(
    g: DirectedGraph,
    *,
    cap: int = 64,
    lower_hint: int = 0,
    partitions: Partitions = (),
) -> tuple[int, frozenset[int]]:
    """Largest vertex set whose induced subgraph has no directed cycle.

    Returns (size, vertices). The witness is deterministic and verified
    acyclic, but unlike max_independent_set it is not promised to be the
    lexicographically least maximizer. ``lower_hint`` and ``partitions``
    behave as there. Directed cycles never leave a strongly connected
    component, so the instance splits into one kernel call per SCC.
    """
    _check_cap(g, cap)
    n = g.vertex_count
    if n == 0:
        return 0, frozenset()
    components = [list(c) for c in strongly_connected_components(g)]

    def solve_component(vs: list[int], hint: int) -> tuple[int, int]:
        index = {v: i for i, v in enumerate(vs)}
        m = len(vs)
        outm = [0] * m
        for i, v in enumerate(vs):
            mm = g.out_masks[v]
            while mm:
                b = mm & -mm
                w = b.bit_length() - 1
                if w in index:
                    outm[i] |= 1 << index[w]
                mm ^= b
        inm = [0] * m
        for i in range(m):
            mm = outm[i]
            while mm:
                b = mm & -mm
                inm[b.bit_length() - 1] |= 1 << i
                mm ^= b
        return _kernels.solve_acyclic(
            m, outm, inm, hint, _local_partitions(vs, partitions)
        )

    size, mask = _compose(n, components, lower_hint, partitions, solve_component)
    witness = _mask_to_set(mask)
    assert topological_order(induced_subgraph(g, sorted(witness))) is not None, (
        "kernel returned a cyclic witness"
    )
    return size, witness


def symmetric_clique(g: DirectedGraph, *, cap: int = 64) -> tuple[int, frozenset[int]]:
    """Largest set whose members are pairwise joined by edges both ways."""
    _check_cap(g, cap)
    n = g.vertex_count
    if n == 0:
        return 0, frozenset()
    full = (1 << n) - 1
    bidir = [g.out_masks[v] & g.in_masks[v] for v in range(n)]
    conflict = [full & ~bidir[v] & ~(1 << v) for v in range(n)]
    size, mask = _kernels.solve_independent(n, conflict)
    return size, _mask_to_set(mask)


def transitive_clique(g: DirectedGraph, *, cap: int = 64) -> tuple[int, frozenset[int]]:
    """Largest set orderable as v1..vk with an edge vi -> vj for all i < j.

    Extra edges (including back edges) are allowed; only the forward
    completeness matters. The witness is deterministic but not necessarily
    the lexicographically least maximizer.
    """
    _check_cap(g, cap)
    n = g.vertex_count
    best_size = 0
    best_chosen = 0

    def extend(chosen: int, csize: int, candidates: int) -> None:
        nonlocal best_size, best_chosen
        if csize + candidates.bit_count() <= best_size:
            return
        if candidates == 0:
            if csize > best_size:
                best_size, best_chosen = csize, chosen
            return
        m = candidates
        while m:
            b = m & -m
            v = b.bit_length() - 1
            m ^= b
            # every vertex after v in the chain must receive an edge from v;
            # vertices tried earlier at THIS position stay available, the
            # chain order need not follow vertex indices
            extend(chosen | b, csize + 1, (candidates & ~b) & g.out_masks[v])
        if csize > best_size:
            best_size, best_chosen = csize, chosen

    extend(0, 0, (1 << n) - 1)
    return best_size, _mask_to_set(best_chosen)


def caro_wei_sum(g: DirectedGraph) -> float:
    """Sum of 1/(1 + indegree), a guaranteed acyclic-set size.

    Picking the vertices all of whose in-neighbours come later in a random
    ordering yields an acyclic set; this sum is that set's expected size,
    so some acyclic set is at least this large.
    """
    ind = [0] * g.vertex_count
    for _, v in g.edges:
        ind[v] += 1
    return float(sum(Fraction(1, 1 + d) for d in ind))


def acyclic_set_from_order(g: DirectedGraph, order: Sequence[int]) -> frozenset[int]:
    """Vertices whose in-neighbours all come later in the given ordering."""
    if sorted(order) != list(range(g.vertex_count)):
        raise ValueError("order must be a permutation of all vertices")
    pos = [0] * g.vertex_count
    for i, v in enumerate(order):
        pos[v] = i
    chosen = set()
    for v in range(g.vertex_count):
        m = g.in_masks[v]
        ok = True
        while m:
            b = m & -m
            if pos[b.bit_length() - 1] < pos[v]:
                ok = False
                break
            m ^= b
        if ok:
            chosen.add(v)
    return frozenset(chosen)


def random_order_acyclic_mean(
    g: DirectedGraph, trials: int, seed: int
) -> tuple[float, float]:
    """Monte-Carlo (mean, stderr) of the random-order acyclic-set size.

    The estimator draws i.i.d. priorities with a counter-based generator,
    so a given seed yields the same estimate on every platform.
    """
    if trials <= 1:
        raise ValueError("need at least 2 trials for a standard error")
    n = g.vertex_count
    rng = np.random.Generator(np.random.Philox(seed))
    pr = rng.random((trials, n))
    counts = np.zeros(trials, dtype=np.int64)
    for v in range(n):
        ins = [u for u in range(n) if g.in_masks[v] >> u & 1]
        if not ins:
            counts += 1
        else:
            counts += pr[:, v] < pr[:, ins].min(axis=1)
    mean = float(counts.mean())
    stderr = float(counts.std(ddof=1) / math.sqrt(trials))
    return mean, stderr


def weight_partition_independent_set(
    g: DirectedGraph, acyclic: Iterable[int], power: int
) -> frozenset[int]:
    """Independent set in the given strong power, built from an acyclic set.

    Label the acyclic set 1..k along a topological order. Any edge of the
    power between words over that set strictly increases the label sum, so
    words of equal weight are pairwise non-adjacent. Returns the largest
    constant-weight class (smallest weight on ties) as vertex indices of
    strong_power(g, power).
    """
    vs = sorted(set(int(v) for v in acyclic))
    if power < 1:
        raise ValueError("power must be at least 1")
    if not vs:
        return frozenset()
    sub = induced_subgraph(g, vs)
    topo = topological_order(sub)
    if topo is None:
        raise ValueError("the given set induces a directed cycle")
    if len(vs) ** power > VERTEX_CAP:
        raise CapExceededError("word count exceeds the vertex cap")
    label = {}
    for position, local in enumerate(topo):
        label[vs[local]] = position + 1
    base = g.vertex_count
    classes: dict[int, list[int]] = {}
    words = [()]
    for _ in range(power):
        words = [w + (v,) for w in words for v in vs]
    for w in words:
        weight = sum(label[v] for v in w)
        idx = 0
        for v in w:
            idx = idx * base + v
        classes.setdefault(weight, []).append(idx)
    best_weight = min(classes, key=lambda wt: (-len(classes[wt]), wt))
    return frozenset(classes[best_weight])


@dataclass(frozen=True)
class SpernerRow:
    """Exact independence and acyclicity numbers of one strong power."""

    n: int
    alpha: int
    rho: int
    alpha_witness: frozenset[int]
    rho_witness: frozenset[int]

    @property
    def alpha_rate(self) -> float:
        return math.log(self.alpha) / self.n

    @property
    def rho_rate(self) -> float:
        return math.log(self.rho) / self.n


@dataclass(frozen=True)
class SpernerEstimate:
    rows: tuple[SpernerRow, ...]
    truncated_at: int | None

    @property
    def best_lower_rate(self) -> float:
        return max(row.alpha_rate for row in self.rows)

    @property
    def best_upper_rate(self) -> float:
        return min(row.rho_rate for row in self.rows)

    def to_csv(self) -> str:
        lines = ["n,alpha,rho,alpha_rate,rho_rate"]
        for row in self.rows:
            lines.append(
                f"{row.n},{row.alpha},{row.rho},"
                f"{row.alpha_rate:.12g},{row.rho_rate:.12g}"
            )
        return "\n".join(lines) + "\n"


def sperner_report(
    g: DirectedGraph, n_max: int, *, cap: int = 64
) -> SpernerEstimate:
    """Exact alpha and rho of the first strong powers of g.

    Rows stop early (truncated_at = first skipped power) once a power
    exceeds ``cap`` vertices. Earlier rows feed later ones: products of two
    row values are achievable-size hints, and fixing the first letter caps
    each block of |V| consecutive indices at the previous row's value.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    if g.vertex_count == 0:
        raise ValueError("need at least one vertex")
    rows: list[SpernerRow] = []
    truncated_at = None
    for n in range(1, n_max + 1):
        if g.vertex_count**n > cap:
            truncated_at = n
            break
        gp = strong_power(g, n)
        alpha_hint = max(
            (rows[a - 1].alpha * rows[n - a - 1].alpha for a in range(1, n)),
            default=0,
        )
        rho_hint = max(
            (rows[a - 1].rho * rows[n - a - 1].rho for a in range(1, n)),
            default=0,
        )
        partitions_a: list[list[tuple[int, int]]] = []
        partitions_r: list[list[tuple[int, int]]] = []
        if n >= 2:
            k = g.vertex_count
            for pos in range(n):
                stride = k ** (n - 1 - pos)
                masks = [0] * k
                for idx in range(k**n):
                    masks[idx // stride % k] |= 1 << idx
                partitions_a.append([(m, rows[-1].alpha) for m in masks])
                partitions_r.append([(m, rows[-1].rho) for m in masks])
        alpha, aw = max_independent_set(
            gp, cap=cap, lower_hint=alpha_hint, partitions=partitions_a
        )
        rho, rw = max_acyclic_induced(
            gp, cap=cap, lower_hint=rho_hint, partitions=partitions_r
        )
        rows.append(SpernerRow(n, alpha, rho, aw, rw))
    return SpernerEstimate(tuple(rows), truncated_at)
