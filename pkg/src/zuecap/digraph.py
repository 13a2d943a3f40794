"""Directed graphs and their product algebra.

Graphs are immutable: a vertex count and a set of ordered pairs, no
self-loops, no parallel edges. Vertices of a product of graphs with m and
k vertices are encoded row-major as ``u * k + v``; iterating a power
therefore encodes words most-significant letter first, and
``strong_power(g, a + b)`` literally equals
``strong_product(strong_power(g, a), strong_power(g, b))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .errors import CapExceededError, FormatError

VERTEX_CAP = 1 << 24


@dataclass(frozen=True)
class DirectedGraph:
    """Immutable digraph on vertices 0..vertex_count-1."""

    vertex_count: int
    edges: frozenset[tuple[int, int]] = frozenset()
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if not isinstance(self.vertex_count, int) or self.vertex_count < 0:
            raise ValueError("vertex_count must be a nonnegative integer")
        if self.vertex_count > VERTEX_CAP:
            raise CapExceededError(
                f"{self.vertex_count} vertices exceeds the hard cap of {VERTEX_CAP}"
            )
        edges = frozenset((int(u), int(v)) for u, v in self.edges)
        for u, v in edges:
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise ValueError(f"edge ({u}, {v}) out of range")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
        object.__setattr__(self, "edges", edges)
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != self.vertex_count:
                raise ValueError("labels must match vertex_count")
            object.__setattr__(self, "labels", labels)

    @cached_property
    def out_masks(self) -> tuple[int, ...]:
        masks = [0] * self.vertex_count
        for u, v in self.edges:
            masks[u] |= 1 << v
        return tuple(masks)

    @cached_property
    def in_masks(self) -> tuple[int, ...]:
        masks = [0] * self.vertex_count
        for u, v in self.edges:
            masks[v] |= 1 << u
        return tuple(masks)

    @cached_property
    def out_lists(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for u, v in sorted(self.edges):
            adj[u].append(v)
        return tuple(tuple(a) for a in adj)

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edges


def _check_product_size(count: int) -> None:
    if count > VERTEX_CAP:
        raise CapExceededError(f"product would have {count} vertices (cap {VERTEX_CAP})")


def strong_product(g: DirectedGraph, h: DirectedGraph) -> DirectedGraph:
    """Edge (x,y)->(x',y') iff every coordinate stays or moves along an edge,
    with at least one coordinate moving."""
    ng, nh = g.vertex_count, h.vertex_count
    _check_product_size(ng * nh)
    g_moves = [(u, v) for u, v in g.edges] + [(v, v) for v in range(ng)]
    h_moves = [(u, v) for u, v in h.edges] + [(v, v) for v in range(nh)]
    edges = set()
    for u, up in g_moves:
        for w, wp in h_moves:
            if u == up and w == wp:
                continue
            edges.add((u * nh + w, up * nh + wp))
    return DirectedGraph(ng * nh, frozenset(edges))


def weak_product(g: DirectedGraph, h: DirectedGraph) -> DirectedGraph:
    """Edge iff some coordinate moves along an edge (the other is free)."""
    ng, nh = g.vertex_count, h.vertex_count
    _check_product_size(ng * nh)
    edges = set()
    for u, up in g.edges:
        for w in range(nh):
            for wp in range(nh):
                edges.add((u * nh + w, up * nh + wp))
    for w, wp in h.edges:
        for u in range(ng):
            for up in range(ng):
                edges.add((u * nh + w, up * nh + wp))
    # no self-loops can arise (factors have none), but keep the guarantee explicit
    edges -= {(i, i) for i in range(ng * nh)}
    return DirectedGraph(ng * nh, frozenset(edges))


def strong_power(g: DirectedGraph, n: int) -> DirectedGraph:
    if n < 1:
        raise ValueError("power must be >= 1")
    _check_product_size(g.vertex_count**n)
    power = g
    for _ in range(n - 1):
        power = strong_product(power, g)
    return power


def weak_power(g: DirectedGraph, n: int) -> DirectedGraph:
    if n < 1:
        raise ValueError("power must be >= 1")
    _check_product_size(g.vertex_count**n)
    power = g
    for _ in range(n - 1):
        power = weak_product(power, g)
    return power


def complement(g: DirectedGraph) -> DirectedGraph:
    """All ordered pairs of distinct vertices not present in g."""
    n = g.vertex_count
    edges = frozenset(
        (u, v) for u in range(n) for v in range(n) if u != v and (u, v) not in g.edges
    )
    return DirectedGraph(n, edges)


def topological_order(g: DirectedGraph) -> tuple[int, ...] | None:
    """A vertex order with every edge pointing forward, or None on a cycle.

    Iterative depth-first search with an explicit stack; roots and
    neighbours are visited in ascending order, so the result is
    deterministic.
    """
    n = g.vertex_count
    adj = g.out_lists
    color = bytearray(n)  # 0 unvisited, 1 on stack, 2 done
    order: list[int] = []
    for root in range(n):
        if color[root]:
            continue
        color[root] = 1
        stack: list[tuple[int, int]] = [(root, 0)]
        while stack:
            v, i = stack[-1]
            if i < len(adj[v]):
                stack[-1] = (v, i + 1)
                w = adj[v][i]
                if color[w] == 1:
                    return None
                if color[w] == 0:
                    color[w] = 1
                    stack.append((w, 0))
            else:
                color[v] = 2
                order.append(v)
                stack.pop()
    order.reverse()
    return tuple(order)


def is_acyclic(g: DirectedGraph) -> bool:
    return topological_order(g) is not None


def strongly_connected_components(g: DirectedGraph) -> tuple[tuple[int, ...], ...]:
    """SCCs as ascending vertex tuples, sinks of the condensation first.

    Iterative Tarjan with ascending roots and neighbour order, so the
    output is deterministic: every component appears before any component
    that can reach it.
    """
    n = g.vertex_count
    order = [0] * n
    low = [0] * n
    on_stack = bytearray(n)
    pos = [0] * n
    stack: list[int] = []
    components: list[tuple[int, ...]] = []
    counter = 1
    for root in range(n):
        if order[root]:
            continue
        work = [root]
        order[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = 1
        while work:
            u = work[-1]
            descended = False
            neighbours = g.out_lists[u]
            while pos[u] < len(neighbours):
                v = neighbours[pos[u]]
                pos[u] += 1
                if not order[v]:
                    order[v] = low[v] = counter
                    counter += 1
                    stack.append(v)
                    on_stack[v] = 1
                    work.append(v)
                    descended = True
                    break
                if on_stack[v] and order[v] < low[u]:
                    low[u] = order[v]
            if descended:
                continue
            work.pop()
            if work and low[u] < low[work[-1]]:
                low[work[-1]] = low[u]
            if low[u] == order[u]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = 0
                    comp.append(w)
                    if w == u:
                        break
                components.append(tuple(sorted(comp)))
    return tuple(components)


def degrees(g: DirectedGraph) -> tuple[tuple[int, int], ...]:
    """Per-vertex (in-degree, out-degree)."""
    ind = [0] * g.vertex_count
    outd = [0] * g.vertex_count
    for u, v in g.edges:
        outd[u] += 1
        ind[v] += 1
    return tuple(zip(ind, outd))


def induced_subgraph(g: DirectedGraph, vertices) -> DirectedGraph:
    """Subgraph on the given vertices, reindexed in ascending order."""
    requested = [int(v) for v in vertices]
    vs = sorted(set(requested))
    if len(vs) != len(requested):
        raise ValueError("duplicate vertices in induced_subgraph")
    for v in vs:
        if not 0 <= v < g.vertex_count:
            raise ValueError(f"vertex {v} out of range")
    index = {v: i for i, v in enumerate(vs)}
    edges = frozenset(
        (index[u], index[v]) for u, v in g.edges if u in index and v in index
    )
    return DirectedGraph(len(vs), edges)


def graphs_equal(g: DirectedGraph, h: DirectedGraph) -> bool:
    """Exact equality of vertex counts and edge sets (labels ignored)."""
    return g.vertex_count == h.vertex_count and g.edges == h.edges


def index_to_word(index: int, base: int, length: int) -> tuple[int, ...]:
    """Decode a power-graph vertex index to its word, most significant first."""
    if base < 1:
        raise ValueError("base must be >= 1")
    word = [0] * length
    for pos in range(length - 1, -1, -1):
        index, word[pos] = divmod(index, base)
    if index:
        raise ValueError("index out of range for the given base and length")
    return tuple(word)


def word_to_index(word, base: int) -> int:
    index = 0
    for letter in word:
        if not 0 <= letter < base:
            raise ValueError(f"letter {letter} out of range for base {base}")
        index = index * base + letter
    return index


def parse_graph(text: str) -> DirectedGraph:
    """Parse the plain-text graph format.

    First meaningful line is ``digraph <vertex_count>``, then one ``u v``
    edge per line. ``#`` starts a comment; blank lines are skipped.
    Duplicate edges and self-loops are rejected.
    """
    header: tuple[int, int] | None = None  # (line_no, vertex_count)
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 2 or parts[0] != "digraph":
                raise FormatError(f"line {line_no}: expected 'digraph <vertex_count>'")
            try:
                count = int(parts[1])
            except ValueError:
                raise FormatError(f"line {line_no}: vertex count must be an integer") from None
            if count < 0:
                raise FormatError(f"line {line_no}: vertex count must be nonnegative")
            header = (line_no, count)
            continue
        if len(parts) != 2:
            raise FormatError(f"line {line_no}: expected 'u v'")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise FormatError(f"line {line_no}: edge endpoints must be integers") from None
        count = header[1]
        if not (0 <= u < count and 0 <= v < count):
            raise FormatError(f"line {line_no}: edge ({u}, {v}) out of range")
        if u == v:
            raise FormatError(f"line {line_no}: self-loop at vertex {u}")
        if (u, v) in seen:
            raise FormatError(f"line {line_no}: duplicate edge ({u}, {v})")
        seen.add((u, v))
        edges.append((u, v))
    if header is None:
        raise FormatError("missing 'digraph <vertex_count>' header")
    return DirectedGraph(header[1], frozenset(edges))


def format_graph(g: DirectedGraph) -> str:
    lines = [f"digraph {g.vertex_count}"]
    lines.extend(f"{u} {v}" for u, v in sorted(g.edges))
    return "\n".join(lines) + "\n"
