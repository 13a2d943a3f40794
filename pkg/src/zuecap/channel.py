"""Discrete memoryless channels: data model, structure checks, capacity.

A channel is a row-stochastic matrix W(y|x). Everything downstream of the
erasure-only decoding theory cares about the *support* of W, so entries that
are written as 0 are treated as exactly 0 (no epsilon thresholding anywhere).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .digraph import DirectedGraph
from .errors import CapExceededError, ConvergenceError, FormatError

ROW_SUM_TOL = 1e-9
PMF_TOL = 1e-12
# dense product tables: |Y|^n entries per row, and total cells
PRODUCT_OUTPUT_CAP = 1_000_000
PRODUCT_CELL_CAP = 1 << 25

CAPACITY_GAP_TOL = 1e-9
CAPACITY_MAX_ITERS = 100_000

FACTORIZE_TOL = 1e-9


@dataclass(frozen=True)
class Channel:
    """Row-stochastic transition matrix, optionally with identified outputs.

    ``identified`` means input symbol i is output symbol i; the first
    input_count output columns are the inputs' own letters. Requires
    input_count <= output_count.
    """

    matrix: np.ndarray
    identified: bool = False

    def __post_init__(self):
        arr = np.array(self.matrix, dtype=float)
        if arr.ndim != 2 or arr.size == 0:
            raise FormatError("channel matrix must be 2-D and nonempty")
        if np.any(arr < 0.0):
            raise FormatError("negative transition probability")
        if np.any(arr > 1.0):
            raise FormatError("transition probability above 1")
        sums = arr.sum(axis=1)
        bad = np.nonzero(np.abs(sums - 1.0) > ROW_SUM_TOL)[0]
        if bad.size:
            raise FormatError(
                "row %d sums to %.12g, not 1" % (int(bad[0]), float(sums[bad[0]]))
            )
        if self.identified and arr.shape[0] > arr.shape[1]:
            raise FormatError("identified channel needs |X| <= |Y|")
        arr.setflags(write=False)
        object.__setattr__(self, "matrix", arr)

    @property
    def input_count(self) -> int:
        return self.matrix.shape[0]

    @property
    def output_count(self) -> int:
        return self.matrix.shape[1]

    def support(self) -> np.ndarray:
        """Boolean |X| x |Y| support mask (exact-zero semantics)."""
        return self.matrix > 0.0


@dataclass(frozen=True)
class InputPMF:
    """Probability vector over an input alphabet (or its n-th power)."""

    p: np.ndarray

    def __post_init__(self):
        arr = np.array(self.p, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise FormatError("input pmf must be a nonempty vector")
        if np.any(arr < 0.0):
            raise FormatError("negative probability in input pmf")
        if abs(arr.sum() - 1.0) > PMF_TOL:
            raise FormatError("input pmf sums to %.17g, not 1" % float(arr.sum()))
        arr.setflags(write=False)
        object.__setattr__(self, "p", arr)

    @property
    def support(self) -> tuple:
        return tuple(int(i) for i in np.nonzero(self.p > 0.0)[0])

    @classmethod
    def uniform_on(cls, support, size: int) -> "InputPMF":
        support = sorted(set(int(s) for s in support))
        if not support or support[0] < 0 or support[-1] >= size:
            raise FormatError("support out of range")
        p = np.zeros(size)
        p[support] = 1.0 / len(support)
        return cls(p)


def validate(ch: Channel) -> None:
    """Re-run construction invariants on an existing channel."""
    Channel(ch.matrix, ch.identified)


def load_channel(text: str) -> Channel:
    """Parse the channel text format.

    Line 1: ``channel <|X|> <|Y|> <identified:0|1>``, then |X| rows of |Y|
    decimal probabilities. ``#`` starts a comment. A literal 0 entry is an
    exact structural zero.
    """
    lines = []
    for raw in text.splitlines():
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            lines.append(stripped)
    if not lines:
        raise FormatError("empty channel description")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "channel":
        raise FormatError("malformed header: %r" % lines[0])
    try:
        x_count, y_count, ident = int(head[1]), int(head[2]), int(head[3])
    except ValueError:
        raise FormatError("malformed header: %r" % lines[0])
    if ident not in (0, 1):
        raise FormatError("identified flag must be 0 or 1")
    if x_count <= 0 or y_count <= 0:
        raise FormatError("alphabet sizes must be positive")
    if len(lines) != 1 + x_count:
        raise FormatError(
            "expected %d matrix rows, found %d" % (x_count, len(lines) - 1)
        )
    rows = []
    for i, line in enumerate(lines[1:]):
        parts = line.split()
        if len(parts) != y_count:
            raise FormatError("row %d has %d entries, expected %d" % (i, len(parts), y_count))
        try:
            rows.append([float(tok) for tok in parts])
        except ValueError:
            raise FormatError("row %d has a non-numeric entry" % i)
    return Channel(np.array(rows), identified=bool(ident))


def format_channel(ch: Channel) -> str:
    out = ["channel %d %d %d" % (ch.input_count, ch.output_count, int(ch.identified))]
    for row in ch.matrix:
        out.append(" ".join("%.17g" % v for v in row))
    return "\n".join(out) + "\n"


def epsilon_of(ch: Channel) -> float:
    """Least eps such that W(x|x) >= 1-eps for every input.

    Requires an identified channel with positive diagonal.
    """
    if not ch.identified:
        raise ValueError("epsilon is defined for identified channels only")
    diag = np.array([ch.matrix[x, x] for x in range(ch.input_count)])
    if np.any(diag == 0.0):
        raise ValueError("W(x|x) = 0 for some x: not a low-noise channel")
    return float(max(0.0, np.max(1.0 - diag)))


def channel_graph(ch: Channel) -> DirectedGraph:
    """Confusability digraph on inputs: u -> v iff W(v|u) > 0, u != v."""
    if not ch.identified:
        raise ValueError("channel graph is defined for identified channels only")
    n = ch.input_count
    if any(ch.matrix[x, x] == 0.0 for x in range(n)):
        raise ValueError("W(x|x) = 0 for some x")
    edges = frozenset(
        (u, v)
        for u in range(n)
        for v in range(n)
        if u != v and ch.matrix[u, v] > 0.0
    )
    return DirectedGraph(n, edges)


def _identified_output_order(x_count: int, y_count: int, n: int) -> np.ndarray:
    # positions of output words in the reordered alphabet: words over the
    # input letters come first, indexed by their base-|X| value, so that
    # output word i == input word i for i < |X|^n
    total = y_count ** n
    perm = np.empty(total, dtype=np.int64)
    nxt = x_count ** n
    for idx in range(total):
        rem = idx
        letters = []
        for _ in range(n):
            letters.append(rem % y_count)
            rem //= y_count
        letters.reverse()
        if all(c < x_count for c in letters):
            val = 0
            for c in letters:
                val = val * x_count + c
            perm[idx] = val
        else:
            perm[idx] = nxt
            nxt += 1
    return perm


def product_channel(ch: Channel, n: int) -> Channel:
    """Memoryless n-fold extension W^n with MSB-first word indexing.

    For identified channels the output columns are permuted so that output
    word i coincides with input word i for the first |X|^n indices.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return ch
    out_n = ch.output_count ** n
    if out_n > PRODUCT_OUTPUT_CAP:
        raise CapExceededError("|Y|^n = %d exceeds cap %d" % (out_n, PRODUCT_OUTPUT_CAP))
    cells = (ch.input_count ** n) * out_n
    if cells > PRODUCT_CELL_CAP:
        raise CapExceededError("product table would hold %d cells" % cells)
    mat = ch.matrix
    for _ in range(n - 1):
        mat = np.kron(mat, ch.matrix)
    if ch.identified:
        perm = _identified_output_order(ch.input_count, ch.output_count, n)
        reordered = np.empty_like(mat)
        reordered[:, perm] = mat
        mat = reordered
    return Channel(mat, identified=ch.identified)


def canonical_channel(g: DirectedGraph, eps: float) -> Channel:
    """Identified channel on V(g) whose confusability graph is g.

    Diagonal 1-eps, eps split evenly over out-neighbors; sinks keep a
    deterministic row.
    """
    if not (0.0 < eps < 1.0):
        raise ValueError("eps must lie in (0, 1)")
    n = g.vertex_count
    mat = np.zeros((n, n))
    for x in range(n):
        outs = g.out_lists[x]
        if not outs:
            mat[x, x] = 1.0
            continue
        mat[x, x] = 1.0 - eps
        share = eps / len(outs)
        for v in outs:
            mat[x, v] = share
    return Channel(mat, identified=True)


def merge_outputs(ch: Channel):
    """Merge output columns with identical support into one symbol.

    Identified channels only merge columns outside the identified block.
    Returns (channel, merge_map) with merge_map[old_y] = new_y.
    """
    supp = ch.support()
    protected = ch.input_count if ch.identified else 0
    groups = []  # (key, [columns])
    by_key = {}
    for y in range(ch.output_count):
        if y < protected:
            groups.append((None, [y]))
            continue
        key = supp[:, y].tobytes()
        if key in by_key:
            groups[by_key[key]][1].append(y)
        else:
            by_key[key] = len(groups)
            groups.append((key, [y]))
    merge_map = np.empty(ch.output_count, dtype=np.int64)
    cols = []
    for new_y, (_, members) in enumerate(groups):
        for y in members:
            merge_map[y] = new_y
        cols.append(ch.matrix[:, members].sum(axis=1))
    merged = Channel(np.column_stack(cols), identified=ch.identified)
    return merged, merge_map


def bipartite_acyclic(ch: Channel) -> bool:
    """True iff the undirected input/output support graph is a forest."""
    parent = list(range(ch.input_count + ch.output_count))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for x in range(ch.input_count):
        for y in range(ch.output_count):
            if ch.matrix[x, y] > 0.0:
                ra, rb = find(x), find(ch.input_count + y)
                if ra == rb:
                    return False
                parent[ra] = rb
    return True


def factorize(ch: Channel):
    """Split W(y|x) = A(x)B(y) on the support, if possible.

    Propagates log-values over each connected component of the support
    graph and verifies every support entry to 1e-9; returns (A, B) arrays
    of positive reals, or None when no factorization exists.
    """
    x_count, y_count = ch.input_count, ch.output_count
    log_a = np.full(x_count, np.nan)
    log_b = np.full(y_count, np.nan)
    supp = ch.support()
    for x0 in range(x_count):
        if not math.isnan(log_a[x0]):
            continue
        # anchor: A(x0) = W(y0|x0) at x0's least support output, B(y0) = 1
        y0 = int(np.nonzero(supp[x0])[0][0])
        log_a[x0] = math.log(ch.matrix[x0, y0])
        stack = [("x", x0)]
        while stack:
            side, v = stack.pop()
            if side == "x":
                for y in np.nonzero(supp[v])[0]:
                    val = math.log(ch.matrix[v, y]) - log_a[v]
                    if math.isnan(log_b[y]):
                        log_b[y] = val
                        stack.append(("y", int(y)))
            else:
                for x in np.nonzero(supp[:, v])[0]:
                    val = math.log(ch.matrix[x, v]) - log_b[v]
                    if math.isnan(log_a[x]):
                        log_a[x] = val
                        stack.append(("x", int(x)))
    # isolated outputs carry no constraint
    log_b[np.isnan(log_b)] = 0.0
    a = np.exp(log_a)
    b = np.exp(log_b)
    err = np.abs(np.outer(a, b) - ch.matrix)[supp]
    if err.size and float(err.max()) >= FACTORIZE_TOL:
        return None
    return a, b


def shannon_capacity(ch: Channel):
    """Alternating-maximization capacity in nats, with the optimal input.

    Iterates until the standard upper/lower gap drops below 1e-9; raises
    ConvergenceError (carrying the residual) at the iteration cap.
    """
    w = ch.matrix
    supp = w > 0.0
    logw = np.zeros_like(w)
    logw[supp] = np.log(w[supp])
    p = np.full(ch.input_count, 1.0 / ch.input_count)
    gap = math.inf
    for _ in range(CAPACITY_MAX_ITERS):
        q = p @ w
        # D(W(.|x) || q) per input; support rows only
        logq = np.zeros_like(q)
        pos = q > 0.0
        logq[pos] = np.log(q[pos])
        t = np.einsum("xy,xy->x", w, np.where(supp, logw - logq[None, :], 0.0))
        lower = float(p @ t)
        upper = float(t.max())
        gap = upper - lower
        if gap < CAPACITY_GAP_TOL:
            return lower, InputPMF(p)
        tilt = np.exp(t - t.max())
        p = p * tilt
        p /= p.sum()
    raise ConvergenceError("capacity iteration did not converge", residual=gap)


def zue_positive(ch: Channel) -> bool:
    """True unless every input row has the same support.

    When all supports coincide, any output sequence is explicable by every
    codeword and an erasure-only decoder can never decide.
    """
    supp = ch.support()
    first = supp[0]
    return bool(np.any(supp != first[None, :]))


def feedback_zue(ch: Channel) -> float:
    """Erasure-only capacity with feedback: full capacity once positive."""
    if not zue_positive(ch):
        return 0.0
    value, _ = shannon_capacity(ch)
    return value
