"""Erasure-only decoding: code verification, list sizes, erasure rates.

The decoder outputs message m only when m is the single message whose
codeword could have produced the received word; otherwise it erases.  It
never errs, so the quantities of interest are the list of explainers
M(y), the probability of an ambiguous list, and list-size moments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import Channel
from .errors import CapExceededError, FormatError

ENUM_CAP = 1_000_000
MC_CHUNK = 1 << 16  # fixed trial block; part of the reproducibility contract


@dataclass(frozen=True)
class Codebook:
    """M codewords of blocklength n over the input alphabet."""

    n: int
    words: tuple

    def __post_init__(self):
        for w in self.words:
            if len(w) != self.n:
                raise FormatError("codeword %r is not length %d" % (w, self.n))
            if any(s < 0 for s in w):
                raise FormatError("negative symbol in %r" % (w,))

    @property
    def size(self) -> int:
        return len(self.words)

    def rate(self) -> float:
        """ln(M)/n; meaningful only when the words are distinct."""
        return math.log(len(self.words)) / self.n


def load_codebook(text: str) -> Codebook:
    """Parse the codebook format: `codebook <M> <n>`, then M symbol rows."""
    lines = [
        (i + 1, s)
        for i, raw in enumerate(text.splitlines())
        for s in [raw.split("#", 1)[0].strip()]
        if s
    ]
    if not lines:
        raise FormatError("empty codebook text")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 3 or parts[0] != "codebook":
        raise FormatError("line %d: expected `codebook <M> <n>`" % lineno)
    try:
        m_count, n = int(parts[1]), int(parts[2])
    except ValueError:
        raise FormatError("line %d: counts must be integers" % lineno) from None
    if m_count < 1 or n < 1:
        raise FormatError("line %d: counts must be positive" % lineno)
    body = lines[1:]
    if len(body) != m_count:
        raise FormatError("expected %d codewords, found %d" % (m_count, len(body)))
    words = []
    for lineno, row in body:
        try:
            symbols = tuple(int(tok) for tok in row.split())
        except ValueError:
            raise FormatError("line %d: symbols must be integers" % lineno) from None
        if len(symbols) != n:
            raise FormatError("line %d: expected %d symbols" % (lineno, n))
        if any(s < 0 for s in symbols):
            raise FormatError("line %d: negative symbol" % lineno)
        words.append(symbols)
    return Codebook(n, tuple(words))


def format_codebook(cb: Codebook) -> str:
    rows = ["codebook %d %d" % (cb.size, cb.n)]
    rows.extend(" ".join(str(s) for s in w) for w in cb.words)
    return "\n".join(rows) + "\n"


def _check_symbols(cb: Codebook, ch: Channel) -> None:
    for w in cb.words:
        for s in w:
            if s >= ch.input_count:
                raise ValueError("symbol %d out of range for %d inputs" % (s, ch.input_count))


def _word_prob(ch: Channel, x_word, y_word) -> float:
    p = 1.0
    for x, y in zip(x_word, y_word):
        p *= ch.matrix[x, y]
        if p == 0.0:
            return 0.0
    return p


def _can_explain(supp: np.ndarray, x_word, y_word) -> bool:
    # exact-zero test letter by letter: one zero factor kills the product
    for x, y in zip(x_word, y_word):
        if not supp[x, y]:
            return False
    return True


def is_sperner_code(cb: Codebook, ch: Channel) -> bool:
    """True iff no codeword can be corrupted into another codeword.

    Checks W^n(x_m | x_m') = 0 for all m != m' by letter-wise support
    products. Requires an identified channel that keeps each input intact
    with positive probability, so a duplicated codeword always fails.
    """
    if not ch.identified:
        raise ValueError("need an identified channel")
    for x in range(ch.input_count):
        if ch.matrix[x, x] <= 0.0:
            raise ValueError("input %d cannot survive the channel" % x)
    _check_symbols(cb, ch)
    supp = ch.support()
    for i, w in enumerate(cb.words):
        for j, w2 in enumerate(cb.words):
            if i != j and _can_explain(supp, w2, w):
                return False
    return True


def list_size(y_word, cb: Codebook, ch: Channel) -> int:
    """M(y): how many codewords could have produced y."""
    if len(y_word) != cb.n:
        raise ValueError("received word has length %d, codebook has %d" % (len(y_word), cb.n))
    _check_symbols(cb, ch)
    if any(y < 0 or y >= ch.output_count for y in y_word):
        raise ValueError("output symbol out of range")
    supp = ch.support()
    return sum(1 for w in cb.words if _can_explain(supp, w, y_word))


def _output_distributions(cb: Codebook, ch: Channel) -> np.ndarray:
    # row m = distribution of the received word (flattened, MSB-first)
    # when codeword m is sent
    y_count = ch.output_count
    total = y_count**cb.n
    if total > ENUM_CAP:
        raise CapExceededError(
            "output space %d exceeds %d; use the Monte-Carlo estimator" % (total, ENUM_CAP)
        )
    out = np.empty((cb.size, total))
    for m, w in enumerate(cb.words):
        dist = np.ones(1)
        for x in w:
            dist = np.kron(dist, ch.matrix[x])
        out[m] = dist
    return out


def erasure_probability_exact(cb: Codebook, ch: Channel, m: int) -> float:
    """Probability the decoder erases when codeword m is sent.

    Sums W^n(y|x_m) over received words explicable by more than one
    codeword. Enumerates the full output space, so |Y|^n is capped.
    """
    _check_symbols(cb, ch)
    if not 0 <= m < cb.size:
        raise ValueError("message index out of range")
    dists = _output_distributions(cb, ch)
    explainers = (dists > 0.0).sum(axis=0)
    return float(dists[m, explainers > 1].sum())


def erasure_probability_max(cb: Codebook, ch: Channel) -> float:
    _check_symbols(cb, ch)
    dists = _output_distributions(cb, ch)
    explainers = (dists > 0.0).sum(axis=0)
    return float(dists[:, explainers > 1].sum(axis=1).max())


def erasure_probability_avg(cb: Codebook, ch: Channel) -> float:
    _check_symbols(cb, ch)
    dists = _output_distributions(cb, ch)
    explainers = (dists > 0.0).sum(axis=0)
    return float(dists[:, explainers > 1].sum(axis=1).mean())


def erasure_probability_mc(
    cb: Codebook, ch: Channel, m: int, trials: int, seed: int
):
    """Monte-Carlo estimate of the same quantity, with binomial stderr.

    Trials are drawn in fixed-size blocks from Philox counter lanes
    2^64 apart, so trial i sees the same randomness however the blocks
    are scheduled. Returns (estimate, stderr).
    """
    _check_symbols(cb, ch)
    if not 0 <= m < cb.size:
        raise ValueError("message index out of range")
    if trials < 1:
        raise ValueError("need at least one trial")
    word = cb.words[m]
    supp = ch.support()
    cums = [np.cumsum(ch.matrix[x]) for x in word]
    others = [w for i, w in enumerate(cb.words) if i != m]
    erasures = 0
    done = 0
    chunk_index = 0
    while done < trials:
        block = min(MC_CHUNK, trials - done)
        rng = np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, chunk_index, 0]))
        u = rng.random((block, cb.n))
        ys = np.empty((block, cb.n), dtype=np.int64)
        for pos in range(cb.n):
            ys[:, pos] = np.searchsorted(cums[pos], u[:, pos], side="right")
        ambiguous = np.zeros(block, dtype=bool)
        for w2 in others:
            ok = np.ones(block, dtype=bool)
            for pos in range(cb.n):
                ok &= supp[w2[pos], ys[:, pos]]
                if not ok.any():
                    break
            ambiguous |= ok
        erasures += int(ambiguous.sum())
        done += block
        chunk_index += 1
    est = erasures / trials
    stderr = math.sqrt(est * (1.0 - est) / trials)
    return est, stderr


def listsize_moment(cb: Codebook, ch: Channel, rho: float, m: int) -> float:
    """E[M(y)^rho] conditional on sending codeword m."""
    if rho <= 0.0:
        raise ValueError("rho must be positive")
    _check_symbols(cb, ch)
    if not 0 <= m < cb.size:
        raise ValueError("message index out of range")
    dists = _output_distributions(cb, ch)
    explainers = (dists > 0.0).sum(axis=0).astype(float)
    live = dists[m] > 0.0
    return float((dists[m, live] * explainers[live] ** rho).sum())


def listsize_moment_avg(cb: Codebook, ch: Channel, rho: float) -> float:
    """E[M(y)^rho] averaged over a uniform message."""
    return sum(listsize_moment(cb, ch, rho, m) for m in range(cb.size)) / cb.size
