"""Bounds on the erasure-only capacity of a DMC.

Lower bounds: Forney's random-coding bound (single- and multi-letter,
uniform-support), Hui's constant-composition bound, and the rate of an
explicit confusability-free code. Upper bounds: Shannon capacity, and the
low-noise bound ln(e^csp + eps|X|(|Y|-1)) for identified channels. Equality
shortcuts: support-forest channels, factorizable channels, and channels
whose rows all share one support.

All values are in nats.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from . import gsolve
from .channel import (
    Channel,
    InputPMF,
    bipartite_acyclic,
    canonical_channel,
    channel_graph,
    epsilon_of,
    factorize,
    product_channel,
    shannon_capacity,
    zue_positive,
)
from .digraph import index_to_word, strong_power
from .errors import CapExceededError, ConvergenceError

FORNEY_ENUM_CAP = 20  # 2^cap support subsets; beyond this enumeration is refused
TIE_TOL = 1e-12

HUI_GAP_TOL = 1e-8
HUI_MARGINAL_TOL = 1e-10
HUI_MAX_ITERS = 100_000

REPORT_SANITY_TOL = 1e-6


# ---------------------------------------------------------------------------
# report containers


@dataclass(frozen=True)
class BoundEntry:
    name: str
    kind: str  # "lower" | "upper"
    value: float
    certified: bool
    witness: str = ""


@dataclass(frozen=True)
class BoundReport:
    entries: tuple
    shortcuts: tuple  # (condition name, triggered) pairs

    @property
    def best_lower(self) -> Optional[float]:
        vals = [e.value for e in self.entries if e.kind == "lower" and e.certified]
        return max(vals) if vals else None

    @property
    def best_upper(self) -> Optional[float]:
        vals = [e.value for e in self.entries if e.kind == "upper" and e.certified]
        return min(vals) if vals else None

    @property
    def inconsistent(self) -> bool:
        lo, hi = self.best_lower, self.best_upper
        return lo is not None and hi is not None and lo > hi + REPORT_SANITY_TOL

    def to_text(self) -> str:
        lines = []
        for name, hit in self.shortcuts:
            lines.append("shortcut %-24s %s" % (name, "triggered" if hit else "-"))
        for e in self.entries:
            lines.append(
                "%-5s %-28s %.12g  %s%s"
                % (
                    e.kind,
                    e.name,
                    e.value,
                    "certified" if e.certified else "heuristic",
                    ("  " + e.witness) if e.witness else "",
                )
            )
        lo, hi = self.best_lower, self.best_upper
        lines.append(
            "interval [%s, %s]"
            % (
                "%.12g" % lo if lo is not None else "-inf",
                "%.12g" % hi if hi is not None else "+inf",
            )
        )
        if self.inconsistent:
            lines.append("INCONSISTENT: lower exceeds upper")
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        rows = ["bound_name,kind,value_nats,certified,witness"]
        for e in self.entries:
            witness = e.witness.replace(",", ";")
            rows.append(
                "%s,%s,%.12g,%d,%s" % (e.name, e.kind, e.value, int(e.certified), witness)
            )
        return "\n".join(rows) + "\n"


# ---------------------------------------------------------------------------
# Forney bound


def _ratio_objective(w: np.ndarray, supp: np.ndarray, p: np.ndarray) -> float:
    # sum over received letters of q(y) ln 1/P(explainers of y)
    q = p @ w
    px = p @ supp
    live = q > 0.0
    # q>0 forces px>0
    return float(-(q[live] * np.log(px[live])).sum())


def _lex_less(a: tuple, b: tuple) -> bool:
    return a < b


def forney_single_letter(ch: Channel, mode: str = "uniform-enum"):
    """Random-coding lower bound max_P sum_y (PW)(y) ln 1/P(X(y)).

    uniform-enum maximizes exactly over PMFs uniform on a support subset;
    simplex-search additionally polishes over the full simplex and keeps
    the better value. Returns (value, InputPMF).
    """
    if mode not in ("uniform-enum", "simplex-search"):
        raise ValueError("unknown mode %r" % mode)
    k = ch.input_count
    if k > FORNEY_ENUM_CAP:
        raise CapExceededError("input alphabet too large to enumerate supports")
    w = ch.matrix
    supp = ch.support().astype(float)
    best_val = -math.inf
    best_support = None
    for mask in range(1, 1 << k):
        members = tuple(x for x in range(k) if mask >> x & 1)
        p = np.zeros(k)
        p[list(members)] = 1.0 / len(members)
        val = _ratio_objective(w, supp, p)
        if val > best_val + TIE_TOL or (
            abs(val - best_val) <= TIE_TOL
            and best_support is not None
            and _lex_less(members, best_support)
        ):
            best_val = val
            best_support = members
    best_p = np.zeros(k)
    best_p[list(best_support)] = 1.0 / len(best_support)

    if mode == "simplex-search":
        def neg(z):
            ez = np.exp(z - z.max())
            p = ez / ez.sum()
            return -_ratio_objective(w, supp, p)

        starts = [np.zeros(k), np.log(best_p + 1e-3)]
        for x in range(k):
            z = np.full(k, -2.0)
            z[x] = 2.0
            starts.append(z)
        for z0 in starts:
            res = minimize(neg, z0, method="Nelder-Mead",
                           options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 4000})
            ez = np.exp(res.x - res.x.max())
            p = ez / ez.sum()
            val = _ratio_objective(w, supp, p)
            if val > best_val + TIE_TOL:
                best_val = val
                best_p = p
        if k == 2:
            # one-dimensional polish
            def neg1(t):
                return -_ratio_objective(w, supp, np.array([1.0 - t, t]))

            res = minimize_scalar(neg1, bounds=(0.0, 1.0), method="bounded",
                                  options={"xatol": 1e-12})
            if -res.fun > best_val + TIE_TOL:
                best_val = -res.fun
                best_p = np.array([1.0 - res.x, res.x])
    return best_val, InputPMF(best_p)


def forney_multiletter_uniform(ch: Channel, n: int):
    """Exact per-letter value of the uniform-support bound at blocklength n.

    Enumerates every nonempty subset of the n-letter input alphabet;
    returns (value per letter, support word tuple). n times the value is
    superadditive in n.
    """
    chn = product_channel(ch, n)
    k = chn.input_count
    if k > FORNEY_ENUM_CAP:
        raise CapExceededError("input alphabet %d too large to enumerate" % k)
    w = chn.matrix
    supp = chn.support().astype(float)
    best_val = -math.inf
    best_support = None
    for mask in range(1, 1 << k):
        members = tuple(x for x in range(k) if mask >> x & 1)
        p = np.zeros(k)
        p[list(members)] = 1.0 / len(members)
        val = _ratio_objective(w, supp, p)
        if val > best_val + TIE_TOL or (
            abs(val - best_val) <= TIE_TOL
            and best_support is not None
            and _lex_less(members, best_support)
        ):
            best_val = val
            best_support = members
    words = tuple(index_to_word(i, ch.input_count, n) for i in best_support)
    return best_val / n, words


# ---------------------------------------------------------------------------
# Hui bound


def _hui_inner(w: np.ndarray, p: np.ndarray):
    """KL projection: min over V inside supp(W) with PV = PW of I(P, V).

    Iterative column scaling with a dual certificate. Returns
    (dual value, V, primal value, gap).
    """
    active = p > 0.0
    pa = p[active]
    wa = w[active]
    supp = wa > 0.0
    q = pa @ wa
    qpos = q > 0.0
    scale = np.ones_like(q)
    gap = math.inf
    for it in range(HUI_MAX_ITERS):
        u = np.where(supp, q[None, :] * scale[None, :], 0.0)
        z = u.sum(axis=1)
        v = u / z[:, None]
        m = pa @ v
        resid = float(np.abs(m - q).max())
        # the primal diagnostics cost more than a scaling step, so they
        # run only once the marginals have settled (or periodically, to
        # notice a stalled gap before the iteration cap)
        if resid < HUI_MARGINAL_TOL or it % 8 == 7:
            # dual: sum_y Q ln scale - sum_x p ln Z
            g = float(
                (q[qpos] * np.log(scale[qpos])).sum() - (pa * np.log(z)).sum()
            )
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio = np.where(v > 0.0, v / q[None, :], 1.0)
            primal = float(
                (pa[:, None] * np.where(v > 0.0, v * np.log(ratio), 0.0)).sum()
            )
            gap = primal - g
            if gap < HUI_GAP_TOL and resid < HUI_MARGINAL_TOL:
                vfull = np.zeros_like(w)
                vfull[active] = v
                return g, vfull, primal, gap
        step = np.ones_like(q)
        np.divide(q, m, out=step, where=qpos & (m > 0.0))
        scale = scale * step
    raise ConvergenceError("inner projection did not converge", residual=gap)


def hui_bound(ch: Channel, outer: str = "auto"):
    """Constant-composition lower bound max_P min_{V<<W, PV=PW} I(P,V).

    The inner minimum is certified by its dual value; the outer max runs a
    grid for binary inputs or deterministic multistart otherwise. Returns
    (value, InputPMF, V matrix).
    """
    if outer == "auto":
        outer = "grid" if ch.input_count == 2 else "multistart"
    if outer not in ("grid", "multistart"):
        raise ValueError("unknown outer mode %r" % outer)
    w = ch.matrix
    k = ch.input_count

    def value_at(p: np.ndarray):
        g, v, _, _ = _hui_inner(w, p)
        return g, v

    best = (-math.inf, None, None)
    if outer == "grid" and k == 2:
        for t in np.linspace(0.0, 1.0, 101):
            p = np.array([1.0 - t, t])
            g, v = value_at(p)
            if g > best[0]:
                best = (g, p, v)
    else:
        starts = [np.full(k, 1.0 / k)]
        try:
            _, pstar = shannon_capacity(ch)
            starts.append(np.maximum(pstar.p, 1e-9) / np.maximum(pstar.p, 1e-9).sum())
        except ConvergenceError:
            pass
        for x in range(k):
            p = np.full(k, 0.1 / max(k - 1, 1))
            p[x] = 0.9
            starts.append(p / p.sum())

        def neg(zv):
            ez = np.exp(zv - zv.max())
            p = ez / ez.sum()
            g, _ = value_at(p)
            return -g

        for p0 in starts:
            # every evaluation is a certified dual value, so a budget cap
            # only costs polish, never soundness
            res = minimize(neg, np.log(p0 + 1e-12), method="Nelder-Mead",
                           options={"xatol": 1e-8, "fatol": 1e-10,
                                    "maxiter": 800, "maxfev": 800})
            ez = np.exp(res.x - res.x.max())
            p = ez / ez.sum()
            g, v = value_at(p)
            if g > best[0]:
                best = (g, p, v)
    val, p, v = best
    return val, InputPMF(p), v


def hui_bound_two_letter(ch: Channel, outer: str = "auto"):
    """Two-letter refinement: hui_bound on W^2, halved. Gated on |X|^2 <= 9."""
    if ch.input_count ** 2 > 9:
        raise CapExceededError("two-letter mode needs |X|^2 <= 9")
    val, p2, v2 = hui_bound(product_channel(ch, 2), outer=outer)
    return val / 2.0, p2, v2


# ---------------------------------------------------------------------------
# closed-form bounds


def effective_output_count(x_count: int, y_count: int) -> int:
    """Merged-output ceiling: identical-support columns collapse, so at most
    |X| + 2^|X| - 1 distinct outputs matter."""
    return min(y_count, x_count + (1 << x_count) - 1)


def epsilon_noise_upper(
    csp: float, eps: float, x_count: int, y_count: int, reduce_outputs: bool = True
) -> float:
    """Upper bound ln(e^csp + eps |X| (|Y|-1)) for identified low-noise channels.

    Sound only when csp is a certified value (or upper bound) of the
    confusability graph's Sperner capacity. reduce_outputs substitutes the
    merged-output ceiling for |Y|.
    """
    if not 0.0 <= eps < 1.0:
        raise ValueError("eps must lie in [0, 1)")
    if csp < 0.0:
        raise ValueError("csp must be nonnegative")
    y_eff = effective_output_count(x_count, y_count) if reduce_outputs else y_count
    return math.log(math.exp(csp) + eps * x_count * (y_eff - 1))


def sperner_code_lower(code_rate: float, n: int, eps: float) -> float:
    """Rate kept after erasures: (1-eps)^n times a verified code rate."""
    if not 0.0 <= eps < 1.0:
        raise ValueError("eps must lie in [0, 1)")
    if n < 1:
        raise ValueError("n must be >= 1")
    if code_rate < 0.0:
        raise ValueError("code_rate must be nonnegative")
    return (1.0 - eps) ** n * code_rate


def ratio_bound_check(ch: Channel, pmf: InputPMF, n: int, csp: float):
    """Verify sum_y (PW^n)(y)/P(X^n(y)) <= (e^csp + eps|X|(|Y|-1))^n.

    P must be uniform over its support on the n-letter input alphabet; ch
    identified with positive diagonal. Returns (lhs, rhs, ok).
    """
    eps = epsilon_of(ch)
    chn = product_channel(ch, n)
    if pmf.p.shape[0] != chn.input_count:
        raise ValueError("pmf lives on the wrong alphabet")
    sup_p = pmf.p[pmf.p > 0.0]
    if sup_p.size and (np.abs(sup_p - sup_p[0]) > 1e-12).any():
        raise ValueError("pmf must be uniform over its support")
    p = pmf.p
    q = p @ chn.matrix
    px = p @ chn.support().astype(float)
    live = q > 0.0
    lhs = float((q[live] / px[live]).sum())
    rhs = (math.exp(csp) + eps * ch.input_count * (ch.output_count - 1)) ** n
    return lhs, rhs, lhs <= rhs + 1e-9


# ---------------------------------------------------------------------------
# composite report


@dataclass(frozen=True)
class ReportOptions:
    csp: Optional[float] = None
    csp_certified: bool = True
    forney_n: int = 1
    witness_n: int = 2
    reduce_outputs: bool = True
    hui_outer: str = "auto"
    simplex_search: bool = True


def composite_report(ch: Channel, options: ReportOptions = ReportOptions()) -> BoundReport:
    """Assemble every applicable bound and equality shortcut for a channel."""
    entries = []
    c_val, c_pmf = shannon_capacity(ch)
    entries.append(
        BoundEntry("shannon", "upper", c_val, True,
                   "erasure-only capacity never exceeds plain capacity")
    )

    positive = zue_positive(ch)
    forest = bipartite_acyclic(ch)
    factors = factorize(ch) is not None
    shortcuts = (
        ("zero-capacity", not positive),
        ("bipartite-acyclic", forest),
        ("factorizable", factors),
    )
    if not positive:
        # the value is exactly 0; skip the heuristics, they only add dust
        entries.append(
            BoundEntry("all-supports-equal", "upper", 0.0, True,
                       "every output is explicable by every input"))
        entries.append(BoundEntry("all-supports-equal", "lower", 0.0, True, ""))
        return BoundReport(tuple(entries), shortcuts)
    if forest:
        entries.append(
            BoundEntry("support-forest-equality", "lower", c_val, True,
                       "support graph is a forest so the capacity is attained"))
    if factors:
        entries.append(
            BoundEntry("factorizable-equality", "lower", c_val, True,
                       "channel law splits as A(x)B(y) on its support"))

    mode = "simplex-search" if options.simplex_search else "uniform-enum"
    f_val, f_pmf = forney_single_letter(ch, mode=mode)
    entries.append(
        BoundEntry("forney-single", "lower", f_val, True,
                   "support %s" % (f_pmf.support,)))
    if options.forney_n > 1:
        try:
            fm_val, fm_words = forney_multiletter_uniform(ch, options.forney_n)
            entries.append(
                BoundEntry("forney-%d-letter" % options.forney_n, "lower", fm_val,
                           True, "support words %s" % (fm_words,)))
        except CapExceededError:
            pass
    h_val, h_pmf, _ = hui_bound(ch, outer=options.hui_outer)
    entries.append(BoundEntry("hui", "lower", h_val, True, ""))

    identified_noise = ch.identified and all(
        ch.matrix[x, x] > 0.0 for x in range(ch.input_count))
    if identified_noise:
        eps = epsilon_of(ch)
        g = channel_graph(ch)
        n = options.witness_n
        size, wit = gsolve.max_independent_set(strong_power(g, n))
        if size >= 1:
            rate = math.log(size) / n
            entries.append(
                BoundEntry("code-rate-n%d" % n, "lower",
                           sperner_code_lower(rate, n, eps), True,
                           "%d words at blocklength %d" % (size, n)))
        if options.csp is not None:
            up = epsilon_noise_upper(options.csp, eps, ch.input_count,
                                     ch.output_count, options.reduce_outputs)
            entries.append(
                BoundEntry("low-noise", "upper", up, options.csp_certified,
                           "assumes sperner capacity %.12g%s"
                           % (options.csp,
                              "" if options.csp_certified else " (finite-n estimate)")))
    return BoundReport(tuple(entries), shortcuts)
