"""Kernel dispatch: compiled extension when available, pure Python otherwise.

Set ZUECAP_KERNEL=python or ZUECAP_KERNEL=compiled to force a backend;
the default (auto) prefers the extension.  Forcing "compiled" without
the built extension raises at call time, not at import.
"""

import importlib
import os

from . import reference

try:
    _speedups = importlib.import_module("._speedups", __name__)
except ImportError:
    _speedups = None

HAVE_COMPILED = _speedups is not None

__all__ = ["solve_independent", "solve_acyclic", "active_kernel", "HAVE_COMPILED"]


def _backend(n):
    mode = os.environ.get("ZUECAP_KERNEL", "auto")
    if mode == "python":
        return reference
    if mode == "compiled":
        if _speedups is None:
            raise RuntimeError("ZUECAP_KERNEL=compiled but the extension is not built")
        if n > 64:
            raise ValueError("compiled kernel is limited to 64 vertices")
        return _speedups
    if HAVE_COMPILED and n <= 64:
        return _speedups
    return reference


def active_kernel(n=64):
    """Name of the backend a problem on n vertices would run on."""
    return "compiled" if _backend(n) is not reference else "python"


def solve_independent(n, conflict, lower_hint=0, partitions=()):
    return _backend(n).solve_independent(n, conflict, lower_hint, partitions)


def solve_acyclic(n, out_masks, in_masks, lower_hint=0, partitions=(), stop_first=False):
    return _backend(n).solve_acyclic(n, out_masks, in_masks, lower_hint, partitions, stop_first)
