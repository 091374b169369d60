"""Grouped fold over int64 columns: the engine's hot kernel.

Two interchangeable lanes implement the same contract: a Cython extension
(built at install time) and a numpy fallback. The compiled lane is
selected at import when available; set STARCUBE_PURE_FOLD=1 to force the
fallback. ``benchmarks/bench_fold.py`` compares the two.
"""

from __future__ import annotations

import os

import numpy as np

from . import fold_py

if os.environ.get("STARCUBE_PURE_FOLD") == "1":
    _lane = fold_py
    KERNEL_LANE = "python"
else:
    try:
        from . import _foldc as _lane
        KERNEL_LANE = "compiled"
    except ImportError:
        _lane = fold_py
        KERNEL_LANE = "python"


def active_lane() -> str:
    return KERNEL_LANE


def _empty(d: int, na: int, nb: int, nc: int):
    return (np.empty((0, d), dtype=np.int64), np.empty((0, na), dtype=np.int64),
            np.empty((0, nb), dtype=np.int64), np.empty((0, nc), dtype=np.int64))


def fold_groups(codes, addv, minv, maxv, mask=None, lane=None):
    """Group rows by their code tuple; fold addv by +, minv by min, maxv
    by max.

    codes: int64 [n, d] (d may be 0: everything is one group).
    Returns (group_codes [g, d], sums [g, a], mins [g, b], maxs [g, c])
    with groups in ascending code order.
    """
    codes = np.ascontiguousarray(codes, dtype=np.int64)
    addv = np.ascontiguousarray(addv, dtype=np.int64)
    minv = np.ascontiguousarray(minv, dtype=np.int64)
    maxv = np.ascontiguousarray(maxv, dtype=np.int64)
    if mask is not None:
        keep = np.asarray(mask, dtype=bool)
        codes, addv, minv, maxv = (codes[keep], addv[keep], minv[keep],
                                   maxv[keep])
    n, d = codes.shape
    if n == 0:
        return _empty(d, addv.shape[1], minv.shape[1], maxv.shape[1])
    if d == 0:
        return (np.empty((1, 0), dtype=np.int64),
                addv.sum(axis=0, dtype=np.int64)[None, :],
                minv.min(axis=0)[None, :] if minv.shape[1]
                else np.empty((1, 0), dtype=np.int64),
                maxv.max(axis=0)[None, :] if maxv.shape[1]
                else np.empty((1, 0), dtype=np.int64))
    # lexsort's last key is primary: pass columns reversed so column 0
    # dominates and groups come out in ascending code order.
    order = np.lexsort(tuple(codes[:, i] for i in range(d - 1, -1, -1)))
    impl = _lane if lane is None else (fold_py if lane == "python" else _lane)
    return impl.fold_sorted(codes, order, addv, minv, maxv)
