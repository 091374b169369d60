"""Pure-Python (numpy) lane of the grouped-fold kernel.

Mirrors the compiled extension exactly: rows are pre-sorted by their code
tuple via ``order``; maximal runs of equal codes form the groups.
"""

from __future__ import annotations

import numpy as np


def fold_sorted(codes: np.ndarray, order: np.ndarray, addv: np.ndarray,
                minv: np.ndarray, maxv: np.ndarray):
    sorted_codes = codes[order]
    n = sorted_codes.shape[0]
    boundary = np.empty(n, dtype=bool)
    boundary[0] = True
    if n > 1:
        np.any(sorted_codes[1:] != sorted_codes[:-1], axis=1,
               out=boundary[1:])
    starts = np.flatnonzero(boundary)
    gcodes = np.ascontiguousarray(sorted_codes[starts])

    def reduce_cols(values, ufunc):
        if values.shape[1] == 0:
            return np.empty((len(starts), 0), dtype=np.int64)
        return ufunc.reduceat(values[order], starts, axis=0)

    gadd = reduce_cols(addv, np.add)
    gmin = reduce_cols(minv, np.minimum)
    gmax = reduce_cols(maxv, np.maximum)
    return gcodes, gadd, gmin, gmax
