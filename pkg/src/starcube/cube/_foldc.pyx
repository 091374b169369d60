# cython: boundscheck=False, wraparound=False, nonecheck=False, cdivision=True
"""Compiled lane of the grouped-fold kernel: one fused pass over the rows
in sorted order, folding sum/min/max columns per group without
materializing gathered copies."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def fold_sorted(cnp.int64_t[:, ::1] codes,
                cnp.intp_t[::1] order,
                cnp.int64_t[:, ::1] addv,
                cnp.int64_t[:, ::1] minv,
                cnp.int64_t[:, ::1] maxv):
    cdef Py_ssize_t n = codes.shape[0]
    cdef Py_ssize_t d = codes.shape[1]
    cdef Py_ssize_t na = addv.shape[1]
    cdef Py_ssize_t nb = minv.shape[1]
    cdef Py_ssize_t nc = maxv.shape[1]
    cdef Py_ssize_t i, j, r, prev
    cdef bint differs

    # pass 1: count groups
    cdef Py_ssize_t groups = 1
    prev = order[0]
    for i in range(1, n):
        r = order[i]
        differs = False
        for j in range(d):
            if codes[r, j] != codes[prev, j]:
                differs = True
                break
        if differs:
            groups += 1
        prev = r

    gcodes_arr = np.empty((groups, d), dtype=np.int64)
    gadd_arr = np.empty((groups, na), dtype=np.int64)
    gmin_arr = np.empty((groups, nb), dtype=np.int64)
    gmax_arr = np.empty((groups, nc), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] gcodes = gcodes_arr
    cdef cnp.int64_t[:, ::1] gadd = gadd_arr
    cdef cnp.int64_t[:, ::1] gmin = gmin_arr
    cdef cnp.int64_t[:, ::1] gmax = gmax_arr

    # pass 2: fold
    cdef Py_ssize_t g = -1
    prev = order[0]
    for i in range(n):
        r = order[i]
        differs = g < 0
        if not differs:
            for j in range(d):
                if codes[r, j] != codes[prev, j]:
                    differs = True
                    break
        if differs:
            g += 1
            for j in range(d):
                gcodes[g, j] = codes[r, j]
            for j in range(na):
                gadd[g, j] = addv[r, j]
            for j in range(nb):
                gmin[g, j] = minv[r, j]
            for j in range(nc):
                gmax[g, j] = maxv[r, j]
        else:
            for j in range(na):
                gadd[g, j] += addv[r, j]
            for j in range(nb):
                if minv[r, j] < gmin[g, j]:
                    gmin[g, j] = minv[r, j]
            for j in range(nc):
                if maxv[r, j] > gmax[g, j]:
                    gmax[g, j] = maxv[r, j]
        prev = r
    return gcodes_arr, gadd_arr, gmin_arr, gmax_arr
