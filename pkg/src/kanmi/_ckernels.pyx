# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops. Mirrors ``_pykernels`` operation for operation."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def assign_initial(const int[:, :] codes, const long long[:] offsets, Py_ssize_t k):
    cdef Py_ssize_t n = codes.shape[0], r = codes.shape[1]
    cdef Py_ssize_t P = offsets[r]
    labels_arr = np.zeros(n, dtype=np.int64)
    cah_arr = np.zeros((k, P), dtype=np.int64)
    sizes_arr = np.zeros(k, dtype=np.int64)
    cdef long long[:] labels = labels_arr
    cdef long long[:, :] cah = cah_arr
    cdef long long[:] sizes = sizes_arr
    cdef Py_ssize_t j, i, c, best
    cdef long long matched
    cdef double sim, best_sim
    for j in range(n):
        if j < k:
            best = j
        else:
            best = 0
            best_sim = -1.0
            for c in range(k):
                matched = 0
                for i in range(r):
                    matched += cah[c, offsets[i] + codes[j, i]]
                sim = <double>matched / <double>sizes[c]
                if sim > best_sim:
                    best_sim = sim
                    best = c
        labels[j] = best
        sizes[best] += 1
        for i in range(r):
            cah[best, offsets[i] + codes[j, i]] += 1
    return labels_arr, cah_arr, sizes_arr


def sweep(const int[:, :] codes, const long long[:] offsets, long long[:] labels,
          long long[:, :] cah, long long[:] sizes, const double[:] xlx,
          const double[:] weights, double eps):
    cdef Py_ssize_t n = codes.shape[0], r = codes.shape[1], k = cah.shape[0]
    cdef Py_ssize_t j, i, a, b, best, col
    cdef long long sa, sb, ca, cb
    cdef double dsa, dsize, dcell, gain, best_gain
    cdef Py_ssize_t moves = 0
    for j in range(n):
        a = labels[j]
        sa = sizes[a]
        if sa == 1:
            continue
        dsa = xlx[sa - 1] - xlx[sa]
        best = a
        best_gain = eps
        for b in range(k):
            if b == a:
                continue
            sb = sizes[b]
            dsize = dsa + (xlx[sb + 1] - xlx[sb])
            gain = 0.0
            for i in range(r):
                col = offsets[i] + codes[j, i]
                ca = cah[a, col]
                cb = cah[b, col]
                dcell = (xlx[ca - 1] - xlx[ca]) + (xlx[cb + 1] - xlx[cb])
                gain += weights[i] * (dcell - dsize)
            if gain > best_gain:
                best_gain = gain
                best = b
        if best != a:
            for i in range(r):
                col = offsets[i] + codes[j, i]
                cah[a, col] -= 1
                cah[best, col] += 1
            sizes[a] -= 1
            sizes[best] += 1
            labels[j] = best
            moves += 1
    return moves
