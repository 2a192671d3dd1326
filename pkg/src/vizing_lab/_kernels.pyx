# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Bit-parallel all-pairs BFS accumulating distance-layered masses."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t
from libc.string cimport memset

cnp.import_array()

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil


def layered_mass(int64_t[::1] indptr, int64_t[::1] indices, double[::1] weight, double[::1] coef):
    """For every source x: ``acc[x] = sum_{z != x reachable} weight[z] * coef[d(x, z)]``.

    Also returns the eccentricity of every vertex within its component.
    ``coef`` must cover every distance that occurs (index 0 is unused).
    """
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t ncoef = coef.shape[0]
    acc_arr = np.zeros(n, dtype=np.float64)
    ecc_arr = np.zeros(n, dtype=np.int64)
    cdef double[::1] acc = acc_arr
    cdef int64_t[::1] ecc = ecc_arr
    cdef uint64_t[::1] seen = np.zeros(n, dtype=np.uint64)
    cdef uint64_t[::1] front = np.zeros(n, dtype=np.uint64)
    cdef uint64_t[::1] nxt = np.zeros(n, dtype=np.uint64)
    cdef double part[64]
    cdef Py_ssize_t base, v, s, p, width, level
    cdef uint64_t bits, acc_bits, any_new
    cdef double c, wv

    with nogil:
        for base in range(0, n, 64):
            width = min(64, n - base)
            memset(&seen[0], 0, n * sizeof(uint64_t))
            memset(&front[0], 0, n * sizeof(uint64_t))
            for s in range(width):
                seen[base + s] = (<uint64_t>1) << s
                front[base + s] = (<uint64_t>1) << s
            level = 0
            while True:
                level += 1
                any_new = 0
                for v in range(n):
                    acc_bits = 0
                    for p in range(indptr[v], indptr[v + 1]):
                        acc_bits |= front[indices[p]]
                    acc_bits &= ~seen[v]
                    nxt[v] = acc_bits
                    any_new |= acc_bits
                if any_new == 0:
                    break
                if level >= ncoef:
                    c = 0.0
                else:
                    c = coef[level]
                for s in range(width):
                    part[s] = 0.0
                for v in range(n):
                    bits = nxt[v]
                    if bits == 0:
                        continue
                    seen[v] |= bits
                    wv = weight[v]
                    while bits:
                        s = __builtin_ctzll(bits)
                        part[s] += wv
                        bits &= bits - 1
                for s in range(width):
                    if part[s] != 0.0:
                        acc[base + s] += c * part[s]
                for s in range(64):
                    if (any_new >> s) & 1:
                        ecc[base + s] = level
                for v in range(n):
                    front[v] = nxt[v]
    return acc_arr, ecc_arr
