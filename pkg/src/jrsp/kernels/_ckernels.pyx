# cython: language_level=3
"""Compiled state-vector kernels; same contract as ``_pykernels``."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def apply_1q(const double complex[::1] amps, int n, int pos, gate):
    cdef Py_ssize_t dim = amps.shape[0]
    cdef Py_ssize_t mask = (<Py_ssize_t>1) << (n - 1 - pos)
    cdef double complex g00 = gate[0, 0], g01 = gate[0, 1]
    cdef double complex g10 = gate[1, 0], g11 = gate[1, 1]
    out_arr = np.empty(dim, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef double complex x0, x1
    for i in range(dim):
        if i & mask:
            continue
        j = i | mask
        x0 = amps[i]
        x1 = amps[j]
        out[i] = g00 * x0 + g01 * x1
        out[j] = g10 * x0 + g11 * x1
    return out_arr


def apply_cnot(const double complex[::1] amps, int n, int cpos, int tpos):
    cdef Py_ssize_t dim = amps.shape[0]
    cdef Py_ssize_t cmask = (<Py_ssize_t>1) << (n - 1 - cpos)
    cdef Py_ssize_t tmask = (<Py_ssize_t>1) << (n - 1 - tpos)
    out_arr = np.empty(dim, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t i
    for i in range(dim):
        if i & cmask:
            out[i] = amps[i ^ tmask]
        else:
            out[i] = amps[i]
    return out_arr


def project_pair(const double complex[::1] amps, int n, int pos_a, int pos_b,
                 const double complex[::1] bra):
    cdef Py_ssize_t dim = amps.shape[0]
    cdef int sa = n - 1 - pos_a, sb = n - 1 - pos_b
    cdef int lo = sa if sa < sb else sb
    cdef int hi = sb if sa < sb else sa
    cdef Py_ssize_t ma = (<Py_ssize_t>1) << sa, mb = (<Py_ssize_t>1) << sb
    cdef Py_ssize_t lo_mask = ((<Py_ssize_t>1) << lo) - 1
    cdef Py_ssize_t mid_mask = ((<Py_ssize_t>1) << hi) - 1
    cdef double complex b0 = bra[0], b1 = bra[1], b2 = bra[2], b3 = bra[3]
    out_arr = np.empty(dim >> 2, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t r, t, base
    for r in range(dim >> 2):
        # open a zero bit at lo, then another at hi
        t = (r & lo_mask) | ((r & ~lo_mask) << 1)
        base = (t & mid_mask) | ((t & ~mid_mask) << 1)
        out[r] = (b0 * amps[base] + b1 * amps[base | mb]
                  + b2 * amps[base | ma] + b3 * amps[base | ma | mb])
    return out_arr


def permute(const double complex[::1] amps, int n, perm):
    cdef Py_ssize_t dim = amps.shape[0]
    src_arr = np.zeros(dim, dtype=np.intp)
    cdef Py_ssize_t[::1] src = src_arr
    cdef Py_ssize_t size = 1, i, old_mask
    cdef int s
    # src[i] = old index of new index i, filled one new bit at a time
    for s in range(n):
        old_mask = (<Py_ssize_t>1) << (n - 1 - <int>perm[n - 1 - s])
        for i in range(size):
            src[size + i] = src[i] | old_mask
        size *= 2
    out_arr = np.empty(dim, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    for i in range(dim):
        out[i] = amps[src[i]]
    return out_arr
