# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled cone kernel: int64 storage, every add checked for overflow."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t

cnp.import_array()

BACKEND = "cython"

cdef extern from *:
    """
    static inline int kacq_add_ovf(long long a, long long b, long long *r) {
        return __builtin_add_overflow(a, b, r);
    }
    static inline int kacq_sub_ovf(long long a, long long b, long long *r) {
        return __builtin_sub_overflow(a, b, r);
    }
    """
    int kacq_add_ovf(long long a, long long b, long long *r) nogil
    int kacq_sub_ovf(long long a, long long b, long long *r) nogil


def new_array(dims, t1, s1):
    return np.zeros((*dims, t1, s1), dtype=np.int64)


def mul_factor(cnp.ndarray arr, root, int tshift, int sshift, int coef, bint inverse):
    """Same contract as the pure-Python kernel; raises OverflowError on int64 overflow."""
    if coef != 1 and coef != -1:
        raise ValueError("compiled kernel supports coef in {1, -1}")
    cdef int nd = len(root)
    cdef int t1 = arr.shape[nd]
    cdef int s1 = arr.shape[nd + 1]
    if tshift >= t1 or sshift >= s1:
        return
    cdef Py_ssize_t k
    for k in range(nd):
        if root[k] >= arr.shape[k]:
            return
    cdef cnp.ndarray[cnp.int64_t, ndim=1] flat = arr.reshape(-1)
    cdef int64_t[::1] data = flat
    cdef Py_ssize_t[16] dims
    cdef Py_ssize_t[16] rt
    cdef Py_ssize_t[16] idx
    cdef Py_ssize_t[16] stride
    if nd > 16:
        raise ValueError("too many lattice axes")
    cdef Py_ssize_t block = t1 * s1
    cdef Py_ssize_t ncell = 1
    for k in range(nd):
        dims[k] = arr.shape[k]
        rt[k] = root[k]
        ncell *= dims[k]
    cdef Py_ssize_t acc = block
    for k in range(nd - 1, -1, -1):
        stride[k] = acc
        acc *= dims[k]
    cdef Py_ssize_t off = 0
    for k in range(nd):
        off += rt[k] * stride[k]
    cdef Py_ssize_t coff = tshift * s1 + sshift
    cdef Py_ssize_t cell, pos, a, b, d, src
    cdef long long val
    cdef bint ok
    cdef int overflow = 0
    with nogil:
        for cell in range(ncell):
            if inverse:
                pos = cell
            else:
                pos = ncell - 1 - cell
            # decode multi-index
            d = pos
            ok = True
            for k in range(nd - 1, -1, -1):
                idx[k] = d % dims[k]
                d = d // dims[k]
                if idx[k] < rt[k]:
                    ok = False
            if not ok:
                continue
            d = pos * block
            src = d - off
            for a in range(tshift, t1):
                for b in range(sshift, s1):
                    if coef == 1:
                        overflow |= kacq_add_ovf(data[d + a * s1 + b],
                                                 data[src + a * s1 + b - coff], &val)
                    else:
                        overflow |= kacq_sub_ovf(data[d + a * s1 + b],
                                                 data[src + a * s1 + b - coff], &val)
                    data[d + a * s1 + b] = val
            if overflow:
                break
    if overflow:
        raise OverflowError("int64 overflow in cone kernel")
