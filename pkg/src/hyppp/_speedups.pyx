# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels for determinants, permanents and subset sums.

Mirrors ``hyppp._fallback`` function by function. Per-subset terms are
computed in parallel; the caller reduces them in a fixed order, so the
result does not depend on the thread count.
"""
import numpy as np

from cython.parallel cimport parallel, prange
from libc.stdlib cimport free, malloc


cdef double complex _det_inplace(double complex* a, Py_ssize_t n) noexcept nogil:
    # LU with partial pivoting; a is overwritten by U
    cdef double complex det = 1.0
    cdef double complex piv, f, tmp
    cdef double best, v
    cdef Py_ssize_t i, j, k, p
    for k in range(n):
        p = k
        best = abs(a[k * n + k])
        for i in range(k + 1, n):
            v = abs(a[i * n + k])
            if v > best:
                best = v
                p = i
        if best == 0.0:
            return 0.0
        if p != k:
            for j in range(k, n):
                tmp = a[k * n + j]
                a[k * n + j] = a[p * n + j]
                a[p * n + j] = tmp
            det = -det
        piv = a[k * n + k]
        det = det * piv
        for i in range(k + 1, n):
            f = a[i * n + k] / piv
            for j in range(k + 1, n):
                a[i * n + j] = a[i * n + j] - f * a[k * n + j]
    return det


cdef double complex _per_ryser(const double complex* a, Py_ssize_t n,
                               double complex* rowsum) noexcept nogil:
    # Ryser inclusion-exclusion, subsets visited in Gray-code order
    cdef double complex total = 0.0
    cdef double complex prod
    cdef Py_ssize_t i, j, k, g, g_prev = 0, diff, size = 0
    cdef Py_ssize_t n_subsets = (<Py_ssize_t>1) << n
    for i in range(n):
        rowsum[i] = 0.0
    for k in range(1, n_subsets):
        g = k ^ (k >> 1)
        diff = g ^ g_prev
        j = 0
        while not ((diff >> j) & 1):
            j += 1
        if g & diff:
            for i in range(n):
                rowsum[i] = rowsum[i] + a[i * n + j]
            size += 1
        else:
            for i in range(n):
                rowsum[i] = rowsum[i] - a[i * n + j]
            size -= 1
        prod = 1.0
        for i in range(n):
            prod = prod * rowsum[i]
        if (n - size) & 1:
            total = total - prod
        else:
            total = total + prod
        g_prev = g
    return total


def det_lu(a):
    cdef double complex[:, ::1] src = np.ascontiguousarray(a, dtype=np.complex128)
    cdef Py_ssize_t n = src.shape[0]
    cdef double complex[:, ::1] work = np.array(src, copy=True)
    cdef double complex out
    with nogil:
        out = _det_inplace(&work[0, 0], n)
    return complex(out)


def permanent_ryser(a):
    cdef double complex[:, ::1] src = np.ascontiguousarray(a, dtype=np.complex128)
    cdef Py_ssize_t n = src.shape[0]
    cdef double complex[::1] rowsum = np.empty(n, dtype=np.complex128)
    cdef double complex out
    with nogil:
        out = _per_ryser(&src[0, 0], n, &rowsum[0])
    return complex(out)


def factored_terms(factors, alternating, combos, int num_threads=1):
    """Per-subset products of squared moduli, shape (batch, n_subsets)."""
    cdef const double complex[:, :, :, ::1] f = np.ascontiguousarray(
        factors, dtype=np.complex128)
    cdef const unsigned char[::1] alt = np.ascontiguousarray(alternating, dtype=np.uint8)
    cdef const Py_ssize_t[:, ::1] cmb = np.ascontiguousarray(combos, dtype=np.intp)
    cdef Py_ssize_t nb = f.shape[0], nm = f.shape[1], n = f.shape[2]
    cdef Py_ssize_t nc = cmb.shape[0]
    out = np.empty((nb, nc), dtype=np.float64)
    cdef double[:, ::1] res = out
    cdef Py_ssize_t t, b, c, m, i, j
    cdef double val
    cdef double complex z
    cdef double complex* buf
    cdef double complex* rs
    if nb * nc == 0:
        return out
    with nogil, parallel(num_threads=num_threads):
        buf = <double complex*> malloc(n * n * sizeof(double complex))
        rs = <double complex*> malloc(n * sizeof(double complex))
        for t in prange(nb * nc, schedule="static"):
            b = t // nc
            c = t % nc
            val = 1.0
            for m in range(nm):
                for i in range(n):
                    for j in range(n):
                        buf[i * n + j] = f[b, m, i, cmb[c, j]]
                if alt[m]:
                    z = _det_inplace(buf, n)
                else:
                    z = _per_ryser(buf, n, rs)
                val = val * (z.real * z.real + z.imag * z.imag)
            res[b, c] = val
        free(buf)
        free(rs)
    return out


def principal_terms(h, alternating, combos, int num_threads=1):
    """Per-subset products of principal minors / permanents, shape (n_subsets,)."""
    cdef const double complex[:, :, ::1] hm = np.ascontiguousarray(h, dtype=np.complex128)
    cdef const unsigned char[::1] alt = np.ascontiguousarray(alternating, dtype=np.uint8)
    cdef const Py_ssize_t[:, ::1] cmb = np.ascontiguousarray(combos, dtype=np.intp)
    cdef Py_ssize_t nm = hm.shape[0], nc = cmb.shape[0], n = cmb.shape[1]
    out = np.empty(nc, dtype=np.complex128)
    cdef double complex[::1] res = out
    cdef Py_ssize_t c, m, i, j
    cdef double complex val, z
    cdef double complex* buf
    cdef double complex* rs
    if nc == 0:
        return out
    with nogil, parallel(num_threads=num_threads):
        buf = <double complex*> malloc(n * n * sizeof(double complex))
        rs = <double complex*> malloc(n * sizeof(double complex))
        for c in prange(nc, schedule="static"):
            val = 1.0
            for m in range(nm):
                for i in range(n):
                    for j in range(n):
                        buf[i * n + j] = hm[m, cmb[c, i], cmb[c, j]]
                if alt[m]:
                    z = _det_inplace(buf, n)
                else:
                    z = _per_ryser(buf, n, rs)
                val = val * z
            res[c] = val
        free(buf)
        free(rs)
    return out
