# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels: exact twin of _pykernels (see its docstring).

Floating-point loops replicate the Python fallback operation for operation;
the build disables FMA contraction so results are bit-identical.
"""

from libc.math cimport erfc, fabs, log, sqrt
from libc.stdlib cimport free, malloc

import numpy as np

cimport numpy as cnp

cnp.import_array()

NAME = "compiled"

cdef int _TAIL = 1
cdef int _ARROW = 2


cdef class GraphKernel:
    cdef cnp.int32_t[::1] indptr
    cdef cnp.int32_t[::1] nbr
    cdef cnp.int8_t[::1] mark_self
    cdef cnp.int8_t[::1] mark_other
    cdef int p

    def __init__(self, indptr, nbr, mark_self, mark_other, p):
        self.indptr = np.ascontiguousarray(indptr, dtype=np.int32)
        self.nbr = np.ascontiguousarray(nbr, dtype=np.int32)
        self.mark_self = np.ascontiguousarray(mark_self, dtype=np.int8)
        self.mark_other = np.ascontiguousarray(mark_other, dtype=np.int8)
        self.p = p

    cdef void _ancestors_mask(self, cnp.int32_t* seeds, int nseeds, char* mask):
        cdef int top = 0
        cdef int u, k, w
        cdef int* stack = <int*> malloc(self.p * sizeof(int))
        if stack == NULL:
            raise MemoryError()
        for k in range(self.p):
            mask[k] = 0
        for k in range(nseeds):
            u = seeds[k]
            if not mask[u]:
                mask[u] = 1
                stack[top] = u
                top += 1
        while top > 0:
            top -= 1
            u = stack[top]
            for k in range(self.indptr[u], self.indptr[u + 1]):
                w = self.nbr[k]
                if not mask[w] and self.mark_self[k] == _ARROW and self.mark_other[k] == _TAIL:
                    mask[w] = 1
                    stack[top] = w
                    top += 1
        free(stack)

    def ancestors(self, seeds):
        cdef cnp.ndarray[cnp.int32_t, ndim=1] seed_arr = np.asarray(
            sorted(seeds), dtype=np.int32
        )
        cdef char* mask = <char*> malloc(self.p)
        if mask == NULL:
            raise MemoryError()
        cdef int nseeds = seed_arr.shape[0]
        self._ancestors_mask(<cnp.int32_t*> seed_arr.data if nseeds else NULL, nseeds, mask)
        out = {v for v in range(self.p) if mask[v]}
        free(mask)
        return out

    def m_connected(self, int i, int j, s):
        cdef cnp.ndarray[cnp.int32_t, ndim=1] s_arr = np.asarray(sorted(s), dtype=np.int32)
        cdef int ns = s_arr.shape[0]
        cdef int nslots = self.nbr.shape[0]
        cdef char* smask = <char*> malloc(self.p)
        cdef char* anmask = <char*> malloc(self.p)
        cdef char* visited = <char*> malloc(nslots if nslots else 1)
        cdef int* stack = <int*> malloc((nslots if nslots else 1) * sizeof(int))
        if smask == NULL or anmask == NULL or visited == NULL or stack == NULL:
            raise MemoryError()
        cdef int k, k2, v, w, top = 0
        cdef bint arrived_arrow, found = False
        try:
            for k in range(self.p):
                smask[k] = 0
            for k in range(ns):
                smask[s_arr[k]] = 1
            self._ancestors_mask(<cnp.int32_t*> s_arr.data if ns else NULL, ns, anmask)
            for k in range(nslots):
                visited[k] = 0
            for k in range(self.indptr[i], self.indptr[i + 1]):
                if self.nbr[k] == j:
                    found = True
                    break
                visited[k] = 1
                stack[top] = k
                top += 1
            while top > 0 and not found:
                top -= 1
                k = stack[top]
                v = self.nbr[k]
                arrived_arrow = self.mark_other[k] == _ARROW
                for k2 in range(self.indptr[v], self.indptr[v + 1]):
                    if visited[k2]:
                        continue
                    if arrived_arrow and self.mark_self[k2] == _ARROW:
                        if not anmask[v]:
                            continue
                    elif smask[v]:
                        continue
                    w = self.nbr[k2]
                    if w == j:
                        found = True
                        break
                    visited[k2] = 1
                    stack[top] = k2
                    top += 1
            return bool(found)
        finally:
            free(smask)
            free(anmask)
            free(visited)
            free(stack)


def partial_correlation_from_cov(sub):
    """See _pykernels.partial_correlation_from_cov; identical op order."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] a = np.ascontiguousarray(sub, dtype=np.float64)
    cdef int m = a.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] low = np.zeros((m, m), dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] inv = np.zeros((m, m), dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] prec = np.zeros((m, m), dtype=np.float64)
    cdef int r, c, k
    cdef double acc, t, rho, norm_a, norm_p, sa, sp
    for c in range(m):
        acc = a[c, c]
        for k in range(c):
            acc -= low[c, k] * low[c, k]
        if not acc > 0.0:
            return (float("nan"), 0.0)
        low[c, c] = sqrt(acc)
        for r in range(c + 1, m):
            t = a[r, c]
            for k in range(c):
                t -= low[r, k] * low[c, k]
            low[r, c] = t / low[c, c]
    for c in range(m):
        inv[c, c] = 1.0 / low[c, c]
        for r in range(c + 1, m):
            t = 0.0
            for k in range(c, r):
                t -= low[r, k] * inv[k, c]
            inv[r, c] = t / low[r, r]
    for r in range(m):
        for c in range(r, m):
            t = 0.0
            for k in range(c, m):
                t += inv[k, r] * inv[k, c]
            prec[r, c] = t
            prec[c, r] = t
    rho = -prec[0, 1] / sqrt(prec[0, 0] * prec[1, 1])
    norm_a = 0.0
    norm_p = 0.0
    for c in range(m):
        sa = 0.0
        sp = 0.0
        for r in range(m):
            sa += fabs(a[r, c])
            sp += fabs(prec[r, c])
        if sa > norm_a:
            norm_a = sa
        if sp > norm_p:
            norm_p = sp
    return (rho, 1.0 / (norm_a * norm_p))


def fisher_z_statistic(double rho, n, s_size):
    return sqrt(n - s_size - 3.0) * (0.5 * log((1.0 + rho) / (1.0 - rho)))


def normal_sf(double x):
    return 0.5 * erfc(x / sqrt(2.0))
