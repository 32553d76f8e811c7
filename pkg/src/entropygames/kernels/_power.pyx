# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled power iteration kernel; mirrors _power_py.power_enclosure."""

from libc.math cimport INFINITY
from libc.stdlib cimport free, malloc


def power_enclosure(flat, int n, double tol, int max_iter):
    """See entropygames.kernels._power_py.power_enclosure."""
    cdef double *m = <double *> malloc(n * n * sizeof(double))
    cdef double *v = <double *> malloc(n * sizeof(double))
    cdef double *u = <double *> malloc(n * sizeof(double))
    if m == NULL or v == NULL or u == NULL:
        free(m)
        free(v)
        free(u)
        raise MemoryError()
    cdef int i, j, it
    cdef double acc, r, lo, hi, total, inv
    try:
        for i in range(n * n):
            m[i] = flat[i]
        for i in range(n):
            v[i] = 1.0
        lo = 0.0
        hi = 0.0
        it = 0
        while it < max_iter:
            it += 1
            for i in range(n):
                acc = 0.0
                for j in range(n):
                    acc += m[i * n + j] * v[j]
                u[i] = acc
            # coordinates that underflowed to exact zero are dead and give
            # no ratio; skip them just like the pure fallback does
            lo = INFINITY
            hi = -INFINITY
            for i in range(n):
                if v[i] > 0.0:
                    r = u[i] / v[i]
                    if r < lo:
                        lo = r
                    if r > hi:
                        hi = r
            if hi - lo <= tol:
                break
            total = 0.0
            for i in range(n):
                u[i] += v[i]
                total += u[i]
            inv = 1.0 / total
            for i in range(n):
                v[i] = u[i] * inv
        out = [0.0] * n
        for i in range(n):
            out[i] = v[i]
        return lo, hi, it, out
    finally:
        free(m)
        free(v)
        free(u)
