# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementations of the hot kernels.

Mirrors polyergo._corepy: same signatures, same scan order, and the same
tie-breaking, so the two backends agree to rounding.  polyergo.backend
prefers this module whenever the extension built.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, hypot, pow, sin

cnp.import_array()

cdef double TWO_PI = 6.283185307179586476925286766559


def phase_sum_weighted(points, weights, xi):
    """sum_p w_p exp(2 pi i <xi, p>) for each row xi of a batch.

    points: (n, d) float64, weights: (n,) float64 or None (unit weights),
    xi: (m, d) float64.  Returns (m,) complex128.
    """
    points_arr = np.ascontiguousarray(points, dtype=np.float64)
    xi_arr = np.ascontiguousarray(xi, dtype=np.float64)
    if xi_arr.ndim != 2 or points_arr.ndim != 2 or xi_arr.shape[1] != points_arr.shape[1]:
        raise ValueError("points and xi must be 2-d with matching width")
    cdef double[:, ::1] p = points_arr
    cdef double[:, ::1] x = xi_arr
    cdef Py_ssize_t m = x.shape[0]
    cdef Py_ssize_t n = p.shape[0]
    cdef Py_ssize_t d = p.shape[1]
    out = np.empty(m, dtype=np.complex128)
    cdef double complex[::1] o = out
    cdef double[::1] w
    cdef Py_ssize_t i, j, l
    cdef double ph, re, im
    if weights is None:
        for i in range(m):
            re = 0.0
            im = 0.0
            for j in range(n):
                ph = 0.0
                for l in range(d):
                    ph += x[i, l] * p[j, l]
                ph *= TWO_PI
                re += cos(ph)
                im += sin(ph)
            o[i] = re + 1j * im
    else:
        w = np.ascontiguousarray(weights, dtype=np.float64)
        for i in range(m):
            re = 0.0
            im = 0.0
            for j in range(n):
                ph = 0.0
                for l in range(d):
                    ph += x[i, l] * p[j, l]
                ph *= TWO_PI
                re += w[j] * cos(ph)
                im += w[j] * sin(ph)
            o[i] = re + 1j * im
    return out


def pvar_dp(values, double r):
    """Largest sum of |a_kj - a_k(j-1)|^r over increasing index chains.

    values: (n,) complex128.  Returns (value, witness positions).  Ties are
    broken toward the shorter witness, then toward the smaller predecessor.
    """
    a_arr = np.ascontiguousarray(values, dtype=np.complex128)
    cdef double complex[::1] a = a_arr
    cdef Py_ssize_t n = a.shape[0]
    if n == 0:
        raise ValueError("empty sequence")
    best_arr = np.zeros(n, dtype=np.float64)
    prev_arr = np.full(n, -1, dtype=np.int64)
    wlen_arr = np.ones(n, dtype=np.int64)
    cdef double[::1] best = best_arr
    cdef long long[::1] prev = prev_arr
    cdef long long[::1] wlen = wlen_arr
    cdef Py_ssize_t i, j, bi
    cdef double c, top
    cdef double complex diff
    # libm pow dominates the inner loop; the common exponents reduce to
    # arithmetic that matches pow bit for bit
    cdef bint r_is_two = r == 2.0
    cdef bint r_is_one = r == 1.0
    for j in range(1, n):
        top = -1.0
        bi = -1
        for i in range(j):
            diff = a[j] - a[i]
            if r_is_two:
                # |z|^2 without the square root; exact for real input,
                # within an ulp of pow(hypot, 2) otherwise
                c = best[i] + diff.real * diff.real + diff.imag * diff.imag
            elif r_is_one:
                c = best[i] + hypot(diff.real, diff.imag)
            else:
                c = best[i] + pow(hypot(diff.real, diff.imag), r)
            if c > top:
                top = c
                bi = i
            elif c == top and wlen[i] < wlen[bi]:
                bi = i
        if top > 0.0:
            best[j] = top
            prev[j] = bi
            wlen[j] = wlen[bi] + 1
    top = best[0]
    bi = 0
    for j in range(1, n):
        if best[j] > top:
            top = best[j]
            bi = j
        elif best[j] == top and wlen[j] < wlen[bi]:
            bi = j
    chain = []
    j = bi
    while j >= 0:
        chain.append(int(j))
        j = prev[j]
    chain.reverse()
    return float(top), chain
