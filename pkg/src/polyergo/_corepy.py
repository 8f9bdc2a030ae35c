"""NumPy implementations of the hot kernels (fallback backend).

polyergo._core provides the same two functions compiled with Cython; the
selector in polyergo.backend picks whichever is available.  Both
implementations follow the same scan order and tie-breaking rules so their
results agree to rounding.
"""

from __future__ import annotations

import numpy as np

# Rows of the evaluation block processed per matmul; bounds peak memory.
_CHUNK = 512


def phase_sum_weighted(points: np.ndarray, weights, xi: np.ndarray) -> np.ndarray:
    """sum_p w_p exp(2 pi i <xi, p>) for each row xi of a batch.

    points: (n, d) float64, weights: (n,) float64 or None (unit weights),
    xi: (m, d) float64.  Returns (m,) complex128.
    """
    points = np.ascontiguousarray(points, dtype=np.float64)
    xi = np.ascontiguousarray(xi, dtype=np.float64)
    if xi.ndim != 2 or points.ndim != 2 or xi.shape[1] != points.shape[1]:
        raise ValueError("points and xi must be 2-d with matching width")
    w = None if weights is None else np.ascontiguousarray(weights, dtype=np.float64)
    out = np.empty(xi.shape[0], dtype=np.complex128)
    for start in range(0, xi.shape[0], _CHUNK):
        block = xi[start : start + _CHUNK]
        phase = block @ points.T
        z = np.exp((2j * np.pi) * phase)
        out[start : start + _CHUNK] = z.sum(axis=1) if w is None else z @ w
    return out


def pvar_dp(values: np.ndarray, r: float) -> tuple[float, list[int]]:
    """Largest sum of |a_kj - a_k(j-1)|^r over increasing index chains.

    values: (n,) complex128.  Returns (value, witness positions).  Ties are
    broken toward the shorter witness, then toward the smaller predecessor.
    """
    a = np.ascontiguousarray(values, dtype=np.complex128)
    n = a.shape[0]
    if n == 0:
        raise ValueError("empty sequence")
    best = np.zeros(n)
    prev = np.full(n, -1, dtype=np.int64)
    wlen = np.ones(n, dtype=np.int64)
    for j in range(1, n):
        cand = best[:j] + np.abs(a[j] - a[:j]) ** r
        top = cand.max()
        if top > 0.0:
            ties = np.flatnonzero(cand == top)
            i = ties[np.argmin(wlen[ties])]
            best[j] = top
            prev[j] = i
            wlen[j] = wlen[i] + 1
    total = best.max()
    ties = np.flatnonzero(best == total)
    j = ties[np.argmin(wlen[ties])]
    chain = []
    j = int(j)
    while j >= 0:
        chain.append(j)
        j = int(prev[j])
    chain.reverse()
    return float(total), chain
