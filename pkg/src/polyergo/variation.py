"""r-variation seminorms of finite sequences.

For a sequence a indexed by a finite increasing index set, the r-variation
is the supremum over increasing index chains k_0 < k_1 < ... < k_J of

    (sum_j |a_{k_j} - a_{k_{j-1}}|^r)^(1/r).

variation_exact solves this with an O(n^2) dynamic program and returns a
witness chain; variation_bruteforce enumerates every chain and serves as the
oracle on short inputs.  The module also provides the sup-augmented variant,
the greedy dyadic interval decomposition, the split into long (dyadic index)
and short (within dyadic blocks) parts, and near-uniform block partitions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import backend
from .errors import DomainError, SizeCapError

BRUTEFORCE_CAP = 14


@dataclass(frozen=True)
class RealSequence:
    """Finite complex-valued sequence on a strictly increasing integer index set."""

    indices: tuple[int, ...]
    values: tuple[complex, ...]

    def __post_init__(self):
        if len(self.indices) != len(self.values):
            raise DomainError("indices and values must have equal length")
        if len(self.indices) == 0:
            raise DomainError("empty sequence")
        for i, j in zip(self.indices, self.indices[1:]):
            if j <= i:
                raise DomainError("indices must be strictly increasing")

    def __len__(self) -> int:
        return len(self.indices)

    @classmethod
    def from_values(cls, values: Sequence[complex], start: int = 1) -> "RealSequence":
        vals = tuple(complex(v) for v in values)
        return cls(indices=tuple(range(start, start + len(vals))), values=vals)

    def subsequence(self, keep) -> "RealSequence":
        pairs = [(i, v) for i, v in zip(self.indices, self.values) if keep(i)]
        if not pairs:
            raise DomainError("empty subsequence")
        return RealSequence(
            indices=tuple(i for i, _ in pairs), values=tuple(v for _, v in pairs)
        )


@dataclass(frozen=True)
class VariationResult:
    """Value of a variation functional plus the chain(s) attaining it.

    ``witness`` is a tuple of original indices for kinds "vr", "vtilde" and
    "long"; for kind "short" it is a tuple of per-block chains.  ``value``
    is the r-th root of the attained sum (plus the sup term for "vtilde").
    """

    value: float
    r: float
    witness: tuple
    kind: str


def witness_sum(seq: RealSequence, witness: tuple, r: float) -> float:
    """Recompute sum |a_kj - a_k(j-1)|^r over a witness chain (or chains)."""
    lookup = dict(zip(seq.indices, seq.values))
    chains = witness if witness and isinstance(witness[0], tuple) else (witness,)
    total = 0.0
    for chain in chains:
        for i, j in zip(chain, chain[1:]):
            total += abs(lookup[j] - lookup[i]) ** r
    return total


def variation_exact(seq: RealSequence, r: float) -> VariationResult:
    """r-variation by dynamic programming, with a witness chain.

    O(n^2).  Ties are broken toward the shorter witness.
    """
    if r < 1:
        raise DomainError(f"need r >= 1, got {r}")
    values = np.asarray(seq.values, dtype=np.complex128)
    total_pow, chain = backend.pvar_dp(values, float(r))
    witness = tuple(seq.indices[p] for p in chain)
    return VariationResult(value=total_pow ** (1.0 / r), r=r, witness=witness, kind="vr")


def variation_bruteforce(seq: RealSequence, r: float, cap: int = BRUTEFORCE_CAP) -> VariationResult:
    """Oracle: enumerate all increasing chains (lengths up to ``cap``).

    Accumulates each chain left to right, matching the dynamic program's
    summation order exactly.
    """
    if r < 1:
        raise DomainError(f"need r >= 1, got {r}")
    n = len(seq)
    if n > cap:
        raise SizeCapError(f"sequence length {n} above brute-force cap {cap}")
    vals = seq.values
    # g[mask] = chain sum over the indices of mask taken in increasing order.
    size = 1 << n
    g = [0.0] * size
    best = 0.0
    best_mask = 1  # single element, zero sum
    for mask in range(1, size):
        last = mask.bit_length() - 1
        rest = mask ^ (1 << last)
        if rest:
            prev = rest.bit_length() - 1
            g[mask] = g[rest] + abs(vals[last] - vals[prev]) ** r
        if g[mask] > best:
            best = g[mask]
            best_mask = mask
    chain = tuple(seq.indices[p] for p in range(n) if best_mask >> p & 1)
    return VariationResult(value=best ** (1.0 / r), r=r, witness=chain, kind="vr")


def variation_with_sup(seq: RealSequence, r: float) -> VariationResult:
    """sup_j |a_j| + V_r(a), the norm-like augmented variant."""
    base = variation_exact(seq, r)
    sup = max(abs(v) for v in seq.values)
    return VariationResult(value=sup + base.value, r=r, witness=base.witness, kind="vtilde")


def dyadic_decompose(m: int, n: int, s: int) -> list[tuple[int, int]]:
    """Greedy cover of [m, n) by aligned dyadic intervals of length <= 2^s.

    Each interval [j 2^i, (j+1) 2^i) is as long as possible subject to
    alignment, the length cap, and staying inside [m, n).  Each length
    occurs at most twice in the result.
    """
    if not (0 <= m < n):
        raise DomainError(f"need 0 <= m < n, got m={m}, n={n}")
    if s < 0:
        raise DomainError(f"need s >= 0, got {s}")
    out = []
    p = m
    while p < n:
        if p == 0:
            i = s
        else:
            i = min(s, (p & -p).bit_length() - 1)
        while i > 0 and p + (1 << i) > n:
            i -= 1
        out.append((p, p + (1 << i)))
        p += 1 << i
    return out


def long_short_split(seq: RealSequence, r: float) -> tuple[VariationResult, VariationResult]:
    """Split the r-variation into dyadic-index and within-block parts.

    The long part is the r-variation of the subsequence indexed by powers of
    two; the short part is the l^r sum of per-block variations over the
    blocks [2^n, 2^(n+1)).  Indices must be positive.
    """
    if r < 2:
        raise DomainError(f"long/short split needs r >= 2, got {r}")
    if seq.indices[0] < 1:
        raise DomainError("long/short split needs positive indices")
    dyadic = [i for i in seq.indices if i & (i - 1) == 0]
    if dyadic:
        long_res = variation_exact(seq.subsequence(lambda i: i & (i - 1) == 0), r)
        long_res = VariationResult(
            value=long_res.value, r=r, witness=long_res.witness, kind="long"
        )
    else:
        long_res = VariationResult(value=0.0, r=r, witness=(), kind="long")
    total = 0.0
    chains = []
    top = seq.indices[-1]
    n = 0
    while 1 << n <= top:
        lo, hi = 1 << n, 1 << (n + 1)
        block_idx = [i for i in seq.indices if lo <= i < hi]
        if len(block_idx) >= 2:
            block = seq.subsequence(lambda i: lo <= i < hi)
            res = variation_exact(block, r)
            total += res.value**r
            chains.append(res.witness)
        elif len(block_idx) == 1:
            chains.append((block_idx[0],))
        n += 1
    short_res = VariationResult(
        value=total ** (1.0 / r), r=r, witness=tuple(chains), kind="short"
    )
    return long_res, short_res


def balanced_partition(u: int, v: int, h: int) -> tuple[int, ...]:
    """Partition [u, v] into h blocks with near-equal gaps.

    Returns u = m_0 < m_1 < ... < m_h = v with every gap within a factor of
    two of (v - u)/h.
    """
    if not (u < v):
        raise DomainError(f"need u < v, got u={u}, v={v}")
    if not (1 <= h <= v - u):
        raise DomainError(f"need 1 <= h <= v - u, got h={h}")
    span = v - u
    points = [u + math.ceil(j * span / h) for j in range(h + 1)]
    return tuple(points)


def select_block_count(span: int, a_max: float, b_max: float) -> int:
    """Block count h = ceil(span * B / (4 A)), clamped to [1, span].

    A bounds the sequence values, B bounds the l^2 norm of the unit steps;
    this choice balances the two terms of the block-partition estimate.
    """
    if span < 1:
        raise DomainError("need span >= 1")
    if a_max <= 0 or b_max < 0:
        raise DomainError("need A > 0 and B >= 0")
    h = math.ceil(span * b_max / (4.0 * a_max))
    return max(1, min(span, h))
