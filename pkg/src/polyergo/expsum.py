"""Complete exponential sums at rational points and their decay.

The normalized Gauss sum along the canonical mapping is

    G(a/q) = q^{-k} sum_{y in {1..q}^k} exp(2 pi i <a/q, Q(y)>),

with the numerator vector a restricted to the reduced set: gcd(q, gcd_g a_g)
= 1.  Phases are exact rational multiples of 2 pi, computed from residues of
Q(y) mod q, so no precision is lost to large monomial values.  The module
also enumerates the dyadic denominator families, the factorial moduli
Q_t = (2^(t+1))! with their divisor families, counts residue classes of the
canonical mapping, and fits power-law decay exponents from (scale, value)
pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .averaging import _canonical_residues, _lattice_points
from .errors import DomainError, SizeCapError
from .polymap import MultiIndexSet

PHASE_TERM_CAP = 10**7
FACTORIAL_LEVEL_CAP = 3


@dataclass(frozen=True)
class RationalPoint:
    """Vector of rationals a_g/q with numerators in {1..q}."""

    numerators: tuple[int, ...]
    q: int

    def __post_init__(self):
        if self.q < 1:
            raise DomainError(f"need q >= 1, got {self.q}")
        if not self.numerators:
            raise DomainError("empty numerator vector")
        if any(not (1 <= a <= self.q) for a in self.numerators):
            raise DomainError(f"numerators must lie in 1..{self.q}")

    @property
    def d(self) -> int:
        return len(self.numerators)

    @property
    def reduced(self) -> bool:
        g = 0
        for a in self.numerators:
            g = math.gcd(g, a)
        return math.gcd(self.q, g) == 1

    @property
    def is_zero(self) -> bool:
        return all(a == self.q for a in self.numerators)

    def as_fractions(self) -> tuple[Fraction, ...]:
        """Representatives in [0, 1)."""
        return tuple(Fraction(a % self.q, self.q) for a in self.numerators)

    @classmethod
    def zero(cls, d: int) -> "RationalPoint":
        return cls(numerators=(1,) * d, q=1)


def reduced_residues(q: int, d: int, cap: int = PHASE_TERM_CAP) -> list[RationalPoint]:
    """All reduced numerator vectors a in {1..q}^d."""
    if q < 1 or d < 1:
        raise DomainError("need q >= 1 and d >= 1")
    if q**d > cap:
        raise SizeCapError(f"enumeration needs {q**d} vectors, above the cap {cap}")
    if q == 1:
        return [RationalPoint.zero(d)]
    out = []
    for flat in range(q**d):
        a = []
        v = flat
        for _ in range(d):
            a.append(v % q + 1)
            v //= q
        pt = RationalPoint(numerators=tuple(a), q=q)
        if pt.reduced:
            out.append(pt)
    return out


def gauss_sum(point: RationalPoint, gamma: MultiIndexSet, cap: int = PHASE_TERM_CAP) -> complex:
    """G(a/q) by direct summation with exact residue phases."""
    if point.d != gamma.d:
        raise DomainError("numerator vector length does not match the exponent set")
    q = point.q
    if q**gamma.k > cap:
        raise SizeCapError(f"Gauss sum needs {q ** gamma.k} terms, above the cap {cap}")
    ys = _lattice_points(q, gamma.k, cap)
    res = _canonical_residues(ys, gamma, q)
    idx = np.zeros(len(ys), dtype=np.int64)
    for j, a in enumerate(point.numerators):
        idx = (idx + (a % q) * res[:, j]) % q
    table = np.exp((2j * np.pi / q) * np.arange(q))
    counts = np.bincount(idx, minlength=q)
    return complex(counts @ table) / q**gamma.k


def gauss_sum_table(q: int, gamma: MultiIndexSet, cap: int = PHASE_TERM_CAP) -> np.ndarray:
    """G(a/q) for every numerator vector at once, shape (q,)*d.

    Entry [a_1 mod q, ..., a_d mod q] holds G(a/q); computed as the inverse
    FFT of the residue-count array of the canonical mapping, which matches
    direct summation to rounding.
    """
    if q**gamma.k > cap or q**gamma.d > cap:
        raise SizeCapError(f"table needs {max(q ** gamma.k, q ** gamma.d)} cells, above the cap")
    ys = _lattice_points(q, gamma.k, cap)
    res = _canonical_residues(ys, gamma, q)
    flat = np.zeros(len(ys), dtype=np.int64)
    for j in range(gamma.d):
        flat = flat * q + res[:, j]
    counts = np.bincount(flat, minlength=q**gamma.d).reshape((q,) * gamma.d)
    return np.fft.ifftn(counts) * (q**gamma.d) / q**gamma.k


def reduced_mask(q: int, d: int) -> np.ndarray:
    """Boolean array over numerator residues marking the reduced vectors.

    Entry [a_1 mod q, ..., a_d mod q] is True iff gcd(q, gcd_g a_g) = 1.
    """
    gcds = np.zeros((q,) * d, dtype=np.int64)
    grids = np.meshgrid(*([np.arange(q)] * d), indexing="ij")
    g = np.zeros_like(gcds)
    for comp in grids:
        g = np.gcd(g, comp)
    return np.gcd(g, q) == 1


def rational_family(s: int, gamma: MultiIndexSet, cap: int = PHASE_TERM_CAP) -> list[RationalPoint]:
    """Reduced rationals with denominator in the dyadic band [2^s, 2^(s+1)).

    Level 0 is the single point 0 (represented with q = 1).
    """
    if s < 0:
        raise DomainError(f"need s >= 0, got {s}")
    if s == 0:
        return [RationalPoint.zero(gamma.d)]
    out = []
    total = 0
    for q in range(2**s, 2 ** (s + 1)):
        total += q**gamma.d
        if total > cap:
            raise SizeCapError(f"family needs more than {cap} candidate vectors")
        out.extend(reduced_residues(q, gamma.d, cap=cap))
    return out


@dataclass(frozen=True)
class FactorialModulus:
    """Q_t = (2^(t+1))!."""

    t: int
    value: int


def factorial_modulus(t: int, level_cap: int = FACTORIAL_LEVEL_CAP) -> FactorialModulus:
    if t < 0:
        raise DomainError(f"need t >= 0, got {t}")
    if t > level_cap:
        raise SizeCapError(f"level {t} above the cap {level_cap}")
    return FactorialModulus(t=t, value=math.factorial(2 ** (t + 1)))


def divisors_of(n: int) -> list[int]:
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            if i != n // i:
                out.append(n // i)
        i += 1
    return sorted(out)


def divisor_family(t: int, gamma: MultiIndexSet, cap: int = PHASE_TERM_CAP,
                   level_cap: int = FACTORIAL_LEVEL_CAP) -> list[RationalPoint]:
    """Reduced rationals a/q with q | Q_t and q >= 2^(t+1)."""
    qt = factorial_modulus(t, level_cap=level_cap).value
    out = []
    total = 0
    for q in divisors_of(qt):
        if q < 2 ** (t + 1):
            continue
        total += q**gamma.d
        if total > cap:
            raise SizeCapError(f"family needs more than {cap} candidate vectors")
        out.extend(reduced_residues(q, gamma.d, cap=cap))
    return out


def residue_count(m: Sequence[int], t: int, gamma: MultiIndexSet,
                  cap: int = PHASE_TERM_CAP, level_cap: int = FACTORIAL_LEVEL_CAP) -> int:
    """Number of y in {1..Q_t}^k with Q(y) = m (mod Q_t)."""
    table = residue_count_table(t, gamma, cap=cap, level_cap=level_cap)
    key = tuple(int(x) % table["q"] for x in m)
    return int(table["counts"].get(key, 0))


def residue_count_table(t: int, gamma: MultiIndexSet, cap: int = PHASE_TERM_CAP,
                        level_cap: int = FACTORIAL_LEVEL_CAP) -> dict:
    """All residue-class counts of the canonical mapping mod Q_t."""
    qt = factorial_modulus(t, level_cap=level_cap).value
    if qt**gamma.k > cap:
        raise SizeCapError(f"count needs {qt ** gamma.k} evaluations, above the cap {cap}")
    ys = _lattice_points(qt, gamma.k, cap)
    res = _canonical_residues(ys, gamma, qt)
    counts: dict[tuple[int, ...], int] = {}
    for row in res:
        key = tuple(int(x) for x in row)
        counts[key] = counts.get(key, 0) + 1
    return {"q": qt, "counts": counts}


@dataclass(frozen=True)
class DecayFit:
    """Least-squares power-law fit value ~ C * scale^slope on log-log axes."""

    pairs: tuple[tuple[float, float], ...]
    slope: float
    intercept: float

    @property
    def delta_hat(self) -> float:
        return -self.slope


def fit_decay(pairs: Sequence[tuple[float, float]], drop_smallest: bool = False) -> DecayFit:
    """Fit the decay exponent from (scale, value) pairs.

    drop_smallest excludes the smallest scale, which is often polluted by
    preasymptotic effects.
    """
    pts = sorted((float(s), float(v)) for s, v in pairs)
    if drop_smallest and len(pts) > 2:
        pts = pts[1:]
    if len(pts) < 2:
        raise DomainError("need at least two scales to fit")
    if any(s <= 0 or v <= 0 for s, v in pts):
        raise DomainError("scales and values must be positive")
    xs = np.log([s for s, _ in pts])
    ys = np.log([v for _, v in pts])
    slope, intercept = np.polyfit(xs, ys, 1)
    return DecayFit(pairs=tuple(pts), slope=float(slope), intercept=float(intercept))
