"""Ergodic averages along polynomial orbits on concrete systems.

Two model systems: commuting cyclic shifts on (Z_M)^e, where everything is
finite and the averages can be matched exactly against the lattice
convolution (transference), and commuting irrational rotations on the
torus, where the averages exhibit the convergence the pointwise theory
predicts and can be compared against the limiting integral.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .averaging import average_direct, kernel_for_map
from .errors import DomainError, SizeCapError
from .lattice import Box, LatticeFunction
from .polymap import as_lifted

ORBIT_TERM_CAP = 10_000_000


def _orbit_residues(n: int, map_like, modulus: int, cap: int = ORBIT_TERM_CAP) -> dict[tuple[int, ...], int]:
    """Counts of P(y) mod M over y in {1..N}^k, exact integer arithmetic."""
    lifted = as_lifted(map_like)
    k = lifted.gamma.k
    if n**k > cap:
        raise SizeCapError(f"orbit has {n**k} points, cap is {cap}")
    counts: dict[tuple[int, ...], int] = {}
    for y in np.ndindex(*([n] * k)):
        point = tuple(int(c) + 1 for c in y)
        v = tuple(c % modulus for c in lifted.evaluate(point))
        counts[v] = counts.get(v, 0) + 1
    return counts


@dataclass(frozen=True)
class CyclicShiftSystem:
    """Commuting coordinate shifts x -> x + direction * e_j on (Z_M)^e.

    With direction -1 the orbit average along a polynomial mapping is the
    lattice convolution average applied to the M-periodic extension, which
    transference_check verifies exactly.  With direction +1 the average at
    x counts solutions of P(y) = -x offsets, the natural forward shift.
    """

    modulus: int
    dim: int
    direction: int = 1

    def __post_init__(self):
        if self.modulus < 1:
            raise DomainError(f"need modulus >= 1, got {self.modulus}")
        if self.dim < 1:
            raise DomainError(f"need dim >= 1, got {self.dim}")
        if self.direction not in (1, -1):
            raise DomainError(f"need direction +1 or -1, got {self.direction}")

    def shift(self, f: np.ndarray, j: int, steps: int = 1) -> np.ndarray:
        """(T_j^steps f)(x) = f(x + direction * steps * e_j)."""
        if f.shape != (self.modulus,) * self.dim:
            raise DomainError("function shape does not match the system")
        return np.roll(f, -self.direction * steps, axis=j)

    def average(self, f: np.ndarray, n: int, map_like) -> np.ndarray:
        """Orbit average N^-k sum over y of f composed with T^(P(y)).

        Integer or object input stays exact (Fraction output); float or
        complex input returns complex.
        """
        if f.shape != (self.modulus,) * self.dim:
            raise DomainError("function shape does not match the system")
        lifted = as_lifted(map_like)
        if lifted.d0 != self.dim:
            raise DomainError(
                f"mapping has {lifted.d0} components, system has dim {self.dim}"
            )
        counts = _orbit_residues(n, map_like, self.modulus)
        exact = not np.issubdtype(f.dtype, np.inexact)
        work = f.astype(object) if exact else f.astype(np.complex128)
        out = np.zeros_like(work)
        axes = tuple(range(self.dim))
        for v, c in sorted(counts.items()):
            rolled = np.roll(work, tuple(-self.direction * x for x in v), axis=axes)
            out = out + c * rolled
        k = lifted.gamma.k
        if exact:
            scale = Fraction(1, n**k)
            return np.array([scale * x for x in out.ravel()], dtype=object).reshape(out.shape)
        return out / float(n**k)


@dataclass(frozen=True)
class TorusRotationSystem:
    """Commuting rotations x -> x + alpha_j e_j on the torus (R/Z)^e."""

    alphas: tuple[float, ...]

    def __post_init__(self):
        if not self.alphas:
            raise DomainError("need at least one rotation angle")

    @property
    def dim(self) -> int:
        return len(self.alphas)

    def orbit_points(self, x0: Sequence[float], n: int, map_like) -> np.ndarray:
        """All T^(P(y)) x0 for y in {1..N}^k, shape (N^k, dim)."""
        lifted = as_lifted(map_like)
        if lifted.d0 != self.dim:
            raise DomainError(
                f"mapping has {lifted.d0} components, system has dim {self.dim}"
            )
        k = lifted.gamma.k
        if n**k > ORBIT_TERM_CAP:
            raise SizeCapError(f"orbit has {n**k} points, cap is {ORBIT_TERM_CAP}")
        x0 = np.asarray(x0, dtype=np.float64)
        if x0.shape != (self.dim,):
            raise DomainError("starting point dimension does not match the system")
        pts = np.empty((n**k, self.dim), dtype=np.float64)
        alphas = np.asarray(self.alphas)
        for i, y in enumerate(np.ndindex(*([n] * k))):
            point = tuple(int(c) + 1 for c in y)
            v = lifted.evaluate(point)
            pts[i] = (x0 + np.array(v, dtype=np.float64) * alphas) % 1.0
        return pts

    def average(self, f: Callable[[np.ndarray], np.ndarray], x0: Sequence[float],
                n: int, map_like) -> complex:
        """Orbit average of f along the mapping; f maps (m, dim) to (m,)."""
        pts = self.orbit_points(x0, n, map_like)
        vals = np.asarray(f(pts), dtype=np.complex128)
        return complex(vals.mean())


def ergodic_average(system, f, n: int, map_like, x0=None):
    """Uniform front end: cyclic systems take arrays, rotations callables."""
    if isinstance(system, CyclicShiftSystem):
        return system.average(f, n, map_like)
    if isinstance(system, TorusRotationSystem):
        if x0 is None:
            raise DomainError("rotation averages need a starting point x0")
        return system.average(f, x0, n, map_like)
    raise DomainError(f"unknown system type {type(system).__name__}")


@dataclass(frozen=True)
class TransferenceReport:
    modulus: int
    n: int
    max_gap: float
    match: bool


def transference_check(modulus: int, n: int, map_like, seed: int = 0) -> TransferenceReport:
    """Orbit average on the cyclic system vs lattice average, exactly.

    Draws an integer-valued function on (Z_M)^e, averages it along the
    mapping with the inverse shift, and compares against the lattice
    convolution of its periodic extension over a box large enough that no
    boundary truncation occurs.  Both sides are exact rationals; the gap
    should be identically zero.
    """
    lifted = as_lifted(map_like)
    e = lifted.d0
    rng = np.random.default_rng(seed)
    f = rng.integers(-9, 10, size=(modulus,) * e)
    system = CyclicShiftSystem(modulus=modulus, dim=e, direction=-1)
    dyn = system.average(f, n, map_like)

    kernel = kernel_for_map(n, map_like)
    lo = tuple(-s for s in kernel.max_shift)
    hi = tuple(modulus - 1 - s for s in kernel.min_shift)
    box = Box(lo=lo, hi=hi)
    values = np.empty(box.shape, dtype=object)
    for idx in np.ndindex(*box.shape):
        point = box.point(idx)
        values[idx] = int(f[tuple(c % modulus for c in point)])
    periodic = LatticeFunction(box=box, values=values)
    averaged = average_direct(periodic, n, map_like)

    worst = Fraction(0)
    for idx in np.ndindex(*((modulus,) * e)):
        point = tuple(int(c) for c in idx)
        gap = abs(averaged.get(point) - dyn[idx])
        if gap > worst:
            worst = gap
    return TransferenceReport(modulus=modulus, n=n, max_gap=float(worst), match=worst == 0)


@dataclass(frozen=True)
class AverageTrace:
    """Averages along a scale ladder with successive gaps and, when a
    limiting value is known, the error against it."""

    ns: tuple[int, ...]
    values: tuple[complex, ...]
    reference: complex | None = None

    @property
    def successive_gaps(self) -> tuple[float, ...]:
        return tuple(
            abs(b - a) for a, b in zip(self.values, self.values[1:])
        )

    @property
    def reference_errors(self) -> tuple[float, ...] | None:
        if self.reference is None:
            return None
        return tuple(abs(v - self.reference) for v in self.values)

    def to_jsonable(self) -> dict:
        out = {
            "ns": list(self.ns),
            "values": [[v.real, v.imag] for v in self.values],
            "successive_gaps": list(self.successive_gaps),
        }
        if self.reference is not None:
            out["reference"] = [self.reference.real, self.reference.imag]
            out["reference_errors"] = list(self.reference_errors)
        return out


def convergence_report(system, f, ns: Sequence[int], map_like, x0=None,
                       reference: complex | None = None) -> AverageTrace:
    """Evaluate the orbit average at each scale and track its settling."""
    ns = tuple(int(n) for n in ns)
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise DomainError("scales must be strictly increasing")
    values = []
    for n in ns:
        v = ergodic_average(system, f, n, map_like, x0=x0)
        if isinstance(v, np.ndarray):
            flat = v.ravel()
            v = complex(sum(flat) / len(flat)) if v.dtype == object else complex(flat.mean())
        values.append(complex(v))
    return AverageTrace(ns=ns, values=tuple(values), reference=reference)
