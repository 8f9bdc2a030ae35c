"""Averaging operators along polynomial mappings and their multipliers.

The basic object is the average

    (M_N f)(x) = N^{-k} sum_{y in {1..N}^k} f(x - P(y)),

a convolution of f with a probability kernel supported on the points P(y).
The module builds that kernel exactly (rational weights), applies it either
by direct shifted accumulation or by FFT on a padded grid, forms the
pointwise supremum over a family of scales, and evaluates the associated
Fourier multipliers: the discrete symbol m_N and its continuous companion

    Phi_N(xi) = int_{[0,1]^k} exp(2 pi i <xi, Q(N y)>) dy,

computed by composite Gauss-Legendre quadrature with a doubled-order check.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from . import backend
from .errors import ContractError, DomainError, QuadratureError, SizeCapError
from .lattice import DENSE_CELL_CAP, Box, LatticeFunction
from .polymap import (
    LiftedSystem,
    MultiIndexSet,
    as_lifted,
    canonical_coords_f64,
    eval_canonical,
)

KERNEL_TERM_CAP = 10**7

# int64 stays overflow-free in (a * b) % m provided m < 2^31.5; we keep a
# generous safety margin for the residue fast paths.
_MOD_INT64_LIMIT = 2**31


@dataclass(frozen=True)
class SparseKernel:
    """Probability kernel N^{-k} sum_y delta_{P(y)}, merged and exact."""

    n: int
    k: int
    atoms: tuple[tuple[tuple[int, ...], Fraction], ...]

    @property
    def mass(self) -> Fraction:
        return sum((w for _, w in self.atoms), Fraction(0))

    @property
    def min_shift(self) -> tuple[int, ...]:
        return tuple(min(a[i] for a, _ in self.atoms) for i in range(len(self.atoms[0][0])))

    @property
    def max_shift(self) -> tuple[int, ...]:
        return tuple(max(a[i] for a, _ in self.atoms) for i in range(len(self.atoms[0][0])))


def _iter_points(n: int, k: int):
    """Lexicographic enumeration of {1..n}^k."""
    return np.ndindex(*([n] * k))


def kernel_for_map(n: int, map_like, cap: int = KERNEL_TERM_CAP) -> SparseKernel:
    """Kernel of M_N along an arbitrary mapping (atoms merged, exact weights)."""
    if n < 1:
        raise DomainError(f"need N >= 1, got {n}")
    lifted = as_lifted(map_like)
    k = lifted.gamma.k
    if n**k > cap:
        raise SizeCapError(f"kernel needs {n**k} terms, above the cap {cap}")
    weight = Fraction(1, n**k)
    atoms: dict[tuple[int, ...], Fraction] = {}
    for off in _iter_points(n, k):
        y = tuple(o + 1 for o in off)
        p = lifted.evaluate(y)
        atoms[p] = atoms.get(p, Fraction(0)) + weight
    return SparseKernel(n=n, k=k, atoms=tuple(atoms.items()))


def build_kernel(n: int, gamma: MultiIndexSet, cap: int = KERNEL_TERM_CAP) -> SparseKernel:
    """Kernel of the canonical-mapping average at scale N."""
    return kernel_for_map(n, gamma, cap=cap)


def average_direct(
    f: LatticeFunction, n: int, map_like, cap: int = DENSE_CELL_CAP
) -> LatticeFunction:
    """M_N f by direct shifted accumulation.

    Exact input storage (ints or Fractions) yields exact rational output.
    Output boxes above the cell cap switch to sparse storage.
    """
    kern = kernel_for_map(n, map_like)
    out_box = f.box.dilated(kern.min_shift, kern.max_shift)
    if f.dense and out_box.size <= cap:
        if f.exact:
            out = np.zeros(out_box.shape, dtype=object)
            fv = f.values
        else:
            out = np.zeros(out_box.shape, dtype=np.complex128)
            fv = np.asarray(f.values, dtype=np.complex128)
        for atom, w in kern.atoms:
            start = tuple(
                fl + a - ol for fl, a, ol in zip(f.box.lo, atom, out_box.lo)
            )
            region = tuple(slice(s, s + e) for s, e in zip(start, f.box.shape))
            out[region] += (w if f.exact else complex(w)) * fv
        return LatticeFunction(out_box, values=out)
    entries: dict[tuple[int, ...], object] = {}
    exact = f.exact
    for p, v in f.items():
        for atom, w in kern.atoms:
            q = tuple(a + b for a, b in zip(p, atom))
            inc = w * v if exact else complex(w) * v
            entries[q] = entries.get(q, 0) + inc
    return LatticeFunction(out_box, entries=entries)


def average_transform(
    f: LatticeFunction, n: int, map_like, pad: Sequence[int] | None = None
) -> LatticeFunction:
    """M_N f by FFT on a zero-padded grid.

    The padded grid per axis must cover the input extent plus the kernel
    reach; smaller explicit padding raises, since cyclic wraparound would
    corrupt the result.
    """
    if not f.dense:
        raise ContractError("transform path needs dense storage")
    kern = kernel_for_map(n, map_like)
    out_box = f.box.dilated(kern.min_shift, kern.max_shift)
    need = out_box.shape
    if pad is None:
        pad = need
    pad = tuple(int(p) for p in pad)
    if any(p < m for p, m in zip(pad, need)):
        raise ContractError(
            f"padded grid {pad} smaller than input extent plus kernel reach {need}"
        )
    fvals = np.zeros(pad, dtype=np.complex128)
    region = tuple(slice(0, s) for s in f.box.shape)
    if f.exact:
        fvals[region] = np.vectorize(complex, otypes=[np.complex128])(f.values)
    else:
        fvals[region] = f.values
    kvals = np.zeros(pad, dtype=np.complex128)
    for atom, w in kern.atoms:
        idx = tuple(a - m for a, m in zip(atom, kern.min_shift))
        kvals[idx] += complex(w)
    conv = np.fft.ifftn(np.fft.fftn(fvals) * np.fft.fftn(kvals))
    out = conv[tuple(slice(0, s) for s in out_box.shape)]
    return LatticeFunction(out_box, values=np.ascontiguousarray(out))


def _require_nonnegative(f: LatticeFunction) -> None:
    for _, v in f.items():
        c = complex(v)
        if c.imag != 0 or c.real < 0:
            raise DomainError("maximal function requires nonnegative input")


def maximal_function(
    f: LatticeFunction, ns: Iterable[int], map_like, cap: int = DENSE_CELL_CAP
) -> LatticeFunction:
    """Pointwise sup over scales N of M_N f, for nonnegative f."""
    ns = sorted(set(int(n) for n in ns))
    if not ns:
        raise DomainError("need at least one scale")
    _require_nonnegative(f)
    avgs = [average_direct(f, n, map_like, cap=cap) for n in ns]
    lo = tuple(min(a.box.lo[i] for a in avgs) for i in range(f.box.ndim))
    hi = tuple(max(a.box.hi[i] for a in avgs) for i in range(f.box.ndim))
    hull = Box(lo=lo, hi=hi)
    if all(a.dense for a in avgs) and hull.size <= cap:
        exact = all(a.exact for a in avgs)
        if exact:
            out = np.zeros(hull.shape, dtype=object)
            out[...] = 0
        else:
            out = np.zeros(hull.shape, dtype=np.float64)
        for a in avgs:
            start = tuple(al - hl for al, hl in zip(a.box.lo, hull.lo))
            region = tuple(slice(s, s + e) for s, e in zip(start, a.box.shape))
            vals = a.values if exact else np.real(np.asarray(a.values, dtype=np.complex128))
            patch = out[region]
            out[region] = np.maximum(patch, vals)
        return LatticeFunction(hull, values=out)
    entries: dict[tuple[int, ...], object] = {}
    for a in avgs:
        for p, v in a.items():
            vv = v if a.exact else complex(v).real
            cur = entries.get(p)
            if cur is None or vv > cur:
                entries[p] = vv
    return LatticeFunction(hull, entries=entries)


# ----------------------------------------------------------------------
# Multipliers
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class MultiplierValue:
    """A multiplier evaluation with provenance.

    kind is one of "m", "phi", "nu", "omega", "lambda"; provenance carries
    the rational center that produced an arc-based value; quad_error is the
    doubled-order discrepancy of the quadrature (None for exact kinds);
    tail_bound reports the truncation tail of series-type multipliers.
    """

    value: complex
    at: tuple
    n: int
    kind: str
    provenance: object = None
    quad_error: float | None = None
    tail_bound: float | None = None


@dataclass(frozen=True)
class TorusGrid:
    """Uniform rational grid (j_1/M, ..., j_d/M) on the d-torus."""

    modulus: int
    d: int

    def __post_init__(self):
        if self.modulus < 1 or self.d < 1:
            raise DomainError("need modulus >= 1 and d >= 1")

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.modulus,) * self.d

    @property
    def size(self) -> int:
        return self.modulus**self.d

    def point(self, idx: Sequence[int]) -> tuple[Fraction, ...]:
        return tuple(Fraction(int(j) % self.modulus, self.modulus) for j in idx)

    def points(self):
        for idx in np.ndindex(*self.shape):
            yield idx, self.point(idx)


def _as_fraction_vector(xi) -> tuple[Fraction, ...] | None:
    out = []
    for c in xi:
        if isinstance(c, Fraction):
            out.append(c)
        elif isinstance(c, int):
            out.append(Fraction(c))
        else:
            return None
    return tuple(out)


def _residues_mod(base: np.ndarray, exponent: int, m: int) -> np.ndarray:
    """(base ** exponent) mod m, elementwise, overflow-safe for m < 2^31."""
    if m >= _MOD_INT64_LIMIT:
        raise SizeCapError(f"modulus {m} too large for the int64 residue path")
    out = np.ones_like(base)
    b = base % m
    e = exponent
    while e > 0:
        if e & 1:
            out = (out * b) % m
        b = (b * b) % m
        e >>= 1
    return out


def _canonical_residues(ys: np.ndarray, gamma: MultiIndexSet, m: int) -> np.ndarray:
    """Q(y) mod m for rows y of an integer array, shape (len(ys), d)."""
    ys = np.asarray(ys, dtype=np.int64)
    if ys.ndim == 1:
        ys = ys[:, None]
    cols = []
    for g in gamma.indices:
        col = np.ones(len(ys), dtype=np.int64)
        for j, gj in enumerate(g):
            if gj:
                col = (col * _residues_mod(ys[:, j], gj, m)) % m
        cols.append(col)
    return np.stack(cols, axis=1)


def _lattice_points(n: int, k: int, cap: int) -> np.ndarray:
    if n**k > cap:
        raise SizeCapError(f"enumeration needs {n**k} points, above the cap {cap}")
    axes = [np.arange(1, n + 1, dtype=np.int64)] * k
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def multiplier_m(xi, n: int, gamma: MultiIndexSet, cap: int = KERNEL_TERM_CAP) -> MultiplierValue:
    """Discrete symbol m_N(xi) = N^{-k} sum_y exp(2 pi i <xi, Q(y)>).

    Rational xi evaluates through exact residue phases; otherwise phases are
    accumulated in float64.  The modulus of the result is clamped to 1 (the
    exact bound) to absorb last-ulp rounding excess.
    """
    xi = tuple(xi)
    if len(xi) != gamma.d:
        raise DomainError(f"xi has {len(xi)} coordinates, expected {gamma.d}")
    fracs = _as_fraction_vector(xi)
    ys = _lattice_points(n, gamma.k, cap)
    if fracs is not None:
        den = 1
        for c in fracs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        if den < _MOD_INT64_LIMIT:
            res = _canonical_residues(ys, gamma, den)
            nums = np.array([(c.numerator * (den // c.denominator)) % den for c in fracs],
                            dtype=np.int64)
            idx = np.zeros(len(ys), dtype=np.int64)
            for j in range(gamma.d):
                idx = (idx + nums[j] * res[:, j]) % den
            table = np.exp((2j * np.pi / den) * np.arange(den))
            counts = np.bincount(idx, minlength=den)
            value = complex(counts @ table) / n**gamma.k
        else:
            fracs = None
    if fracs is None:
        coords = canonical_coords_f64(ys, gamma)
        row = np.array([[float(c) for c in xi]])
        value = complex(backend.phase_sum_weighted(coords, None, row)[0]) / n**gamma.k
    mag = abs(value)
    if mag > 1.0:
        value /= mag
    return MultiplierValue(value=value, at=xi, n=n, kind="m")


def multiplier_m_grid(n: int, grid: TorusGrid, gamma: MultiIndexSet,
                      cap: int = KERNEL_TERM_CAP) -> np.ndarray:
    """m_N on every grid point at once, via residue counts and an inverse FFT.

    Returns an array of shape (M,)*d indexed by the numerator tuple j.
    Phases are exact rational multiples of 2 pi by construction.
    """
    if grid.d != gamma.d:
        raise DomainError("grid dimension does not match the exponent set")
    m = grid.modulus
    ys = _lattice_points(n, gamma.k, cap)
    res = _canonical_residues(ys, gamma, m)
    flat = np.zeros(len(ys), dtype=np.int64)
    for j in range(gamma.d):
        flat = flat * m + res[:, j]
    counts = np.bincount(flat, minlength=m**gamma.d).reshape(grid.shape)
    table = np.fft.ifftn(counts) * (m**gamma.d)
    return table / n**gamma.k


# ----------------------------------------------------------------------
# Continuous multiplier Phi_N
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class QuadratureSpec:
    """Composite Gauss-Legendre controls for Phi_N.

    Per-axis node target is nodes_per_unit * (1 + ||N^A xi||^(1/k)), split
    into panels of the fixed order; the result must agree with the
    doubled-panel evaluation within tol.
    """

    nodes_per_unit: float = 4.0
    panel_order: int = 16
    tol: float = 1e-10
    max_points: int = 16_000_000


DEFAULT_QUAD = QuadratureSpec()


@functools.lru_cache(maxsize=64)
def _panel_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    return (x + 1.0) / 2.0, w / 2.0


def _composite_rule(panels: int, order: int) -> tuple[np.ndarray, np.ndarray]:
    x0, w0 = _panel_rule(order)
    offsets = np.arange(panels)[:, None]
    nodes = ((offsets + x0[None, :]) / panels).ravel()
    weights = np.tile(w0 / panels, panels)
    return nodes, weights


def scale_norm(xi, n: float, gamma: MultiIndexSet) -> float:
    """Anisotropic size ||N^A xi|| = max_gamma N^|gamma| |xi_gamma|."""
    return max(
        float(n) ** w * abs(float(c)) for w, c in zip(gamma.weights, xi)
    )


def _phi_eval(xi_f: Sequence[float], n: int, gamma: MultiIndexSet,
              panels: int, order: int) -> complex:
    nodes, weights = _composite_rule(panels, order)
    k = gamma.k
    if k == 1:
        phase = np.zeros_like(nodes)
        for c, g, w in zip(xi_f, gamma.indices, gamma.weights):
            if c:
                phase += (c * float(n) ** w) * nodes ** g[0]
        return complex(np.exp(2j * np.pi * phase) @ weights)
    mesh = np.meshgrid(*([nodes] * k), indexing="ij")
    flat = [m.ravel() for m in mesh]
    phase = np.zeros(len(flat[0]))
    for c, g, w in zip(xi_f, gamma.indices, gamma.weights):
        if c:
            term = np.full(len(flat[0]), c * float(n) ** w)
            for j, gj in enumerate(g):
                if gj:
                    term = term * flat[j] ** gj
            phase += term
    wmesh = np.meshgrid(*([weights] * k), indexing="ij")
    wflat = np.ones(len(flat[0]))
    for wm in wmesh:
        wflat = wflat * wm.ravel()
    return complex(np.exp(2j * np.pi * phase) @ wflat)


def phi(xi, n: int, gamma: MultiIndexSet, quad: QuadratureSpec | None = None) -> MultiplierValue:
    """Phi_N(xi) by adaptive composite Gauss-Legendre quadrature.

    xi is treated as a real vector (no torus reduction).  Raises
    QuadratureError when the doubled-panel check cannot reach tol within
    the evaluation budget.
    """
    quad = quad or DEFAULT_QUAD
    xi = tuple(xi)
    if len(xi) != gamma.d:
        raise DomainError(f"xi has {len(xi)} coordinates, expected {gamma.d}")
    xi_f = [float(c) for c in xi]
    if all(c == 0.0 for c in xi_f):
        return MultiplierValue(value=1.0 + 0.0j, at=xi, n=n, kind="phi", quad_error=0.0)
    k = gamma.k
    omega = scale_norm(xi_f, n, gamma)
    target = quad.nodes_per_unit * (1.0 + omega ** (1.0 / k))
    panels = max(1, math.ceil(target / quad.panel_order))
    if (2 * panels * quad.panel_order) ** k > quad.max_points:
        raise QuadratureError(
            f"initial rule needs {(2 * panels * quad.panel_order) ** k} points, above budget"
        )
    cur = _phi_eval(xi_f, n, gamma, panels, quad.panel_order)
    while True:
        nxt = _phi_eval(xi_f, n, gamma, 2 * panels, quad.panel_order)
        err = abs(nxt - cur)
        if err <= quad.tol:
            return MultiplierValue(value=nxt, at=xi, n=n, kind="phi", quad_error=err)
        panels *= 2
        cur = nxt
        if (2 * panels * quad.panel_order) ** k > quad.max_points:
            raise QuadratureError(
                f"tolerance {quad.tol} unreachable within {quad.max_points} points "
                f"(last doubled-order discrepancy {err:.3e})"
            )


# ----------------------------------------------------------------------
# Fourier projection on a cyclic grid
# ----------------------------------------------------------------------


def fourier_project(f: LatticeFunction, mask: Callable[[tuple[Fraction, ...]], bool]) -> LatticeFunction:
    """Zero out the DFT of f outside the masked frequency set.

    f must be dense on a box anchored at 0 (the cyclic grid); frequencies
    are the rational points j/M per axis, passed to mask as Fractions.
    """
    if not f.dense:
        raise ContractError("projection needs dense storage")
    if any(l != 0 for l in f.box.lo):
        raise ContractError("cyclic grid must be anchored at 0")
    shape = f.box.shape
    sel = np.zeros(shape, dtype=bool)
    for idx in np.ndindex(*shape):
        freq = tuple(Fraction(j, m) for j, m in zip(idx, shape))
        sel[idx] = bool(mask(freq))
    spectrum = np.fft.fftn(np.asarray(f.values, dtype=np.complex128))
    out = np.fft.ifftn(np.where(sel, spectrum, 0.0))
    return LatticeFunction(f.box, values=out)
