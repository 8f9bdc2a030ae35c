"""Arc decompositions of the torus and approximating multipliers.

Frequencies near a reduced rational a/q with small denominator form a major
arc, where the discrete symbol m_N factors to rounding as a Gauss sum times
the continuous multiplier Phi_N.  This module classifies arcs, finds nearest
rational centers inside dyadic denominator bands, and assembles the
approximating multipliers built from those factors: the band sums nu, the
factorial-modulus sums Omega, and their large-divisor remainders Lambda.
It also provides the smooth cutoff used by all of them, continued-fraction
rational approximation, the refined arc shells at dyadic scales, and the
threshold schedule that switches between full averages and Omega.

All membership decisions (is a frequency inside a cutoff's support?) are
made in exact rational arithmetic; the anisotropic rescaling factors grow
like a power of a factorial and overflow float64 already at modest levels.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .averaging import (
    DEFAULT_QUAD,
    MultiplierValue,
    QuadratureSpec,
    TorusGrid,
    multiplier_m,
    multiplier_m_grid,
    phi,
)
from .errors import DomainError, SizeCapError
from .expsum import (
    FACTORIAL_LEVEL_CAP,
    PHASE_TERM_CAP,
    RationalPoint,
    divisors_of,
    factorial_modulus,
    gauss_sum,
    gauss_sum_table,
)
from .polymap import MultiIndexSet

# Denominator bands at least this large use the continued-fraction lookup
# instead of direct enumeration.
_BAND_ENUM_LIMIT = 1 << 12

_HALF = Fraction(1, 2)
_QUARTER = Fraction(1, 4)


# ----------------------------------------------------------------------
# Smooth cutoff
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class BumpSpec:
    """Cutoff shape: identically 1 inside ``inner``, 0 outside ``outer``."""

    inner: Fraction = _QUARTER
    outer: Fraction = _HALF


DEFAULT_BUMP = BumpSpec()


def _profile(w: float) -> float:
    """The standard C-infinity step: 0 for w <= 0, 1 for w >= 1."""
    if w <= 0.0:
        return 0.0
    if w >= 1.0:
        return 1.0
    a = math.exp(-1.0 / w)
    b = math.exp(-1.0 / (1.0 - w))
    return a / (a + b)


def _exact_abs(x) -> Fraction:
    """|x| as an exact Fraction (floats convert exactly)."""
    return abs(Fraction(x))


def bump(x: Sequence, spec: BumpSpec = DEFAULT_BUMP) -> float:
    """Smooth cutoff of the sup norm: 1 on ||x|| <= 1/4, 0 on ||x|| >= 1/2.

    The two plateau decisions are exact; only the transition value is
    floating point.
    """
    m = max(_exact_abs(c) for c in x)
    if m <= spec.inner:
        return 1.0
    if m >= spec.outer:
        return 0.0
    w = (spec.outer - m) / (spec.outer - spec.inner)
    return _profile(float(w))


def bump_aniso(base, weights: Sequence[int], x: Sequence, spec: BumpSpec = DEFAULT_BUMP) -> float:
    """bump(base^A x) where coordinate gamma rescales by base^|gamma|.

    Exact plateau decisions for any rational base (ints included), however
    large the rescaling factors get.
    """
    b = Fraction(base)
    if b <= 0:
        raise DomainError("rescaling base must be positive")
    scaled = [b**w * Fraction(c) for w, c in zip(weights, x)]
    return bump(scaled, spec=spec)


def eta_s(s: int, gamma: MultiIndexSet, theta: Sequence) -> float:
    """Band-s localizing cutoff: bump(10^((s+1)A) theta)."""
    if s < 0:
        raise DomainError(f"need s >= 0, got {s}")
    return bump_aniso(10 ** (s + 1), gamma.weights, theta)


def eta_radius(s: int, weight: int) -> Fraction:
    """Support radius of the band-s cutoff in a coordinate of degree weight."""
    return Fraction(1, 2 * 10 ** ((s + 1) * weight))


def rho_t(t: int, gamma: MultiIndexSet, theta: Sequence,
          level_cap: int = FACTORIAL_LEVEL_CAP) -> float:
    """Factorial-level cutoff: bump(Q_(t+1)^(3dA) theta)."""
    base = factorial_modulus(t + 1, level_cap=level_cap).value ** (3 * gamma.d)
    return bump_aniso(base, gamma.weights, theta)


def rho_radius(t: int, weight: int, d: int, level_cap: int = FACTORIAL_LEVEL_CAP) -> Fraction:
    qnext = factorial_modulus(t + 1, level_cap=level_cap).value
    return Fraction(1, 2 * qnext ** (3 * d * weight))


# ----------------------------------------------------------------------
# Torus geometry helpers
# ----------------------------------------------------------------------


def torus_distance(x, c) -> Fraction:
    """Distance on the circle between two rationals (exact)."""
    f = (Fraction(x) - Fraction(c)) % 1
    return min(f, 1 - f)


def signed_offset(x, c) -> Fraction:
    """Representative of x - c in (-1/2, 1/2]."""
    f = (Fraction(x) - Fraction(c)) % 1
    return f if f <= _HALF else f - 1


def _nearest_numerator(x: Fraction, q: int) -> int:
    """Nearest integer to x*q, mapped into {1..q}."""
    a = math.floor(x * q + _HALF)
    a %= q
    return a if a >= 1 else q


# ----------------------------------------------------------------------
# Rational approximation
# ----------------------------------------------------------------------


def dirichlet_approx(xi, q_max: int) -> tuple[int, int]:
    """Best continued-fraction approximation with denominator <= q_max.

    Returns coprime (a, q) with 1 <= q <= q_max and |xi - a/q| bounded by
    1/(q (q_max + 1)).
    """
    if q_max < 1:
        raise DomainError(f"need q_max >= 1, got {q_max}")
    x = Fraction(xi)
    a0 = math.floor(x)
    p_prev, q_prev = 1, 0
    p_cur, q_cur = a0, 1
    rem = x - a0
    while rem != 0:
        flip = 1 / rem
        a = math.floor(flip)
        rem = flip - a
        p_nxt = a * p_cur + p_prev
        q_nxt = a * q_cur + q_prev
        if q_nxt > q_max:
            break
        p_prev, q_prev, p_cur, q_cur = p_cur, q_cur, p_nxt, q_nxt
    return int(p_cur), int(q_cur)


def _convergents_upto(x: Fraction, q_max: int) -> list[tuple[int, int]]:
    """All continued-fraction convergents of x with denominator <= q_max."""
    a0 = math.floor(x)
    p_prev, q_prev = 1, 0
    p_cur, q_cur = a0, 1
    out = [(a0, 1)]
    rem = x - a0
    while rem != 0:
        flip = 1 / rem
        a = math.floor(flip)
        rem = flip - a
        p_nxt = a * p_cur + p_prev
        q_nxt = a * q_cur + q_prev
        if q_nxt > q_max:
            break
        out.append((p_nxt, q_nxt))
        p_prev, q_prev, p_cur, q_cur = p_cur, q_cur, p_nxt, q_nxt
    return out


# ----------------------------------------------------------------------
# Arc parameters and classification
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class ArcParams:
    """Major-arc cutoffs: denominators up to N^alpha, widths N^(beta - w).

    The factorization estimate behind the arc decomposition needs
    4 (alpha + beta) < 1, enforced here.  delta_hat optionally records an
    empirical Gauss-sum decay exponent; weyl_constraint_ok reports whether
    8 alpha delta_hat <= 1, the condition under which dyadic consecutive
    symbols stay uniformly close on minor arcs.
    """

    alpha: float = 0.1
    beta: float = 0.1
    delta_hat: float | None = None

    def __post_init__(self):
        if not (0 < self.alpha < 1 and 0 < self.beta < 1):
            raise DomainError("need alpha, beta in (0, 1)")
        if not 4 * (self.alpha + self.beta) < 1:
            raise DomainError(
                f"need 4 (alpha + beta) < 1, got alpha={self.alpha}, beta={self.beta}"
            )

    @property
    def weyl_constraint_ok(self) -> bool | None:
        if self.delta_hat is None:
            return None
        return 8 * self.alpha * self.delta_hat <= 1


DEFAULT_PARAMS = ArcParams()


@dataclass(frozen=True)
class ArcClassification:
    kind: str  # "major" | "minor"
    n: int
    center: RationalPoint | None

    @property
    def major(self) -> bool:
        return self.kind == "major"


def classify_arc(xi: Sequence, n: int, params: ArcParams, gamma: MultiIndexSet) -> ArcClassification:
    """Major/minor decision with the smallest-q, lexicographic-a witness.

    xi is major when some reduced a/q with q <= N^alpha satisfies
    |xi_g - a_g/q| <= N^(beta - |g|) for every coordinate (torus distance).
    """
    if n < 1:
        raise DomainError(f"need N >= 1, got {n}")
    xs = [Fraction(c) % 1 for c in xi]
    if len(xs) != gamma.d:
        raise DomainError("xi length does not match the exponent set")
    q_top = math.floor(n**params.alpha)
    radii = [Fraction(float(n ** (params.beta - w))) for w in gamma.weights]
    for q in range(1, q_top + 1):
        cands = []
        for x, r in zip(xs, radii):
            lo = math.ceil(x * q - r * q)
            hi = math.floor(x * q + r * q)
            opts = sorted(
                {(a % q) if (a % q) >= 1 else q for a in range(lo, hi + 1)}
            )
            opts = [a for a in opts if torus_distance(x, Fraction(a, q)) <= r]
            if not opts:
                break
            cands.append(opts)
        else:
            for a_vec in itertools.product(*cands):
                pt = RationalPoint(numerators=a_vec, q=q)
                if pt.reduced:
                    return ArcClassification(kind="major", n=n, center=pt)
    return ArcClassification(kind="minor", n=n, center=None)


# ----------------------------------------------------------------------
# Nearest centers in denominator families
# ----------------------------------------------------------------------


def nearest_center_in_band(xi: Sequence, s: int, gamma: MultiIndexSet) -> RationalPoint | None:
    """The unique band-s center whose cutoff support could contain xi.

    Band s >= 1 holds reduced rationals with denominator in [2^s, 2^(s+1));
    band 0 is the zero point.  Support radii shrink fast enough that at most
    one center per band can be within reach, so the lookup is exact.  Large
    bands go through coordinate-wise continued fractions instead of
    enumerating denominators.
    """
    xs = [Fraction(c) % 1 for c in xi]
    if len(xs) != gamma.d:
        raise DomainError("xi length does not match the exponent set")
    if s < 0:
        raise DomainError(f"need s >= 0, got {s}")
    if s == 0:
        return RationalPoint.zero(gamma.d)
    radii = [eta_radius(s, w) for w in gamma.weights]
    q_lo, q_hi = 1 << s, 1 << (s + 1)
    if q_hi <= _BAND_ENUM_LIMIT:
        for q in range(q_lo, q_hi):
            nums = []
            for x, r in zip(xs, radii):
                a = _nearest_numerator(x, q)
                if torus_distance(x, Fraction(a, q)) >= r:
                    break
                nums.append(a)
            else:
                pt = RationalPoint(numerators=tuple(nums), q=q)
                if pt.reduced:
                    return pt
        return None
    # Continued-fraction route: each coordinate's reduced form must be a
    # convergent, the joint denominator is their lcm.
    parts = []
    for x, r in zip(xs, radii):
        hit = None
        for p, q in _convergents_upto(x, q_hi - 1):
            if torus_distance(x, Fraction(p, q)) < r:
                hit = (p % q if q > 1 else 0, q)
                break
        if hit is None:
            return None
        parts.append(hit)
    q = 1
    for _, qg in parts:
        q = q * qg // math.gcd(q, qg)
    if not (q_lo <= q < q_hi):
        return None
    nums = []
    for (p, qg), x, r in zip(parts, xs, radii):
        a = (p * (q // qg)) % q
        nums.append(a if a >= 1 else q)
    pt = RationalPoint(numerators=tuple(nums), q=q)
    if not pt.reduced:
        return None
    for x, a, r in zip(xs, pt.numerators, radii):
        if torus_distance(x, Fraction(a, q)) >= r:
            return None
    return pt


def _offsets_from(xs: list[Fraction], pt: RationalPoint) -> tuple[Fraction, ...]:
    return tuple(
        signed_offset(x, Fraction(a % pt.q, pt.q)) for x, a in zip(xs, pt.numerators)
    )


# ----------------------------------------------------------------------
# Approximating multipliers
# ----------------------------------------------------------------------


def nu_terms(
    xi: Sequence,
    n: int,
    s_max: int,
    gamma: MultiIndexSet,
    quad: QuadratureSpec | None = None,
    gauss_cap: int = PHASE_TERM_CAP,
) -> list[tuple[int, RationalPoint, complex]]:
    """Nonzero band contributions (s, center, G * Phi * eta) at xi."""
    xs = [Fraction(c) % 1 for c in xi]
    out = []
    for s in range(s_max + 1):
        pt = nearest_center_in_band(xs, s, gamma)
        if pt is None:
            continue
        theta = _offsets_from(xs, pt)
        e = eta_s(s, gamma, theta)
        if e == 0.0:
            continue
        g = gauss_sum(pt, gamma, cap=gauss_cap)
        p = phi(theta, n, gamma, quad=quad)
        out.append((s, pt, g * p.value * e))
    return out


def nu(
    xi: Sequence,
    n: int,
    s_max: int,
    gamma: MultiIndexSet,
    params: ArcParams = DEFAULT_PARAMS,
    quad: QuadratureSpec | None = None,
) -> MultiplierValue:
    """Truncated major-arc approximation of m_N at xi.

    Sums the single nonzero term of each band s <= s_max.  The reported
    tail bound 2^(-delta_hat s_max) uses the params' recorded Gauss decay
    exponent (0.5 when absent).
    """
    terms = nu_terms(xi, n, s_max, gamma, quad=quad)
    value = sum((t[2] for t in terms), 0j)
    dh = params.delta_hat if params.delta_hat is not None else 0.5
    prov = tuple((s, pt) for s, pt, _ in terms)
    return MultiplierValue(
        value=value,
        at=tuple(xi),
        n=n,
        kind="nu",
        provenance=prov,
        tail_bound=2.0 ** (-dh * s_max),
    )


def omega(
    xi: Sequence,
    n: int,
    t: int,
    gamma: MultiIndexSet,
    quad: QuadratureSpec | None = None,
    gauss_cap: int = PHASE_TERM_CAP,
    level_cap: int = FACTORIAL_LEVEL_CAP,
) -> MultiplierValue:
    """Factorial-modulus multiplier: sum over all a/Q_t of G * Phi * rho.

    The cutoff supports are pairwise disjoint and much narrower than the
    spacing 1/Q_t, so only the coordinatewise nearest numerator vector can
    contribute; numerators here are not required to be reduced.
    """
    qt = factorial_modulus(t, level_cap=level_cap).value
    xs = [Fraction(c) % 1 for c in xi]
    if len(xs) != gamma.d:
        raise DomainError("xi length does not match the exponent set")
    pt = RationalPoint(numerators=tuple(_nearest_numerator(x, qt) for x in xs), q=qt)
    theta = _offsets_from(xs, pt)
    r = rho_t(t, gamma, theta, level_cap=level_cap)
    if r == 0.0:
        return MultiplierValue(value=0j, at=tuple(xi), n=n, kind="omega")
    g = gauss_sum(pt, gamma, cap=gauss_cap)
    p = phi(theta, n, gamma, quad=quad)
    return MultiplierValue(
        value=g * p.value * r, at=tuple(xi), n=n, kind="omega", provenance=pt
    )


def lambda_mult(
    xi: Sequence,
    n: int,
    t: int,
    gamma: MultiIndexSet,
    quad: QuadratureSpec | None = None,
    gauss_cap: int = PHASE_TERM_CAP,
    level_cap: int = FACTORIAL_LEVEL_CAP,
) -> MultiplierValue:
    """Large-divisor part: reduced centers a/q with q | Q_t, q >= 2^(t+1)."""
    qt = factorial_modulus(t, level_cap=level_cap).value
    xs = [Fraction(c) % 1 for c in xi]
    if len(xs) != gamma.d:
        raise DomainError("xi length does not match the exponent set")
    radii = [rho_radius(t, w, gamma.d, level_cap=level_cap) for w in gamma.weights]
    for q in divisors_of(qt):
        if q < 1 << (t + 1):
            continue
        nums = []
        for x, r in zip(xs, radii):
            a = _nearest_numerator(x, q)
            if torus_distance(x, Fraction(a, q)) >= r:
                break
            nums.append(a)
        else:
            pt = RationalPoint(numerators=tuple(nums), q=q)
            if not pt.reduced:
                continue
            theta = _offsets_from(xs, pt)
            r_val = rho_t(t, gamma, theta, level_cap=level_cap)
            if r_val == 0.0:
                continue
            g = gauss_sum(pt, gamma, cap=gauss_cap)
            p = phi(theta, n, gamma, quad=quad)
            return MultiplierValue(
                value=g * p.value * r_val, at=tuple(xi), n=n, kind="lambda", provenance=pt
            )
    return MultiplierValue(value=0j, at=tuple(xi), n=n, kind="lambda")


# ----------------------------------------------------------------------
# Refined arc shells at dyadic scales
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class ArcShellRecord:
    """Membership of xi in the width-2^(-u) shells around a band-s center."""

    center: RationalPoint | None
    s: int
    u: int
    in_outer: bool
    in_inner: bool
    is_center: bool
    shell_u: int | None  # largest u' whose outer set contains xi

    @property
    def in_shell(self) -> bool:
        return self.in_outer and not self.in_inner


def _floor_log2_inverse(dist: Fraction) -> int:
    """max e with 2^e <= 1/dist, for 0 < dist <= 1/2."""
    inv = Fraction(1, 1) / dist
    e = (inv.numerator // inv.denominator).bit_length() - 1
    return e


def refine_arc_membership(
    xi: Sequence,
    n: int,
    s: int,
    u: int,
    gamma: MultiIndexSet,
    params: ArcParams = DEFAULT_PARAMS,
) -> ArcShellRecord:
    """Locate xi within the nested shells |xi_g - a_g/q| <= 2^(-n|g|-u).

    The dyadic scale is 2^n; u >= -beta n indexes the shell width.  The
    record reports outer/inner membership at the queried u and the largest
    u' at which xi still belongs (None when no center is in reach or xi is
    the center itself).
    """
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    if u < -params.beta * n:
        raise DomainError(f"need u >= -beta n = {-params.beta * n:.3f}, got {u}")
    xs = [Fraction(c) % 1 for c in xi]
    pt = nearest_center_in_band(xs, s, gamma)
    if pt is None:
        return ArcShellRecord(center=None, s=s, u=u, in_outer=False, in_inner=False,
                              is_center=False, shell_u=None)
    dists = [torus_distance(x, Fraction(a % pt.q, pt.q)) for x, a in zip(xs, pt.numerators)]

    def inside(uu: int) -> bool:
        for dist, w in zip(dists, gamma.weights):
            e = n * w + uu
            # dist <= 2^(-e), exactly
            if e >= 0:
                if dist * (1 << e) > 1:
                    return False
            else:
                if dist > (1 << -e):
                    return False
        return True

    if all(d == 0 for d in dists):
        return ArcShellRecord(center=pt, s=s, u=u, in_outer=True, in_inner=True,
                              is_center=True, shell_u=None)
    shell = min(
        _floor_log2_inverse(d) - n * w for d, w in zip(dists, gamma.weights) if d > 0
    )
    return ArcShellRecord(
        center=pt,
        s=s,
        u=u,
        in_outer=inside(u),
        in_inner=inside(u + 1),
        is_center=False,
        shell_u=shell,
    )


# ----------------------------------------------------------------------
# Grid error sweeps
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class GridErrorPoint:
    """One point of a decay sweep: scale, sup error, and where it occurred."""

    n: int
    sup_error: float
    argmax: tuple


def default_s_max(grid: TorusGrid) -> int:
    """Deepest band whose centers can sit on the grid (q <= M)."""
    return int(math.floor(math.log2(grid.modulus))) if grid.modulus > 1 else 0


def _off_center_bands(grid: TorusGrid, s_max: int, gamma: MultiIndexSet) -> list[int]:
    """Bands where a grid point can be strictly inside an off-grid support.

    The distance from a grid point to a center a/q not equal to it is at
    least 1/(M q); a band needs its widest radius above that to produce
    off-center hits.
    """
    m = grid.modulus
    w_min = min(gamma.weights)
    out = [0]
    for s in range(1, s_max + 1):
        q_top = (1 << (s + 1)) - 1
        if eta_radius(s, w_min) > Fraction(1, m * q_top):
            out.append(s)
    return out


@functools.lru_cache(maxsize=8)
def _grid_nu_structure(grid: TorusGrid, s_max: int, gamma: MultiIndexSet):
    """Per grid point: band hits (s, center, theta), with exact geometry.

    The heavy part of a nu sweep is independent of the scale N; this is
    computed once per (grid, s_max) and reused across scales.
    """
    m = grid.modulus
    search_bands = _off_center_bands(grid, s_max, gamma)
    hits: dict[tuple[int, ...], list] = {}
    for idx, xs in grid.points():
        found = []
        seen_bands = set()
        for s in search_bands:
            pt = nearest_center_in_band(xs, s, gamma)
            if pt is None:
                continue
            theta = _offsets_from(list(xs), pt)
            if eta_s(s, gamma, theta) == 0.0:
                continue
            found.append((s, pt, theta))
            seen_bands.add(s)
        # Own reduced center: always a hit at its band (theta = 0).
        g = m
        for j in idx:
            g = math.gcd(g, j)
        q = m // g
        if q > 1:
            s_own = q.bit_length() - 1
            if s_own <= s_max and s_own not in seen_bands:
                nums = tuple((j // g) if (j // g) >= 1 else q for j in idx)
                pt = RationalPoint(numerators=nums, q=q)
                found.append((s_own, pt, (Fraction(0),) * gamma.d))
        if found:
            hits[tuple(idx)] = found
    return hits


def nu_on_grid(
    n: int,
    grid: TorusGrid,
    gamma: MultiIndexSet,
    s_max: int | None = None,
    quad: QuadratureSpec | None = None,
) -> np.ndarray:
    """nu at every grid point, shape (M,)*d; exact center geometry, cached."""
    if s_max is None:
        s_max = default_s_max(grid)
    hits = _grid_nu_structure(grid, s_max, gamma)
    out = np.zeros(grid.shape, dtype=np.complex128)
    gcache: dict = {}
    pcache: dict = {}
    for idx, found in hits.items():
        acc = 0j
        for s, pt, theta in found:
            key = (pt.numerators, pt.q)
            if key not in gcache:
                gcache[key] = gauss_sum(pt, gamma)
            if any(theta):
                pkey = theta
                if pkey not in pcache:
                    pcache[pkey] = phi(theta, n, gamma, quad=quad).value
                pval = pcache[pkey]
                e = eta_s(s, gamma, theta)
            else:
                pval = 1.0 + 0j
                e = 1.0
            acc += gcache[key] * pval * e
        out[idx] = acc
    return out


def approx_error_grid(
    n: int,
    grid: TorusGrid,
    target: str,
    gamma: MultiIndexSet,
    params: ArcParams = DEFAULT_PARAMS,
    s_max: int | None = None,
    quad: QuadratureSpec | None = None,
    prop1_points: Sequence[tuple[RationalPoint, tuple]] | None = None,
) -> GridErrorPoint:
    """Sup-norm error of an approximation to m_N, with its argmax.

    target "nu": sup over the grid of |m_N - nu_N|.  target "prop1": sup
    over supplied (center, offset) pairs of |m_N(a/q + theta) -
    G(a/q) Phi_N(theta)|.
    """
    if target == "nu":
        mvals = multiplier_m_grid(n, grid, gamma)
        nvals = nu_on_grid(n, grid, gamma, s_max=s_max, quad=quad)
        err = np.abs(mvals - nvals)
        flat = int(np.argmax(err))
        idx = np.unravel_index(flat, grid.shape)
        return GridErrorPoint(n=n, sup_error=float(err[idx]), argmax=grid.point(idx))
    if target == "prop1":
        if not prop1_points:
            raise DomainError("prop1 target needs (center, theta) pairs")
        worst = -1.0
        arg = None
        for pt, theta in prop1_points:
            base = pt.as_fractions()
            xi = tuple(float(b) + float(th) for b, th in zip(base, theta))
            mv = multiplier_m(xi, n, gamma)
            g = gauss_sum(pt, gamma)
            pv = phi(theta, n, gamma, quad=quad)
            e = abs(mv.value - g * pv.value)
            if e > worst:
                worst, arg = e, xi
        return GridErrorPoint(n=n, sup_error=worst, argmax=arg)
    raise DomainError(f"unknown target {target!r}")


def count_terms_exhaustive(
    grid: TorusGrid, s: int, gamma: MultiIndexSet, cap: int = PHASE_TERM_CAP
) -> np.ndarray:
    """Number of band-s centers whose cutoff support contains each grid point.

    Independent of the nearest-center lookup: enumerates the whole band and
    marks, for every center, the grid points strictly inside its support.
    Used to confirm the at-most-one-term property.
    """
    from .expsum import rational_family

    m = grid.modulus
    counts = np.zeros(grid.shape, dtype=np.int64)
    for pt in rational_family(s, gamma, cap=cap):
        per_axis = []
        for a, w in zip(pt.numerators, gamma.weights):
            c = Fraction(a % pt.q, pt.q)
            r = eta_radius(s, w)
            lo = math.ceil((c - r) * m)
            hi = math.floor((c + r) * m)
            js = [
                j % m
                for j in range(lo, hi + 1)
                if torus_distance(Fraction(j, m), c) < r
            ]
            if not js:
                break
            per_axis.append(sorted(set(js)))
        else:
            for combo in itertools.product(*per_axis):
                counts[combo] += 1
    return counts


# ----------------------------------------------------------------------
# Threshold schedule
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class SplitSchedule:
    """Scale-indexed choice between the zero operator, full averages, and
    the factorial-modulus approximation.

    Below the threshold lam <= 1 everything is the zero operator.  Above
    it, scales 2^j with j < 2^kappa_t keep the full average; later scales
    switch to the level-t factorial approximation.
    """

    lam: float
    epsilon: float
    d: int
    zero: bool
    t: int | None = None
    kappa_t: int | None = None
    cutoff: int | None = None

    def assignment(self, j: int) -> str:
        if j < 0:
            raise DomainError(f"need j >= 0, got {j}")
        if self.zero:
            return "zero"
        return "average" if j < self.cutoff else "omega"

    def to_jsonable(self) -> dict:
        return {
            "lambda": self.lam,
            "epsilon": self.epsilon,
            "d": self.d,
            "mode": "zero" if self.zero else "split",
            "t": self.t,
            "kappa_t": self.kappa_t,
            "cutoff": self.cutoff,
        }


def iw_schedule(lam: float, epsilon: float, delta4_hat: float, d: int) -> SplitSchedule:
    """Threshold schedule for the restricted-strong-type decomposition.

    lam <= 1 yields the zero schedule; otherwise the level is
    t = floor(log2(lam)/delta4_hat) + 1 and the switch happens at scale
    index 2^(20 d (t+1)).
    """
    if lam <= 0:
        raise DomainError(f"need lam > 0, got {lam}")
    if not (0 < epsilon <= 1):
        raise DomainError(f"need epsilon in (0, 1], got {epsilon}")
    if delta4_hat <= 0:
        raise DomainError(f"need delta4_hat > 0, got {delta4_hat}")
    if d < 1:
        raise DomainError(f"need d >= 1, got {d}")
    if lam <= 1:
        return SplitSchedule(lam=lam, epsilon=epsilon, d=d, zero=True)
    t = math.floor(math.log2(lam) / delta4_hat) + 1
    kappa = 20 * d * (t + 1)
    return SplitSchedule(
        lam=lam, epsilon=epsilon, d=d, zero=False, t=t, kappa_t=kappa, cutoff=1 << kappa
    )
