"""Empirical verification suites.

Each suite exercises one quantitative property of the toolkit at desk
scale and returns a CheckResult with the measured numbers, the thresholds,
and a verdict.  The CLI ``verify`` command and the acceptance tests both
run these; they are deterministic for a fixed seed.

The bump-kernel suite is expected to fail: the lattice kernel of a cutoff
that is exactly 1 on a neighborhood of 0 and compactly supported cannot
have l1 norm close to 1 (its lattice sum telescopes to exactly 1, so norm
1 would force a nonnegative kernel, which such a cutoff cannot have; the
measured floor across admissible profiles is near 3 in two dimensions).
The suite reports the measured values honestly.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import backend
from .averaging import (
    TorusGrid,
    average_direct,
    average_transform,
    maximal_function,
    multiplier_m,
    phi,
    scale_norm,
)
from .circle import (
    approx_error_grid,
    count_terms_exhaustive,
    eta_s,
    nearest_center_in_band,
    signed_offset,
)
from .dynamics import TorusRotationSystem, transference_check
from .errors import DomainError
from .expsum import (
    RationalPoint,
    fit_decay,
    gauss_sum,
    gauss_sum_table,
    reduced_mask,
)
from .lattice import Box, LatticeFunction
from .polymap import MultiIndexSet, build_gamma, lift_polynomial_map, parse_polynomial_map
from .variation import (
    RealSequence,
    long_short_split,
    variation_bruteforce,
    variation_exact,
    variation_with_sup,
)


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one verification suite."""

    name: str
    passed: bool
    detail: str
    values: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag} {self.name}: {self.detail}"


def _gamma12() -> MultiIndexSet:
    return build_gamma(1, 2)


def _random_complex(rng, n: int) -> tuple[complex, ...]:
    return tuple(complex(a, b) for a, b in zip(rng.normal(size=n), rng.normal(size=n)))


# ----------------------------------------------------------------------
# 1. averaging oracle
# ----------------------------------------------------------------------


def check_averaging_oracle(seed: int = 0) -> CheckResult:
    """Transform-based averaging equals the direct sum on random inputs."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    gamma = _gamma12()
    box = Box(lo=(0, 0), hi=(63, 63))
    worst = 0.0
    trials = 200
    for _ in range(trials):
        n = int(rng.integers(1, 9))
        vals = np.zeros(box.shape)
        for _ in range(int(rng.integers(1, 40))):
            vals[rng.integers(0, 64), rng.integers(0, 64)] = rng.normal()
        f = LatticeFunction(box=box, values=vals)
        a = average_direct(f, n, gamma)
        b = average_transform(f, n, gamma)
        va = np.asarray(a.to_dense().values, dtype=np.complex128)
        vb = np.asarray(b.to_dense().values, dtype=np.complex128)
        scale = max(1.0, float(np.abs(va).max()))
        worst = max(worst, float(np.abs(va - vb).max()) / scale)
    passed = worst <= 1e-9
    return CheckResult(
        name="averaging-oracle",
        passed=passed,
        detail=f"max relative gap {worst:.3e} over {trials} random inputs (tol 1e-09)",
        values={"max_relative_gap": worst, "trials": trials, "tolerance": 1e-9},
        seconds=time.time() - t0,
    )


# ----------------------------------------------------------------------
# 2. variation oracle
# ----------------------------------------------------------------------


def check_variation_oracle(seed: int = 0) -> CheckResult:
    """Dynamic-programming variation equals exhaustive enumeration."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    worst = 0.0
    trials = 500
    rs = (1.0, 2.0, 2.5, 4.0)
    for i in range(trials):
        n = int(rng.integers(2, 13))
        seq = RealSequence.from_values(_random_complex(rng, n))
        r = rs[i % len(rs)]
        a = variation_exact(seq, r)
        b = variation_bruteforce(seq, r)
        worst = max(worst, abs(a.value - b.value))
    passed = worst <= 1e-12
    return CheckResult(
        name="variation-oracle",
        passed=passed,
        detail=f"max |dp - bruteforce| {worst:.3e} over {trials} sequences (tol 1e-12)",
        values={"max_gap": worst, "trials": trials, "tolerance": 1e-12},
        seconds=time.time() - t0,
    )


# ----------------------------------------------------------------------
# 3. variation inequality suite
# ----------------------------------------------------------------------


def check_variation_inequalities(seed: int = 0) -> CheckResult:
    """Six classical variation inequalities on random sequences."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    tol = 1e-9
    violations = 0
    worst_longshort = 0.0
    trials = 1000
    for i in range(trials):
        n = int(rng.integers(3, 33))
        vals = _random_complex(rng, n)
        seq = RealSequence.from_values(vals)
        r_lo, r_hi = sorted(rng.uniform(1.0, 6.0, size=2))
        v_lo = variation_exact(seq, float(r_lo)).value
        v_hi = variation_exact(seq, float(r_hi)).value
        # (i) r-monotonicity
        if v_hi > v_lo + tol:
            violations += 1
        # (ii) sup bound with arbitrary j0
        j0 = int(rng.integers(0, n))
        sup = max(abs(v) for v in vals)
        if sup > v_lo + abs(vals[j0]) + tol:
            violations += 1
        # (iii) splitting with constant 2 on the sup
        w = int(rng.integers(1, n - 1))
        left = RealSequence.from_values(vals[:w])
        right = RealSequence.from_values(vals[w:])
        r = float(rng.choice((1.5, 2.0, 3.0)))
        whole = variation_exact(seq, r).value
        bound = (
            2 * sup
            + variation_exact(left, r).value
            + variation_exact(right, r).value
        )
        if whole > bound + tol:
            violations += 1
        # (iv) l2 bound for r >= 2
        r2 = float(rng.uniform(2.0, 6.0))
        v2 = variation_exact(seq, r2).value
        if v2 > 2.0 * math.sqrt(sum(abs(v) ** 2 for v in vals)) + tol:
            violations += 1
    # (v) dyadic block bound for lengths 2^s, and (vi) long/short comparison
    for s in range(1, 9):
        m = 2**s + 1
        vals = _random_complex(rng, m)
        seq = RealSequence.from_values(vals, start=0)
        r = 2.0
        v = variation_exact(seq, r).value
        dyadic = 0.0
        for i in range(s + 1):
            step = 2**i
            dyadic += math.sqrt(
                sum(
                    abs(vals[(j + 1) * step] - vals[j * step]) ** 2
                    for j in range(2 ** (s - i))
                )
            )
        if v > math.sqrt(2.0) * dyadic + tol:
            violations += 1
        seq1 = RealSequence.from_values(_random_complex(rng, 2**s), start=1)
        long_r, short_r = long_short_split(seq1, 2.5)
        vv = variation_exact(seq1, 2.5).value
        denom = long_r.value + short_r.value
        if denom > 0:
            worst_longshort = max(worst_longshort, vv / denom)
    passed = violations == 0 and worst_longshort <= 4.0
    return CheckResult(
        name="variation-inequalities",
        passed=passed,
        detail=(
            f"{violations} violations over {trials} sequences; "
            f"long/short constant {worst_longshort:.3f} (cap 4)"
        ),
        values={
            "violations": violations,
            "trials": trials,
            "long_short_constant": worst_longshort,
        },
        seconds=time.time() - t0,
    )


# ----------------------------------------------------------------------
# 4. Gauss-sum decay
# ----------------------------------------------------------------------


def check_gauss_decay(seed: int = 0) -> CheckResult:
    """Reduced Gauss sums decay like a power of the denominator.

    Sweeps all odd q <= 511, fits the exponent of max over reduced points,
    and checks |G| = q^(-1/2) exactly at odd primes with numerators (q, 1).
    """
    t0 = time.time()
    gamma = _gamma12()
    pairs = []
    for q in range(3, 512, 2):
        table = gauss_sum_table(q, gamma)
        mask = reduced_mask(q, gamma.d)
        m = float(np.abs(table)[mask].max())
        pairs.append((q, m))
    fit = fit_decay(tuple(pairs))
    delta_hat = fit.delta_hat

    worst_prime = 0.0
    for q in (3, 5, 7, 11, 13, 101, 257, 509):
        g = gauss_sum(RationalPoint(numerators=(q, 1), q=q), gamma)
        worst_prime = max(worst_prime, abs(abs(g) - q**-0.5))
    passed = delta_hat >= 0.4 and worst_prime <= 1e-9
    return CheckResult(
        name="gauss-decay",
        passed=passed,
        detail=(
            f"fitted exponent {delta_hat:.4f} (need >= 0.4); "
            f"prime-case gap to q^(-1/2) max {worst_prime:.2e} (tol 1e-09)"
        ),
        values={
            "delta_hat": delta_hat,
            "worst_prime_gap": worst_prime,
            "q_max": 511,
        },
        seconds=time.time() - t0,
    )


# ----------------------------------------------------------------------
# 5. nu approximation decay on a grid
# ----------------------------------------------------------------------


def check_nu_approximation(seed: int = 0) -> CheckResult:
    """sup|m_N - nu_N| on a 64x64 grid decays across dyadic N."""
    t0 = time.time()
    gamma = _gamma12()
    grid = TorusGrid(modulus=64, d=2)
    ns = (16, 32, 64, 128, 256, 512, 1024)
    errs = []
    for n in ns:
        gep = approx_error_grid(n, grid, "nu", gamma)
        errs.append((n, gep.sup_error))
    values = [e for _, e in errs]
    fit = fit_decay(tuple(errs))
    positive = all(v > 0 for v in values)
    halved = values[-1] <= 0.5 * values[0]
    sloped = fit.slope <= -0.05
    passed = positive and halved and sloped
    return CheckResult(
        name="nu-approximation",
        passed=passed,
        detail=(
            f"sup errors {values[0]:.3e} .. {values[-1]:.3e}, "
            f"slope {fit.slope:.2f} (need <= -0.05, positive, last <= half of first)"
        ),
        values={
            "ns": list(ns),
            "sup_errors": values,
            "slope": fit.slope,
            "strictly_positive": positive,
            "halved": halved,
        },
        seconds=time.time() - t0,
    )


# ----------------------------------------------------------------------
# 6. rational-point factorization decay
# ----------------------------------------------------------------------


def check_rational_factorization(seed: int = 0) -> CheckResult:
    """|m_N - G * Phi_N| decays at points near admissible rationals.

    Offsets follow theta_g = c_g N^(0.1 - |g|) with fixed random c; the
    denominator constraint q <= N^0.1 pins q = 1 across this N range, so
    the centers are the zero point.
    """
    t0 = time.time()
    rng = np.random.default_rng(seed)
    gamma = _gamma12()
    ns = tuple(2**j for j in range(6, 13))
    trials = 50
    cs = rng.uniform(-1.0, 1.0, size=(trials, 2))
    sups = []
    for n in ns:
        radii = [float(n ** (0.1 - w)) for w in gamma.weights]
        worst = 0.0
        for c in cs:
            theta = tuple(float(ci) * r for ci, r in zip(c, radii))
            mv = multiplier_m(theta, n, gamma)
            pv = phi(theta, n, gamma)
            worst = max(worst, abs(mv.value - pv.value))
        sups.append((n, worst))
    fit = fit_decay(tuple(sups))
    passed = fit.slope <= -0.2
    return CheckResult(
        name="rational-factorization",
        passed=passed,
        detail=f"sup-error slope {fit.slope:.3f} over N=2^6..2^12 (need <= -0.2)",
        values={
            "ns": list(ns),
            "sup_errors": [e for _, e in sups],
            "slope": fit.slope,
            "trials": trials,
        },
        seconds=time.time() - t0,
    )


# ----------------------------------------------------------------------
# 7. oscillatory integral bounds
# ----------------------------------------------------------------------


def check_oscillatory_bounds(seed: int = 0) -> CheckResult:
    """Quadrature matches the linear closed form; decay exponent holds.

    Linear case: Phi_N(xi) = (e^(2 pi i xi N') - 1)/(2 pi i xi N') with
    N' = N on a single linear coordinate.  General case: the rescaled
    product |Phi_N| * ||N^A xi||^(1/d) stays bounded.  Individual
    products swing over two orders of magnitude with the alignment of
    the coefficients, so the trend is fitted on the dyadic-bin maxima
    (the empirical envelope), not on the raw scatter.  Signs are drawn
    at random so that interior stationary points, the extremal case for
    the bound, occur in the sample.
    """
    t0 = time.time()
    rng = np.random.default_rng(seed)
    glin = build_gamma(1, 1)
    worst_lin = 0.0
    for _ in range(100):
        xi = float(rng.uniform(-3.0, 3.0))
        n = int(rng.integers(4, 2049))
        p = phi((xi,), n, glin)
        z = 2j * math.pi * xi * n
        closed = (np.exp(z) - 1.0) / z if xi != 0 else 1.0
        worst_lin = max(worst_lin, abs(p.value - closed))

    gamma = _gamma12()
    bins: dict[int, float] = {}
    recorded = 0.0
    for _ in range(160):
        n = int(2 ** rng.integers(4, 11))
        u = float(2.0 ** rng.uniform(0.0, 12.0))
        c1, c2 = rng.uniform(0.3, 1.0, size=2)
        s1, s2 = rng.choice([-1.0, 1.0], size=2)
        sel = rng.integers(0, 2)
        x1 = s1 * (u if sel == 0 else c1 * u) / n
        x2 = s2 * (c2 * u if sel == 0 else u) / n**2
        xi = (
            math.copysign(min(abs(x1), 0.5), x1),
            math.copysign(min(abs(x2), 0.5), x2),
        )
        un = float(scale_norm(xi, n, gamma))
        if un <= 0:
            continue
        product = abs(phi(xi, n, gamma).value) * un**0.5
        recorded = max(recorded, product)
        b = math.floor(math.log2(un))
        bins[b] = max(bins.get(b, 0.0), product)
    envelope = tuple(sorted((2.0 ** (b + 0.5), m) for b, m in bins.items()))
    fit = fit_decay(envelope)
    growth = -fit.slope  # positive growth means the envelope rises
    passed = worst_lin <= 1e-10 and len(envelope) >= 8 and growth <= 0.05
    return CheckResult(
        name="oscillatory-bounds",
        passed=passed,
        detail=(
            f"closed-form gap {worst_lin:.2e} (tol 1e-10); "
            f"rescaled product sup {recorded:.3f}, envelope slope {growth:.3f} "
            f"over {len(envelope)} dyadic bins (cap 0.05)"
        ),
        values={
            "closed_form_gap": worst_lin,
            "product_max": recorded,
            "trend_slope": growth,
            "envelope_bins": float(len(envelope)),
        },
        seconds=time.time() - t0,
    )


# ----------------------------------------------------------------------
# 8. lifting identity
# ----------------------------------------------------------------------


def check_lifting(seed: int = 0) -> CheckResult:
    """Averages along a polynomial equal canonical averages of its lift.

    For P(n) = 5 n^2 + 3 n: the average of f at x + L u equals the
    canonical average of the truncated lift F_x(v) = f(x + L v) at u,
    exactly in integer arithmetic.
    """
    t0 = time.time()
    rng = np.random.default_rng(seed)
    pm = parse_polynomial_map(
        '{"k": 1, "components": [{"terms": '
        '[{"gamma": [2], "coeff": 5}, {"gamma": [1], "coeff": 3}]}]}'
    )
    lifted = lift_polynomial_map(pm)
    gamma = lifted.gamma
    (lrow,) = lifted.linear_map
    mismatches = 0
    trials = 100
    for _ in range(trials):
        n = int(rng.integers(1, 9))
        f = {int(v): int(rng.integers(-9, 10)) for v in rng.integers(-400, 400, size=30)}
        x = int(rng.integers(-50, 50))
        u = tuple(int(v) for v in rng.integers(-5, 6, size=gamma.d))
        lu = sum(l * c for l, c in zip(lrow, u))
        lhs = sum(
            Fraction(f.get(x + lu - pm((y,))[0], 0)) for y in range(1, n + 1)
        ) / Fraction(n)
        rhs = sum(
            Fraction(
                f.get(
                    x
                    + sum(
                        l * (uc - qc)
                        for l, uc, qc in zip(
                            lrow, u, (y**g[0] for g in gamma.indices)
                        )
                    ),
                    0,
                )
            )
            for y in range(1, n + 1)
        ) / Fraction(n)
        if lhs != rhs:
            mismatches += 1
    passed = mismatches == 0
    return CheckResult(
        name="lifting",
        passed=passed,
        detail=f"{mismatches} mismatches over {trials} exact instances",
        values={"mismatches": mismatches, "trials": trials},
        seconds=time.time() - t0,
    )


# ----------------------------------------------------------------------
# 9. transference
# ----------------------------------------------------------------------


def check_transference(seed: int = 0) -> CheckResult:
    """Cyclic-system orbit averages equal lattice averages pointwise."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    gamma = _gamma12()
    worst = 0.0
    trials = 100
    for i in range(trials):
        modulus = int(rng.integers(3, 17))
        n = int(rng.integers(1, 7))
        rep = transference_check(modulus, n, gamma, seed=seed * 1000 + i)
        worst = max(worst, rep.max_gap)
    passed = worst <= 1e-12
    return CheckResult(
        name="transference",
        passed=passed,
        detail=f"max pointwise gap {worst:.3e} over {trials} instances (tol 1e-12)",
        values={"max_gap": worst, "trials": trials},
        seconds=time.time() - t0,
    )


# ----------------------------------------------------------------------
# 10. maximal-operator stability
# ----------------------------------------------------------------------


def _dyadic_maximal_ratio(f: LatticeFunction, n_top: int, map_like) -> float:
    ns = []
    n = 2
    while n <= n_top:
        ns.append(n)
        n *= 2
    mx = maximal_function(f, ns, map_like)
    return float(mx.lp_norm(2.0) / f.lp_norm(2.0))


def check_maximal_stability(seed: int = 0) -> CheckResult:
    """Dyadic maximal l2 ratios stay stable as the scale range grows.

    Also compares P(n) = n^2 against P(n) = n^2 + 10^6 n^3: the ratio must
    be coefficient-insensitive within a factor 1.5.
    """
    t0 = time.time()
    rng = np.random.default_rng(seed)
    sq = parse_polynomial_map('{"k": 1, "components": [{"terms": [{"gamma": [2], "coeff": 1}]}]}')
    big = parse_polynomial_map(
        '{"k": 1, "components": [{"terms": '
        '[{"gamma": [2], "coeff": 1}, {"gamma": [3], "coeff": 1000000}]}]}'
    )
    worst_growth = 0.0
    worst_coeff = 0.0
    trials = 50
    for _ in range(trials):
        supp = int(rng.integers(4, 33))
        entries = {
            (int(p),): float(v)
            for p, v in zip(rng.integers(0, 64, size=supp), rng.uniform(0.1, 1.0, size=supp))
        }
        f = LatticeFunction(box=Box(lo=(0,), hi=(63,)), entries=entries)
        r16 = _dyadic_maximal_ratio(f, 16, sq)
        r64 = _dyadic_maximal_ratio(f, 64, sq)
        worst_growth = max(worst_growth, r64 / r16)
        b64 = _dyadic_maximal_ratio(f, 64, big)
        worst_coeff = max(worst_coeff, max(r64 / b64, b64 / r64))
    passed = worst_growth <= 1.25 and worst_coeff <= 1.5
    return CheckResult(
        name="maximal-stability",
        passed=passed,
        detail=(
            f"range-doubling ratio max {worst_growth:.3f} (cap 1.25); "
            f"coefficient sensitivity max {worst_coeff:.3f} (cap 1.5)"
        ),
        values={
            "range_ratio_max": worst_growth,
            "coefficient_ratio_max": worst_coeff,
            "trials": trials,
        },
        seconds=time.time() - t0,
    )


# ----------------------------------------------------------------------
# 11. ergodic averages on the rotation system
# ----------------------------------------------------------------------


def check_weyl_ergodic(seed: int = 0) -> CheckResult:
    """Squares-driven rotation averages of a character decay like Weyl sums."""
    t0 = time.time()
    gamma = _gamma12()
    alpha = math.sqrt(2.0) - 1.0
    system = TorusRotationSystem(alphas=(alpha,))

    def f(pts: np.ndarray) -> np.ndarray:
        return np.exp(2j * np.pi * pts[:, 0])

    sq = parse_polynomial_map('{"k": 1, "components": [{"terms": [{"gamma": [2], "coeff": 1}]}]}')
    ns = tuple(2**j for j in range(6, 13))
    mags = []
    worst_oracle = 0.0
    for n in ns:
        v = system.average(f, (0.0,), n, sq)
        direct = complex(
            np.mean(np.exp(2j * np.pi * ((np.arange(1, n + 1) ** 2) * alpha % 1.0)))
        )
        worst_oracle = max(worst_oracle, abs(v - direct))
        mags.append(abs(v))
    drops = sum(1 for a, b in zip(mags, mags[1:]) if b < a)
    passed = mags[-1] < 0.1 and drops >= 5 and worst_oracle <= 1e-12
    return CheckResult(
        name="weyl-ergodic",
        passed=passed,
        detail=(
            f"|A_N| at 2^12 = {mags[-1]:.4f} (need < 0.1); "
            f"{drops}/6 dyadic drops (need >= 5); oracle gap {worst_oracle:.1e}"
        ),
        values={
            "ns": list(ns),
            "magnitudes": mags,
            "drops": drops,
            "oracle_gap": worst_oracle,
        },
        seconds=time.time() - t0,
    )


# ----------------------------------------------------------------------
# 12. bump kernel l1 bounds (expected to fail; see module docstring)
# ----------------------------------------------------------------------


def _bump_samples(t: int, weights, m: int) -> np.ndarray:
    j = np.arange(m)
    j = np.minimum(j, m - j)
    axes = [j * (t**w) for w in weights]
    s = np.maximum.outer(axes[0], axes[1]) / m
    out = np.zeros_like(s)
    out[s <= 0.25] = 1.0
    mid = (s > 0.25) & (s < 0.5)
    w = (0.5 - s[mid]) / 0.25
    a = np.exp(-1.0 / w)
    b = np.exp(-1.0 / (1.0 - w))
    out[mid] = a / (a + b)
    return out


def check_bump_kernel(seed: int = 0) -> CheckResult:
    """l1 norms of the discretized cutoff kernel and its difference kernel.

    Thresholds mirror idealized constants (1.05 and +0.05 slack); the
    telescoping lower bound makes them unreachable for any plateau cutoff,
    so this suite documents the measured constants and fails.
    """
    t0 = time.time()
    rng = np.random.default_rng(seed)
    weights = (1, 2)
    m = 512
    l1 = {}
    for t in (1, 2, 4):
        h = _bump_samples(t, weights, m)
        l1[t] = float(np.abs(np.fft.ifft2(h)).sum())
    l1_max = max(l1.values())

    j = np.arange(m)
    xi = np.where(j < m // 2, j, j - m) / m
    diff_margin = -np.inf
    for _ in range(20):
        u = rng.normal(size=2)
        for t in (1, 2, 4):
            h = _bump_samples(t, weights, m)
            phase = np.exp(2j * np.pi * np.add.outer(xi * u[0], xi * u[1]))
            dl1 = float(np.abs(np.fft.ifft2(h * (1 - phase))).sum())
            bound = max(abs(u[0]) / t, abs(u[1]) / t**2) + 0.05
            diff_margin = max(diff_margin, dl1 - bound)
    passed = l1_max <= 1.05 and diff_margin <= 0.0
    return CheckResult(
        name="bump-kernel",
        passed=passed,
        detail=(
            f"kernel l1 max {l1_max:.4f} (threshold 1.05); "
            f"difference-kernel excess {diff_margin:.4f} (threshold 0); "
            "see notes: thresholds unreachable for plateau cutoffs"
        ),
        values={
            "l1_by_t": {str(t): v for t, v in l1.items()},
            "l1_max": l1_max,
            "difference_excess": diff_margin,
        },
        seconds=time.time() - t0,
    )


# ----------------------------------------------------------------------
# 13. residue-class norm equidistribution
# ----------------------------------------------------------------------


def check_residue_classes(seed: int = 0) -> CheckResult:
    """Band-limited functions spread l2 mass evenly over residue classes.

    Modulus 2 (the level-0 factorial modulus), 32x32 grid, band limited to
    ||xi|| <= 1/8: with the band inside the alias-free window the class
    norms agree exactly; the threshold allows ratio 4.
    """
    t0 = time.time()
    rng = np.random.default_rng(seed)
    m, q = 32, 2
    cut = m // 8
    worst = 0.0
    trials = 50
    for _ in range(trials):
        spectrum = np.zeros((m, m), dtype=np.complex128)
        for j1 in range(-cut, cut + 1):
            for j2 in range(-cut, cut + 1):
                spectrum[j1 % m, j2 % m] = rng.normal() + 1j * rng.normal()
        g = np.fft.ifft2(spectrum)
        norms = []
        for cls in itertools.product(range(q), repeat=2):
            sub = g[cls[0] :: q, cls[1] :: q]
            norms.append(math.sqrt(float((np.abs(sub) ** 2).sum())))
        worst = max(worst, max(norms) / min(norms))
    passed = worst <= 4.0
    return CheckResult(
        name="residue-classes",
        passed=passed,
        detail=f"max/min class-norm ratio {worst:.6f} over {trials} trials (cap 4)",
        values={"worst_ratio": worst, "trials": trials, "modulus": q},
        seconds=time.time() - t0,
    )


# ----------------------------------------------------------------------
# 14. single-term property of the band sums
# ----------------------------------------------------------------------


def check_nu_single_term(seed: int = 0) -> CheckResult:
    """At most one center per band reaches any grid point (exhaustive).

    Enumerates every band-s center for s <= 3 over a 128x128 grid and
    counts cutoff supports containing each point; also cross-checks the
    nearest-center lookup against the census.
    """
    t0 = time.time()
    gamma = _gamma12()
    grid = TorusGrid(modulus=128, d=2)
    counterexamples = 0
    lookup_mismatches = 0
    max_count = 0
    for s in range(4):
        counts = count_terms_exhaustive(grid, s, gamma)
        max_count = max(max_count, int(counts.max()))
        counterexamples += int((counts > 1).sum())
        spots = np.argwhere(counts == 1)
        stride = max(1, len(spots) // 50)
        for idx in spots[::stride]:
            xs = grid.point(tuple(int(i) for i in idx))
            pt = nearest_center_in_band(xs, s, gamma)
            if pt is None:
                lookup_mismatches += 1
                continue
            theta = tuple(
                signed_offset(x, Fraction(a % pt.q, pt.q))
                for x, a in zip(xs, pt.numerators)
            )
            if eta_s(s, gamma, theta) == 0.0:
                lookup_mismatches += 1
    passed = counterexamples == 0 and lookup_mismatches == 0
    return CheckResult(
        name="nu-single-term",
        passed=passed,
        detail=(
            f"{counterexamples} multi-term grid points (max count {max_count}); "
            f"{lookup_mismatches} lookup mismatches"
        ),
        values={
            "counterexamples": counterexamples,
            "max_count": max_count,
            "lookup_mismatches": lookup_mismatches,
        },
        seconds=time.time() - t0,
    )


SUITES = {
    "averaging-oracle": check_averaging_oracle,
    "variation-oracle": check_variation_oracle,
    "variation-inequalities": check_variation_inequalities,
    "gauss-decay": check_gauss_decay,
    "nu-approximation": check_nu_approximation,
    "rational-factorization": check_rational_factorization,
    "oscillatory-bounds": check_oscillatory_bounds,
    "lifting": check_lifting,
    "transference": check_transference,
    "maximal-stability": check_maximal_stability,
    "weyl-ergodic": check_weyl_ergodic,
    "bump-kernel": check_bump_kernel,
    "residue-classes": check_residue_classes,
    "nu-single-term": check_nu_single_term,
}

# Suites whose thresholds are provably out of reach; they run and report
# measured values but are expected to fail.
EXPECTED_FAILURES = ("bump-kernel",)


def run_suite(name: str, seed: int = 0) -> CheckResult:
    if name not in SUITES:
        raise DomainError(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    return SUITES[name](seed=seed)


def run_all(seed: int = 0) -> list[CheckResult]:
    return [fn(seed=seed) for fn in SUITES.values()]
