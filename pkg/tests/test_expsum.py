"""Rational exponential sums, factorial moduli, decay fits."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from polyergo.errors import DomainError
from polyergo.expsum import (
    RationalPoint,
    divisor_family,
    divisors_of,
    factorial_modulus,
    fit_decay,
    gauss_sum,
    gauss_sum_table,
    rational_family,
    reduced_mask,
    reduced_residues,
    residue_count,
    residue_count_table,
)
from polyergo.polymap import build_gamma

GAMMA12 = build_gamma(1, 2)


def test_rational_point_reduction_flags():
    assert RationalPoint(numerators=(1, 2), q=5).reduced
    assert not RationalPoint(numerators=(2, 4), q=6).reduced
    assert RationalPoint(numerators=(1,), q=1).is_zero


def test_rational_point_rejects_bad_numerators():
    with pytest.raises(DomainError):
        RationalPoint(numerators=(0,), q=3)
    with pytest.raises(DomainError):
        RationalPoint(numerators=(4,), q=3)


def test_reduced_residues_count_is_jordan_totient():
    # d = 2: #\{a : gcd(gcd(a_1, a_2), q) = 1\} = q^2 prod (1 - p^-2)
    for q in (2, 3, 4, 6, 9, 12):
        pts = reduced_residues(q, 2)
        expected = q * q
        for p in {f for f in range(2, q + 1) if q % f == 0 and all(f % d for d in range(2, f))}:
            expected = expected * (p * p - 1) // (p * p)
        assert len(pts) == expected


def test_gauss_sum_q1_is_one():
    assert gauss_sum(RationalPoint(numerators=(1, 1), q=1), GAMMA12) == pytest.approx(1.0)


def test_gauss_sum_brute_force_small_cases():
    for q in (3, 4, 5):
        for pt in reduced_residues(q, 2):
            direct = sum(
                np.exp(2j * np.pi * ((pt.numerators[0] * y + pt.numerators[1] * y * y) % q) / q)
                for y in range(1, q + 1)
            ) / q
            assert abs(gauss_sum(pt, GAMMA12) - direct) <= 1e-12


def test_gauss_sum_table_matches_pointwise():
    q = 7
    table = gauss_sum_table(q, GAMMA12)
    for pt in reduced_residues(q, 2):
        idx = tuple(a % q for a in pt.numerators)
        assert abs(table[idx] - gauss_sum(pt, GAMMA12)) <= 1e-10


def test_prime_square_sum_has_exact_modulus():
    # for odd prime q and the pure-square point the classical value applies
    for q in (3, 5, 7, 11, 13):
        pt = RationalPoint(numerators=(q, 1), q=q)  # a_1 = 0 mod q, a_2 = 1
        assert abs(abs(gauss_sum(pt, GAMMA12)) - q**-0.5) <= 1e-12


def test_reduced_mask_agrees_with_reduced_residues():
    q = 6
    mask = reduced_mask(q, 2)
    listed = {tuple(a % q for a in pt.numerators) for pt in reduced_residues(q, 2)}
    from_mask = {idx for idx in np.ndindex(q, q) if mask[idx]}
    assert listed == from_mask


def test_rational_family_bands():
    fam0 = rational_family(0, GAMMA12)
    assert [pt.q for pt in fam0] == [1]
    fam2 = rational_family(2, GAMMA12)
    assert all(4 <= pt.q < 8 and pt.reduced for pt in fam2)
    qs = {pt.q for pt in fam2}
    assert qs == {4, 5, 6, 7}


def test_factorial_modulus_values():
    assert factorial_modulus(0).value == math.factorial(2)
    assert factorial_modulus(1).value == math.factorial(4)
    assert factorial_modulus(2).value == math.factorial(8)


def test_divisors_of():
    assert divisors_of(12) == [1, 2, 3, 4, 6, 12]
    assert divisors_of(1) == [1]


def test_divisor_family_respects_threshold():
    fam = divisor_family(0, GAMMA12)
    # Q_0 = 2, so only q = 2 >= 2^1 qualifies
    assert {pt.q for pt in fam} == {2}
    assert all(pt.reduced for pt in fam)


def test_residue_count_table_matches_direct_counts():
    t = 0
    table = residue_count_table(t, GAMMA12)
    q = factorial_modulus(t).value
    assert table["q"] == q
    for m in np.ndindex(q, q):
        assert table["counts"].get(m, 0) == residue_count(m, t, GAMMA12)
    assert sum(table["counts"].values()) == q ** GAMMA12.k


@given(st.floats(0.3, 0.7), st.floats(0.5, 3.0))
def test_fit_decay_recovers_planted_exponents(delta, c):
    qs = [3.0, 5.0, 9.0, 17.0, 33.0, 65.0]
    pairs = tuple((q, c * q**-delta) for q in qs)
    fit = fit_decay(pairs)
    assert fit.delta_hat == pytest.approx(delta, abs=1e-9)


def test_fit_decay_rejects_degenerate_input():
    with pytest.raises(DomainError):
        fit_decay(((2.0, 1.0),))
    with pytest.raises(DomainError):
        fit_decay(((2.0, 0.0), (4.0, 0.0)))


def test_gauss_decay_measured_over_odd_q():
    pairs = []
    for q in range(3, 128, 2):
        table = gauss_sum_table(q, GAMMA12)
        mask = reduced_mask(q, 2)
        pairs.append((float(q), float(np.abs(table[mask]).max())))
    fit = fit_decay(tuple(pairs))
    assert fit.delta_hat >= 0.4
