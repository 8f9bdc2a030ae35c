"""Arc classification, smooth cutoffs, approximating multipliers."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import polyergo.circle as circle
from polyergo.averaging import TorusGrid, multiplier_m
from polyergo.circle import (
    ArcParams,
    bump,
    bump_aniso,
    classify_arc,
    count_terms_exhaustive,
    dirichlet_approx,
    eta_radius,
    eta_s,
    iw_schedule,
    lambda_mult,
    nearest_center_in_band,
    nu,
    nu_on_grid,
    nu_terms,
    omega,
    refine_arc_membership,
    rho_t,
    signed_offset,
    torus_distance,
)
from polyergo.errors import DomainError
from polyergo.expsum import RationalPoint, factorial_modulus, gauss_sum, rational_family
from polyergo.polymap import build_gamma

GAMMA12 = build_gamma(1, 2)


# ----------------------------------------------------------------------
# cutoffs
# ----------------------------------------------------------------------


def test_bump_plateau_and_support_are_exact():
    assert bump((Fraction(1, 4), Fraction(-1, 8))) == 1.0
    assert bump((Fraction(1, 2), Fraction(0))) == 0.0
    assert bump((Fraction(5, 8),)) == 0.0
    mid = bump((Fraction(3, 8),))
    assert 0.0 < mid < 1.0


def test_bump_constant_on_max_norm_shells():
    target = bump((Fraction(3, 8), Fraction(0)))
    for x in [
        (Fraction(3, 8), Fraction(3, 8)),
        (Fraction(-3, 8), Fraction(1, 4)),
        (Fraction(1, 8), Fraction(3, 8)),
    ]:
        assert bump(x) == target


def test_bump_monotone_in_the_radius():
    vals = [bump((Fraction(j, 64),)) for j in range(16, 33)]
    for a, b in zip(vals, vals[1:]):
        assert b <= a


def test_bump_aniso_rescales_each_axis():
    # weight-2 axis shrinks by base^2
    v = bump_aniso(10, (1, 2), (Fraction(1, 40), Fraction(1, 400)))
    assert v == 1.0
    assert bump_aniso(10, (1, 2), (Fraction(1, 40), Fraction(1, 100))) == 0.0


def test_eta_support_radius_is_sharp():
    s = 1
    r1 = eta_radius(s, 1)
    assert eta_s(s, GAMMA12, (r1, Fraction(0))) == 0.0
    inside = (r1 * Fraction(99, 100), Fraction(0))
    assert eta_s(s, GAMMA12, inside) > 0.0


def test_rho_support_radius_is_sharp():
    from polyergo.circle import rho_radius

    t = 0
    r1 = rho_radius(t, 1, GAMMA12.d)
    assert rho_t(t, GAMMA12, (r1, Fraction(0))) == 0.0
    assert rho_t(t, GAMMA12, (r1 * Fraction(99, 100), Fraction(0))) > 0.0
    # the plateau fills the inner half of the support
    assert rho_t(t, GAMMA12, (r1 * Fraction(49, 100), Fraction(0))) == 1.0


# ----------------------------------------------------------------------
# torus geometry and rational approximation
# ----------------------------------------------------------------------


def test_torus_distance_wraps():
    assert torus_distance(Fraction(9, 10), Fraction(1, 10)) == Fraction(1, 5)
    assert torus_distance(Fraction(1, 2), Fraction(1, 2)) == 0


def test_signed_offset_lands_in_half_open_interval():
    assert signed_offset(Fraction(61, 64), Fraction(0)) == Fraction(-3, 64)
    assert signed_offset(Fraction(1, 2), Fraction(0)) == Fraction(1, 2)
    assert signed_offset(Fraction(0), Fraction(1, 2)) == Fraction(1, 2)


@given(st.fractions(min_value=0, max_value=1), st.integers(1, 300))
def test_dirichlet_approx_guarantee(x, qmax):
    a, q = dirichlet_approx(x, qmax)
    assert 1 <= q <= qmax
    assert math.gcd(a, q) == 1
    assert abs(x - Fraction(a, q)) <= Fraction(1, q * (qmax + 1))


def test_dirichlet_approx_exact_rational():
    a, q = dirichlet_approx(Fraction(3, 7), 10)
    assert (a, q) == (3, 7)


# ----------------------------------------------------------------------
# arc classification and shells
# ----------------------------------------------------------------------


def test_arc_params_validate():
    with pytest.raises(DomainError):
        ArcParams(alpha=0.2, beta=0.1)  # 4(alpha+beta) >= 1
    p = ArcParams(alpha=0.1, beta=0.1, delta_hat=0.5)
    assert p.weyl_constraint_ok


def test_classify_near_zero_is_major_with_q1():
    params = ArcParams(alpha=0.1, beta=0.1)
    cls = classify_arc((1e-5, 1e-9), 4096, params, GAMMA12)
    assert cls.major
    assert cls.center.q == 1


def test_classify_far_point_is_minor():
    params = ArcParams(alpha=0.1, beta=0.1)
    cls = classify_arc((0.5, 0.25), 4096, params, GAMMA12)
    assert not cls.major
    assert cls.center is None


def test_classify_prefers_the_smallest_denominator():
    params = ArcParams(alpha=0.2, beta=0.02)
    n = 256  # 256^0.2 > 3, so q runs up to 3
    xi = (Fraction(1, 3), Fraction(2, 3))
    cls = classify_arc(xi, n, params, GAMMA12)
    assert cls.major and cls.center.q == 3


def test_refine_arc_membership_nesting():
    xi = (Fraction(1, 3) + Fraction(1, 5000), Fraction(2, 3))
    n, s = 6, 1  # band of q = 3
    rec = refine_arc_membership(xi, n, s, 0, GAMMA12)
    assert rec.center is not None and rec.center.q == 3
    if rec.in_inner:
        assert rec.in_outer
    if rec.shell_u is not None:
        tighter = refine_arc_membership(xi, n, s, rec.shell_u, GAMMA12)
        assert tighter.in_shell
        beyond = refine_arc_membership(xi, n, s, rec.shell_u + 1, GAMMA12)
        assert not beyond.in_shell


def test_refine_rejects_shells_below_the_floor():
    with pytest.raises(DomainError):
        refine_arc_membership((0.1, 0.1), 10, 0, -5, GAMMA12)


# ----------------------------------------------------------------------
# nearest center lookup: enumeration vs convergents
# ----------------------------------------------------------------------


def test_band_zero_center_is_the_integer_point():
    pt = nearest_center_in_band([Fraction(1, 100), Fraction(99, 100)], 0, GAMMA12)
    assert pt is not None and pt.q == 1


@settings(max_examples=60)
@given(
    st.integers(1, 6),
    st.fractions(min_value=0, max_value=1),
    st.fractions(min_value=0, max_value=1),
)
def test_lookup_routes_agree(s, x1, x2):
    """The continued-fraction route returns exactly what enumeration does."""
    xs = [x1 % 1, x2 % 1]
    by_enum = nearest_center_in_band(xs, s, GAMMA12)
    limit = circle._BAND_ENUM_LIMIT
    circle._BAND_ENUM_LIMIT = 0
    try:
        by_conv = nearest_center_in_band(xs, s, GAMMA12)
    finally:
        circle._BAND_ENUM_LIMIT = limit
    if by_enum is None:
        assert by_conv is None
    else:
        assert by_conv is not None
        assert by_conv.q == by_enum.q and by_conv.numerators == by_enum.numerators


def test_lookup_finds_a_deep_band_center():
    # q = 1023 lies in band s = 9; the weight-2 axis support is 10^-20 wide
    pt = RationalPoint(numerators=(512, 1), q=1023)
    xs = [
        Fraction(512, 1023) + Fraction(1, 10**12),
        Fraction(1, 1023) + Fraction(1, 10**22),
    ]
    found = nearest_center_in_band(xs, 9, GAMMA12)
    assert found is not None and found.q == 1023
    assert found.numerators == pt.numerators


# ----------------------------------------------------------------------
# approximating multipliers
# ----------------------------------------------------------------------


def test_nu_is_a_single_band_term_near_a_center():
    base = RationalPoint(numerators=(1, 1), q=3)
    xi = tuple(Fraction(a, 3) + Fraction(1, 10**7) for a in base.numerators)
    terms = nu_terms(xi, 64, 4, GAMMA12)
    assert len(terms) == 1
    s, pt, _ = terms[0]
    assert s == 1 and pt.q == 3
    v = nu(xi, 64, 4, GAMMA12)
    assert v.kind == "nu" and v.tail_bound is not None
    assert v.provenance == ((1, pt),)


def test_nu_approximates_m_near_a_center():
    xi = (Fraction(1, 3) + Fraction(1, 3000), Fraction(2, 3))
    n = 3 * 2048
    mv = multiplier_m(xi, n, GAMMA12)
    nv = nu(xi, n, 6, GAMMA12)
    assert abs(mv.value - nv.value) <= 0.05


def test_nu_on_grid_matches_pointwise_nu():
    grid = TorusGrid(modulus=16, d=2)
    s_max = 4
    table = nu_on_grid(24, grid, GAMMA12, s_max=s_max)
    for idx, pt in grid.points():
        direct = nu(pt, 24, s_max, GAMMA12)
        assert abs(table[idx] - direct.value) <= 1e-9


def test_count_terms_exhaustive_confirms_single_coverage():
    grid = TorusGrid(modulus=32, d=2)
    for s in (0, 1, 2):
        counts = count_terms_exhaustive(grid, s, GAMMA12)
        assert counts.max() <= 1


def test_omega_at_a_factorial_center_is_the_gauss_sum():
    t = 0
    qt = factorial_modulus(t).value
    pt = RationalPoint(numerators=(1, 1), q=qt)
    v = omega(pt.as_fractions(), 32, t, GAMMA12)
    assert v.kind == "omega"
    assert abs(v.value - gauss_sum(pt, GAMMA12)) <= 1e-12


def test_omega_vanishes_between_centers():
    t = 0
    v = omega((0.23, 0.36), 32, t, GAMMA12)
    assert v.value == 0j


def test_lambda_keeps_only_large_reduced_divisors():
    t = 0
    qt = factorial_modulus(t).value  # 2
    pt = RationalPoint(numerators=(1, 1), q=2)
    v = lambda_mult(pt.as_fractions(), 32, t, GAMMA12)
    assert v.kind == "lambda"
    assert v.provenance is not None and v.provenance.q == 2
    # at the integer point the only candidate q = 1 < 2^(t+1), so nothing
    z = lambda_mult((Fraction(0), Fraction(0)), 32, t, GAMMA12)
    assert z.value == 0j
    assert qt == 2


def test_nu_and_m_agree_exactly_at_resonant_rationals():
    """q | N makes m_N(a/q) = G(a/q); nu reproduces it via its own center."""
    grid = TorusGrid(modulus=8, d=2)
    n = 8
    from polyergo.averaging import multiplier_m_grid

    mt = multiplier_m_grid(n, grid, GAMMA12)
    nt = nu_on_grid(n, grid, GAMMA12)
    assert float(np.abs(mt - nt).max()) <= 1e-9


# ----------------------------------------------------------------------
# threshold schedule
# ----------------------------------------------------------------------


def test_schedule_zero_below_threshold():
    sched = iw_schedule(0.5, 1.0, 0.5, 2)
    assert sched.zero
    assert sched.assignment(3) == "zero"


def test_schedule_split_above_threshold():
    sched = iw_schedule(8.0, 0.5, 0.5, 2)
    assert not sched.zero
    assert sched.t == math.floor(math.log2(8.0) / 0.5) + 1
    assert sched.kappa_t == 20 * 2 * (sched.t + 1)
    assert sched.assignment(0) == "average"
    assert sched.assignment(sched.cutoff - 1) == "average"
    assert sched.assignment(sched.cutoff) == "omega"


def test_schedule_level_grows_with_lambda():
    t_values = [iw_schedule(lam, 1.0, 0.25, 2).t for lam in (2.0, 16.0, 256.0)]
    assert t_values == sorted(t_values) and t_values[0] < t_values[-1]


def test_schedule_rejects_bad_parameters():
    with pytest.raises(DomainError):
        iw_schedule(-1.0, 1.0, 0.5, 2)
    with pytest.raises(DomainError):
        iw_schedule(2.0, 0.0, 0.5, 2)
    with pytest.raises(DomainError):
        iw_schedule(2.0, 1.0, 0.0, 2)
    sched = iw_schedule(2.0, 1.0, 0.5, 2)
    with pytest.raises(DomainError):
        sched.assignment(-1)


def test_schedule_jsonable_round_trip():
    import json

    sched = iw_schedule(4.0, 0.25, 0.5, 3)
    doc = json.loads(json.dumps(sched.to_jsonable()))
    assert doc["mode"] == "split" and doc["t"] == sched.t


# ----------------------------------------------------------------------
# band structure sanity
# ----------------------------------------------------------------------


def test_rational_family_separation_supports_single_terms():
    """Distinct band-s centers are farther apart than twice the cutoff radius."""
    s = 2
    fam = rational_family(s, GAMMA12)
    r = eta_radius(s, 1)
    for i, p1 in enumerate(fam):
        for p2 in fam[i + 1 :]:
            dist = max(
                torus_distance(Fraction(a1 % p1.q, p1.q), Fraction(a2 % p2.q, p2.q))
                for a1, a2 in zip(p1.numerators, p2.numerators)
            )
            assert dist > 2 * r
