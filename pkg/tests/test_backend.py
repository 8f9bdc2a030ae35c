"""Compiled and NumPy kernels agree on values and witnesses."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polyergo import _corepy
from polyergo.backend import BACKEND
from polyergo.variation import RealSequence, variation_exact, witness_sum

try:
    from polyergo import _core
except ImportError:
    _core = None

needs_extension = pytest.mark.skipif(_core is None, reason="compiled extension absent")


def random_phase_inputs(seed: int, n: int, m: int, d: int):
    rng = np.random.default_rng(seed)
    points = rng.integers(-50, 50, size=(n, d)).astype(np.float64)
    xi = rng.uniform(-0.5, 0.5, size=(m, d))
    weights = rng.normal(size=n)
    return points, xi, weights


def test_numpy_phase_sum_matches_direct_loop():
    points, xi, weights = random_phase_inputs(0, 40, 3, 2)
    got = _corepy.phase_sum_weighted(points, weights, xi)
    assert got.shape == (3,)
    for row, g in zip(xi, got):
        direct = sum(
            w * np.exp(2j * np.pi * np.dot(p, row)) for p, w in zip(points, weights)
        )
        assert abs(g - direct) <= 1e-10
    unweighted = _corepy.phase_sum_weighted(points, None, xi)
    for row, g in zip(xi, unweighted):
        direct = sum(np.exp(2j * np.pi * np.dot(p, row)) for p in points)
        assert abs(g - direct) <= 1e-10


@needs_extension
@settings(max_examples=30)
@given(st.integers(0, 10_000), st.integers(1, 200), st.integers(1, 5), st.integers(1, 4))
def test_phase_sum_backends_agree(seed, n, m, d):
    points, xi, weights = random_phase_inputs(seed, n, m, d)
    a = _corepy.phase_sum_weighted(points, weights, xi)
    b = _core.phase_sum_weighted(points, weights, xi)
    scale = max(1.0, float(np.abs(a).max()))
    assert float(np.abs(a - b).max()) <= 1e-12 * scale


@needs_extension
def test_phase_sum_shape_errors_match():
    points = np.zeros((3, 2), dtype=np.float64)
    bad_xi = np.zeros(2)
    with pytest.raises(ValueError):
        _corepy.phase_sum_weighted(points, None, bad_xi)
    with pytest.raises(ValueError):
        _core.phase_sum_weighted(points, None, bad_xi)


@needs_extension
@settings(max_examples=40)
@given(
    st.lists(st.floats(-5, 5, allow_nan=False, width=32), min_size=1, max_size=14),
    st.sampled_from([1.0, 2.0, 2.5, 4.0]),
)
def test_pvar_backends_agree_with_identical_witnesses(values, r):
    a = np.asarray([complex(v) for v in values], dtype=np.complex128)
    va, wa = _corepy.pvar_dp(a, r)
    vb, wb = _core.pvar_dp(a, r)
    assert va == pytest.approx(vb, abs=1e-12)
    assert list(wa) == list(wb)


@needs_extension
def test_pvar_witness_is_valid_for_both_backends():
    rng = np.random.default_rng(4)
    vals = rng.normal(size=12) + 1j * rng.normal(size=12)
    seq = RealSequence.from_values(vals)
    for impl in (_corepy, _core):
        value, chain = impl.pvar_dp(np.asarray(vals, dtype=np.complex128), 2.0)
        witness = tuple(int(i) + 1 for i in chain)  # positions to indices
        assert witness_sum(seq, witness, 2.0) == pytest.approx(value, abs=1e-12)
        assert value ** 0.5 == pytest.approx(variation_exact(seq, 2.0).value, abs=1e-12)


def test_pvar_rejects_empty_input():
    with pytest.raises(ValueError):
        _corepy.pvar_dp(np.zeros(0, dtype=np.complex128), 2.0)


def test_backend_reports_a_known_name():
    assert BACKEND in ("compiled", "python")
