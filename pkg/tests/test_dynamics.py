"""Model dynamical systems, orbit averages, transference."""

from fractions import Fraction

import numpy as np
import pytest

from polyergo.dynamics import (
    CyclicShiftSystem,
    TorusRotationSystem,
    convergence_report,
    ergodic_average,
    transference_check,
)
from polyergo.errors import DomainError
from polyergo.polymap import PolynomialMap, build_gamma

SQUARES = PolynomialMap(k=1, components=({(2,): 1},))


def test_cyclic_shift_moves_coordinates():
    sys1 = CyclicShiftSystem(modulus=5, dim=1)
    f = np.arange(5.0)
    g = sys1.shift(f, 0, 2)
    assert list(g) == [2.0, 3.0, 4.0, 0.0, 1.0]


def test_cyclic_average_counts_residues():
    # squares mod 5 in {1..5}: 1, 4, 4, 1, 0 -> residue 0 once, 1 twice, 4 twice
    system = CyclicShiftSystem(modulus=5, dim=1)
    f = np.zeros(5)
    f[0] = 1.0  # indicator of {0}
    avg = system.average(f, 5, SQUARES)
    # A_5 f(x) = (1/5) #{n <= 5 : n^2 = -x (mod 5)} with the forward shift
    expect = {0: 1, 1: 2, 4: 2}
    for x in range(5):
        want = expect.get((-x) % 5, 0) / 5.0
        assert complex(avg[x]).real == pytest.approx(want)


def test_cyclic_average_is_exact_for_integer_input():
    system = CyclicShiftSystem(modulus=7, dim=1)
    f = np.empty(7, dtype=object)
    f[:] = [Fraction(j, 3) for j in range(7)]
    avg = system.average(f, 4, SQUARES)
    assert all(isinstance(v, Fraction) for v in avg)
    # counting measure is preserved
    assert sum(avg) == sum(f)


def test_cyclic_average_periodicity_stabilizes():
    system = CyclicShiftSystem(modulus=5, dim=1)
    f = np.cos(2 * np.pi * np.arange(5) / 5).astype(np.complex128)
    a5 = system.average(f, 5, SQUARES)
    a25 = system.average(f, 25, SQUARES)
    assert np.max(np.abs(a5 - a25)) <= 1e-12


def test_rotation_average_matches_direct_sum():
    alphas = (0.137,)
    system = TorusRotationSystem(alphas=alphas)

    def f(pts):
        return np.exp(2j * np.pi * pts[:, 0])

    n = 12
    got = system.average(f, (0.25,), n, SQUARES)
    direct = np.mean(
        [np.exp(2j * np.pi * ((0.25 + (y * y) * alphas[0]) % 1.0)) for y in range(1, n + 1)]
    )
    assert abs(got - direct) <= 1e-12


def test_rotation_average_decays_for_irrational_angle():
    system = TorusRotationSystem(alphas=(2**0.5 - 1,))

    def f(pts):
        return np.exp(2j * np.pi * pts[:, 0])

    small = abs(system.average(f, (0.0,), 64, SQUARES))
    big = abs(system.average(f, (0.0,), 4096, SQUARES))
    assert big < small and big < 0.1


def test_ergodic_average_dispatch():
    cyc = CyclicShiftSystem(modulus=3, dim=1)
    rot = TorusRotationSystem(alphas=(0.3,))
    f = np.ones(3, dtype=np.complex128)
    assert np.allclose(ergodic_average(cyc, f, 2, SQUARES), 1.0)
    with pytest.raises(DomainError):
        ergodic_average(rot, lambda p: np.ones(len(p)), 2, SQUARES)  # missing x0
    with pytest.raises(DomainError):
        ergodic_average("pendulum", f, 2, SQUARES)


def test_dimension_mismatch_raises():
    system = CyclicShiftSystem(modulus=4, dim=2)
    f = np.ones((4, 4), dtype=np.complex128)
    with pytest.raises(DomainError):
        system.average(f, 2, SQUARES)  # map has one component, system has two


def test_transference_gap_is_zero():
    for modulus, n in [(4, 2), (7, 3), (12, 5)]:
        rep = transference_check(modulus, n, SQUARES, seed=11)
        assert rep.match and rep.max_gap == 0.0


def test_convergence_report_shapes_and_reference():
    system = CyclicShiftSystem(modulus=5, dim=1)
    f = np.exp(2j * np.pi * np.arange(5) / 5)
    trace = convergence_report(system, f, [5, 10, 25], SQUARES)
    assert trace.ns == (5, 10, 25)
    assert len(trace.values) == 3
    assert len(trace.successive_gaps) == 2
    doc = trace.to_jsonable()
    assert doc["ns"] == [5, 10, 25]
    with_ref = convergence_report(
        system, f, [5], SQUARES, reference=trace.values[0]
    )
    assert with_ref.reference_errors == (0.0,)
