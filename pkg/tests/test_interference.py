import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torsionqm import interference as it
from torsionqm import wavefunction as wf
from torsionqm.errors import GridMismatchError, PairingError, ZeroWaveVectorError

GOLDEN = Path(__file__).parent / "golden" / "pattern_eps0.1.csv"


@pytest.fixture(scope="module")
def exp():
    return it.SlitExperiment()


@pytest.fixture(scope="module")
def profiles(exp):
    p = wf.PacketParams(0.1, (0.0, 0.0), (50.0, 0.0))
    return {eps: it.pattern_scan(p, eps, exp) for eps in (0.0, 0.1)}


def test_experiment_validation():
    with pytest.raises(ValueError):
        it.SlitExperiment(separation=0)
    with pytest.raises(ValueError):
        it.SlitExperiment(screen_range=(1, -1))
    with pytest.raises(ValueError):
        it.SlitExperiment(samples=2.5)
    with pytest.raises(ValueError):
        it.SlitExperiment(corrected_branch=3)
    e = it.SlitExperiment(samples=11, screen_range=(-1, 1))
    np.testing.assert_allclose(e.screen(), np.linspace(-1, 1, 11))
    assert e.slit_x2 == (5.0, -5.0)


def test_branch_points(exp, slit_packet):
    p1, p2 = it.branch_points(2.0, exp, slit_packet)
    assert p1.x == (20.0, -3.0) and p2.x == (20.0, 7.0)
    np.testing.assert_allclose(p1.t, 0.4)
    with pytest.raises(ZeroWaveVectorError):
        it.branch_points(0.0, exp, wf.PacketParams(0.1, (0, 0), (0.0, 50.0)))


def test_plane_wave_free_pattern_is_symmetric(exp):
    x = np.linspace(-10, 10, 401)
    i = it.intensity_plane_wave(x, (5.0, 0.0), 0.0, 1, 1.0, exp)
    np.testing.assert_allclose(i, i[::-1], rtol=0, atol=1e-12 * i.max())
    np.testing.assert_allclose(i[200], 4.0)


def test_plane_wave_shift_is_theta(exp):
    k = (2.0, 1.0)
    theta = wf.phase_shift(0.1, k)
    x = np.array([0.0, 3.0])
    np.testing.assert_allclose(it.intensity_plane_wave(x, k, 0.1, 1, 1.5, exp)[0], 9 * math.cos(theta / 2) ** 2, rtol=1e-14)


@settings(max_examples=40, deadline=None)
@given(
    k1=st.floats(0.1, 10),
    k2=st.floats(-10, 10),
    eps=st.floats(0.001, 0.24),
    q=st.integers(1, 2),
)
def test_plane_wave_pairs_with_equal_product(k1, k2, eps, q):
    exp = it.SlitExperiment(samples=5)
    x = exp.screen()
    a = it.intensity_plane_wave(x, (k1, k2), eps, 2 * q, 1.0, exp)
    b = it.intensity_plane_wave(x, (k1, k2), 2 * eps, q, 1.0, exp)
    np.testing.assert_array_equal(a, b)


def test_free_profile_symmetry(profiles):
    y = profiles[0.0].values
    np.testing.assert_allclose(y, y[::-1], rtol=1e-12)


def test_on_axis_value(profiles, slit_packet, exp):
    np.testing.assert_allclose(it.intensity_packet(0.0, slit_packet, 0.0, exp), 0.004553996976778995, rtol=1e-12)
    np.testing.assert_allclose(it.intensity_packet(0.0, slit_packet, 0.1, exp), 0.0045170505858493646, rtol=1e-12)


def test_correction_linear_in_eps(slit_packet, exp):
    x = np.linspace(-5, 5, 41)
    i0 = it.intensity_packet(x, slit_packet, 0.0, exp)
    d1 = it.intensity_packet(x, slit_packet, 0.05, exp) - i0
    d2 = it.intensity_packet(x, slit_packet, 0.2, exp) - i0
    np.testing.assert_allclose(d2, 4 * d1, rtol=1e-9, atol=1e-18)


def test_swapped_branch_mirrors_sign(slit_packet):
    x = np.linspace(-8, 8, 33)
    e2 = it.SlitExperiment(corrected_branch=2)
    e1 = it.SlitExperiment(corrected_branch=1)
    np.testing.assert_allclose(
        it.intensity_packet(x, slit_packet, 0.1, e1),
        it.intensity_packet(-x, slit_packet, -0.1, e2),
        rtol=1e-12,
    )


def test_packet_x0_is_ignored(exp):
    a = wf.PacketParams(0.1, (0.0, 0.0), (50.0, 0.0))
    b = wf.PacketParams(0.1, (-7.0, 2.0), (50.0, 0.0))
    x = np.linspace(-3, 3, 7)
    np.testing.assert_array_equal(it.intensity_packet(x, a, 0.1, exp), it.intensity_packet(x, b, 0.1, exp))


def test_find_peaks_parabola_vertex():
    x = np.linspace(-1, 1, 21)
    y = 1 - (x - 0.033) ** 2
    (p,) = it.find_peaks(it.IntensityProfile(x, y))
    np.testing.assert_allclose(p.position, 0.033, rtol=1e-12)
    np.testing.assert_allclose(p.height, 1.0, rtol=1e-14)
    # a flat top is not a strict maximum
    assert it.find_peaks(it.IntensityProfile(np.arange(5.0), np.array([0, 1, 1, 1, 0.0]))) == []


def test_principal_peaks_tie_break():
    peaks = [it.Peak(-1.0, 2.0), it.Peak(0.5, 1.0), it.Peak(1.0, 2.0), it.Peak(3.0, 2.0)]
    assert it.principal_peaks(peaks) == [it.Peak(-1.0, 2.0), it.Peak(1.0, 2.0)]


def test_displacement_and_asymmetry(profiles):
    free, tors = profiles[0.0], profiles[0.1]
    assert it.peak_displacement(free, free) == 0.0
    np.testing.assert_allclose(it.peak_displacement(tors, free), 0.0346851704345611, rtol=1e-9)
    np.testing.assert_allclose(it.asymmetry(free), 0.0, atol=1e-15)
    np.testing.assert_allclose(it.asymmetry(tors), -0.0002132134479526795, rtol=1e-9)


def test_displacement_errors(profiles):
    free = profiles[0.0]
    other = it.IntensityProfile(free.positions + 1e-3, free.values)
    with pytest.raises(GridMismatchError):
        it.peak_displacement(other, free)
    x = np.linspace(-1, 1, 9)
    one_peak = it.IntensityProfile(x, 1 - x**2)
    with pytest.raises(PairingError):
        it.peak_displacement(one_peak, one_peak)


def test_profile_validation():
    with pytest.raises(ValueError):
        it.IntensityProfile([0, 0, 1], [1, 2, 3])
    with pytest.raises(ValueError):
        it.IntensityProfile([0, 1], [1, 2, 3])


def test_csv_round_trip(profiles):
    tors = profiles[0.1]
    back = it.profile_from_csv(it.profile_to_csv(tors))
    np.testing.assert_array_equal(back.positions, tors.positions)
    np.testing.assert_array_equal(back.values, tors.values)
    assert back.epsilon == 0.1
    with pytest.raises(ValueError):
        it.profile_from_csv("x,y\n1,2\n")


def test_golden_pattern(profiles):
    assert it.profile_to_csv(profiles[0.1]) == GOLDEN.read_text()


@pytest.mark.parametrize("workers", [1, 2, 5])
def test_scan_independent_of_workers(profiles, slit_packet, exp, workers):
    out = it.pattern_scan(slit_packet, 0.1, exp, workers=workers)
    np.testing.assert_array_equal(out.values, profiles[0.1].values)
