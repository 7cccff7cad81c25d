import math

import numpy as np
import pytest

from torsionqm import oracle
from torsionqm import wavefunction as wf
from torsionqm.errors import NonConvergenceError


def test_quadrature_spec():
    s = oracle.QuadratureSpec()
    assert s.halfwidth >= 8
    assert s.refined().max_turn == s.max_turn / 2
    with pytest.raises(ValueError):
        oracle.QuadratureSpec(panel_nodes=0)


def test_panel_rule_integrates_oscillatory_function():
    x, w = oracle._panels(-3.0, 2.0, lambda k: 0.5, 16)
    assert np.all((x > -3.0) & (x < 2.0)) and np.all(np.diff(x) > 0)
    np.testing.assert_allclose(w.sum(), 5.0, rtol=1e-14)
    np.testing.assert_allclose(w @ np.cos(9 * x), (np.sin(18) + np.sin(27)) / 9, rtol=1e-12)


def test_kspace_free_packet_norm(crossing_packet):
    # F = 1 recovers psi0 itself, so check through B: F is odd in k2 so B vanishes on x2 = x0_2
    b = oracle.quad2d_bl((0.4, 0.0), 0.7, crossing_packet)
    np.testing.assert_allclose(b, 0.0, atol=1e-12)


def test_kspace_self_check(slit_packet):
    b = oracle.quad2d_bl((20.0, 5.0), 0.4, slit_packet, check=True)
    np.testing.assert_allclose(b, wf.b_l_packet((20.0, 5.0), 0.4, slit_packet), rtol=1e-9)


def test_kspace_psi1(crossing_packet):
    x = (0.3, 0.8)
    np.testing.assert_allclose(oracle.quad2d_psi1(x, 1.0, crossing_packet), wf.psi1_packet(x, 1.0, crossing_packet), rtol=1e-8)


def test_shrink_loop_finds_no_limit():
    with pytest.raises(NonConvergenceError):
        oracle.shrink_loop_jump((1.0, 1.0))
    assert oracle.shrink_loop_jump((0.0, 2.0)) == 0


def test_unit_jump_flux_grows_like_inverse_eta():
    f = [abs(oracle._unit_jump_flux((1.0, 1.0), e)) for e in (0.1, 0.05)]
    np.testing.assert_allclose(f[1] / f[0], 0.5, rtol=0.1)


def test_bessel_quadrature_matches_series():
    np.testing.assert_allclose(oracle.bessel_quadrature(2, 1.0), 0.1357476697670383, rtol=1e-14)


def test_radial_quadrature_rejects_bad_order():
    with pytest.raises(ValueError):
        oracle.radial_quadrature_check(1.0, 1.0, 4)


def test_convergence_ratio():
    assert oracle.convergence_ratio(lambda h: 3 * h * h, 0.1) == pytest.approx(4.0)


def test_registry():
    names = [n for n, _ in oracle.registered_checks()]
    for n in ("b_l_kspace", "jump_shrink_loop", "radial_integral_i2", "winding_integral"):
        assert n in names
    r = oracle.CheckResult("x", 1e-9, 1e-8)
    assert r.passed and "x" in r.row()
    assert not oracle.CheckResult("y", math.nan, 1.0).passed


def test_run_validation_subset():
    res = oracle.run_validation(["winding_integral", "jump_shrink_loop"])
    by = {r.name: r for r in res}
    assert by["winding_integral"].passed
    assert not by["jump_shrink_loop"].passed and by["jump_shrink_loop"].max_rel_err == math.inf
    with pytest.raises(KeyError):
        oracle.run_validation(["nope"])


def test_validation_catches_mutated_bl(monkeypatch):
    assert oracle.run_validation(["b_l_kspace"])[0].passed
    orig = wf.b_l_packet
    monkeypatch.setattr(wf, "b_l_packet", lambda *a, **k: orig(*a, **k) * (1 + 1e-3))
    assert not oracle.run_validation(["b_l_kspace"])[0].passed
