"""Transmittance routes, equivalence report, spectra, and Landauer current."""

import math

import numpy as np
import pytest

from qwire import (
    BiasWindow,
    PreconditionError,
    QuadratureConfig,
    TransmissionSpectrum,
    WireParams,
    chain_resonances,
    eo_terms,
    equivalence_report,
    landauer_current,
    spectrum,
    transmittance_eo,
    transmittance_gf,
)

from oracles import dense_transmittance, lorentzian_window_integral


def random_params(rng, n=None):
    return WireParams(
        n=n if n is not None else int(rng.integers(1, 13)),
        eps0=float(rng.uniform(-2, 2)),
        v=float(rng.uniform(0.1, 3)),
        gamma=float(rng.uniform(0.05, 4)),
    )


def sweep_grid(p, points=2001):
    span = 2.0 * p.v + 2.0 * p.gamma
    return np.linspace(p.eps0 - span, p.eps0 + span, points)


# --- Green's-function route ---------------------------------------------------

def test_gf_single_site_resonance():
    p = WireParams(n=1, eps0=0.2, v=1.0, gamma=0.6)
    assert transmittance_gf(p, 0.2) == pytest.approx(1.0, abs=1e-14)


def test_gf_single_site_is_lorentzian():
    p = WireParams(n=1, eps0=0.0, v=1.0, gamma=0.5)
    grid = np.linspace(-4, 4, 101)
    expect = p.gamma ** 2 / ((grid - p.eps0) ** 2 + p.gamma ** 2)
    assert np.allclose(transmittance_gf(p, grid), expect, rtol=1e-12)


def test_gf_two_sites_matched_resonance():
    v = 0.8
    p = WireParams(n=2, eps0=-0.4, v=v, gamma=2 * v)
    assert transmittance_gf(p, -0.4) == pytest.approx(1.0, rel=1e-12)


def test_gf_decays_far_from_band():
    p = WireParams(n=4, eps0=0.0, v=1.0, gamma=0.5)
    assert transmittance_gf(p, 50.0) < 1e-10
    assert transmittance_gf(p, -50.0) < 1e-10


def test_gf_matches_dense_inversion():
    rng = np.random.default_rng(3)
    for _ in range(200):
        p = random_params(rng)
        eps = float(rng.uniform(p.eps0 - 2 * p.v - 2 * p.gamma, p.eps0 + 2 * p.v + 2 * p.gamma))
        assert transmittance_gf(p, eps) == pytest.approx(
            dense_transmittance(p, eps), abs=1e-10
        )


# --- evolution-operator route -------------------------------------------------

def test_eo_terms_single_site_resonant():
    p = WireParams(n=1, eps0=0.0, v=1.0, gamma=0.7)
    terms = eo_terms(p, 0.0)
    # Chat_0 = 1, Chat_{-1} = 0, |det|^2 = gamma^2: the interference term is
    # gamma^2/(2 gamma^2) * 2 = 1 and the two amplitude terms coincide.
    assert terms.term_im == pytest.approx(1.0, rel=1e-12)
    assert terms.term_u1 == pytest.approx(terms.term_uN, rel=1e-12)
    assert transmittance_eo(p, 0.0) == pytest.approx(1.0, rel=1e-12)


def test_eo_two_sites_matched_resonance():
    v = 1.2
    p = WireParams(n=2, eps0=0.0, v=v, gamma=2 * v)
    assert transmittance_eo(p, 0.0) == pytest.approx(1.0, rel=1e-12)


def test_eo_vanishes_with_gamma_off_resonance():
    p = WireParams(n=3, eps0=0.0, v=1.0, gamma=1e-6)
    assert transmittance_eo(p, 0.37) < 1e-9


def test_eo_recombination_from_terms():
    rng = np.random.default_rng(7)
    for _ in range(100):
        p = random_params(rng)
        eps = float(rng.uniform(p.eps0 - 3, p.eps0 + 3))
        t = transmittance_eo(p, eps)
        terms = eo_terms(p, eps)
        recombined = 0.5 * p.gamma / p.bandwidth * (terms.term_uN - terms.term_u1) + terms.term_im
        assert abs(recombined - t) <= 1e-9 * max(abs(t), abs(recombined)) + 1e-12


def test_routes_independent_of_bandwidth():
    p1 = WireParams(n=4, eps0=0.0, v=1.0, gamma=0.8, bandwidth=1.0)
    p2 = WireParams(n=4, eps0=0.0, v=1.0, gamma=0.8, bandwidth=3.7)
    grid = np.linspace(-3, 3, 101)
    assert np.array_equal(transmittance_eo(p1, grid), transmittance_eo(p2, grid))
    assert np.array_equal(transmittance_gf(p1, grid), transmittance_gf(p2, grid))


def test_eo_matches_dense_oracle_three_sites():
    p = WireParams(n=3, eps0=0.0, v=1.0, gamma=1.0)
    assert transmittance_eo(p, 0.0) == pytest.approx(dense_transmittance(p, 0.0), abs=1e-12)


# --- equivalence of the two routes ---------------------------------------------

def test_routes_agree_absolutely():
    rng = np.random.default_rng(11)
    for _ in range(30):
        p = random_params(rng)
        grid = sweep_grid(p, 501)
        diff = np.abs(transmittance_gf(p, grid) - transmittance_eo(p, grid))
        assert diff.max() <= 1e-10


def test_equivalence_report_five_sites():
    p = WireParams(n=5, eps0=0.0, v=1.0, gamma=0.5)
    rep = equivalence_report(p, np.linspace(-4.0, 4.0, 1001))
    assert rep.max_abs_diff <= 1e-10
    assert rep.max_bridge_residual_rel <= 1e-9
    assert rep.min_abs_hat_gap > 0.0


def test_equivalence_gap_two_sites_hand_value():
    v = 1.7
    p = WireParams(n=2, eps0=0.0, v=v, gamma=1.0)
    rep = equivalence_report(p, np.array([0.0]))
    # Chat_1^2 - Chat_0 Chat_2 = 0 - (-v^2) = v^2: nonzero, the identity is needed
    assert rep.hat_gap[0] == pytest.approx(v * v, rel=1e-14)


def test_equivalence_report_rejects_empty_grid():
    p = WireParams(n=2, eps0=0.0, v=1.0, gamma=1.0)
    with pytest.raises(PreconditionError):
        equivalence_report(p, np.array([]))


# --- physics sanity -------------------------------------------------------------

def test_unitarity_bound_on_sweeps():
    rng = np.random.default_rng(13)
    for _ in range(25):
        p = random_params(rng)
        grid = sweep_grid(p, 501)
        t = transmittance_gf(p, grid)
        assert t.min() >= 0.0
        assert t.max() <= 1.0 + 1e-9


def test_resonant_transmission_odd_chains():
    for n in (1, 3, 5, 7, 9, 11):
        p = WireParams(n=n, eps0=0.3, v=1.1, gamma=0.7)
        assert transmittance_gf(p, 0.3) == pytest.approx(1.0, abs=1e-10)


def test_mirror_symmetry_about_eps0():
    rng = np.random.default_rng(17)
    for _ in range(20):
        p = random_params(rng)
        delta = rng.uniform(0, 3, size=25)
        t_hi = transmittance_gf(p, p.eps0 + delta)
        t_lo = transmittance_gf(p, p.eps0 - delta)
        assert np.allclose(t_hi, t_lo, rtol=1e-12, atol=0.0)


def test_seven_site_chain_has_seven_resonance_peaks():
    p = WireParams(n=7, eps0=0.0, v=1.0, gamma=0.2)
    grid = np.linspace(-2.5, 2.5, 200001)
    t = transmittance_gf(p, grid)
    inner = (t[1:-1] > t[:-2]) & (t[1:-1] > t[2:])
    peaks = np.flatnonzero(inner) + 1
    assert len(peaks) == 7
    assert all(t[k] >= 0.99 for k in peaks)
    # peak positions sit near the isolated-chain eigenenergies
    expected = np.sort(chain_resonances(p))
    assert np.allclose(np.sort(grid[peaks]), expected, atol=2e-3)


# --- spectrum -------------------------------------------------------------------

def test_spectrum_grid_and_symmetry():
    p = WireParams(n=3, eps0=0.0, v=1.0, gamma=0.5)
    spec = spectrum(p, -3.0, 3.0, 7, "both")
    assert spec.energies.shape == (7,)
    assert spec.energies[0] == -3.0 and spec.energies[-1] == 3.0
    assert np.allclose(spec.t_gf, spec.t_gf[::-1], rtol=1e-12)
    assert np.max(spec.abs_diff()) <= 1e-10


def test_spectrum_two_points_are_endpoints():
    p = WireParams(n=2, eps0=0.0, v=1.0, gamma=0.5)
    spec = spectrum(p, -1.0, 2.0, 2, "gf")
    assert np.array_equal(spec.energies, [-1.0, 2.0])
    assert spec.t_eo is None


def test_spectrum_method_selects_columns():
    p = WireParams(n=2, eps0=0.0, v=1.0, gamma=0.5)
    assert spectrum(p, -1, 1, 3, "gf").t_eo is None
    assert spectrum(p, -1, 1, 3, "eo").t_gf is None
    both = spectrum(p, -1, 1, 3, "both")
    assert both.t_gf is not None and both.t_eo is not None


@pytest.mark.parametrize(
    "args",
    [(1.0, -1.0, 5, "both"), (0.0, 0.0, 5, "both"), (-1.0, 1.0, 1, "both"),
     (-1.0, 1.0, 5, "nope"), (math.nan, 1.0, 5, "both")],
)
def test_spectrum_rejects_bad_arguments(args):
    p = WireParams(n=2, eps0=0.0, v=1.0, gamma=0.5)
    with pytest.raises(ValueError):
        spectrum(p, *args)


def test_spectrum_type_validates_bounds():
    p = WireParams(n=2, eps0=0.0, v=1.0, gamma=0.5)
    with pytest.raises(ValueError):
        TransmissionSpectrum(
            energies=np.array([0.0, 1.0]), params=p, method="gf",
            t_gf=np.array([0.5, 1.5]),
        )
    with pytest.raises(ValueError):
        TransmissionSpectrum(
            energies=np.array([1.0, 0.0]), params=p, method="gf",
            t_gf=np.array([0.5, 0.5]),
        )


# --- Landauer current -------------------------------------------------------------

def test_current_zero_bias_is_exactly_zero():
    p = WireParams(n=3, eps0=0.0, v=1.0, gamma=0.5)
    res = landauer_current(p, BiasWindow(0.7, 0.7))
    assert res.value == 0.0
    assert res.error_estimate == 0.0


def test_current_single_site_arctangent_oracle():
    gamma = 0.3
    p = WireParams(n=1, eps0=0.1, v=1.0, gamma=gamma)
    w = 50.0 * gamma
    res = landauer_current(p, BiasWindow(0.1 + w, 0.1 - w))
    oracle = lorentzian_window_integral(gamma, w)
    assert res.value == pytest.approx(oracle, rel=1e-9)
    assert res.error_estimate <= 1e-8 * abs(res.value)


def test_current_wide_window_approaches_pi_gamma():
    gamma = 0.05
    p = WireParams(n=1, eps0=0.0, v=1.0, gamma=gamma)
    res = landauer_current(p, BiasWindow(2000 * gamma, -2000 * gamma))
    assert res.value == pytest.approx(math.pi * gamma, rel=1e-3)


def test_current_antisymmetric_under_bias_swap():
    p = WireParams(n=4, eps0=0.0, v=1.0, gamma=0.8)
    fwd = landauer_current(p, BiasWindow(1.3, -0.4))
    rev = landauer_current(p, BiasWindow(-0.4, 1.3))
    assert fwd.value == pytest.approx(-rev.value, rel=1e-12)


def test_current_finite_temperature_smoothly_extends_zero_t():
    p = WireParams(n=2, eps0=0.0, v=1.0, gamma=0.6)
    cold = landauer_current(p, BiasWindow(0.9, -0.9, temperature=1e-4))
    sharp = landauer_current(p, BiasWindow(0.9, -0.9))
    assert cold.value == pytest.approx(sharp.value, rel=1e-3)
    swapped = landauer_current(p, BiasWindow(-0.9, 0.9, temperature=1e-4))
    assert swapped.value == pytest.approx(-cold.value, rel=1e-9)


def test_current_window_padding_at_finite_temperature():
    p = WireParams(n=1, eps0=0.0, v=1.0, gamma=0.5)
    res = landauer_current(p, BiasWindow(1.0, -1.0, temperature=0.05))
    assert res.window[0] == pytest.approx(-1.0 - 2.0)
    assert res.window[1] == pytest.approx(1.0 + 2.0)


def test_current_quadrature_config_respected():
    p = WireParams(n=1, eps0=0.0, v=1.0, gamma=0.5)
    res = landauer_current(p, BiasWindow(2.0, -2.0), QuadratureConfig(epsrel=1e-12, limit=300))
    oracle = lorentzian_window_integral(0.5, 2.0)
    assert res.value == pytest.approx(oracle, rel=1e-11)


def test_bias_window_validation():
    with pytest.raises(ValueError):
        BiasWindow(0.0, 1.0, temperature=-0.1)
    with pytest.raises(ValueError):
        BiasWindow(math.nan, 1.0)
