import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hybridoms.ladder import GROUND_LABEL, MINUS, PLUS, DressedLabel, ladder_labels, total_energy
from hybridoms.params import SystemParams
from hybridoms.peaks import find_peaks, fwhm, parabolic_vertex
from hybridoms.scattering import (ScatteringContext, SpectrumSeries, TruncationWarning, cavity_excitation,
                                  cavity_excitation_spectrum, default_excitation_grid, effective_detuning,
                                  excitation_amplitude, excitation_peak_scan, predict_excitation_peaks,
                                  total_transmission, transmission_amplitude, transmission_amplitudes)

import oracles

EMPTY = SystemParams(g=0.0, lam=0.0, kappa=0.01)


@pytest.fixture(scope="module")
def empty_ctx():
    return ScatteringContext.build(EMPTY, 2)


def test_energy_tables_match_ladder(fig3_ctx):
    p = fig3_ctx.params
    for i, lab in enumerate(fig3_ctx.labels):
        assert fig3_ctx.e0[i] == pytest.approx(total_energy(0, lab, p), abs=1e-13)
        assert fig3_ctx.e1[i] + p.omega_c == pytest.approx(total_energy(1, lab, p), abs=1e-12)


def test_on_resonance_detuning_is_imaginary(fig2_ctx):
    f, i = DressedLabel(2, MINUS), DressedLabel(1, PLUS)
    x = fig2_ctx.resonance(f, i)
    assert effective_detuning(fig2_ctx, x, f, i) == pytest.approx(0.5j * fig2_ctx.kappa, abs=1e-15)


def test_empty_cavity_detuning(empty_ctx):
    assert effective_detuning(empty_ctx, 0.3, GROUND_LABEL, GROUND_LABEL) == pytest.approx(0.3 + 0.005j)


def test_ground_detuning_at_cavity_frequency(fig2_ctx):
    d = fig2_ctx.derived
    val = effective_detuning(fig2_ctx, 0.0, GROUND_LABEL, GROUND_LABEL)
    assert val == pytest.approx(d.delta1 + d.delta2 + 0.005j, abs=1e-14)


def test_on_resonance_magnitude(fig2_ctx):
    f = DressedLabel(1, MINUS)
    x = fig2_ctx.resonance(f)
    e = excitation_amplitude(fig2_ctx, x, f, GROUND_LABEL)
    assert abs(e) ** 2 == pytest.approx(4 * fig2_ctx.overlap[GROUND_LABEL, f] ** 2 / fig2_ctx.kappa, rel=1e-12)


def test_empty_cavity_excitation(empty_ctx):
    e = excitation_amplitude(empty_ctx, 0.0, GROUND_LABEL, GROUND_LABEL)
    assert abs(e) ** 2 == pytest.approx(4 / EMPTY.kappa, rel=1e-14)


def test_first_peak_height_and_position(fig2_ctx):
    d = fig2_ctx.derived
    x = -d.delta1 - d.delta2
    assert fig2_ctx.resonance(GROUND_LABEL) == pytest.approx(x, abs=1e-14)
    e = excitation_amplitude(fig2_ctx, x, GROUND_LABEL, GROUND_LABEL)
    w = fig2_ctx.overlap[GROUND_LABEL, GROUND_LABEL] ** 2
    assert abs(e) ** 2 == pytest.approx(4 * w / fig2_ctx.kappa, rel=1e-12)


def test_empty_cavity_transmission(empty_ctx):
    x = np.linspace(-0.05, 0.05, 11)
    t = transmission_amplitude(empty_ctx, x, GROUND_LABEL, GROUND_LABEL)
    assert np.allclose(t, (x - 0.005j) / (x + 0.005j), atol=1e-15)
    assert transmission_amplitude(empty_ctx, 0.0, GROUND_LABEL, GROUND_LABEL) == pytest.approx(-1.0)


def test_amplitudes_match_dense_resolvent(fig2_ctx):
    """Every channel against an explicit resolvent built from the oracle overlaps."""
    p = fig2_ctx.params
    n = 8
    ctx = ScatteringContext.build(p, n)
    ref_o, _ = oracles.overlap_matrix(p.omega_b, p.omega_a, p.g, p.lam, n)
    labs = ladder_labels(n)
    e1 = np.array([total_energy(1, lab, p) - p.omega_c for lab in labs])
    e0 = np.array([total_energy(0, lab, p) for lab in labs])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        for i in (0, 1, 2):
            for x in (-1.44, -0.47, 0.2, 0.63):
                G = np.diag(1.0 / (x + e0[i] - e1 + 0.5j * p.kappa))
                ref = np.eye(len(labs))[:, i] - 1j * p.kappa * (ref_o @ G @ ref_o.T)[:, i]
                got = transmission_amplitudes(ctx, x, labs[i])[:, 0]
                assert np.max(np.abs(got - ref)) < 1e-8


def test_inelastic_amplitude_fig4(fig4ac_ctx):
    """Squared inelastic amplitude equals that channel's weight in the transmitted spectrum."""
    from hybridoms.pulse import PulseSpec, channel_probabilities
    d = fig4ac_ctx.derived
    x = -d.delta1 - d.delta2
    t = transmission_amplitude(fig4ac_ctx, x, DressedLabel(1, MINUS), GROUND_LABEL)
    assert 0.0 < abs(t) ** 2 < 1.0
    # narrow pulse: channel probability tends to |t|^2 at the pulse centre
    pulse = PulseSpec.at_detuning(fig4ac_ctx.params, x, 1e-4)
    probs = channel_probabilities(fig4ac_ctx, pulse, GROUND_LABEL)
    assert probs[DressedLabel(1, MINUS)] == pytest.approx(abs(t) ** 2, rel=1e-3)


@settings(max_examples=30, deadline=None)
@given(x=st.floats(-3.0, 6.0), which=st.sampled_from(["0g", "1+", "1-", "2+"]))
def test_flux_conservation(fig2_ctx, x, which):
    x = x - fig2_ctx.derived.delta1
    assert abs(total_transmission(fig2_ctx, x, DressedLabel.parse(which))[0] - 1) < 1e-10


def test_tail_warning_on_coarse_truncation():
    ctx = ScatteringContext.build(SystemParams(g=1.2, lam=0.05), 6)
    with pytest.warns(TruncationWarning):
        transmission_amplitudes(ctx, 0.0, GROUND_LABEL)


def test_window_warning(fig2_ctx):
    with pytest.warns(TruncationWarning):
        cavity_excitation_spectrum(fig2_ctx, GROUND_LABEL, np.linspace(30, 31, 5))


def test_resonant_peak_positions(fig2_ctx):
    d, p = fig2_ctx.derived, fig2_ctx.params
    grid = default_excitation_grid(fig2_ctx)
    s = cavity_excitation_spectrum(fig2_ctx, GROUND_LABEL, grid)
    found = [pk.position for pk in s.peaks(rel_height=0.01)]
    targets = [-d.delta1 - d.delta2]
    for n in (1, 2):
        targets += [-d.delta1 + n * p.omega_b + sgn * math.sqrt(n) * p.lam for sgn in (-1, 1)]
    step = np.max(np.diff(grid[np.abs(grid - targets[0]) < 5 * p.kappa]))
    for x in targets:
        assert min(abs(f - x) for f in found) < step


def test_lambda_zero_peaks_at_mechanical_sidebands():
    p = SystemParams(g=1.2, lam=0.0, kappa=0.01)
    ctx = ScatteringContext.build(p)
    for n in range(4):
        x = -p.g**2 + n
        grid = np.linspace(x - 0.05, x + 0.05, 2001)
        pk = cavity_excitation_spectrum(ctx, GROUND_LABEL, grid).highest_peak()
        assert pk.position == pytest.approx(x, abs=1e-6)


def test_dispersive_peak_positions(fig3_ctx):
    d, p = fig3_ctx.derived, fig3_ctx.params
    chi = p.lam**2 / p.delta_ab
    for pred, pk, _ in excitation_peak_scan(fig3_ctx, n_max=2):
        if pred.label.xi == PLUS:
            continue
        n = pred.label.n
        assert pk.position == pytest.approx(-d.delta1 - d.delta2 + n * (p.omega_b - chi), abs=p.kappa / 10)


def test_predicted_positions_closed_forms(fig2_ctx):
    d, p = fig2_ctx.derived, fig2_ctx.params
    preds = {pr.label: pr for pr in predict_excitation_peaks(fig2_ctx, n_max=3)}
    for n in (1, 2, 3):
        for xi, sgn in ((PLUS, 1), (MINUS, -1)):
            assert preds[DressedLabel(n, xi)].delta_k == pytest.approx(
                -d.delta1 + n * p.omega_b + sgn * math.sqrt(n) * p.lam, abs=1e-13)


def test_dispersive_weight_suppression(fig3_ctx):
    """n+ lines carry roughly n lam^2 / Delta^2 of the n- weight (first-order estimate)."""
    p = fig3_ctx.params
    preds = {pr.label: pr.weight for pr in predict_excitation_peaks(fig3_ctx, n_max=3)}
    for n in (1, 2, 3):
        ratio = preds[DressedLabel(n, PLUS)] / preds[DressedLabel(n, MINUS)]
        target = n * p.lam**2 / p.delta_ab**2
        assert 0.5 * target < ratio < target


def test_weight_ratios_agree_with_exact_one_photon_sector(fig3_ctx):
    """The weight ratios are those of the exact Hamiltonian, not a formula artefact."""
    p = fig3_ctx.params
    det, w = oracles.one_photon_spectrum(p.omega_b, p.omega_a, p.g, p.lam)
    preds = {pr.label: pr for pr in predict_excitation_peaks(fig3_ctx, n_max=3)}

    def exact(lab):
        return w[np.argmin(np.abs(det - preds[lab].delta_k))]

    for n in (1, 2, 3):
        r_formula = preds[DressedLabel(n, PLUS)].weight / preds[DressedLabel(n, MINUS)].weight
        r_exact = exact(DressedLabel(n, PLUS)) / exact(DressedLabel(n, MINUS))
        assert r_formula == pytest.approx(r_exact, rel=0.02)


def test_single_peak_without_coupling():
    ctx = ScatteringContext.build(SystemParams(g=0.0, lam=0.0), 3)
    preds = [pr for pr in predict_excitation_peaks(ctx, n_max=3) if pr.weight > 1e-12]
    assert len(preds) == 1
    assert preds[0].delta_k == 0.0 and preds[0].weight == 1.0


def test_n_max_beyond_truncation_rejected():
    ctx = ScatteringContext.build(SystemParams(), 4)
    with pytest.raises(ValueError):
        predict_excitation_peaks(ctx, n_max=5)


def test_isolated_peak_width_is_kappa(fig2_ctx):
    k = fig2_ctx.kappa
    for pred, pk, s in excitation_peak_scan(fig2_ctx, n_max=1):
        assert fwhm(s.grid, s.values, pk.index) == pytest.approx(k, rel=0.05)


def test_lorentzian_lineshape(fig3_ctx):
    f = DressedLabel(1, MINUS)
    x0 = fig3_ctx.resonance(f)
    x = x0 + np.linspace(-3, 3, 61) * fig3_ctx.kappa
    e = excitation_amplitude(fig3_ctx, x, f, GROUND_LABEL)
    prod = np.abs(e) ** 2 * np.abs(effective_detuning(fig3_ctx, x, f, GROUND_LABEL)) ** 2
    assert np.max(np.abs(prod / prod[0] - 1)) < 1e-10


def test_lambda_zero_matches_tls_free_spectrum():
    p = SystemParams(omega_a=1.1, g=1.2, lam=0.0, kappa=0.01)
    ctx = ScatteringContext.build(p)
    x = np.linspace(-p.g**2 - 0.5, -p.g**2 + 6.5, 5001)
    assert np.max(np.abs(cavity_excitation(ctx, x) - oracles.tls_free_excitation(x, p.g, p.kappa))) < 1e-8


class TestSpectrumSeries:
    def test_rejects_unsorted_grid(self):
        with pytest.raises(ValueError):
            SpectrumSeries(np.array([0.0, 2.0, 1.0]), np.ones(3))

    def test_rejects_negative_values(self):
        with pytest.raises(ValueError):
            SpectrumSeries(np.array([0.0, 1.0]), np.array([1.0, -1e-3]))

    def test_integral_and_concatenate(self):
        a = SpectrumSeries(np.linspace(0, 1, 101), np.ones(101))
        b = SpectrumSeries(np.linspace(2, 3, 101), np.ones(101))
        c = SpectrumSeries.concatenate([b, a])
        assert c.grid[0] == 0.0 and len(c.grid) == 202
        assert a.integral() == pytest.approx(1.0)


class TestPeaks:
    def test_vertex_of_exact_parabola(self):
        xv, yv = parabolic_vertex([0.0, 0.3, 1.0], [-(0.0 - 0.4) ** 2, -(0.3 - 0.4) ** 2, -(1.0 - 0.4) ** 2])
        assert xv == pytest.approx(0.4) and yv == pytest.approx(0.0, abs=1e-15)

    @given(c=st.floats(-0.5, 0.5))
    def test_refinement_on_lorentzian(self, c):
        x = np.linspace(-5, 5, 201)
        y = 1 / ((x - c) ** 2 + 0.25)
        (pk,) = find_peaks(x, y)
        assert pk.position == pytest.approx(c, abs=2e-3)

    def test_fwhm_of_lorentzian(self):
        x = np.linspace(-5, 5, 20001)
        y = 1 / (x**2 + 0.25)
        assert fwhm(x, y, int(np.argmax(y))) == pytest.approx(1.0, rel=1e-4)
