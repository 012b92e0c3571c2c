import pytest

from hybridoms.ladder import GROUND_LABEL
from hybridoms.params import derive_params
from hybridoms.presets import PRESETS, get_preset

# Frozen copies; any edit to a preset must show up here.
EXPECTED = {
    "fig2": dict(omega_c=10.0, omega_b=1.0, omega_a=1.0, g=1.2, lam=0.05, kappa=0.01,
                 gamma_a=1e-4, gamma_b=1e-5, n_a=0.1, n_b=0.1),
    "fig3": dict(omega_c=10.0, omega_b=1.0, omega_a=1.1, g=1.2, lam=0.01, kappa=1e-3,
                 gamma_a=1e-4, gamma_b=1e-5, n_a=0.077, n_b=0.1),
    "fig4ac": dict(omega_c=10.0, omega_b=1.0, omega_a=1.0, g=0.8, lam=0.05, kappa=0.01,
                   gamma_a=0.0, gamma_b=0.0, n_a=0.0, n_b=0.0),
    "fig4df": dict(omega_c=10.0, omega_b=1.0, omega_a=1.1, g=0.8, lam=0.01, kappa=1e-3,
                   gamma_a=0.0, gamma_b=0.0, n_a=0.0, n_b=0.0),
    "fig5": dict(omega_c=10.0, omega_b=1.0, omega_a=1.0, g=0.2, lam=0.05, kappa=0.01,
                 gamma_a=0.0, gamma_b=0.0, n_a=0.0, n_b=0.0),
    "fig6": dict(omega_c=10.0, omega_b=1.0, omega_a=1.1, g=0.8, lam=0.01, kappa=1e-3,
                 gamma_a=0.0, gamma_b=0.0, n_a=0.0, n_b=0.0),
}


def test_names():
    assert sorted(PRESETS) == sorted(EXPECTED)


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_bit_stable(name):
    got = get_preset(name).params.to_dict()
    want = dict(EXPECTED[name])
    want["lambda"] = want.pop("lam")
    assert got == want


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_lambda_in_units_of_kappa(name):
    p = get_preset(name).params
    assert p.lam / p.kappa == pytest.approx(5.0 if p.omega_a == 1.0 else 10.0)


def test_pulses():
    p = get_preset("fig4ac").params
    d = derive_params(p)
    pulse = get_preset("fig4ac").pulse()
    assert pulse.d == p.kappa
    assert pulse.center_detuning(p) == pytest.approx(-d.delta1 - d.delta2, abs=1e-14)
    six = get_preset("fig6")
    assert six.pulse().d == pytest.approx(0.2 * six.params.kappa, rel=1e-15)
    assert six.bloch == (0.6, 0.4, 0.3)


def test_drive_and_initial():
    for pre in PRESETS.values():
        assert pre.eta() == pytest.approx(pre.params.kappa / 50)
        assert pre.initial == GROUND_LABEL


def test_pulse_follows_overridden_params():
    pre = get_preset("fig4ac")
    p = pre.params.replace(g=0.5)
    assert pre.pulse(p).center_detuning(p) == pytest.approx(-derive_params(p).delta1 - derive_params(p).delta2)


def test_unknown_preset():
    with pytest.raises(ValueError, match="unknown preset"):
        get_preset("fig7")
