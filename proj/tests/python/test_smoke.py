import cmath
import math

import pytest

import gamowkit as gk


@pytest.fixture(scope="module")
def shell():
    return gk.PotentialModel.delta_shell(10.0, 1.0)


def test_model_properties(shell):
    assert shell.kind == "delta_shell"
    assert shell.radial
    assert shell.range == 1.0
    barrier = gk.PotentialModel.delta_barrier(2.0)
    assert not barrier.radial
    assert abs(abs(gk.transmission(barrier, 1.5)) ** 2 - 1.5**2 / (1.5**2 + 1.0)) < 1e-12


def test_first_resonance(shell):
    pole = gk.first_resonances(shell, 1)[0]
    assert pole.cls == "resonance"
    assert pole.proper
    assert abs(pole.k - complex(2.877577458458, -0.066510672490)) < 1e-11
    assert abs(gk.dispersion(shell, pole.k)) < 1e-10


def test_gamow_state_normalization_and_residue(shell):
    pole = gk.first_resonances(shell, 1)[0]
    state = gk.gamow_state(shell, pole)
    assert state.normalized
    assert abs(state.norm_integral() - 1.0) < 1e-9
    assert abs(state.at(0.0)) == 0.0
    assert abs(gk.residue_ratio(shell, state, 0.4, 0.6) - 1.0) < 1e-6


def test_faddeeva():
    assert gk.faddeeva(0j) == 1.0
    z = complex(0.5, 0.5)
    assert abs(gk.faddeeva(z) - complex(0.533156707912175, 0.230488231384458)) < 1e-12
    assert abs(gk.m_function(complex(1.0, -0.2), 2.0) - complex(-0.292084423796434, -0.555588248686219)) < 1e-12


def test_propagator_forms_agree(shell):
    oracle = gk.spectral_quadrature(shell, 0.3, 0.5, 1.0)
    assert abs(oracle - complex(-0.469856185877279, -0.877044785917546)) < 1e-12
    full = gk.propagator(shell, 0.3, 0.5, 1.0, 20, "full")
    proper = gk.propagator(shell, 0.3, 0.5, 1.0, 20, "proper")
    background = gk.propagator(shell, 0.3, 0.5, 1.0, 20, "background")
    assert abs(full - proper) < 1e-10 * abs(full)
    assert abs(background - oracle) < 1e-8
    assert abs(full - oracle) < 1e-3 * abs(oracle)


def test_free_propagator():
    t = 0.7
    expected = (4j * math.pi * t) ** -0.5 * (cmath.exp(1j * 0.04 / (4 * t)) - cmath.exp(1j * 0.64 / (4 * t)))
    assert abs(gk.free_radial_propagator(0.3, 0.5, t) - expected) < 1e-15


def test_transmitted_wave_matches_quadrature():
    barrier = gk.PotentialModel.delta_barrier(2.0)
    psi = gk.transmitted_wave(barrier, "cutoff", 1.5, 0.0, 1.0, 5.0, 2.0)
    quad = gk.transmitted_wave_quadrature(barrier, "cutoff", 1.5, 0.0, 1.0, 5.0, 2.0)
    assert abs(psi - quad) < 1e-6


def test_errors_surface_as_gamowkit_error(shell):
    with pytest.raises(gk.GamowkitError, match="OutsideInteractionRegion"):
        gk.propagator(shell, 1.5, 0.5, 1.0, 5, "full")
    with pytest.raises(gk.GamowkitError, match="lamda"):
        gk.canonical_config("[model]\nlamda = 3\n")


def test_config_round_trip_and_run(tmp_path):
    text = gk.canonical_config("subcommand = poles\n[model]\nlambda = 0\n")
    assert gk.canonical_config(text) == text
    paths = gk.run_config(text, str(tmp_path))
    with open(paths[0]) as f:
        assert f.read() == "re_k,im_k,class,proper,residual\n"
