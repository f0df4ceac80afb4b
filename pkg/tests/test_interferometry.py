import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from complementarity.errors import DimensionError
from complementarity.interferometry import (
    MziConfig,
    bs1_unitary,
    conditional_wave_audit,
    conditional_wave_scan,
    delayed_choice_audit,
    fringe_visibility,
    fringe_visibility_scan,
    mzi_probabilities,
    path_distinguishability,
    path_measurement,
    wave_interference_audit,
    wave_observable,
    wpdr_audit,
)
from complementarity.linalg import (
    PAULI_X,
    PAULI_Y,
    BipartiteState,
    ginibre_state,
    ket_to_density,
    maximally_entangled_state,
    purity,
)
from complementarity.measurements import WeightedEnsemble
from complementarity.views import complete_info, info_gain, exclusion_audit

from conftest import assert_close
from strategies import gen, seeds

phases = st.floats(0, 2 * np.pi)
ZERO = ket_to_density([1, 0])


def test_wave_observable_convention():
    assert_close(wave_observable(0).matrix, PAULI_X)
    assert_close(wave_observable(np.pi / 2).matrix, PAULI_Y)


@given(phases)
def test_wave_basis_diagonalises_observable(phi):
    w = wave_observable(phi)
    p = w.measurement()
    assert_close(p.effects[0] - p.effects[1], w.matrix)


def test_bs1_matches_stated_action():
    u = bs1_unitary(0.3)
    assert_close(u @ [1, 0], [np.cos(0.3), np.sin(0.3)])
    assert_close(u @ [0, 1], [np.sin(0.3), -np.cos(0.3)])
    assert_close(u.conj().T @ u, np.eye(2))


@given(phases)
def test_balanced_mzi_fringe(phi):
    p0, p1 = mzi_probabilities(MziConfig(np.pi / 4, phi, True), ZERO)
    assert p0 == pytest.approx((1 + np.cos(phi)) / 2, abs=1e-12)
    assert p0 + p1 == pytest.approx(1)


@given(phases)
def test_without_bs2_probabilities_ignore_phase(phi):
    assert_close(mzi_probabilities(MziConfig(np.pi / 4, phi, False), ZERO), [0.5, 0.5], atol=1e-12)


@given(phases, st.floats(0, np.pi), st.booleans())
def test_mixed_input_gives_even_odds(phi, alpha, bs2):
    assert_close(mzi_probabilities(MziConfig(alpha, phi, bs2), np.eye(2) / 2), [0.5, 0.5])


def test_mzi_config_wraps_phase():
    assert MziConfig(phi=2 * np.pi + 0.5).phi == pytest.approx(0.5)
    with pytest.raises(ValueError):
        MziConfig(alpha=np.inf)


def test_visibility_and_distinguishability_examples():
    rho = (np.eye(2) + 0.6 * PAULI_X) / 2
    assert fringe_visibility(rho) == pytest.approx(0.6)
    assert path_distinguishability(rho) == pytest.approx(0)
    assert fringe_visibility(ZERO) == pytest.approx(0)
    assert path_distinguishability(ZERO) == pytest.approx(1)


@given(seeds)
def test_visibility_closed_form_matches_phase_scan(seed):
    rho = ginibre_state(2, rng=gen(seed))
    # a 1000-point phase grid is accurate to about (2 pi / 1000)^2 / 8
    assert fringe_visibility_scan(rho) == pytest.approx(fringe_visibility(rho), abs=1e-5)


def test_wave_interference_examples(rng):
    mixed = wave_interference_audit(np.eye(2) / 2, 0.4, 1.3)
    assert mixed.gain_sum == pytest.approx(0)
    assert mixed.amplitude_lhs == pytest.approx(0)
    pure = ginibre_state(2, 1, rng)
    phi = 0.7
    g1 = info_gain(wave_observable(phi).measurement(), pure)
    g2 = info_gain(wave_observable(phi + np.pi / 2).measurement(), pure)
    assert g1 + g2 == pytest.approx(complete_info(pure) - info_gain(path_measurement(), pure))


@given(seeds, phases, phases)
def test_wave_interference_identities(seed, phi, phi2):
    assert wave_interference_audit(ginibre_state(2, rng=gen(seed)), phi, phi2).residual <= 1e-10


def test_wpdr_examples(rng):
    report = wpdr_audit(ginibre_state(2, 1, rng))
    assert report.visibility**2 + report.distinguishability**2 == pytest.approx(1)
    report = wpdr_audit(np.eye(2) / 2)
    assert report.visibility**2 + report.distinguishability**2 == pytest.approx(0)


@given(seeds, phases)
def test_wpdr_residuals(seed, phi):
    report = wpdr_audit(ginibre_state(2, rng=gen(seed)), phi)
    assert report.wpdr_residual <= 1e-10
    assert report.ier_residual <= 1e-10
    assert report.operator_residual <= 1e-10
    assert report.purity == pytest.approx(purity(ginibre_state(2, rng=gen(seed))))


def test_delayed_choice_examples(rng):
    rho = ginibre_state(2, rng=rng)
    path_only = delayed_choice_audit(0.3, 0.0, rho)
    assert path_only.audit.norm == pytest.approx(1)
    inside = bs1_unitary(0.3) @ rho @ bs1_unitary(0.3).T
    single = exclusion_audit(WeightedEnsemble((path_measurement(),), np.array([1.0])), inside)
    assert path_only.audit.lhs == pytest.approx(single.lhs)
    waves = delayed_choice_audit(0.3, np.pi / 2, rho)
    assert waves.audit.norm == pytest.approx(0.5)
    balanced = delayed_choice_audit(0.3, np.pi / 4, rho)
    assert balanced.raw_weights == pytest.approx((0.5, 0.5, 0.5))
    assert balanced.audit.weight_factor == pytest.approx(1.5)
    assert balanced.audit.slack == pytest.approx(0, abs=1e-12)


@given(seeds, st.floats(-np.pi / 2, np.pi / 2), st.floats(0, np.pi))
def test_delayed_choice_bound_holds(seed, beta, alpha):
    report = delayed_choice_audit(alpha, beta, ginibre_state(2, rng=gen(seed)))
    assert report.audit.slack >= -1e-12
    assert report.raw_weighted_gain == pytest.approx(report.audit.lhs * report.audit.weight_factor)


def test_non_qubit_inputs_are_rejected():
    with pytest.raises(DimensionError, match="two-path"):
        fringe_visibility(np.eye(3) / 3)
    with pytest.raises(DimensionError):
        mzi_probabilities(MziConfig(), np.eye(3) / 3)
    with pytest.raises(DimensionError):
        conditional_wave_audit(BipartiteState(np.eye(6) / 6, (3, 2)), 0, 1)


def test_conditional_wave_bell():
    bell = BipartiteState(maximally_entangled_state(2), (2, 2))
    report = conditional_wave_audit(bell, 0.2, 0.2 + np.pi / 2)
    assert report.wpdr_lhs == pytest.approx(1.5)
    assert report.conditional_info == pytest.approx(1.5)
    assert report.residual <= 1e-10


def test_conditional_wave_reduces_to_local_on_products(rng):
    ra, rb = ginibre_state(2, rng=rng), ginibre_state(3, rng=rng)
    report = conditional_wave_audit(BipartiteState(np.kron(ra, rb), (2, 3)), 0.4, 1.9)
    local = wave_interference_audit(ra, 0.4, 1.9)
    assert report.amplitude_lhs == pytest.approx(local.amplitude_lhs)
    assert report.amplitude_rhs == pytest.approx(local.amplitude_rhs)
    assert report.wpdr_lhs == pytest.approx(complete_info(ra))


@given(seeds, phases, phases, st.sampled_from([2, 3]))
def test_conditional_wave_identities(seed, phi, phi2, d_b):
    g = gen(seed)
    state = BipartiteState(ginibre_state(2 * d_b, rng=g), (2, d_b))
    assert conditional_wave_audit(state, phi, phi2).residual <= 1e-9


@given(phases)
def test_wave_measurement_projects_onto_basis(phi):
    w = wave_observable(phi)
    for k, m in enumerate(w.measurement().effects):
        assert_close(m, ket_to_density(w.basis[:, k]))


def test_conditional_wave_scan_matches_single_audits(rng):
    state = BipartiteState(ginibre_state(6, rng=rng), (2, 3))
    pairs = [(0.1, 2.0), (1.0, 1.0 + np.pi / 2), (4.0, 0.3)]
    for (phi, phi2), report in zip(pairs, conditional_wave_scan(state, pairs)):
        assert report == conditional_wave_audit(state, phi, phi2)
