import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from complementarity.conditional import (
    ClassicalQuantumState,
    conditional_info,
    conditional_info_of_measurement,
    conditional_linear_entropy,
    conditioned,
    cq_guessing_quantities,
    guessing_game_trace,
    measured_conditional_entropy,
    min_entropy_chain_audit,
    pg_fidelity,
    pgm_guessing_probability,
    post_measurement_cq,
    conditional_exclusion_audit,
    min_entropy_bound,
)
from complementarity.errors import PreconditionError, ValidationError
from complementarity.linalg import (
    BipartiteState,
    ginibre_state,
    haar_unitary,
    ket_to_density,
    maximally_entangled_state,
    purity,
    random_separable_state,
)
from complementarity.measurements import (
    WeightedEnsemble,
    mub_measurements,
    projective_from_basis,
    random_basis_measurement,
    random_ete_povm,
    trivial_povm,
)

from conftest import assert_close
from strategies import gen, seeds

BELL = BipartiteState(maximally_entangled_state(2), (2, 2))
MIXED = BipartiteState(np.eye(4) / 4, (2, 2))
CMUB2 = WeightedEnsemble.uniform(mub_measurements(2))

dims_ab = st.sampled_from([(2, 2), (2, 3), (3, 2), (3, 3)])


def _product(ra, rb):
    return BipartiteState(np.kron(ra, rb), (ra.shape[0], rb.shape[0]))


def test_pg_fidelity_examples(rng):
    assert pg_fidelity(BELL) == pytest.approx(1)
    ra, rb = ginibre_state(3, rng=rng), ginibre_state(2, rng=rng)
    assert pg_fidelity(_product(ra, rb)) == pytest.approx(purity(ra) / 3)
    assert pg_fidelity(BipartiteState(np.eye(6) / 6, (2, 3))) == pytest.approx(1 / 4)


def test_conditional_linear_entropy_examples(rng):
    ra, rb = ginibre_state(2, rng=rng), ginibre_state(3, rng=rng)
    assert conditional_linear_entropy(_product(ra, rb)) == pytest.approx(1 - purity(ra))
    assert conditional_linear_entropy(BELL) == pytest.approx(-1)
    assert conditional_linear_entropy(MIXED) == pytest.approx(0.5)


def test_conditional_info_examples(rng):
    ra, rb = ginibre_state(3, rng=rng), ginibre_state(2, rng=rng)
    assert conditional_info(_product(ra, rb)) == pytest.approx(purity(ra) - 1 / 3)
    assert conditional_info(BELL) == pytest.approx(1.5)
    assert conditional_info(MIXED) == pytest.approx(0, abs=1e-14)


@given(seeds, dims_ab)
def test_pg_fidelity_range(seed, dims):
    d_a, d_b = dims
    state = BipartiteState(ginibre_state(d_a * d_b, rng=gen(seed)), dims)
    fid = pg_fidelity(state)
    assert 1 / d_a**2 - 1e-12 <= fid <= 1 + 1e-12


@given(seeds, dims_ab)
def test_pg_fidelity_is_local_unitary_invariant(seed, dims):
    g = gen(seed)
    state = BipartiteState(ginibre_state(dims[0] * dims[1], rng=g), dims)
    moved = state.evolve(haar_unitary(dims[0], g), haar_unitary(dims[1], g))
    assert pg_fidelity(moved) == pytest.approx(pg_fidelity(state), abs=1e-10)


@given(seeds, dims_ab)
def test_separable_states_have_nonnegative_conditional_entropy(seed, dims):
    state = BipartiteState(random_separable_state(dims, 3, gen(seed)), dims)
    assert conditional_linear_entropy(state) >= -1e-10


def test_conditioned_handles_rank_deficient_memory():
    psi = np.zeros(6)
    psi[0] = psi[4] = 1
    state = BipartiteState(ket_to_density(psi), (2, 3))
    # rho_B has rank 2 on a 3-dimensional memory
    assert pg_fidelity(state) == pytest.approx(1)
    assert np.all(np.isfinite(conditioned(state)))


def test_post_measurement_cq_examples(rng):
    z = mub_measurements(2)[0]
    cq = post_measurement_cq(BELL, z)
    assert_close(cq.blocks[0], np.diag([0.5, 0]))
    assert_close(cq.blocks[1], np.diag([0, 0.5]))
    ra, rb = ginibre_state(2, rng=rng), ginibre_state(3, rng=rng)
    p = random_basis_measurement(2, rng)
    cq = post_measurement_cq(_product(ra, rb), p)
    for prob, block in zip(p.probabilities(ra), cq.blocks):
        assert_close(block, prob * rb)
    cq = post_measurement_cq(_product(ra, rb), trivial_povm(2))
    for block in cq.blocks:
        assert_close(block, rb / 2)


def test_cq_state_requires_unit_trace():
    with pytest.raises(ValidationError):
        ClassicalQuantumState((np.eye(2) / 2, np.eye(2) / 2))


def test_cq_guessing_quantities_known_values():
    z = mub_measurements(2)[0]
    # perfect correlation: Bob guesses with certainty
    fid, s = cq_guessing_quantities(post_measurement_cq(BELL, z), 2)
    assert 2 * fid == pytest.approx(1)
    assert s == pytest.approx(0, abs=1e-12)
    # uniform blocks: guessing probability 1/2
    fid, s = cq_guessing_quantities(post_measurement_cq(MIXED, z), 2)
    assert 2 * fid == pytest.approx(0.5)
    assert s == pytest.approx(0.5)
    # aligned pure product: outcome fixed, guessing probability 1
    aligned = _product(ket_to_density([1, 0]), np.eye(2) / 2)
    fid, s = cq_guessing_quantities(post_measurement_cq(aligned, z), 2)
    assert 2 * fid == pytest.approx(1)
    assert s == pytest.approx(0, abs=1e-12)


@given(seeds, dims_ab)
def test_guessing_probability_matches_pretty_good_measurement(seed, dims):
    g = gen(seed)
    state = BipartiteState(ginibre_state(dims[0] * dims[1], int(g.integers(1, 4)), g), dims)
    cq = post_measurement_cq(state, random_basis_measurement(dims[0], g))
    fid, s = cq_guessing_quantities(cq, dims[0])
    guess = pgm_guessing_probability(cq)
    assert dims[0] * fid == pytest.approx(guess, abs=1e-9)
    assert s == pytest.approx(1 - guess, abs=1e-9)
    assert conditional_info_of_measurement(cq, dims[0]) == pytest.approx(guess - 1 / dims[0], abs=1e-9)


def test_conditional_exclusion_examples(rng):
    audit = conditional_exclusion_audit(CMUB2, BELL)
    assert audit.lhs == pytest.approx(0, abs=1e-12)
    assert audit.rhs == pytest.approx(0, abs=1e-12)
    pure_product = _product(ket_to_density(haar_unitary(2, rng)[:, 0]), ginibre_state(3, rng=rng))
    audit = conditional_exclusion_audit(CMUB2, pure_product)
    assert audit.lhs == pytest.approx(1 / 3)
    assert audit.rhs == pytest.approx(1 / 3)
    u = np.eye(3, dtype=complex)
    u[1:, 1:] = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    shared = WeightedEnsemble.uniform([projective_from_basis(np.eye(3)), projective_from_basis(u)])
    audit = conditional_exclusion_audit(shared, _product(ket_to_density([1, 0, 0]), ginibre_state(2, rng=rng)))
    assert audit.rhs == pytest.approx(0, abs=1e-12)
    assert audit.lhs == pytest.approx(0, abs=1e-12)


def test_conditional_exclusion_requires_rank_one_projective():
    e = WeightedEnsemble.uniform([trivial_povm(2)])
    with pytest.raises(PreconditionError):
        conditional_exclusion_audit(e, BELL)


@given(seeds, dims_ab, st.integers(1, 4))
def test_conditional_exclusion_rank_one_holds(seed, dims, k):
    g = gen(seed)
    state = BipartiteState(ginibre_state(dims[0] * dims[1], int(g.integers(1, 5)), g), dims)
    ms = [random_basis_measurement(dims[0], g) for _ in range(k)]
    e = WeightedEnsemble(tuple(ms), g.dirichlet(np.ones(k)))
    assert conditional_exclusion_audit(e, state).slack >= -1e-9


@given(seeds, dims_ab, st.integers(1, 3))
def test_conditional_exclusion_equal_trace_form_holds(seed, dims, k):
    g = gen(seed)
    state = BipartiteState(ginibre_state(dims[0] * dims[1], rng=g), dims)
    ms = [random_ete_povm(dims[0], g) for _ in range(k)]
    e = WeightedEnsemble(tuple(ms), g.dirichlet(np.ones(k)))
    assert conditional_exclusion_audit(e, state, general=True).slack >= -1e-9


def test_equal_trace_form_agrees_with_rank_one_form_on_bases(rng):
    state = BipartiteState(ginibre_state(4, rng=rng), (2, 2))
    for p in mub_measurements(2):
        assert measured_conditional_entropy(state, p, kraus=True) == pytest.approx(
            measured_conditional_entropy(state, p), abs=1e-10)


@given(seeds, st.sampled_from([2, 3]))
def test_cmub_saturates_conditional_exclusion(seed, d):
    g = gen(seed)
    e = WeightedEnsemble.uniform(mub_measurements(d))
    state = BipartiteState(ginibre_state(d * 2, rng=g), (d, 2))
    assert conditional_exclusion_audit(e, state).slack == pytest.approx(0, abs=1e-9)


def test_min_entropy_bound_examples():
    assert min_entropy_bound(CMUB2, BELL, 0.1) == pytest.approx(-np.log2(200))
    state = _product(np.eye(2) / 2, ket_to_density([0.6, 0.8]))
    assert min_entropy_bound(CMUB2, state, 0.5) == pytest.approx(-2)
    for eps in (0.0, 1.0, -0.1):
        with pytest.raises(ValidationError):
            min_entropy_bound(CMUB2, BELL, eps)


@given(seeds, st.sampled_from([0.1, 0.5]), st.integers(1, 3))
def test_min_entropy_chain(seed, eps, k):
    g = gen(seed)
    state = BipartiteState(ginibre_state(4, rng=g), (2, 2))
    ms = [random_basis_measurement(2, g) for _ in range(k)]
    e = WeightedEnsemble(tuple(ms), g.dirichlet(np.ones(k)))
    chain = min_entropy_chain_audit(e, state, eps)
    assert chain.slack >= -1e-9
    assert chain.q_min <= chain.collision_bound + 1e-9
    assert chain.q_min == pytest.approx(min_entropy_bound(e, state, eps))


def _schedule(g, n, dims=(2, 2)):
    return [(haar_unitary(dims[0], g), haar_unitary(dims[1], g)) for _ in range(n)]


def test_guessing_game_bell_is_flat_zero(rng):
    trace = np.array(guessing_game_trace(BELL, CMUB2, _schedule(rng, 50)))
    assert trace.shape == (51, 2)
    assert_close(trace[:, 0], np.zeros(51), atol=1e-9)
    assert_close(trace[:, 1], np.ones(51), atol=1e-9)


def test_guessing_game_pure_product_is_flat_one_third(rng):
    state = _product(ket_to_density([1, 0]), ket_to_density([0, 1]))
    trace = np.array(guessing_game_trace(state, CMUB2, _schedule(rng, 20)))
    assert_close(trace[:, 0], np.full(21, 1 / 3), atol=1e-9)


@given(seeds)
def test_guessing_game_is_invariant(seed):
    g = gen(seed)
    state = BipartiteState(ginibre_state(4, rng=g), (2, 2))
    trace = np.array(guessing_game_trace(state, CMUB2, _schedule(g, 10)))
    assert np.ptp(trace[:, 0]) <= 1e-9
    assert np.ptp(trace[:, 1]) <= 1e-9
    # the CMUB entropy sum is linear in the recoverable fidelity
    assert_close(trace[:, 0], (2 / 3) * (1 - trace[:, 1]), atol=1e-9)


def test_guessing_game_rejects_non_unitary(rng):
    with pytest.raises(ValidationError, match="not unitary"):
        guessing_game_trace(BELL, CMUB2, [(np.eye(2), 2 * np.eye(2))])


@given(seeds, dims_ab)
def test_cq_quantities_match_embedded_bipartite_state(seed, dims):
    g = gen(seed)
    state = BipartiteState(ginibre_state(dims[0] * dims[1], rng=g), dims)
    cq = post_measurement_cq(state, random_basis_measurement(dims[0], g))
    embedded = cq.as_bipartite()
    fid, _ = cq_guessing_quantities(cq, dims[0])
    # the register has dimension n_outcomes, the normalisation uses d
    assert dims[0] * fid == pytest.approx(embedded.d_a * pg_fidelity(embedded), abs=1e-10)
