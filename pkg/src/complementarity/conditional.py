"""Memory-assisted quantities built on the pretty-good recovery fidelity.

Conventions
-----------
``conditioned(rho_AB) = (I (x) rho_B^(-1/4)) rho_AB (I (x) rho_B^(-1/4))`` with
the inverse taken on the support of ``rho_B``.  The recoverable fidelity is
``tr(conditioned^2) / d_A`` and the conditional linearized entropy is
``1 - d_A * fidelity``.  For a classical-quantum state obtained by measuring
A, the same formula is used with the *original* ``d_A`` as normaliser, so
``d_A * fidelity`` equals Bob's pretty-good-measurement guessing probability.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, PreconditionError, ValidationError
from .linalg import (
    DEFAULT_TOL,
    BipartiteState,
    matrix_power_on_support,
    partial_trace,
)
from .measurements import Povm, WeightedEnsemble, is_equal_trace
from .views import ensemble_norm

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ClassicalQuantumState:
    """``sum_i |i><i| (x) blocks[i]`` with unnormalised PSD blocks on B."""

    blocks: tuple
    labels: tuple = ()

    def __post_init__(self):
        blocks = tuple(np.asarray(b, dtype=complex) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i) for i in range(len(blocks))))
        total = sum(np.trace(b).real for b in blocks)
        if abs(total - 1) > 1e-8:
            raise ValidationError(f"block traces sum to {total:.12g}, expected 1")

    @property
    def n_outcomes(self) -> int:
        return len(self.blocks)

    @property
    def d_b(self) -> int:
        return self.blocks[0].shape[0]

    @property
    def rho_b(self) -> np.ndarray:
        return sum(self.blocks)

    def as_bipartite(self) -> BipartiteState:
        """Embed with a classical register of dimension ``n_outcomes`` as A."""
        regs = []
        for i, b in enumerate(self.blocks):
            reg = np.zeros((self.n_outcomes, self.n_outcomes))
            reg[i, i] = 1.0
            regs.append(np.kron(reg, b))
        return BipartiteState(sum(regs), (self.n_outcomes, self.d_b), tol=1e-8)


@dataclass(frozen=True)
class ConditionalAudit:
    lhs: float
    rhs: float
    norm: float
    fidelity: float
    form: str = "rank1"

    @property
    def slack(self) -> float:
        return self.lhs - self.rhs


@dataclass(frozen=True)
class MinEntropyChain:
    """Lower bounds on the weighted smooth min-entropy, all in bits.

    ``collision_bound = -log2(sum_w_tr) - log2(2/eps^2)`` is the intermediate
    bound; ``q_min`` never exceeds it.
    """

    q_min: float
    collision_bound: float
    weighted_purity: float
    purity_ceiling: float

    @property
    def slack(self) -> float:
        return self.purity_ceiling - self.weighted_purity


# --------------------------------------------------------------------------
# recovery fidelity and entropy


def _inv_quarter(rho_b: np.ndarray, tol: float) -> np.ndarray:
    return matrix_power_on_support(rho_b, -0.25, tol)


def conditioned(state: BipartiteState, tol: float = DEFAULT_TOL) -> np.ndarray:
    """``(I (x) rho_B^(-1/4)) rho_AB (I (x) rho_B^(-1/4))``."""
    rho_b = state.reduced("B")
    x = np.kron(np.eye(state.d_a), _inv_quarter(rho_b, tol))
    supp = np.kron(np.eye(state.d_a), matrix_power_on_support(rho_b, 0.0, tol))
    outside = float(np.linalg.norm(state.matrix - supp @ state.matrix @ supp))
    if outside > tol:
        log.warning("state has weight %.3e outside the support of rho_B; "
                    "continuing on the support", outside)
    return x @ state.matrix @ x


def _purity_of(mat: np.ndarray) -> float:
    return float(np.real(np.vdot(mat, mat)))


def pg_fidelity(state: BipartiteState, tol: float = DEFAULT_TOL) -> float:
    return _purity_of(conditioned(state, tol)) / state.d_a


def conditional_linear_entropy(state: BipartiteState, tol: float = DEFAULT_TOL) -> float:
    return 1.0 - state.d_a * pg_fidelity(state, tol)


def conditional_info(state: BipartiteState, tol: float = DEFAULT_TOL) -> float:
    """``d * F - 1/d``; reduces to ``tr(rho_A^2) - 1/d`` on product states."""
    d = state.d_a
    return d * pg_fidelity(state, tol) - 1.0 / d


def linear_entropy(rho) -> float:
    return 1.0 - _purity_of(np.asarray(rho, dtype=complex))


# --------------------------------------------------------------------------
# classical-quantum states


def post_measurement_cq(state: BipartiteState, p: Povm) -> ClassicalQuantumState:
    """Blocks ``tr_A[(M_i (x) I) rho_AB]``."""
    if p.dim != state.d_a:
        raise DimensionError(f"POVM on dimension {p.dim}, system A has dimension {state.d_a}")
    eye_b = np.eye(state.d_b)
    blocks = [partial_trace(np.kron(m, eye_b) @ state.matrix, state.dims, keep="B")
              for m in p.effects]
    blocks = [(b + b.conj().T) / 2 for b in blocks]
    return ClassicalQuantumState(tuple(blocks), p.labels)


def cq_guessing_quantities(cq: ClassicalQuantumState, d: int,
                           tol: float = DEFAULT_TOL) -> tuple[float, float]:
    """Recoverable fidelity and conditional linearized entropy of a cq state.

    The fidelity is normalised by ``d`` (dimension of the measured system),
    not by the outcome count; ``d * fidelity`` is the guessing probability.
    """
    # conditioning acts blockwise on a cq state: rho_B^(-1/4) sigma_i rho_B^(-1/4)
    q = _inv_quarter(cq.rho_b, tol)
    fid = sum(_purity_of(q @ b @ q) for b in cq.blocks) / d
    return fid, 1.0 - d * fid


def pgm_guessing_probability(cq: ClassicalQuantumState, tol: float = DEFAULT_TOL) -> float:
    """Success probability of the pretty-good measurement
    ``E_i = rho_B^(-1/2) sigma_i rho_B^(-1/2)`` on the cq blocks."""
    inv_half = matrix_power_on_support(cq.rho_b, -0.5, tol)
    return float(sum(np.real(np.trace(inv_half @ s @ inv_half @ s)) for s in cq.blocks))


def conditional_info_of_measurement(cq: ClassicalQuantumState, d: int,
                                    tol: float = DEFAULT_TOL) -> float:
    fid, _ = cq_guessing_quantities(cq, d, tol)
    return d * fid - 1.0 / d


def kraus_conditioned_purity(state: BipartiteState, p: Povm, tol: float = DEFAULT_TOL) -> float:
    """``sum_i tr[(K_i rho_bar K_i^dagger)^2]`` with ``K_i = sqrt(M_i)``: the
    conditioning is applied first, the measurement second."""
    rho_bar = conditioned(state, tol)
    eye_b = np.eye(state.d_b)
    total = 0.0
    for k in p.kraus():
        kk = np.kron(k, eye_b)
        total += _purity_of(kk @ rho_bar @ kk.conj().T)
    return total


def measured_conditional_entropy(state: BipartiteState, p: Povm, kraus: bool = False,
                                 tol: float = DEFAULT_TOL) -> float:
    """``S_L(M|B)``.  ``kraus=True`` keeps the post-measurement A system
    (Kraus form, needed for general equal-trace POVMs)."""
    if kraus:
        return 1.0 - kraus_conditioned_purity(state, p, tol)
    _, s = cq_guessing_quantities(post_measurement_cq(state, p), state.d_a, tol)
    return s


# --------------------------------------------------------------------------
# audits


def _is_rank1_projective(p: Povm, tol: float) -> bool:
    for m in p.effects:
        if abs(np.trace(m).real - 1) > tol or np.max(np.abs(m @ m - m)) > tol:
            return False
    return len(p) == p.dim


def conditional_exclusion_audit(e: WeightedEnsemble, state: BipartiteState, general: bool = False,
                   tol: float = DEFAULT_TOL) -> ConditionalAudit:
    """Average conditional linearized entropy against its lower bound.

    ``general=False``: rank-1 projective measurements and the bound
    ``(1 - ||g||)(1 - F)``.  ``general=True``: equal-trace POVMs with
    ``l`` effects of trace ``d/l`` and the bound
    ``1 - ||g|| - (sum_w/l - ||g||/d)(1 - S_L(A|B))``.
    """
    if e.dim != state.d_a:
        raise DimensionError(f"ensemble on dimension {e.dim}, system A has dimension {state.d_a}")
    if not e.normalized:
        e, _ = e.renormalized()
    d = state.d_a
    norm = ensemble_norm(e, tol)
    fid = pg_fidelity(state, tol)
    if general:
        for theta, p in enumerate(e.measurements):
            if not is_equal_trace(p, tol):
                raise PreconditionError(f"measurement {theta} does not have equal-trace effects")
        lhs = sum(w * measured_conditional_entropy(state, p, kraus=True, tol=tol)
                  for w, p in zip(e.weights, e.measurements))
        inv_l = sum(w / len(p) for w, p in zip(e.weights, e.measurements))
        rhs = 1.0 - norm - (inv_l - norm / d) * d * fid
        return ConditionalAudit(float(lhs), float(rhs), norm, fid, "equal-trace")
    for theta, p in enumerate(e.measurements):
        if not _is_rank1_projective(p, 1e-8):
            raise PreconditionError(f"measurement {theta} is not rank-1 projective")
    lhs = sum(w * measured_conditional_entropy(state, p, tol=tol)
              for w, p in zip(e.weights, e.measurements))
    rhs = (1.0 - norm) * (1.0 - fid)
    return ConditionalAudit(float(lhs), float(rhs), norm, fid, "rank1")


def _check_epsilon(eps: float):
    if not 0.0 < eps < 1.0:
        raise ValidationError(f"smoothing parameter {eps} outside (0, 1)")


def min_entropy_bound(e: WeightedEnsemble, state: BipartiteState, eps: float,
                   tol: float = DEFAULT_TOL) -> float:
    """``-log2[||g|| + F (1 - ||g||)] - log2(2/eps^2)``."""
    _check_epsilon(eps)
    if not e.normalized:
        e, _ = e.renormalized()
    norm = ensemble_norm(e, tol)
    fid = pg_fidelity(state, tol)
    return float(-np.log2(norm + fid * (1 - norm)) - np.log2(2 / eps**2))


def min_entropy_chain_audit(e: WeightedEnsemble, state: BipartiteState, eps: float,
                            tol: float = DEFAULT_TOL) -> MinEntropyChain:
    _check_epsilon(eps)
    if not e.normalized:
        e, _ = e.renormalized()
    for theta, p in enumerate(e.measurements):
        if not _is_rank1_projective(p, 1e-8):
            raise PreconditionError(f"measurement {theta} is not rank-1 projective")
    norm = ensemble_norm(e, tol)
    fid = pg_fidelity(state, tol)
    weighted = 0.0
    for w, p in zip(e.weights, e.measurements):
        f_m, _ = cq_guessing_quantities(post_measurement_cq(state, p), state.d_a, tol)
        weighted += w * state.d_a * f_m
    ceiling = norm + (1 - norm) * fid
    log_eps = np.log2(2 / eps**2)
    return MinEntropyChain(
        q_min=float(-np.log2(ceiling) - log_eps),
        collision_bound=float(-np.log2(weighted) - log_eps),
        weighted_purity=float(weighted),
        purity_ceiling=float(ceiling),
    )


def guessing_game_trace(state: BipartiteState, e: WeightedEnsemble, schedule,
                        tol: float = DEFAULT_TOL) -> list[tuple[float, float]]:
    """Weighted entropy sum and recoverable fidelity along a schedule of local
    unitaries ``(U_A, U_B)`` applied cumulatively; the first row is the
    initial state."""
    rows = []

    def record(s):
        total = sum(w * measured_conditional_entropy(s, p, tol=tol)
                    for w, p in zip(e.weights, e.measurements))
        rows.append((float(total), pg_fidelity(s, tol)))

    record(state)
    for step, (u_a, u_b) in enumerate(schedule):
        for name, u in (("U_A", u_a), ("U_B", u_b)):
            u = np.asarray(u)
            if u.ndim != 2 or np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) > 1e-10:
                raise ValidationError(f"step {step}: {name} is not unitary")
        state = state.evolve(u_a, u_b)
        record(state)
    return rows
