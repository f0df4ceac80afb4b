"""Two-path interferometer model: wave and path observables, visibility,
distinguishability and the duality identities.

Orientation convention: the path basis is the computational basis,
``sigma_w(0) = X`` and ``sigma_w(pi/2) = Y``, so the wave observable at phase
``phi`` is ``cos(phi) X + sin(phi) Y``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .conditional import (
    conditional_info,
    conditional_info_of_measurement,
    conditioned,
    post_measurement_cq,
)
from .errors import DimensionError
from .linalg import (
    PAULI_I,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    BipartiteState,
    partial_trace,
    perp_projector,
    purity,
)
from .measurements import Povm, WeightedEnsemble
from .views import InfoAudit, complete_info, info_gain, exclusion_audit, view_operator

TWO_PI = 2 * np.pi


def require_two_path(rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise DimensionError(
            f"interferometer models are two-path only; got a state of shape {rho.shape}")
    return rho


def _expect(obs, rho) -> float:
    return float(np.real(np.trace(obs @ rho)))


def _unit(angle: float) -> np.ndarray:
    return np.array([np.cos(angle), np.sin(angle)])


@dataclass(frozen=True)
class MziConfig:
    alpha: float = np.pi / 4
    phi: float = 0.0
    bs2: bool = True

    def __post_init__(self):
        if not (np.isfinite(self.alpha) and np.isfinite(self.phi)):
            raise ValueError("interferometer angles must be finite")
        object.__setattr__(self, "phi", float(self.phi) % TWO_PI)


@dataclass(frozen=True, eq=False)
class WaveObservable:
    phi: float
    basis: np.ndarray  # columns |0_phi>, |1_phi>
    matrix: np.ndarray

    def measurement(self) -> Povm:
        """Spectral projectors ``(I +- sigma_w(phi))/2``, i.e. onto the basis columns."""
        return Povm(((PAULI_I + self.matrix) / 2, (PAULI_I - self.matrix) / 2))


def wave_observable(phi: float) -> WaveObservable:
    s = 1 / np.sqrt(2)
    phase = np.exp(1j * phi)
    basis = s * np.array([[1, 1], [phase, -phase]], dtype=complex)
    return WaveObservable(float(phi), basis, np.cos(phi) * PAULI_X + np.sin(phi) * PAULI_Y)


def path_observable() -> np.ndarray:
    return PAULI_Z.copy()


def path_measurement() -> Povm:
    return Povm((np.diag([1.0, 0.0]), np.diag([0.0, 1.0])))


def bs1_unitary(alpha: float) -> np.ndarray:
    """``U|0> = cos a|0> + sin a|1>``, ``U|1> = sin a|0> - cos a|1>``."""
    c, s = np.cos(alpha), np.sin(alpha)
    return np.array([[c, s], [s, -c]], dtype=complex)


def mzi_probabilities(config: MziConfig, rho) -> tuple[float, float]:
    """Detector click probabilities (D0, D1) for an input state entering BS1."""
    rho = require_two_path(rho)
    u = bs1_unitary(config.alpha)
    inside = u @ rho @ u.conj().T
    obs = wave_observable(config.phi).matrix if config.bs2 else path_observable()
    mean = _expect(obs, inside)
    return (1 + mean) / 2, (1 - mean) / 2


def fringe_visibility(rho) -> float:
    rho = require_two_path(rho)
    return float(np.hypot(_expect(PAULI_X, rho), _expect(PAULI_Y, rho)))


def fringe_visibility_scan(rho, n: int = 1000) -> float:
    """Visibility straight from its definition: max over a phase grid of the
    detector contrast."""
    rho = require_two_path(rho)
    return max(abs(_expect(wave_observable(phi).matrix, rho))
               for phi in np.arange(n) * TWO_PI / n)


def path_distinguishability(rho) -> float:
    rho = require_two_path(rho)
    return abs(_expect(PAULI_Z, rho))


@dataclass(frozen=True)
class WaveInterference:
    gain_sum: float        # G(w_phi) + G(w_phi')
    gain_rhs: float
    amplitude_lhs: float   # |<w_phi> e_phi - <w_phi'> e_phi'|^2
    amplitude_rhs: float

    @property
    def residual(self) -> float:
        return max(abs(self.gain_sum - self.gain_rhs),
                   abs(self.amplitude_lhs - self.amplitude_rhs))


def wave_interference_audit(rho, phi: float, phi2: float) -> WaveInterference:
    rho = require_two_path(rho)
    w1, w2 = wave_observable(phi), wave_observable(phi2)
    g1 = info_gain(w1.measurement(), rho)
    g2 = info_gain(w2.measurement(), rho)
    g_path = info_gain(path_measurement(), rho)
    intensity = complete_info(rho) - g_path
    delta = phi2 - phi
    m1, m2 = _expect(w1.matrix, rho), _expect(w2.matrix, rho)
    gain_rhs = np.cos(delta) * m1 * m2 + intensity * np.sin(delta) ** 2
    # e^{i pi} acts on the planar amplitude as a sign flip
    amp = m1 * _unit(phi) + (-1.0) * m2 * _unit(phi2)
    return WaveInterference(g1 + g2, float(gain_rhs), float(amp @ amp),
                            float(2 * intensity * np.sin(delta) ** 2))


@dataclass(frozen=True)
class DualityReport:
    visibility: float
    distinguishability: float
    purity: float
    wpdr_residual: float
    ier_residual: float
    operator_residual: float


def wpdr_audit(rho, phi: float = 0.0) -> DualityReport:
    """``V^2 + D^2 = 2 tr(rho^2) - 1`` together with the three-observable
    information identity and the view-operator resolution of the identity on
    the complement of the maximally entangled vector."""
    rho = require_two_path(rho)
    v, dist, pur = fringe_visibility(rho), path_distinguishability(rho), purity(rho)
    w1, w2 = wave_observable(phi), wave_observable(phi + np.pi / 2)
    gains = (info_gain(w1.measurement(), rho) + info_gain(w2.measurement(), rho)
             + info_gain(path_measurement(), rho))
    views = (view_operator(path_measurement()).matrix + view_operator(w1.measurement()).matrix
             + view_operator(w2.measurement()).matrix)
    return DualityReport(
        visibility=v,
        distinguishability=dist,
        purity=pur,
        wpdr_residual=abs(v**2 + dist**2 - (2 * pur - 1)),
        ier_residual=abs(gains - complete_info(rho)),
        operator_residual=float(np.max(np.abs(views - perp_projector(2)))),
    )


def delayed_choice_ensemble(beta: float, phi: float = 0.0) -> WeightedEnsemble:
    """Path observable with weight cos^2(beta) and two complementary wave
    observables with weight sin^2(beta) each; weights left unnormalised."""
    c2, s2 = np.cos(beta) ** 2, np.sin(beta) ** 2
    return WeightedEnsemble(
        (path_measurement(), wave_observable(phi).measurement(),
         wave_observable(phi + np.pi / 2).measurement()),
        np.array([c2, s2, s2]),
        normalized=False,
    )


@dataclass(frozen=True)
class DelayedChoiceReport:
    raw_weights: tuple
    raw_weighted_gain: float
    audit: InfoAudit  # on the renormalised ensemble; audit.weight_factor = 1 + sin^2(beta)


def delayed_choice_audit(alpha: float, beta: float, rho, phi: float = 0.0) -> DelayedChoiceReport:
    rho = require_two_path(rho)
    u = bs1_unitary(alpha)
    inside = u @ rho @ u.conj().T
    e = delayed_choice_ensemble(beta, phi)
    raw_gain = sum(w * info_gain(p, inside) for w, p in zip(e.weights, e.measurements))
    return DelayedChoiceReport(tuple(float(w) for w in e.weights), float(raw_gain),
                               exclusion_audit(e, inside))


# --------------------------------------------------------------------------
# memory-assisted version


@dataclass(frozen=True)
class ConditionalWaveReport:
    amplitude_lhs: float
    amplitude_rhs: float
    amplitude_norm_residual: float  # tr(amp_phi^2) vs 2 I(w_phi|B)
    wpdr_lhs: float                 # I(w_phi|B) + I(w_phi+pi/2|B) + I(path|B)
    conditional_info: float

    @property
    def residual(self) -> float:
        return max(abs(self.amplitude_lhs - self.amplitude_rhs),
                   self.amplitude_norm_residual,
                   abs(self.wpdr_lhs - self.conditional_info))


def conditional_amplitude(state: BipartiteState, phi: float, rho_bar=None) -> np.ndarray:
    """``tr_A[rho_bar (sigma_w(phi) (x) I)]`` attached to the planar unit vector
    at ``phi``; shape ``(2, d_B, d_B)``."""
    rho_bar = conditioned(state) if rho_bar is None else rho_bar
    op = np.kron(wave_observable(phi).matrix, np.eye(state.d_b))
    x = partial_trace(rho_bar @ op, state.dims, keep="B")
    return np.einsum("k,ij->kij", _unit(phi), x)


def _amp_square(amp: np.ndarray) -> float:
    return float(np.real(sum(np.trace(a @ a) for a in amp)))


def conditional_wave_scan(state: BipartiteState, phase_pairs) -> list[ConditionalWaveReport]:
    """:func:`conditional_wave_audit` over many ``(phi, phi2)`` pairs, sharing
    the conditioned state and the phase-independent terms."""
    if state.d_a != 2:
        raise DimensionError(f"system A must be a qubit, got dimension {state.d_a}")
    rho_bar = conditioned(state)

    def info(p: Povm) -> float:
        return conditional_info_of_measurement(post_measurement_cq(state, p), 2)

    i_ab = conditional_info(state)
    i_path = info(path_measurement())
    reports = []
    for phi, phi2 in phase_pairs:
        a1 = conditional_amplitude(state, phi, rho_bar)
        a2 = conditional_amplitude(state, phi2, rho_bar)
        i_w1 = info(wave_observable(phi).measurement())
        i_w2 = info(wave_observable(phi + np.pi / 2).measurement())
        reports.append(ConditionalWaveReport(
            amplitude_lhs=_amp_square(a1 + (-1.0) * a2),
            amplitude_rhs=float(2 * (i_ab - i_path) * np.sin(phi - phi2) ** 2),
            amplitude_norm_residual=abs(_amp_square(a1) - 2 * i_w1),
            wpdr_lhs=i_w1 + i_w2 + i_path,
            conditional_info=i_ab,
        ))
    return reports


def conditional_wave_audit(state: BipartiteState, phi: float, phi2: float) -> ConditionalWaveReport:
    """Memory-assisted wave interference: the conditional amplitude identity,
    its norm against ``2 I(w_phi|B)``, and the conditional duality sum."""
    return conditional_wave_scan(state, [(phi, phi2)])[0]
