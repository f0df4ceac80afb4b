"""Correlation witness from paired local measurements.

For paired POVMs ``(M^A_theta, M^B_theta)`` with matched outcome labels the
correlation measure is ``J = sum_theta w_theta sum_i |tr(J_i|theta rho)|``
with traceless-shifted detection operators; separable states obey
``J <= sqrt(L_A L_B)`` where ``L = ||g|| (1 - 1/d)``.

Observables enter as their two-outcome eigenbasis measurements, so each
Pauli-type pair contributes ``(w/2) |<sigma (x) sigma'>|``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize
from scipy.stats import qmc

from .errors import DimensionError, ValidationError
from .linalg import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    BipartiteState,
    partial_transpose,
    traceless_hermitian_basis,
)
from .measurements import Povm, WeightedEnsemble, noisy_pure_family, observable_measurement
from .views import ensemble_norm

log = logging.getLogger(__name__)

N_OBS = 0.5 * PAULI_Z + np.sqrt(3) / 2 * PAULI_X

WITNESS_CASES = {
    "a": (PAULI_X, PAULI_X),
    "b": (PAULI_Z, PAULI_X),
    "c": (N_OBS, N_OBS),
    "d": (PAULI_Z, PAULI_Z),
}


@dataclass(frozen=True, eq=False)
class WitnessSpec:
    pairs: tuple
    weights: np.ndarray

    def __post_init__(self):
        pairs = tuple((a, b) for a, b in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        object.__setattr__(self, "weights", w)
        if not pairs:
            raise ValidationError("a witness needs at least one measurement pair")
        if len(w) != len(pairs):
            raise ValidationError("one weight per measurement pair is required")
        if np.any(w < 0) or abs(w.sum() - 1) > 1e-12:
            raise ValidationError("witness weights must lie on the probability simplex")
        for theta, (a, b) in enumerate(pairs):
            if len(a) != len(b):
                raise ValidationError(
                    f"pair {theta}: {len(a)} outcomes on A but {len(b)} on B")
        if len({a.dim for a, _ in pairs}) != 1 or len({b.dim for _, b in pairs}) != 1:
            raise ValidationError("all pairs must act on the same local dimensions")

    @property
    def dims(self) -> tuple[int, int]:
        a, b = self.pairs[0]
        return a.dim, b.dim

    def with_weights(self, weights) -> "WitnessSpec":
        return WitnessSpec(self.pairs, weights)

    def side(self, which: int) -> WeightedEnsemble:
        return WeightedEnsemble(tuple(p[which] for p in self.pairs), self.weights)


def pauli_pairs(obs_pairs) -> tuple:
    return tuple((observable_measurement(a), observable_measurement(b)) for a, b in obs_pairs)


def case_pairs(case: str) -> tuple:
    """``Y(x)Y``, ``Z(x)Z`` and the case-specific third pair."""
    if case not in WITNESS_CASES:
        raise ValidationError(f"unknown case {case!r}; expected one of a, b, c, d")
    return pauli_pairs(((PAULI_Y, PAULI_Y), (PAULI_Z, PAULI_Z), WITNESS_CASES[case]))


def _traceless(m):
    return m - np.trace(m) * np.eye(m.shape[0]) / m.shape[0]


def detection_operators(a: Povm, b: Povm) -> list[np.ndarray]:
    return [np.kron(_traceless(ma), _traceless(mb)) for ma, mb in zip(a.effects, b.effects)]


def pair_correlations(w: WitnessSpec, rho) -> np.ndarray:
    """Per-pair unweighted contributions ``sum_i |tr(J_i|theta rho)|``."""
    rho = rho.matrix if isinstance(rho, BipartiteState) else np.asarray(rho, dtype=complex)
    n = w.dims[0] * w.dims[1]
    if rho.shape != (n, n):
        raise DimensionError(f"state of shape {rho.shape} for local dimensions {w.dims}")
    return np.array([sum(abs(np.trace(j @ rho)) for j in detection_operators(a, b))
                     for a, b in w.pairs])


def correlation_measure(w: WitnessSpec, rho) -> float:
    return float(w.weights @ pair_correlations(w, rho))


def correlation_measures(w: WitnessSpec, states) -> np.ndarray:
    """:func:`correlation_measure` over a stack of states, shape ``(n, D, D)``."""
    states = np.asarray(states, dtype=complex)
    n = w.dims[0] * w.dims[1]
    if states.ndim != 3 or states.shape[1:] != (n, n):
        raise DimensionError(f"state stack of shape {states.shape} for local dimensions {w.dims}")
    ops, weights = [], []
    for wt, (a, b) in zip(w.weights, w.pairs):
        for j in detection_operators(a, b):
            ops.append(j)
            weights.append(wt)
    # tr(J rho) = sum_ij J_ji rho_ij
    values = np.einsum("kji,sij->sk", np.array(ops), states)
    return np.abs(values) @ np.array(weights)


def separable_bound(w: WitnessSpec) -> float:
    d_a, d_b = w.dims
    l_a = ensemble_norm(w.side(0)) * (1 - 1 / d_a)
    l_b = ensemble_norm(w.side(1)) * (1 - 1 / d_b)
    return float(np.sqrt(l_a * l_b))


@dataclass(frozen=True)
class WitnessAudit:
    j: float
    bound: float
    tol: float = 1e-9

    @property
    def margin(self) -> float:
        return self.j - self.bound

    @property
    def entangled(self) -> bool:
        return self.margin > self.tol


def witness_audit(w: WitnessSpec, rho, tol: float = 1e-9) -> WitnessAudit:
    return WitnessAudit(correlation_measure(w, rho), separable_bound(w), tol)


# --------------------------------------------------------------------------
# critical noise levels on the noisy two-qubit family


def _require_qubit_pairs(w: WitnessSpec):
    if w.dims != (2, 2):
        raise DimensionError(f"the noisy family is two-qubit; witness acts on {w.dims}")


def critical_eta_bisect(w: WitnessSpec, beta: float, iterations: int = 60) -> float:
    """Smallest eta at which the witness fires, by bisection on the margin."""
    _require_qubit_pairs(w)
    bound = separable_bound(w)

    def fires(eta):
        return correlation_measure(w, noisy_pure_family(eta, beta)) - bound > 0

    if not fires(1.0):
        return 1.0
    lo, hi = 0.0, 1.0
    for _ in range(iterations):
        mid = (lo + hi) / 2
        if fires(mid):
            hi = mid
        else:
            lo = mid
    return hi


def critical_eta(w: WitnessSpec, beta: float) -> float:
    """Threshold ``eta`` above which the witness detects ``rho(eta, beta)``,
    clamped to [0, 1].

    Uses ``J(rho_eta) = eta J(rho_1)`` when that linearity checks out to
    1e-12, and bisection otherwise.
    """
    _require_qubit_pairs(w)
    j1 = correlation_measure(w, noisy_pure_family(1.0, beta))
    j_half = correlation_measure(w, noisy_pure_family(0.5, beta))
    if abs(j_half - 0.5 * j1) >= 1e-12:
        return critical_eta_bisect(w, beta)
    if j1 <= 1e-15:
        log.info("no detection at any eta (J vanishes on the noiseless state)")
        return 1.0
    return float(min(max(separable_bound(w) / j1, 0.0), 1.0))


def ppt_min_eigenvalue(state: BipartiteState) -> float:
    return float(np.linalg.eigvalsh(partial_transpose(state.matrix, state.dims, "B"))[0])


def ppt_critical_eta(beta: float, tol: float = 1e-12) -> float:
    """Entanglement threshold of ``rho(eta, beta)`` from the partial transpose
    (exact for two qubits), by bisection."""
    def entangled(eta):
        return ppt_min_eigenvalue(noisy_pure_family(eta, beta)) < -1e-13

    if not entangled(1.0):
        return 1.0
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if entangled(mid):
            hi = mid
        else:
            lo = mid
    return (lo + hi) / 2


# --------------------------------------------------------------------------
# weight optimisation


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 20
    xatol: float = 1e-8
    fatol: float = 1e-13
    maxiter: int = 4000
    spread: float = 4.0
    seed: int = 0


@dataclass(frozen=True)
class OptimizationResult:
    weights: np.ndarray
    eta_opt: float
    eta_equ: float
    converged: bool
    evaluations: int = field(default=0, compare=False)


def softmax(x) -> np.ndarray:
    z = np.exp(x - x.max())
    return z / z.sum()


def _real_view(p: Povm) -> np.ndarray:
    """View operator in real traceless-basis coordinates, ``(d^2-1)`` square."""
    basis = traceless_hermitian_basis(p.dim)
    coords = np.array([[np.real(np.vdot(b, m)) for b in basis] for m in p.effects])
    return coords.T @ coords


class _EtaObjective:
    """Fast ``eta_crit(weights)`` from per-pair precomputation."""

    def __init__(self, pairs, beta):
        probe = WitnessSpec(pairs, np.full(len(pairs), 1 / len(pairs)))
        _require_qubit_pairs(probe)
        self.d_a, self.d_b = probe.dims
        self.c = pair_correlations(probe, noisy_pure_family(1.0, beta))
        self.c_half = pair_correlations(probe, noisy_pure_family(0.5, beta))
        views_a = np.array([_real_view(a) for a, _ in pairs])
        views_b = np.array([_real_view(b) for _, b in pairs])
        if views_a.shape != views_b.shape:
            raise DimensionError("fast objective needs equal local dimensions")
        self.shape = (2,) + views_a.shape[1:]
        self.views = np.stack([views_a, views_b], axis=1).reshape(len(pairs), -1)
        self.scale = (1 - 1 / self.d_a) * (1 - 1 / self.d_b)
        self.calls = 0

    def __call__(self, w) -> float:
        self.calls += 1
        j1 = float(w @ self.c)
        if j1 <= 1e-15:
            return 1.0
        n_a, n_b = np.linalg.eigvalsh((w @ self.views).reshape(self.shape))[:, -1]
        bound = np.sqrt(max(n_a, 0.0) * max(n_b, 0.0) * self.scale)
        return float(min(bound / j1, 1.0))


def optimize_weights(pairs, beta: float, config: OptimizerConfig | None = None) -> OptimizationResult:
    """Minimise the critical noise level over the weight simplex.

    Nelder-Mead on softmax logits, restarted from the equal-weight point and
    ``config.restarts`` Halton points; the best value wins.  The equal-weight
    value is always a candidate, so ``eta_opt <= eta_equ``.
    """
    config = config or OptimizerConfig()
    pairs = tuple(pairs)
    if len(pairs) < 2:
        raise ValidationError("weight optimisation needs at least two pairs")
    k = len(pairs)
    objective = _EtaObjective(pairs, beta)
    if np.max(np.abs(objective.c_half - 0.5 * objective.c)) >= 1e-12:
        raise ValidationError("correlations are not linear in eta for this family")
    equal = np.full(k, 1.0 / k)
    eta_equ = objective(equal)

    halton = qmc.Halton(d=k - 1, scramble=True, seed=config.seed).random(config.restarts)
    starts = [np.zeros(k - 1)] + [config.spread * (2 * h - 1) for h in halton]

    logits = np.zeros(k)

    def f(x):
        logits[:-1] = x
        return objective(softmax(logits))

    best_w, best_eta, converged = equal, eta_equ, True
    for x0 in starts:
        res = minimize(f, x0, method="Nelder-Mead",
                       options={"xatol": config.xatol, "fatol": config.fatol,
                                "maxiter": config.maxiter})
        if res.fun < best_eta:
            best_w, best_eta = softmax(np.append(res.x, 0.0)), float(res.fun)
            converged = bool(res.success)
    if not converged:
        log.warning("optimizer stopped before convergence; best value %.9f", best_eta)
    return OptimizationResult(best_w, best_eta, eta_equ, converged, objective.calls)


# --------------------------------------------------------------------------
# scan


@dataclass(frozen=True)
class EtaScanRow:
    beta: float
    eta_star: float
    eta_equ: float
    eta_opt: float
    j_at_eta1: float   # equal weights
    bound: float       # equal weights

    CSV_HEADER = ("beta", "eta_star", "eta_equ", "eta_opt", "J_at_eta1", "bound")

    def as_tuple(self) -> tuple:
        return (self.beta, self.eta_star, self.eta_equ, self.eta_opt, self.j_at_eta1, self.bound)


def beta_grid(n: int = 65) -> np.ndarray:
    return np.linspace(-np.pi / 4, np.pi / 4, n)


def witness_scan(pairs, betas=None, config: OptimizerConfig | None = None,
                 optimize: bool = True) -> list[EtaScanRow]:
    """Critical noise levels of the paired measurements along a beta grid."""
    betas = beta_grid() if betas is None else np.asarray(betas, dtype=float)
    if np.any(np.abs(betas) > np.pi / 4 + 1e-12):
        raise ValidationError("beta grid must lie within [-pi/4, pi/4]")
    pairs = tuple(pairs)
    spec = WitnessSpec(pairs, np.full(len(pairs), 1 / len(pairs)))
    bound = separable_bound(spec)
    optimize = optimize and len(pairs) > 1
    rows = []
    for beta in betas:
        eta_equ = critical_eta(spec, beta)
        eta_opt = optimize_weights(pairs, beta, config).eta_opt if optimize else eta_equ
        rows.append(EtaScanRow(
            beta=float(beta),
            eta_star=ppt_critical_eta(beta),
            eta_equ=eta_equ,
            eta_opt=eta_opt,
            j_at_eta1=correlation_measure(spec, noisy_pure_family(1.0, beta)),
            bound=bound,
        ))
    return rows


def case_scan(case: str, betas=None, config: OptimizerConfig | None = None,
                 optimize: bool = True) -> list[EtaScanRow]:
    return witness_scan(case_pairs(case), betas, config, optimize)
