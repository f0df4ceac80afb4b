"""View operators, information gain and linear-inversion tomography.

A measurement's view operator lives on the doubled space and is built from
the vectorised traceless parts of its effects; ``<rho|G|rho>`` is the
information gain of the measurement on ``rho``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse.csgraph import connected_components

from .errors import DimensionError, PreconditionError, ValidationError
from .linalg import (
    DEFAULT_TOL,
    SUPPORT_RTOL,
    check_density,
    devectorize,
    hermitian_eigensystem,
    psd_projection,
    purity,
    vectorize,
)
from .measurements import Povm, WeightedEnsemble, validate_povm


@dataclass(frozen=True, eq=False)
class ViewOperator:
    dim: int
    matrix: np.ndarray

    @property
    def norm(self) -> float:
        return operator_norm(self)

    def expectation(self, rho) -> float:
        """``<rho|G|rho>`` with ``|rho>`` the vectorised state."""
        v = vectorize(rho)
        return float(np.real(np.vdot(v, self.matrix @ v)))


@dataclass(frozen=True, eq=False)
class GramMatrix:
    """Gram matrix of the weighted traceless effect vectors.

    ``labels[k] = (theta, i)`` names the effect behind row ``k``.
    """

    matrix: np.ndarray
    labels: tuple


@dataclass(frozen=True)
class InfoAudit:
    lhs: float
    lhs_view: float
    norm: float
    complete_info: float
    bound: float
    weight_factor: float = 1.0

    @property
    def slack(self) -> float:
        return self.bound - self.lhs


@dataclass(frozen=True, eq=False)
class Reconstruction:
    raw: np.ndarray
    projected: np.ndarray
    support_residual: float
    probability_residual: float


def _traceless(m: np.ndarray) -> np.ndarray:
    d = m.shape[0]
    return m - np.trace(m) * np.eye(d) / d


def _require_valid(p: Povm, tol: float):
    report = validate_povm(p, tol)
    if not report.ok:
        raise ValidationError(report.summary())


def view_operator(p: Povm, tol: float = DEFAULT_TOL) -> ViewOperator:
    _require_valid(p, tol)
    vecs = np.array([vectorize(_traceless(m)) for m in p.effects])
    return ViewOperator(p.dim, vecs.T @ vecs.conj())


def average_view(e: WeightedEnsemble, tol: float = DEFAULT_TOL) -> ViewOperator:
    d = e.dim
    g = np.zeros((d * d, d * d), dtype=complex)
    for w, p in zip(e.weights, e.measurements):
        g += w * view_operator(p, tol).matrix
    return ViewOperator(d, g)


def gram_matrix(e: WeightedEnsemble, tol: float = DEFAULT_TOL) -> GramMatrix:
    labels, rows = [], []
    for theta, (w, p) in enumerate(zip(e.weights, e.measurements)):
        _require_valid(p, tol)
        for i, m in enumerate(p.effects):
            labels.append((theta, i))
            rows.append(np.sqrt(w) * vectorize(_traceless(m)))
    r = np.array(rows)
    # entries sqrt(w w') tr(M~ M~') are real for Hermitian effects
    return GramMatrix(np.real(r.conj() @ r.T), tuple(labels))


def operator_norm(v) -> float:
    """Largest eigenvalue of a view operator, Gram matrix or Hermitian array."""
    mat = v.matrix if isinstance(v, (ViewOperator, GramMatrix)) else np.asarray(v)
    if mat.size == 0:
        return 0.0
    vals, _ = hermitian_eigensystem(mat)
    return max(float(vals[-1]), 0.0)


def ensemble_norm(e: WeightedEnsemble, tol: float = DEFAULT_TOL) -> float:
    """``||g||`` from whichever representation is smaller: the Gram matrix
    (total effect count) or the view operator (d^2)."""
    n_effects = sum(len(p) for p in e.measurements)
    if n_effects < e.dim**2:
        return operator_norm(gram_matrix(e, tol))
    return operator_norm(average_view(e, tol))


def is_complementary(p1: Povm, p2: Povm, tol: float = DEFAULT_TOL) -> bool:
    if p1.dim != p2.dim:
        raise DimensionError(f"dimension mismatch {p1.dim} vs {p2.dim}")
    prod = view_operator(p1, tol).matrix @ view_operator(p2, tol).matrix
    return float(np.linalg.norm(prod, 2)) <= tol


def is_informationally_complete(e: WeightedEnsemble, tol: float = DEFAULT_TOL) -> bool:
    """True when the average view operator is invertible on the complement of
    the maximally entangled vector."""
    vals = np.linalg.eigvalsh(average_view(e, tol).matrix)
    # psi_d is always an exact null vector, so the restricted minimum is the
    # second smallest eigenvalue
    return bool(len(vals) > 1 and vals[1] > tol)


def info_gain(p: Povm, rho) -> float:
    """Sum over outcomes of the squared bias ``(p_i - tr(M_i)/d)^2``."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (p.dim, p.dim):
        raise DimensionError(f"state of shape {rho.shape} for a {p.dim}-dimensional POVM")
    probs = p.probabilities(rho)
    prior = np.array([np.trace(m).real for m in p.effects]) / p.dim
    return float(np.sum((probs - prior) ** 2))


def complete_info(rho) -> float:
    """``tr(rho^2) - 1/d``."""
    rho = np.asarray(rho, dtype=complex)
    return purity(rho) - 1.0 / rho.shape[0]


def exclusion_audit(e: WeightedEnsemble, rho, tol: float = DEFAULT_TOL) -> InfoAudit:
    """Weighted average information gain against ``||g|| * I_com(rho)``.

    Unnormalised ensembles are rescaled onto the simplex first; the factor is
    kept in ``weight_factor``.
    """
    rho = check_density(rho, tol)
    if rho.shape[0] != e.dim:
        raise DimensionError(f"state dimension {rho.shape[0]} vs ensemble dimension {e.dim}")
    factor = 1.0
    if not e.normalized:
        e, factor = e.renormalized()
    lhs = float(sum(w * info_gain(p, rho) for w, p in zip(e.weights, e.measurements)))
    g = average_view(e, tol)
    lhs_view = g.expectation(rho)
    norm = operator_norm(g)
    icom = complete_info(rho)
    return InfoAudit(lhs, lhs_view, norm, icom, norm * icom, factor)


def exclusivity(e: WeightedEnsemble, tol: float = DEFAULT_TOL) -> float:
    return 1.0 - ensemble_norm(e, tol)


def overlap_matrix(e: WeightedEnsemble) -> np.ndarray:
    """``W[(i,theta),(j,theta')] = tr(M_i|theta M_j|theta')``."""
    effects = [m for p in e.measurements for m in p.effects]
    return np.array([[np.real(np.vdot(a, b)) for b in effects] for a in effects])


def is_reducible(w, tol: float = DEFAULT_TOL) -> bool:
    """Reducibility of a symmetric nonnegative matrix via connectivity of its
    off-diagonal support graph."""
    w = np.asarray(w)
    adj = np.abs(w) > tol
    np.fill_diagonal(adj, False)
    n_comp, _ = connected_components(adj, directed=False)
    return n_comp > 1


# --------------------------------------------------------------------------
# tomography


def _check_probabilities(e: WeightedEnsemble, probabilities, tol: float):
    if len(probabilities) != len(e.measurements):
        raise ValidationError(f"{len(probabilities)} probability lists for {len(e)} measurements")
    out = []
    for theta, (p, probs) in enumerate(zip(e.measurements, probabilities)):
        probs = np.asarray(probs, dtype=float).reshape(-1)
        if len(probs) != len(p):
            raise ValidationError(f"measurement {theta}: {len(probs)} probabilities for {len(p)} outcomes")
        if np.any(probs < -tol):
            raise ValidationError(f"measurement {theta}: negative probability {probs.min():.3e}")
        if abs(probs.sum() - 1) > max(tol, 1e-6):
            raise ValidationError(f"measurement {theta}: probabilities sum to {probs.sum():.12g}")
        out.append(probs)
    return out


def reconstruct_state(e: WeightedEnsemble, probabilities, tol: float = DEFAULT_TOL,
                      support_rtol: float = SUPPORT_RTOL) -> Reconstruction:
    """Linear-inversion estimate of the state from outcome probabilities.

    The statistics vector ``sum w (p_i - tr(M_i)/d) |M~_i>`` is pulled back
    through the pseudo-inverse of the average view operator.  The raw estimate
    is returned together with its PSD projection.
    """
    if not e.normalized:
        e, _ = e.renormalized()
    if not is_informationally_complete(e, tol):
        raise PreconditionError("ensemble is not informationally complete")
    probabilities = _check_probabilities(e, probabilities, tol)
    d = e.dim
    stats = np.zeros(d * d, dtype=complex)
    for w, p, probs in zip(e.weights, e.measurements, probabilities):
        for m, pi in zip(p.effects, probs):
            m_tilde = _traceless(m)
            stats += w * (pi - np.trace(m).real / d) * vectorize(m_tilde)
    g = average_view(e, tol).matrix
    vals, vecs = np.linalg.eigh(g)
    keep = vals > support_rtol * vals[-1]
    inv = (vecs[:, keep] / vals[keep]) @ vecs[:, keep].conj().T
    x = inv @ stats
    support_residual = float(np.linalg.norm(g @ x - stats))
    raw = devectorize(x) + np.eye(d) / d
    raw = (raw + raw.conj().T) / 2
    predicted = e.probabilities(raw)
    prob_res = max(float(np.max(np.abs(a - b))) for a, b in zip(predicted, probabilities))
    return Reconstruction(raw, psd_projection(raw), support_residual, prob_res)
