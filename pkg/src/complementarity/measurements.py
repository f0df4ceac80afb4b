"""Measurement ensembles: POVMs, projective bases, MUBs and MUMs."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .linalg import (
    DEFAULT_TOL,
    BipartiteState,
    as_generator,
    haar_unitary,
    ket_to_density,
    matrix_power_on_support,
)


@dataclass(frozen=True, eq=False)
class Povm:
    """A generalized measurement given by its list of effects.

    Construction does not validate; call :func:`validate_povm` or
    :meth:`checked` when the effects come from outside.
    """

    effects: tuple
    labels: tuple = ()

    def __post_init__(self):
        effects = tuple(np.asarray(m, dtype=complex) for m in self.effects)
        object.__setattr__(self, "effects", effects)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i) for i in range(len(effects))))
        elif len(self.labels) != len(effects):
            raise ValidationError("number of labels differs from number of effects")
        else:
            object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))

    @property
    def dim(self) -> int:
        return self.effects[0].shape[0]

    def __len__(self):
        return len(self.effects)

    def probabilities(self, rho) -> np.ndarray:
        rho = np.asarray(rho, dtype=complex)
        return np.array([np.real(np.vdot(m, rho)) for m in self.effects])

    def kraus(self) -> list[np.ndarray]:
        """Canonical Kraus operators ``sqrt(M_i)``."""
        return [matrix_power_on_support(m, 0.5) for m in self.effects]

    def checked(self, tol: float = DEFAULT_TOL) -> "Povm":
        report = validate_povm(self, tol)
        if not report.ok:
            raise ValidationError(report.summary())
        return self


@dataclass(frozen=True, eq=False)
class WeightedEnsemble:
    """Measurements with selection weights.

    ``normalized=False`` marks weights that deliberately do not sum to one
    (delayed-choice setting); audits renormalise via :meth:`renormalized`.
    """

    measurements: tuple
    weights: np.ndarray
    normalized: bool = True

    def __post_init__(self):
        object.__setattr__(self, "measurements", tuple(self.measurements))
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        object.__setattr__(self, "weights", w)
        if len(w) != len(self.measurements):
            raise ValidationError("one weight per measurement is required")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise ValidationError("weights must be finite and nonnegative")
        if self.normalized and abs(w.sum() - 1) > 1e-12:
            raise ValidationError(f"weights sum to {w.sum():.15g}, expected 1")
        dims = {m.dim for m in self.measurements}
        if len(dims) != 1:
            raise ValidationError(f"measurements act on different dimensions {sorted(dims)}")

    @classmethod
    def uniform(cls, measurements) -> "WeightedEnsemble":
        measurements = tuple(measurements)
        n = len(measurements)
        return cls(measurements, np.full(n, 1.0 / n))

    @property
    def dim(self) -> int:
        return self.measurements[0].dim

    def __len__(self):
        return len(self.measurements)

    def renormalized(self) -> tuple["WeightedEnsemble", float]:
        """Return the simplex-normalised ensemble and the factor divided out."""
        total = float(self.weights.sum())
        if total <= 0:
            raise ValidationError("weights sum to zero")
        return WeightedEnsemble(self.measurements, self.weights / total), total

    def probabilities(self, rho) -> list[np.ndarray]:
        return [m.probabilities(rho) for m in self.measurements]


@dataclass(frozen=True)
class MumSpec:
    """Mutually unbiased measurement parameters; ``t`` is the smearing strength."""

    dim: int
    kappa: float

    def __post_init__(self):
        if not (1.0 / self.dim < self.kappa <= 1.0):
            raise ValidationError(f"kappa={self.kappa} outside (1/d, 1] for d={self.dim}")

    @property
    def t(self) -> float:
        d = self.dim
        return float(np.sqrt((self.kappa - 1.0 / d) / (1.0 - 1.0 / d)))


@dataclass
class Report:
    """Outcome of a validator: every violated relation with its magnitude."""

    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, what: str, magnitude: float):
        self.violations.append((what, float(magnitude)))

    def summary(self) -> str:
        if self.ok:
            return "valid"
        return "; ".join(f"{what} (magnitude {mag:.3e})" for what, mag in self.violations)


# --------------------------------------------------------------------------
# constructors


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % p for p in range(2, int(n**0.5) + 1))


def projective_from_basis(vectors, tol: float = DEFAULT_TOL, labels=()) -> Povm:
    """Rank-1 projective measurement onto the columns of ``vectors``."""
    v = np.asarray(vectors, dtype=complex)
    if v.ndim != 2 or v.shape[0] != v.shape[1]:
        raise ValidationError(f"expected d orthonormal column vectors, got shape {v.shape}")
    err = float(np.max(np.abs(v.conj().T @ v - np.eye(v.shape[0]))))
    if err > tol:
        raise ValidationError(f"basis is not orthonormal (max deviation {err:.3e})")
    effects = [ket_to_density(v[:, i]) for i in range(v.shape[1])]
    # close the completeness relation exactly on the last effect
    effects[-1] = np.eye(v.shape[0]) - sum(effects[:-1])
    return Povm(tuple(effects), labels)


def observable_basis(obs) -> np.ndarray:
    """Eigenbasis of a Hermitian observable, largest eigenvalue first."""
    vals, vecs = np.linalg.eigh(np.asarray(obs, dtype=complex))
    return vecs[:, ::-1]


def observable_measurement(obs) -> Povm:
    return projective_from_basis(observable_basis(obs))


def mub_family(d: int) -> list[np.ndarray]:
    """Complete set of d+1 mutually unbiased bases for prime ``d``.

    Each basis is returned as a ``d x d`` unitary whose columns are the kets.
    The computational basis comes first.  For ``d = 2`` the order is the
    eigenbases of Z, X, Y; for odd primes basis ``a`` has components
    ``omega^(a k^2 + j k) / sqrt(d)``.
    """
    if not is_prime(d):
        raise ValidationError(f"MUB construction requires a prime dimension, got {d}")
    bases = [np.eye(d, dtype=complex)]
    k = np.arange(d)
    if d == 2:
        s = 1 / np.sqrt(2)
        bases.append(s * np.array([[1, 1], [1, -1]], dtype=complex))
        bases.append(s * np.array([[1, 1], [1j, -1j]], dtype=complex))
        return bases
    omega = np.exp(2j * np.pi / d)
    for a in range(d):
        cols = [omega ** ((a * k * k + j * k) % d) / np.sqrt(d) for j in range(d)]
        bases.append(np.array(cols).T)
    return bases


def mub_measurements(d: int) -> list[Povm]:
    return [projective_from_basis(b) for b in mub_family(d)]


def mum_family(d: int, kappa: float) -> list[Povm]:
    """d+1 mutually unbiased measurements of efficiency ``kappa``.

    Built by smearing MUB projectors: ``M = (1 - t)/d * I + t * P``.
    """
    spec = MumSpec(d, kappa)
    t = spec.t
    ident = np.eye(d, dtype=complex)
    family = []
    for basis in mub_family(d):
        proj = projective_from_basis(basis).effects
        family.append(Povm(tuple((1 - t) / d * ident + t * p for p in proj)))
    return family


def trivial_povm(d: int, n: int = 2) -> Povm:
    return Povm(tuple(np.eye(d, dtype=complex) / n for _ in range(n)))


def random_basis_measurement(d: int, rng) -> Povm:
    return projective_from_basis(haar_unitary(d, rng))


def random_povm(d: int, n_outcomes: int, rng) -> Povm:
    """Random POVM from a Haar isometry split into ``n_outcomes`` Kraus blocks."""
    v = haar_unitary(d * n_outcomes, rng)[:, :d]
    effects = []
    for i in range(n_outcomes):
        k = v[i * d:(i + 1) * d, :]
        effects.append(k.conj().T @ k)
    effects[-1] = np.eye(d) - sum(effects[:-1])
    effects[-1] = (effects[-1] + effects[-1].conj().T) / 2
    return Povm(tuple(effects))


def random_ete_povm(d: int, rng, n_mix: int | None = None) -> Povm:
    """Random d-outcome POVM whose effects all have unit trace.

    Convex mixture of randomly rotated and relabelled projective bases and the
    trivial POVM; every member has unit-trace effects, so the mixture does too.
    """
    gen = as_generator(rng)
    n_mix = n_mix or int(gen.integers(1, 4))
    probs = gen.dirichlet(np.ones(n_mix + 1))
    effects = [probs[-1] * np.eye(d, dtype=complex) / d for _ in range(d)]
    for p in probs[:-1]:
        u = haar_unitary(d, gen)
        perm = gen.permutation(d)
        for i in range(d):
            effects[i] = effects[i] + p * ket_to_density(u[:, perm[i]])
    return Povm(tuple(effects))


# --------------------------------------------------------------------------
# validators


def validate_povm(p: Povm, tol: float = DEFAULT_TOL) -> Report:
    report = Report()
    d = p.dim
    total = np.zeros((d, d), dtype=complex)
    for label, m in zip(p.labels, p.effects):
        if m.shape != (d, d):
            report.add(f"effect {label} has shape {m.shape}, expected {(d, d)}", 1.0)
            continue
        herm = float(np.max(np.abs(m - m.conj().T)))
        if herm > tol:
            report.add(f"effect {label} is not Hermitian", herm)
        lam = float(np.linalg.eigvalsh((m + m.conj().T) / 2)[0])
        if lam < -tol:
            report.add(f"effect {label} has negative eigenvalue {lam:.3e}", -lam)
        total = total + m
    err = float(np.max(np.abs(total - np.eye(d))))
    if err > tol:
        report.add("effects do not sum to the identity", err)
    return report


def is_equal_trace(p: Povm, tol: float = DEFAULT_TOL) -> bool:
    traces = np.array([np.trace(m).real for m in p.effects])
    return bool(np.ptp(traces) <= tol)


def validate_mum(family, kappa: float | None = None, tol: float = 1e-10) -> Report:
    """Check the three MUM trace relations (and POVM validity of each member).

    When ``kappa`` is omitted it is read off ``tr(M_0 M_0)`` of the first member.
    """
    report = Report()
    family = list(family)
    d = family[0].dim
    for n, p in enumerate(family):
        for what, mag in validate_povm(p, tol).violations:
            report.add(f"measurement {n}: {what}", mag)
        if len(p) != d:
            report.add(f"measurement {n} has {len(p)} outcomes, expected {d}", abs(len(p) - d))
    if not report.ok:
        return report
    if kappa is None:
        kappa = float(np.real(np.vdot(family[0].effects[0], family[0].effects[0])))
    off = (1 - kappa) / (d - 1)
    for a, pa in enumerate(family):
        for m in pa.effects:
            err = abs(np.trace(m).real - 1)
            if err > tol:
                report.add(f"measurement {a}: effect trace differs from 1", err)
        for b, pb in enumerate(family):
            for i, mi in enumerate(pa.effects):
                for j, mj in enumerate(pb.effects):
                    val = np.real(np.vdot(mi, mj))
                    if a != b:
                        target = 1.0 / d
                    else:
                        target = kappa if i == j else off
                    if abs(val - target) > tol:
                        report.add(f"tr(M[{i}|{a}] M[{j}|{b}]) = {val:.12g}, expected {target:.12g}",
                                   abs(val - target))
    return report


# --------------------------------------------------------------------------
# the noisy two-qubit family


def noisy_pure_family(eta: float, beta: float) -> BipartiteState:
    """``eta |psi(beta)><psi(beta)| + (1 - eta) I/4`` with
    ``|psi(beta)> = cos(beta)|00> + sin(beta)|11>``."""
    if not 0.0 <= eta <= 1.0:
        raise ValidationError(f"eta={eta} outside [0, 1]")
    if not -np.pi / 4 - 1e-12 <= beta <= np.pi / 4 + 1e-12:
        raise ValidationError(f"beta={beta} outside [-pi/4, pi/4]")
    psi = np.zeros(4, dtype=complex)
    psi[0], psi[3] = np.cos(beta), np.sin(beta)
    rho = eta * np.outer(psi, psi.conj()) + (1 - eta) * np.eye(4) / 4
    return BipartiteState(rho, (2, 2))
