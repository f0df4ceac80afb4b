"""Dense complex-matrix substrate.

Operators on a d-dimensional space are plain ``numpy`` arrays of shape
``(d, d)``.  The doubled space used for view operators is indexed so that the
amplitude of ``vectorize(O)`` at position ``i * d + j`` is ``O[i, j]``, i.e.
``|O> = sum_ij O_ij |i> (x) |j>*``.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ValidationError

DEFAULT_TOL = 1e-9
SUPPORT_RTOL = 1e-10

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _square_dim(mat: np.ndarray) -> int:
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {mat.shape}")
    return mat.shape[0]


def _scale(mat: np.ndarray) -> float:
    return max(1.0, float(np.linalg.norm(mat, 2)))


def is_hermitian(mat, tol: float = DEFAULT_TOL) -> bool:
    mat = np.asarray(mat)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        return False
    return float(np.max(np.abs(mat - mat.conj().T), initial=0.0)) <= tol * _scale(mat)


# --------------------------------------------------------------------------
# vectorization isomorphism


def vectorize(op) -> np.ndarray:
    """Map a ``d x d`` operator to its vector on the doubled space.

    The component along the maximally entangled vector equals ``tr(O)/sqrt(d)``.
    """
    op = np.asarray(op, dtype=complex)
    _square_dim(op)
    return op.reshape(-1).copy()


def devectorize(vec) -> np.ndarray:
    """Inverse of :func:`vectorize`."""
    vec = np.asarray(vec, dtype=complex).reshape(-1)
    d = int(round(np.sqrt(vec.size)))
    if d * d != vec.size or d == 0:
        raise DimensionError(f"vector length {vec.size} is not a perfect square")
    return vec.reshape(d, d).copy()


def psi_d(d: int) -> np.ndarray:
    """Maximally entangled vector ``sum_i |i>|i>* / sqrt(d)``."""
    return vectorize(np.eye(d)) / np.sqrt(d)


def perp_projector(d: int) -> np.ndarray:
    """Identity on the (d^2 - 1)-dimensional complement of ``psi_d``."""
    v = psi_d(d)
    return np.eye(d * d, dtype=complex) - np.outer(v, v.conj())


def hs_inner(a, b) -> complex:
    """Hilbert-Schmidt inner product ``tr(A^dagger B)``."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def traceless_hermitian_basis(d: int) -> np.ndarray:
    """Generalised Gell-Mann matrices normalised to ``tr(B_a B_b) = delta_ab``;
    shape ``(d^2 - 1, d, d)``.  Hermitian operators have real coordinates."""
    mats = []
    for j in range(d):
        for k in range(j + 1, d):
            sym = np.zeros((d, d), dtype=complex)
            sym[j, k] = sym[k, j] = 1 / np.sqrt(2)
            asym = np.zeros((d, d), dtype=complex)
            asym[j, k], asym[k, j] = -1j / np.sqrt(2), 1j / np.sqrt(2)
            mats += [sym, asym]
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1
        diag[l] = -l
        mats.append(np.diag(diag / np.sqrt(l * (l + 1))).astype(complex))
    return np.array(mats)


# --------------------------------------------------------------------------
# bipartite operations


def _check_dims(mat: np.ndarray, dims) -> tuple[int, int]:
    d_a, d_b = (int(x) for x in dims)
    n = _square_dim(mat)
    if d_a * d_b != n:
        raise DimensionError(f"dims {d_a}x{d_b} do not match matrix size {n}")
    return d_a, d_b


def _subsystem_index(label) -> int:
    if label in (0, "A", "a"):
        return 0
    if label in (1, "B", "b"):
        return 1
    raise ValueError(f"unknown subsystem label {label!r}")


def partial_trace(rho, dims, keep="A") -> np.ndarray:
    """Trace out one factor of a bipartite operator, returning the kept one."""
    rho = np.asarray(rho, dtype=complex)
    d_a, d_b = _check_dims(rho, dims)
    t = rho.reshape(d_a, d_b, d_a, d_b)
    if _subsystem_index(keep) == 0:
        return np.einsum("ijkj->ik", t)
    return np.einsum("ijil->jl", t)


def partial_transpose(rho, dims, subsystem="B") -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    d_a, d_b = _check_dims(rho, dims)
    t = rho.reshape(d_a, d_b, d_a, d_b)
    if _subsystem_index(subsystem) == 0:
        t = t.transpose(2, 1, 0, 3)
    else:
        t = t.transpose(0, 3, 2, 1)
    return t.reshape(d_a * d_b, d_a * d_b)


# --------------------------------------------------------------------------
# spectral routines


def hermitian_eigensystem(h, tol: float = DEFAULT_TOL):
    """Eigenvalues in ascending order and the matching orthonormal eigenvectors
    (as columns)."""
    h = np.asarray(h, dtype=complex)
    _square_dim(h)
    if not is_hermitian(h, tol):
        raise ValidationError("matrix is not Hermitian within tolerance")
    return np.linalg.eigh((h + h.conj().T) / 2)


def matrix_power_on_support(h, exponent: float, tol: float = DEFAULT_TOL,
                            support_rtol: float = SUPPORT_RTOL) -> np.ndarray:
    """Raise a PSD operator to a real power inside its support.

    Eigenvalues at or below ``support_rtol * lambda_max`` are sent to zero, so
    negative exponents act as a pseudo-inverse.
    """
    vals, vecs = hermitian_eigensystem(h, tol)
    top = max(float(vals[-1]), 0.0)
    if vals[0] < -tol * max(1.0, top):
        raise ValidationError(f"matrix has negative eigenvalue {vals[0]:.3e}")
    keep = vals > support_rtol * top
    powered = np.zeros_like(vals)
    powered[keep] = vals[keep] ** exponent
    return (vecs * powered) @ vecs.conj().T


def psd_projection(h) -> np.ndarray:
    """Clip negative eigenvalues and renormalise to unit trace."""
    h = np.asarray(h, dtype=complex)
    vals, vecs = np.linalg.eigh((h + h.conj().T) / 2)
    vals = np.clip(vals, 0.0, None)
    if vals.sum() <= 0:
        return np.eye(h.shape[0], dtype=complex) / h.shape[0]
    vals = vals / vals.sum()
    return (vecs * vals) @ vecs.conj().T


# --------------------------------------------------------------------------
# states


def check_density(rho, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Validate a density operator and return it as a complex array."""
    rho = np.asarray(rho, dtype=complex)
    try:
        _square_dim(rho)
    except DimensionError as exc:
        raise ValidationError(str(exc)) from None
    if not np.all(np.isfinite(rho)):
        raise ValidationError("state has non-finite entries")
    herm_err = float(np.max(np.abs(rho - rho.conj().T)))
    if herm_err > tol:
        raise ValidationError(f"state is not Hermitian (max deviation {herm_err:.3e})")
    tr = np.trace(rho).real
    if abs(tr - 1) > tol:
        raise ValidationError(f"state trace is {tr:.12g}, expected 1")
    lam = float(np.linalg.eigvalsh((rho + rho.conj().T) / 2)[0])
    if lam < -tol:
        raise ValidationError(f"state has negative eigenvalue {lam:.3e}")
    return rho


def purity(rho) -> float:
    rho = np.asarray(rho, dtype=complex)
    return float(np.real(np.vdot(rho, rho)))


def ket_to_density(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def maximally_entangled_state(d: int) -> np.ndarray:
    return ket_to_density(psi_d(d))


# --------------------------------------------------------------------------
# reproducible sampling


@dataclass(frozen=True)
class RngSpec:
    """Seed plus a stream label; the pair fixes the sample sequence."""

    seed: int
    stream: str = "default"

    def generator(self) -> np.random.Generator:
        label = int.from_bytes(hashlib.sha256(self.stream.encode()).digest()[:8], "little")
        return np.random.default_rng(np.random.SeedSequence([self.seed & (2**64 - 1), label]))


def as_generator(rng) -> np.random.Generator:
    """Accept an RngSpec, a Generator, an int seed or None."""
    if isinstance(rng, RngSpec):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def _ginibre(gen: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return gen.standard_normal((rows, cols)) + 1j * gen.standard_normal((rows, cols))


def haar_unitary(d: int, rng=None) -> np.ndarray:
    """Haar-distributed unitary from the QR decomposition of a Ginibre matrix
    with the diagonal phases of R removed."""
    if d < 1:
        raise ValueError("dimension must be at least 1")
    gen = as_generator(rng)
    q, r = np.linalg.qr(_ginibre(gen, d, d))
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def ginibre_state(d: int, rank: int | None = None, rng=None) -> np.ndarray:
    """Random density operator ``G G^dagger / tr(G G^dagger)`` of the given rank."""
    rank = d if rank is None else rank
    if d < 1 or not 1 <= rank <= d:
        raise ValueError(f"invalid rank {rank} for dimension {d}")
    gen = as_generator(rng)
    g = _ginibre(gen, d, rank)
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_pure_state(d: int, rng=None) -> np.ndarray:
    return ginibre_state(d, 1, rng)


def random_product_state(dims, rng=None, pure: bool = False) -> np.ndarray:
    gen = as_generator(rng)
    d_a, d_b = dims
    return np.kron(ginibre_state(d_a, 1 if pure else d_a, gen),
                   ginibre_state(d_b, 1 if pure else d_b, gen))


def random_separable_state(dims, n_terms: int = 4, rng=None) -> np.ndarray:
    """Convex mixture of ``n_terms`` random product states."""
    gen = as_generator(rng)
    probs = gen.dirichlet(np.ones(n_terms))
    return sum(p * random_product_state(dims, gen) for p in probs)


@dataclass(frozen=True, eq=False)
class BipartiteState:
    """Density operator on ``A (x) B`` with the A factor first."""

    matrix: np.ndarray
    dims: tuple[int, int]
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        dims = tuple(int(x) for x in self.dims)
        object.__setattr__(self, "dims", dims)
        mat = check_density(self.matrix, self.tol)
        _check_dims(mat, dims)
        object.__setattr__(self, "matrix", mat)

    @property
    def d_a(self) -> int:
        return self.dims[0]

    @property
    def d_b(self) -> int:
        return self.dims[1]

    def reduced(self, keep="A") -> np.ndarray:
        return partial_trace(self.matrix, self.dims, keep)

    def evolve(self, u_a, u_b) -> "BipartiteState":
        u = np.kron(u_a, u_b)
        return BipartiteState(u @ self.matrix @ u.conj().T, self.dims, self.tol)
