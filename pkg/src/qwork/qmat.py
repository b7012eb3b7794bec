"""Small dense linear algebra helpers for qubit density matrices.

Matrices are plain complex ``numpy`` arrays.  Basis ordering for two qubits
is ``|00>, |01>, |10>, |11>`` with qubit ``a`` as the left tensor factor.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ATOL = 1e-12
HERM_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-9
CLAMP_TOL = 1e-9

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=complex)  # |0><1|
SIGMA_PLUS = SIGMA_MINUS.T.copy()
I2 = np.eye(2, dtype=complex)


class InvalidStateError(ValueError):
    """A matrix fails a density-matrix or Hermiticity requirement."""


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray  # descending
    eigenvectors: np.ndarray  # columns

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def allclose(a, b, atol: float = ATOL) -> bool:
    return bool(np.max(np.abs(np.asarray(a) - np.asarray(b))) <= atol)


def dag(m: np.ndarray) -> np.ndarray:
    return np.conj(m).T


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a, b = np.asarray(a), np.asarray(b)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise ValueError("tensor expects square matrices")
    return np.kron(a, b)


def hermiticity_error(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - dag(m))))


def check_density(rho: np.ndarray, herm_tol: float = HERM_TOL, trace_tol: float = TRACE_TOL,
                  psd_tol: float = PSD_TOL) -> np.ndarray:
    """Raise :class:`InvalidStateError` unless ``rho`` is a valid density matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidStateError(f"density matrix must be square, got shape {rho.shape}")
    herm = hermiticity_error(rho)
    if herm > herm_tol:
        raise InvalidStateError(f"not Hermitian: max|M - M^dag| = {herm:.3e}")
    tr = np.trace(rho)
    if abs(tr - 1) > trace_tol:
        raise InvalidStateError(f"trace {tr:.15g} differs from 1")
    lam_min = float(np.linalg.eigvalsh(0.5 * (rho + dag(rho)))[0])
    if lam_min < -psd_tol:
        raise InvalidStateError(f"negative eigenvalue {lam_min:.3e}")
    return rho


def is_density(rho: np.ndarray, **tols) -> bool:
    try:
        check_density(rho, **tols)
    except InvalidStateError:
        return False
    return True


def partial_trace(rho: np.ndarray, keep: str) -> np.ndarray:
    """Reduced 2x2 state of qubit ``keep`` ("a" or "b") from a 4x4 state."""
    rho = np.asarray(rho)
    if rho.shape != (4, 4):
        raise ValueError(f"partial_trace expects a 4x4 matrix, got {rho.shape}")
    r = rho.reshape(2, 2, 2, 2)  # indices a, b, a', b'
    if keep == "a":
        return np.einsum("ijkj->ik", r)
    if keep == "b":
        return np.einsum("jijk->ik", r)
    raise ValueError(f"keep must be 'a' or 'b', got {keep!r}")


def herm_eig(m: np.ndarray, tol: float = 1e-8) -> Spectrum:
    m = np.asarray(m, dtype=complex)
    if hermiticity_error(m) > tol:
        raise InvalidStateError("herm_eig called on a non-Hermitian matrix")
    w, v = np.linalg.eigh(0.5 * (m + dag(m)))
    order = np.argsort(-w, kind="stable")
    return Spectrum(w[order], v[:, order])


def _clamped_eigs(m: np.ndarray) -> Spectrum:
    spec = herm_eig(m)
    lam = spec.eigenvalues
    if lam.size and lam[-1] < -CLAMP_TOL:
        raise InvalidStateError(f"eigenvalue {lam[-1]:.3e} below -{CLAMP_TOL:g}")
    return Spectrum(np.clip(lam, 0.0, None), spec.eigenvectors)


def psd_sqrt(m: np.ndarray) -> np.ndarray:
    """Hermitian square root; eigenvalues in [-1e-9, 0) are treated as zero."""
    spec = _clamped_eigs(m)
    return Spectrum(np.sqrt(spec.eigenvalues), spec.eigenvectors).reconstruct()


def binary_entropy(p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability out of range: {p}")
    return float(sum(-x * np.log(x) for x in (p, 1.0 - p) if x > 0.0))


def von_neumann_entropy(rho: np.ndarray) -> float:
    """Entropy in nats, with 0 log 0 = 0."""
    lam = _clamped_eigs(rho).eigenvalues
    lam = lam[lam > 0.0]
    return max(0.0, float(-np.sum(lam * np.log(lam))))


def mean_energy(rho: np.ndarray, h: np.ndarray, tol: float = 1e-10) -> float:
    rho, h = np.asarray(rho), np.asarray(h)
    if rho.shape != h.shape:
        raise ValueError(f"shape mismatch {rho.shape} vs {h.shape}")
    e = np.trace(rho @ h)
    if abs(e.imag) > tol:
        raise InvalidStateError(f"Tr(rho H) has imaginary part {e.imag:.3e}")
    return float(e.real)


def purity(rho: np.ndarray) -> float:
    return float(np.real(np.trace(rho @ rho)))


def ket(*bits: int) -> np.ndarray:
    """Computational basis vector, e.g. ``ket(1, 0)`` is |10>."""
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int("".join(str(b) for b in bits), 2)] = 1.0
    return v


def projector(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return 0.5 * (a + dag(a))


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """exp(iH) for a random Hermitian H, built from its eigendecomposition."""
    spec = herm_eig(random_hermitian(dim, rng))
    v = spec.eigenvectors
    return (v * np.exp(1j * spec.eigenvalues)) @ dag(v)


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ dag(g)
    return rho / np.trace(rho).real
