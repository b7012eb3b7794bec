"""Wootters concurrence for two-qubit states."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import qmat
from .qmat import SIGMA_Y, InvalidStateError, tensor

YY = tensor(SIGMA_Y, SIGMA_Y)
X_STATE_TOL = 1e-10
_NON_X = [(i, j) for i in range(4) for j in range(4) if i != j and i + j != 3]


@dataclass(frozen=True)
class ConcurrenceResult:
    value: float
    lambdas: np.ndarray  # descending

    def __float__(self) -> float:
        return self.value


def spin_flip(rho: np.ndarray) -> np.ndarray:
    """(Y x Y) rho* (Y x Y).

    Only the symmetric Y x Y form gives C = 2|ab| on a|00> + b|11>; an
    ``X x Y`` left factor does not.
    """
    return YY @ np.conj(rho) @ YY


def _from_lambdas(lam: np.ndarray) -> ConcurrenceResult:
    lam = np.sort(np.clip(np.real(lam), 0.0, None))[::-1]
    value = max(0.0, float(lam[0] - lam[1] - lam[2] - lam[3]))
    return ConcurrenceResult(min(value, 1.0), lam)


def _lambdas_decomposition(rho: np.ndarray) -> np.ndarray:
    # rho = W W^dag with W = V sqrt(p); the lambdas are the singular values of
    # W^T (Y x Y) W.  Unlike sqrt(eig(rho rho~)), this keeps zero lambdas at
    # O(eps) instead of O(sqrt(eps)) for rank-deficient states.
    spec = qmat._clamped_eigs(rho)
    W = spec.eigenvectors * np.sqrt(spec.eigenvalues)
    return np.linalg.svd(W.T @ YY @ W, compute_uv=False)


def _lambdas_product(rho: np.ndarray) -> np.ndarray:
    mu = np.linalg.eigvals(rho @ spin_flip(rho))
    if np.min(mu.real) < -1e-8:
        raise InvalidStateError(f"rho rho~ has eigenvalue {np.min(mu.real):.3e}")
    return np.sqrt(np.clip(mu.real, 0.0, None))


def _lambdas_sqrt(rho: np.ndarray) -> np.ndarray:
    s = qmat.psd_sqrt(rho)
    R = qmat.psd_sqrt(s @ spin_flip(rho) @ s)
    return qmat.herm_eig(R).eigenvalues


_METHODS = {"decomposition": _lambdas_decomposition, "product": _lambdas_product, "sqrt": _lambdas_sqrt}


def concurrence(rho: np.ndarray, method: str = "decomposition") -> ConcurrenceResult:
    """C = max(0, l1 - l2 - l3 - l4).

    ``method`` picks how the l_i are obtained: ``"decomposition"`` (default),
    ``"product"`` (square roots of eig(rho rho~)) or ``"sqrt"`` (eigenvalues of
    sqrt(sqrt(rho) rho~ sqrt(rho))).  All agree to ~1e-8 on full-rank states.
    """
    rho = qmat.check_density(rho)
    if rho.shape != (4, 4):
        raise ValueError("concurrence needs a two-qubit (4x4) state")
    return _from_lambdas(_METHODS[method](rho))


def is_x_state(rho: np.ndarray, tol: float = X_STATE_TOL) -> bool:
    return all(abs(rho[i, j]) <= tol for i, j in _NON_X)


def concurrence_x_state(rho: np.ndarray) -> ConcurrenceResult:
    rho = np.asarray(rho)
    if rho.shape != (4, 4) or not is_x_state(rho):
        raise InvalidStateError("not an X-state")
    d = np.real(np.diag(rho)).clip(0.0, None)
    c14, c23 = abs(rho[0, 3]), abs(rho[1, 2])
    s14, s23 = np.sqrt(d[0] * d[3]), np.sqrt(d[1] * d[2])
    value = 2.0 * max(0.0, c14 - s23, c23 - s14)
    lam = np.array([s14 + c14, abs(s14 - c14), s23 + c23, abs(s23 - c23)])
    return ConcurrenceResult(min(value, 1.0), np.sort(lam)[::-1])
