"""Thermodynamic bookkeeping: local work along a trajectory, ergotropy, and
global work from a two-temperature product of thermal qubits.

Energies use the local Hamiltonians ``H_a = H_b = diag(0, 2E)`` for the
dynamical work, and a gap ``E`` per qubit for the two-temperature analysis.
Entropies are in nats.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import qmat
from .dynamics import Trajectory

ENTROPY_TOL = 1e-12
MAX_BISECTIONS = 200
MAX_DOUBLINGS = 60


class WorkConvention(str, enum.Enum):
    # dE + T dS: energy change minus T times the change of Tr(rho log rho)
    PAPER_EQ17 = "paper_eq17"
    # -dF = -dE + T dS
    FREE_ENERGY_DECREASE = "free_energy_decrease"


@dataclass(frozen=True)
class WorkSeries:
    times: np.ndarray
    W_a: np.ndarray
    W_b: np.ndarray
    W_tot: np.ndarray
    convention: WorkConvention


@dataclass(frozen=True)
class EffectiveTempResult:
    beta_tilde: float
    work: float | None
    entropy_residual: float


class SolverError(RuntimeError):
    pass


def local_hamiltonian(E: float) -> np.ndarray:
    return np.diag([0.0, 2.0 * E]).astype(complex)


def joint_hamiltonian(E: float) -> np.ndarray:
    """H_a x I + I x H_b = diag(0, 2E, 2E, 4E)."""
    h = local_hamiltonian(E)
    return qmat.tensor(h, qmat.I2) + qmat.tensor(qmat.I2, h)


def thermal_qubit(beta: float, E: float) -> np.ndarray:
    """diag(1, e^{-beta E}) / (1 + e^{-beta E})."""
    if beta < 0 or not E > 0:
        raise ValueError("need beta >= 0 and E > 0")
    x = math.exp(-beta * E)
    return np.diag([1.0 / (1.0 + x), x / (1.0 + x)]).astype(complex)


def ground_probability(beta: float, E: float) -> float:
    return 1.0 / (1.0 + math.exp(-beta * E))


def thermal_entropy(beta: float, E: float) -> float:
    """Binary entropy of the ground probability 1/(1+e^{-beta E})."""
    x = math.exp(-beta * E)
    p, q = 1.0 / (1.0 + x), x / (1.0 + x)
    return float(sum(-v * math.log(v) for v in (p, q) if v > 0.0))


def excited_fraction(beta: float, E: float) -> float:
    x = math.exp(-beta * E)
    return x / (1.0 + x)


def local_work(traj: Trajectory, spec, beta1: float, beta2: float,
               convention: WorkConvention | str = WorkConvention.PAPER_EQ17) -> WorkSeries:
    """W_a(t), W_b(t) and their sum, relative to t = 0.

    ``beta1``/``beta2`` set the temperature prefactor of the entropy change of
    qubit a/b.  Zero temperature is rejected because the entropy term is then
    undefined as a product.
    """
    convention = WorkConvention(convention)
    if len(traj) == 0:
        raise ValueError("empty trajectory")
    for b in (beta1, beta2):
        if not (b > 0 and math.isfinite(b)):
            raise ValueError(f"bath inverse temperature must be finite and positive, got {b}")
    h = local_hamiltonian(spec.E)
    sign = 1.0 if convention is WorkConvention.PAPER_EQ17 else -1.0

    def series(keep: str, beta: float) -> np.ndarray:
        marg = [qmat.partial_trace(r, keep) for r in traj.states]
        energy = np.array([qmat.mean_energy(m, h) for m in marg])
        entropy = np.array([qmat.von_neumann_entropy(m) for m in marg])
        return sign * (energy - energy[0]) + (entropy - entropy[0]) / beta

    W_a = series("a", beta1)
    W_b = series("b", beta2)
    return WorkSeries(np.asarray(traj.times), W_a, W_b, W_a + W_b, convention)


def _passive_basis(h: np.ndarray) -> np.ndarray:
    """Eigenvectors of h as columns, by ascending energy (stable on ties)."""
    h = np.asarray(h, dtype=complex)
    if np.count_nonzero(h - np.diag(np.diag(h))) == 0:
        order = np.argsort(np.real(np.diag(h)), kind="stable")
        return np.eye(h.shape[0], dtype=complex)[:, order]
    spec = qmat.herm_eig(h)
    return spec.eigenvectors[:, ::-1]


def passive_state(rho: np.ndarray, h: np.ndarray) -> np.ndarray:
    pops = qmat._clamped_eigs(rho).eigenvalues  # descending
    v = _passive_basis(h)
    return (v * pops) @ qmat.dag(v)


def ergotropy(rho: np.ndarray, h: np.ndarray) -> float:
    return qmat.mean_energy(rho, h) - qmat.mean_energy(passive_state(rho, h), h)


def _entropy_gap(beta_tilde: float, E: float, target: float) -> float:
    return 2.0 * thermal_entropy(beta_tilde, E) - target


def solve_effective_beta(beta1: float, beta2: float, E: float) -> EffectiveTempResult:
    """Inverse temperature whose two-qubit Gibbs state matches the entropy of
    thermal_qubit(beta1) x thermal_qubit(beta2), found by bisection."""
    if beta1 < 0 or beta2 < 0 or not E > 0:
        raise ValueError("need beta1, beta2 >= 0 and E > 0")
    target = thermal_entropy(beta1, E) + thermal_entropy(beta2, E)
    if beta1 == beta2:
        return EffectiveTempResult(float(beta1), None, _entropy_gap(beta1, E, target))

    lo, hi = 0.0, max(beta1, beta2) + 1.0 / E
    for _ in range(MAX_DOUBLINGS):
        if _entropy_gap(hi, E, target) <= 0.0:
            break
        hi *= 2.0
    else:
        raise SolverError("could not bracket the effective inverse temperature")

    for _ in range(MAX_BISECTIONS):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if _entropy_gap(mid, E, target) > 0.0:
            lo = mid
        else:
            hi = mid
    best = min((lo, hi), key=lambda b: abs(_entropy_gap(b, E, target)))
    resid = _entropy_gap(best, E, target)
    if abs(resid) > ENTROPY_TOL:
        raise SolverError(f"entropy residual {resid:.3e} above {ENTROPY_TOL:g}")
    return EffectiveTempResult(best, None, resid)


def global_work(beta1: float, beta2: float, E: float) -> EffectiveTempResult:
    """E(rho_eff) - E(rho_beta1 x rho_beta2), final minus initial energy.

    Binary entropy is concave, so the entropy-matched Gibbs state always has
    the lower energy: this is <= 0 and the extractable amount is its negative.
    """
    res = solve_effective_beta(beta1, beta2, E)
    w = E * (2.0 * excited_fraction(res.beta_tilde, E)
             - excited_fraction(beta1, E) - excited_fraction(beta2, E))
    return EffectiveTempResult(res.beta_tilde, w, res.entropy_residual)


def effective_state(beta_tilde: float, E: float) -> np.ndarray:
    if beta_tilde < 0:
        raise ValueError("beta_tilde must be non-negative")
    x = math.exp(-beta_tilde * E)
    k = np.array([1.0, x, x, x * x]) / (1.0 + x) ** 2
    return np.diag(k).astype(complex)


def product_thermal(beta1: float, beta2: float, E: float) -> np.ndarray:
    return qmat.tensor(thermal_qubit(beta1, E), thermal_qubit(beta2, E))


@dataclass(frozen=True)
class GridPoint:
    beta1: float
    beta2: float
    beta_tilde: float
    work: float
    entropy_residual: float

    @property
    def claim_holds(self) -> bool:
        """Whether W >= -1e-10 (the positivity claim under test)."""
        return self.work >= -1e-10


def work_grid(n1: int, n2: int, E: float = 1.0, upper: float = 5.0) -> list[GridPoint]:
    """global_work on the grid beta_i E in (0, upper], row-major in beta1."""
    pts = []
    for i in range(1, n1 + 1):
        for j in range(1, n2 + 1):
            b1, b2 = upper * i / n1 / E, upper * j / n2 / E
            r = global_work(b1, b2, E)
            pts.append(GridPoint(b1, b2, r.beta_tilde, r.work, r.entropy_residual))
    return pts
