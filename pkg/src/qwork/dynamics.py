"""Two-qubit master equation with one thermal bath per qubit.

    drho/dt = -i[H, rho] + g1(n1+1) D[B1] + g1 n1 D[B2] + g2(n2+1) D[C1] + g2 n2 D[C2]

with ``H = h_w (Z x I + I x Z)``, ``B1 = sigma- x I``, ``C1 = I x sigma-`` and
``D[L] rho = L rho L^dag - {L^dag L, rho}/2``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import qmat
from .qmat import I2, SIGMA_MINUS, SIGMA_PLUS, SIGMA_Z, dag, tensor


class Case(str, enum.Enum):
    I = "CaseI"
    II = "CaseII"
    III = "CaseIII"

    @classmethod
    def parse(cls, s: "str | Case") -> "Case":
        if isinstance(s, Case):
            return s
        key = str(s).strip().lower().replace("case", "").replace("_", "").replace("-", "")
        table = {"i": cls.I, "1": cls.I, "ii": cls.II, "2": cls.II, "iii": cls.III, "3": cls.III}
        if key not in table:
            raise ValueError(f"unknown case {s!r}")
        return table[key]


@dataclass(frozen=True)
class SystemSpec:
    h_w: float = 0.1
    E: float = 1.0
    beta: float = 0.001
    case: Case = Case.I

    def __post_init__(self):
        if not self.E > 0:
            raise ValueError("E must be positive")
        if self.beta < 0:
            raise ValueError("beta must be non-negative")
        object.__setattr__(self, "case", Case.parse(self.case))

    @property
    def Z(self) -> float:
        return 1.0 + math.exp(-2.0 * self.beta * self.E)

    @property
    def Z_hat(self) -> float:
        return (1.0 + math.exp(-self.beta * self.E)) ** 2


def planck_occupation(beta_omega: float) -> float:
    """Bose occupation 1/(exp(beta*omega0) - 1) from the product beta*omega0."""
    if beta_omega <= 0:
        raise ValueError("beta*omega0 must be positive")
    return 1.0 / math.expm1(beta_omega)


@dataclass(frozen=True)
class BathParams:
    gamma: float
    n: float
    beta_bath: float | None = None
    omega0: float | None = None

    def __post_init__(self):
        if self.gamma < 0 or self.n < 0:
            raise ValueError("gamma and n must be non-negative")
        if (self.beta_bath is None) != (self.omega0 is None):
            raise ValueError("beta_bath and omega0 must be given together")
        if self.beta_bath is not None:
            expected = planck_occupation(self.beta_bath * self.omega0)
            if abs(expected - self.n) > 1e-12:
                raise ValueError(f"n={self.n} inconsistent with beta_bath*omega0 (expects {expected})")

    @classmethod
    def from_temperature(cls, gamma: float, beta_bath: float, omega0: float) -> "BathParams":
        return cls(gamma, planck_occupation(beta_bath * omega0), beta_bath, omega0)

    @classmethod
    def from_beta_omega(cls, gamma: float, beta_omega: float) -> "BathParams":
        return cls(gamma, planck_occupation(beta_omega))

    @property
    def excited_population(self) -> float:
        """Steady excited-state population n/(2n+1) fixed by detailed balance."""
        return self.n / (2.0 * self.n + 1.0)


class IntegrationError(RuntimeError):
    def __init__(self, step: int, message: str):
        super().__init__(f"step {step}: {message}")
        self.step = step


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # shape (len(times), 4, 4)
    spec: SystemSpec
    baths: tuple[BathParams, BathParams]
    warnings: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.times)

    def __iter__(self):
        return iter(zip(self.times, self.states))


def build_hamiltonian(spec: SystemSpec) -> np.ndarray:
    return spec.h_w * (tensor(SIGMA_Z, I2) + tensor(I2, SIGMA_Z))


def build_jump_ops() -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(B1, B2, C1, C2): lowering/raising on qubit a, then on qubit b."""
    return (tensor(SIGMA_MINUS, I2), tensor(SIGMA_PLUS, I2),
            tensor(I2, SIGMA_MINUS), tensor(I2, SIGMA_PLUS))


def dissipator_term(L: np.ndarray, Ldag: np.ndarray, rho: np.ndarray) -> np.ndarray:
    LdL = Ldag @ L
    return L @ rho @ Ldag - 0.5 * (LdL @ rho + rho @ LdL)


def _rates(baths) -> tuple[float, float, float, float]:
    b1, b2 = baths
    return (b1.gamma * (b1.n + 1.0), b1.gamma * b1.n, b2.gamma * (b2.n + 1.0), b2.gamma * b2.n)


def master_rhs(rho: np.ndarray, spec: SystemSpec, baths: tuple[BathParams, BathParams]) -> np.ndarray:
    H = build_hamiltonian(spec)
    out = -1j * (H @ rho - rho @ H)
    for rate, L in zip(_rates(baths), build_jump_ops()):
        if rate:
            out = out + rate * dissipator_term(L, dag(L), rho)
    return out


def _make_rhs(spec: SystemSpec, baths):
    # Same equation as master_rhs with the anticommutator terms pre-summed.
    H = build_hamiltonian(spec)
    pairs = [(rate, L, dag(L)) for rate, L in zip(_rates(baths), build_jump_ops()) if rate]
    K = -1j * H - 0.5 * sum((r * Ld @ L for r, L, Ld in pairs), np.zeros((4, 4), complex))
    Kd = dag(K)

    def rhs(rho):
        out = K @ rho + rho @ Kd
        for r, L, Ld in pairs:
            out += r * (L @ rho @ Ld)
        return out

    return rhs


def recommended_dt(spec: SystemSpec, baths, eps: float = 1e-12) -> float:
    scale = max(max(b.gamma * (b.n + 1.0) for b in baths), abs(spec.h_w), eps)
    return 0.1 / scale


def evolve(rho0: np.ndarray, spec: SystemSpec, baths: tuple[BathParams, BathParams],
           t_end: float, dt: float = 0.01, stride: int = 1,
           abort_tol: float = 1e-6) -> Trajectory:
    """Fixed-step classical RK4.

    ``t_end`` need not be a multiple of ``dt``; the final step is shortened.
    Every ``stride``-th step is stored, and the final state always is.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if t_end < 0:
        raise ValueError("t_end must be non-negative")
    rho0 = qmat.check_density(rho0)
    rhs = _make_rhs(spec, baths)

    n_full = int(math.floor(t_end / dt + 1e-9))
    step_times = [k * dt for k in range(n_full + 1)]
    if t_end - step_times[-1] > 1e-12 * max(1.0, t_end):
        step_times.append(t_end)
    n_steps = len(step_times) - 1

    times = [0.0]
    states = [np.array(rho0, dtype=complex)]
    warnings: list[str] = []
    rho = states[0].copy()
    for k in range(1, n_steps + 1):
        h = step_times[k] - step_times[k - 1]
        k1 = rhs(rho)
        k2 = rhs(rho + 0.5 * h * k1)
        k3 = rhs(rho + 0.5 * h * k2)
        k4 = rhs(rho + h * k3)
        rho = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

        herm = qmat.hermiticity_error(rho)
        tr = np.trace(rho).real
        lam_min = float(np.linalg.eigvalsh(rho)[0])
        if herm > abort_tol or abs(tr - 1.0) > abort_tol or lam_min < -abort_tol or not np.isfinite(tr):
            raise IntegrationError(k, f"invariant violated (herm={herm:.2e}, trace={tr:.12g}, "
                                      f"min eig={lam_min:.2e})")
        rho = 0.5 * (rho + dag(rho))
        if abs(tr - 1.0) > 1e-12:
            warnings.append(f"step {k}: trace drift {tr - 1.0:.3e}, renormalized")
            rho = rho / tr

        if k % stride == 0 or k == n_steps:
            times.append(step_times[k])
            states.append(rho.copy())

    return Trajectory(np.array(times), np.array(states), spec, tuple(baths), warnings)


def evolve_unitary(rho0: np.ndarray, spec: SystemSpec, t: float) -> np.ndarray:
    """exp(-iHt) rho0 exp(iHt); H is diagonal so only phases appear."""
    energies = np.real(np.diag(build_hamiltonian(spec)))
    phase = np.exp(-1j * np.subtract.outer(energies, energies) * t)
    return np.asarray(rho0, dtype=complex) * phase


def spontaneous_emission_rate(omega0: float, dipole: float) -> float:
    """4 omega0^3 |d|^2 / 3 in units hbar = c = 1."""
    if omega0 < 0:
        raise ValueError("omega0 must be non-negative")
    return 4.0 * omega0 ** 3 * dipole ** 2 / 3.0


def thermal_populations(baths) -> np.ndarray:
    """Diagonal of the detailed-balance fixed point rho_th(n1) x rho_th(n2)."""
    pa, pb = (np.array([1.0 - b.excited_population, b.excited_population]) for b in baths)
    return np.kron(pa, pb)


def steady_state(baths) -> np.ndarray:
    return np.diag(thermal_populations(baths)).astype(complex)


# --- initial states -------------------------------------------------------

def entangled_thermal_state(beta: float, E: float) -> np.ndarray:
    """(|00> + e^{-beta E}|11>)/sqrt(Z): entangled, but each marginal is thermal."""
    x = math.exp(-beta * E)
    Z = 1.0 + x * x
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0], rho[0, 3], rho[3, 0], rho[3, 3] = 1.0, x, x, x * x
    return rho / Z


def classically_correlated_state(beta: float, E: float) -> np.ndarray:
    x = math.exp(-beta * E)
    return np.diag([1.0, 0.0, 0.0, x * x]).astype(complex) / (1.0 + x * x)


def product_thermal_state(beta: float, E: float) -> np.ndarray:
    x = math.exp(-beta * E)
    return np.diag([1.0, x, x, x * x]).astype(complex) / (1.0 + x) ** 2


def initial_state(spec: SystemSpec) -> np.ndarray:
    builders = {Case.I: entangled_thermal_state, Case.II: classically_correlated_state,
                Case.III: product_thermal_state}
    return builders[spec.case](spec.beta, spec.E)
