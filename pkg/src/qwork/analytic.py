"""Closed-form rho(t) for the three initial states.

Two evaluations are provided for every component:

* ``literal=True`` evaluates the unsimplified expressions term by term, including
  the growing factors ``exp(g(2n+1)t)`` multiplied by an overall decaying
  prefactor.  It overflows for ``g(2n+1)t`` beyond ~700.
* the default form multiplies that prefactor into each term so only the
  decaying exponentials ``u_i = exp(-g_i(2n_i+1)t)`` appear.  Tests pin it to
  the literal form wherever the latter is finite.

Components are indexed in the basis |00>, |01>, |10>, |11>.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import BathParams, Case, SystemSpec

TRACE_TOL = 1e-9


class TranscriptionError(ArithmeticError):
    """Closed-form components failed to sum to one."""


@dataclass(frozen=True)
class ClosedFormParams:
    beta: float
    E: float
    h_w: float
    gamma1: float
    gamma2: float
    n1: float
    n2: float

    def __post_init__(self):
        if min(self.gamma1, self.gamma2, self.n1, self.n2) < 0:
            raise ValueError("rates and occupations must be non-negative")

    @classmethod
    def from_models(cls, spec: SystemSpec, baths: tuple[BathParams, BathParams]) -> "ClosedFormParams":
        b1, b2 = baths
        return cls(spec.beta, spec.E, spec.h_w, b1.gamma, b2.gamma, b1.n, b2.n)

    @property
    def Z(self) -> float:
        return 1.0 + math.exp(-2.0 * self.beta * self.E)

    @property
    def Z_hat(self) -> float:
        return (1.0 + math.exp(-self.beta * self.E)) ** 2

    @property
    def coherence_rate(self) -> float:
        return self.gamma1 * (self.n1 + 0.5) + self.gamma2 * (self.n2 + 0.5)

    @property
    def population_rates(self) -> tuple[float, float]:
        return self.gamma1 * (2 * self.n1 + 1), self.gamma2 * (2 * self.n2 + 1)


def _check_trace(rho: np.ndarray, label: str) -> np.ndarray:
    resid = abs(np.trace(rho).real - 1.0)
    if resid > TRACE_TOL:
        raise TranscriptionError(f"{label}: trace residual {resid:.3e}")
    return rho


def case1_coherence(t: float, p: ClosedFormParams) -> complex:
    """rho_14(t); rho_41 is its conjugate."""
    return complex(math.exp(-p.beta * p.E) * np.exp(-t * p.coherence_rate - 4j * t * p.h_w) / p.Z)


def _case1_diag_literal(t: float, p: ClosedFormParams) -> np.ndarray:
    n1, n2, g1, g2 = p.n1, p.n2, p.gamma1, p.gamma2
    e2 = math.exp(2 * p.beta * p.E)
    em2 = math.exp(-2 * p.beta * p.E)
    D = (1 + 2 * n1) * (1 + 2 * n2) * p.Z
    tot = math.exp(-t * (g1 + g2 + 2 * g1 * n1 + 2 * g2 * n2))
    grow1 = math.exp(g1 * (2 * n1 + 1) * t)
    grow2 = math.exp(g2 * (2 * n2 + 1) * t)
    dec1 = math.exp(-t * (g1 + 2 * g1 * n1))
    dec2 = math.exp(-t * (g2 + 2 * g2 * n2))
    grow_tot = math.exp(t * (g1 + g2 + 2 * g1 * n1 + 2 * g2 * n2))

    r11 = em2 * tot * (e2 * ((n1 + 1) * grow1 + n1) * ((n2 + 1) * grow2 + n2)
                       + (n1 + 1) * (n2 + 1) * (grow1 - 1) * (grow2 - 1)) / D
    r22 = em2 * ((n1 + 1) * n2 * (e2 + 1)
                 + n2 * (n1 * (e2 - 1) - 1) * dec1
                 - (n1 + 1) * (n2 * (e2 - 1) - 1) * dec2
                 - (n1 * (n2 * e2 + n2 + 1) + n2 + 1) * tot) / D
    r33 = em2 * (n1 * (n2 + 1) * (e2 + 1)
                 - (n2 + 1) * (n1 * (e2 - 1) - 1) * dec1
                 + n1 * (n2 * (e2 - 1) - 1) * dec2
                 - (n1 * (n2 * e2 + n2 + 1) + n2 + 1) * tot) / D
    r44 = em2 * tot * (n1 * (n2 * e2 - n2 * (e2 - 1) * grow2 + n2 * (e2 + 1) * grow_tot
                             + (-n2 * e2 + n2 + 1) * grow1 + n2 + 1)
                       + n2 * grow2 + n2 + 1) / D
    return np.array([r11, r22, r33, r44])


def _case1_diag(t: float, p: ClosedFormParams) -> np.ndarray:
    n1, n2 = p.n1, p.n2
    e2 = math.exp(2 * p.beta * p.E)
    em2 = math.exp(-2 * p.beta * p.E)
    D = (1 + 2 * n1) * (1 + 2 * n2) * p.Z
    G1, G2 = p.population_rates
    u1, u2 = math.exp(-G1 * t), math.exp(-G2 * t)

    r11 = em2 * (e2 * ((n1 + 1) + n1 * u1) * ((n2 + 1) + n2 * u2)
                 + (n1 + 1) * (n2 + 1) * (1 - u1) * (1 - u2)) / D
    r22 = em2 * ((n1 + 1) * n2 * (e2 + 1)
                 + n2 * (n1 * (e2 - 1) - 1) * u1
                 - (n1 + 1) * (n2 * (e2 - 1) - 1) * u2
                 - (n1 * (n2 * e2 + n2 + 1) + n2 + 1) * u1 * u2) / D
    r33 = em2 * (n1 * (n2 + 1) * (e2 + 1)
                 - (n2 + 1) * (n1 * (e2 - 1) - 1) * u1
                 + n1 * (n2 * (e2 - 1) - 1) * u2
                 - (n1 * (n2 * e2 + n2 + 1) + n2 + 1) * u1 * u2) / D
    r44 = em2 * (n1 * (n2 * e2 * u1 * u2 - n2 * (e2 - 1) * u1 + n2 * (e2 + 1)
                       + (-n2 * e2 + n2 + 1) * u2 + (n2 + 1) * u1 * u2)
                 + n2 * u1 + (n2 + 1) * u1 * u2) / D
    return np.array([r11, r22, r33, r44])


def case1_diagonal(t: float, p: ClosedFormParams, literal: bool = False) -> np.ndarray:
    if t < 0:
        raise ValueError("t must be non-negative")
    return _case1_diag_literal(t, p) if literal else _case1_diag(t, p)


def case1_rho(t: float, p: ClosedFormParams, literal: bool = False) -> np.ndarray:
    rho = np.diag(case1_diagonal(t, p, literal)).astype(complex)
    c = case1_coherence(t, p)
    rho[0, 3], rho[3, 0] = c, c.conjugate()
    return _check_trace(rho, "case I")


def case2_rho(t: float, p: ClosedFormParams, literal: bool = False) -> np.ndarray:
    """Classically correlated start: the Case I populations, no coherence."""
    return _check_trace(np.diag(case1_diagonal(t, p, literal)).astype(complex), "case II")


def _case3_diag_literal(t: float, p: ClosedFormParams) -> np.ndarray:
    n1, n2, g1, g2 = p.n1, p.n2, p.gamma1, p.gamma2
    eb = math.exp(p.beta * p.E)
    pref = math.exp(-2 * p.beta * p.E - t * (g1 + g2 + 2 * g1 * n1 + 2 * g2 * n2)) / (
        (2 * n1 + 1) * (2 * n2 + 1) * p.Z_hat)
    grow1 = math.exp(g1 * (2 * n1 + 1) * t)
    grow2 = math.exp(g2 * (2 * n2 + 1) * t)
    ground1 = eb * ((n1 + 1) * grow1 + n1) + (n1 + 1) * (grow1 - 1)
    ground2 = eb * ((n2 + 1) * grow2 + n2) + (n2 + 1) * (grow2 - 1)
    excited2_r22 = -eb * n2 + (eb + 1) * n2 * grow2 + n2 + 1
    excited1 = n1 * (-eb + math.exp(p.beta * p.E + 2 * g1 * n1 * t + g1 * t) + grow1 + 1) + 1
    excited2 = n2 * (-eb + math.exp(p.beta * p.E + 2 * g2 * n2 * t + g2 * t) + grow2 + 1) + 1
    return pref * np.array([ground1 * ground2, ground1 * excited2_r22,
                            excited1 * ground2, excited1 * excited2])


def _case3_diag(t: float, p: ClosedFormParams) -> np.ndarray:
    n1, n2 = p.n1, p.n2
    eb = math.exp(p.beta * p.E)
    pref = math.exp(-2 * p.beta * p.E) / ((2 * n1 + 1) * (2 * n2 + 1) * p.Z_hat)
    G1, G2 = p.population_rates
    u1, u2 = math.exp(-G1 * t), math.exp(-G2 * t)
    ground = [eb * ((n + 1) + n * u) + (n + 1) * (1 - u) for n, u in ((n1, u1), (n2, u2))]
    excited = [n * (eb + 1) + (n + 1 - n * eb) * u for n, u in ((n1, u1), (n2, u2))]
    return pref * np.array([ground[0] * ground[1], ground[0] * excited[1],
                            excited[0] * ground[1], excited[0] * excited[1]])


def case3_rho(t: float, p: ClosedFormParams, literal: bool = False) -> np.ndarray:
    if t < 0:
        raise ValueError("t must be non-negative")
    d = _case3_diag_literal(t, p) if literal else _case3_diag(t, p)
    return _check_trace(np.diag(d).astype(complex), "case III")


def rho_at(case, t: float, p: ClosedFormParams, literal: bool = False) -> np.ndarray:
    fn = {Case.I: case1_rho, Case.II: case2_rho, Case.III: case3_rho}[Case.parse(case)]
    return fn(t, p, literal)


def series(case, times, p: ClosedFormParams) -> np.ndarray:
    return np.array([rho_at(case, float(t), p) for t in times])
