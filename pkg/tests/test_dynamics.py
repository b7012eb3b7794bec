import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from qwork import analytic, dynamics, entanglement, qmat
from qwork.dynamics import BathParams, Case, IntegrationError, SystemSpec

from conftest import COLD_BATHS, ref_spec

NON_X = [(i, j) for i in range(4) for j in range(4) if i != j and i + j != 3]


def liouvillian_propagator(spec, baths, t):
    """exp(t L) on column-stacked vec(rho); independent of the RK4 path."""
    eye = np.eye(4)
    H = dynamics.build_hamiltonian(spec)
    L = -1j * (np.kron(eye, H) - np.kron(H.T, eye))
    (b1, b2) = baths
    rates = [b1.gamma * (b1.n + 1), b1.gamma * b1.n, b2.gamma * (b2.n + 1), b2.gamma * b2.n]
    for r, J in zip(rates, dynamics.build_jump_ops()):
        JdJ = J.conj().T @ J
        L = L + r * (np.kron(J.conj(), J) - 0.5 * np.kron(eye, JdJ) - 0.5 * np.kron(JdJ.T, eye))
    return scipy.linalg.expm(t * L)


def propagate_exact(rho0, spec, baths, t):
    vec = rho0.reshape(-1, order="F")
    return (liouvillian_propagator(spec, baths, t) @ vec).reshape(4, 4, order="F")


def test_hamiltonian():
    assert np.array_equal(dynamics.build_hamiltonian(SystemSpec(h_w=0.0)), np.zeros((4, 4)))
    H = dynamics.build_hamiltonian(SystemSpec(h_w=0.1))
    assert qmat.allclose(H, np.diag([0.2, 0, 0, -0.2]), 1e-15)
    D = np.diag([0.1, 0.2, 0.3, 0.4])
    assert qmat.allclose(H @ D, D @ H, 0)


def test_jump_ops():
    B1, B2, C1, C2 = dynamics.build_jump_ops()
    assert np.array_equal(B2, B1.conj().T) and np.array_equal(C2, C1.conj().T)
    for op in (B1, B2, C1, C2):
        assert np.count_nonzero(op) == 2 and set(np.abs(op[op != 0])) == {1.0}
    assert qmat.allclose(B1 @ qmat.ket(1, 0), qmat.ket(0, 0), 0)
    assert qmat.allclose(B1 @ qmat.ket(0, 0), 0, 0) and qmat.allclose(B1 @ qmat.ket(0, 1), 0, 0)
    assert qmat.allclose(C1 @ qmat.ket(0, 1), qmat.ket(0, 0), 0)
    assert qmat.allclose(B1 @ C1, C1 @ B1, 0)


def test_dissipator_examples(rng):
    B1 = dynamics.build_jump_ops()[0]
    assert qmat.allclose(dynamics.dissipator_term(B1, B1.conj().T, np.zeros((4, 4))), 0, 0)
    rho = qmat.projector(qmat.ket(1, 0))
    want = qmat.projector(qmat.ket(0, 0)) - qmat.projector(qmat.ket(1, 0))
    assert qmat.allclose(dynamics.dissipator_term(B1, B1.conj().T, rho), want, 1e-15)
    for L in dynamics.build_jump_ops():
        r = qmat.random_hermitian(4, rng)
        assert abs(np.trace(dynamics.dissipator_term(L, L.conj().T, r))) <= 1e-12


@pytest.mark.parametrize("baths", [COLD_BATHS, (BathParams(0.3, 0.0), BathParams(0.05, 2.5))])
def test_master_rhs_fixed_point(baths):
    spec = ref_spec()
    # detailed balance: gamma (n+1) p_e = gamma n p_g  =>  p_e = n / (2n+1)
    for b in baths:
        p_e = b.n / (2 * b.n + 1)
        assert b.gamma * (b.n + 1) * p_e == pytest.approx(b.gamma * b.n * (1 - p_e))
    fixed = np.diag(np.kron(*[[1 - b.n / (2 * b.n + 1), b.n / (2 * b.n + 1)] for b in baths]))
    assert qmat.allclose(fixed, dynamics.steady_state(baths), 1e-15)
    assert np.max(np.abs(dynamics.master_rhs(fixed, spec, baths))) <= 1e-10


def test_master_rhs_unitary_limit(rng):
    spec = ref_spec()
    baths = (BathParams(0.0, 1.0), BathParams(0.0, 0.3))
    rho = qmat.random_density(4, rng)
    H = dynamics.build_hamiltonian(spec)
    assert np.array_equal(dynamics.master_rhs(rho, spec, baths), -1j * (H @ rho - rho @ H))


@settings(max_examples=40)
@given(st.integers(0, 2**32 - 1))
def test_master_rhs_traceless_hermitian(seed):
    rng = np.random.default_rng(seed)
    rho = qmat.random_density(4, rng)
    d = dynamics.master_rhs(rho, ref_spec(), COLD_BATHS)
    assert abs(np.trace(d)) <= 1e-12
    assert qmat.hermiticity_error(d) <= 1e-12
    fast = dynamics._make_rhs(ref_spec(), COLD_BATHS)(rho)
    assert np.max(np.abs(fast - d)) <= 1e-14


def test_bath_params():
    b = BathParams.from_temperature(0.1, 0.05, 14.0)
    assert b.n == pytest.approx(1 / (math.exp(0.7) - 1), abs=1e-12)
    with pytest.raises(ValueError):
        BathParams(0.1, 0.3, beta_bath=0.05, omega0=14.0)
    with pytest.raises(ValueError):
        BathParams(-0.1, 0.3)
    assert BathParams(0.1, 1.0).excited_population == pytest.approx(1 / 3)


def test_system_spec_validation():
    with pytest.raises(ValueError):
        SystemSpec(E=0.0)
    with pytest.raises(ValueError):
        SystemSpec(beta=-1)
    assert SystemSpec(case="caseiii").case is Case.III
    s = SystemSpec(E=1.0, beta=0.5)
    assert s.Z == pytest.approx(1 + math.exp(-1.0)) and s.Z_hat == pytest.approx((1 + math.exp(-0.5)) ** 2)


def test_evolve_zero_length():
    spec = ref_spec()
    rho0 = dynamics.initial_state(spec)
    traj = dynamics.evolve(rho0, spec, COLD_BATHS, 0.0, 0.01)
    assert len(traj) == 1 and traj.times[0] == 0.0
    assert np.array_equal(traj.states[0], rho0)


def test_evolve_time_grid():
    spec = ref_spec()
    traj = dynamics.evolve(dynamics.initial_state(spec), spec, COLD_BATHS, 1.05, 0.1, stride=3)
    assert traj.times[0] == 0.0 and traj.times[-1] == pytest.approx(1.05)
    assert np.all(np.diff(traj.times) > 0)
    with pytest.raises(ValueError):
        dynamics.evolve(dynamics.initial_state(spec), spec, COLD_BATHS, 1.0, 0.0)


def test_evolve_aborts_with_step_index():
    spec = ref_spec()
    with pytest.raises(IntegrationError) as info:
        dynamics.evolve(dynamics.initial_state(spec), spec, (BathParams(50.0, 1.0), COLD_BATHS[1]), 5.0, 1.0)
    assert info.value.step >= 1


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_evolve_matches_exact_propagator(seed):
    rng = np.random.default_rng(seed)
    rho0 = qmat.random_density(4, rng)
    baths = (BathParams(rng.uniform(0.01, 0.3), rng.uniform(0, 3)),
             BathParams(rng.uniform(0.01, 0.3), rng.uniform(0, 3)))
    spec = SystemSpec(h_w=rng.uniform(-0.3, 0.3))
    traj = dynamics.evolve(rho0, spec, baths, 10.0, 0.01, stride=250)
    for t, rho in traj:
        assert np.max(np.abs(rho - propagate_exact(rho0, spec, baths, t))) <= 1e-9


@pytest.mark.parametrize("case", list(Case))
def test_invariants_along_trajectory(case):
    spec = ref_spec(case, beta=0.5)
    traj = dynamics.evolve(dynamics.initial_state(spec), spec, COLD_BATHS, 50.0, 0.01)
    for rho in traj.states:
        assert abs(np.trace(rho) - 1) <= 1e-10
        assert qmat.hermiticity_error(rho) <= 1e-10
        assert np.linalg.eigvalsh(rho)[0] >= -1e-8
        assert max(abs(rho[i, j]) for i, j in NON_X) <= 1e-10
    assert traj.warnings == []


def test_convergence_order(reference):
    spec, baths, params = reference

    def max_dev(dt):
        traj = dynamics.evolve(dynamics.initial_state(spec), spec, baths, 50.0, dt)
        return max(np.max(np.abs(r - analytic.case1_rho(t, params))) for t, r in traj)

    coarse, fine = max_dev(0.4), max_dev(0.2)
    assert coarse / fine >= 8.0


def test_long_time_limit():
    spec = ref_spec()
    t_end = 50 / min(b.gamma for b in COLD_BATHS)
    traj = dynamics.evolve(dynamics.initial_state(spec), spec, COLD_BATHS, t_end, 0.05, stride=10**6)
    assert np.max(np.abs(traj.states[-1] - dynamics.steady_state(COLD_BATHS))) <= 1e-6
    exact = propagate_exact(dynamics.initial_state(spec), spec, COLD_BATHS, t_end)
    assert np.max(np.abs(exact - dynamics.steady_state(COLD_BATHS))) <= 1e-12


def test_evolve_unitary_diagonal_unchanged():
    spec = ref_spec()
    rho0 = dynamics.product_thermal_state(0.4, 1.0)
    for t in (0.0, 1.3, 17.0):
        assert np.array_equal(dynamics.evolve_unitary(rho0, spec, t), rho0)


def test_evolve_unitary_phase_and_concurrence():
    spec = ref_spec(beta=0.3)
    rho0 = dynamics.initial_state(spec)
    energies = np.diag(dynamics.build_hamiltonian(spec)).real
    assert energies[0] - energies[3] == pytest.approx(4 * spec.h_w)
    c0 = entanglement.concurrence(rho0).value
    for t in np.linspace(0, 40, 9):
        rho = dynamics.evolve_unitary(rho0, spec, t)
        assert rho[0, 3] == pytest.approx(rho0[0, 3] * np.exp(-4j * spec.h_w * t), abs=1e-14)
        assert abs(rho[0, 3]) == pytest.approx(abs(rho0[0, 3]), abs=1e-15)
        assert abs(entanglement.concurrence(rho).value - c0) <= 1e-10
        expm = scipy.linalg.expm(-1j * dynamics.build_hamiltonian(spec) * t)
        assert np.max(np.abs(rho - expm @ rho0 @ expm.conj().T)) <= 1e-12


def test_spontaneous_emission_rate():
    assert dynamics.spontaneous_emission_rate(2.0, 0.0) == 0.0
    assert dynamics.spontaneous_emission_rate(1.0, 1.0) == pytest.approx(4 / 3)
    assert dynamics.spontaneous_emission_rate(2.0, 0.3) == pytest.approx(8 * dynamics.spontaneous_emission_rate(1.0, 0.3))
    with pytest.raises(ValueError):
        dynamics.spontaneous_emission_rate(-1.0, 1.0)


def test_initial_states_are_valid():
    for case in Case:
        for beta in (0.0, 0.001, 1.0, 10.0):
            qmat.check_density(dynamics.initial_state(ref_spec(case, beta)), herm_tol=0, trace_tol=1e-15)
