import numpy as np
import pytest

from ..liouvillian import (
    exact_lindblad_dynamics,
    half_step_propagator,
    jc_hamiltonian,
    lindblad_liouvillian,
)
from ..system_types import (
    CAVITY,
    EXCITED,
    GROUND,
    SystemParams,
    SystemParamsError,
    basis_projector,
    devectorize,
    is_physical,
    vectorize,
)


def _params(**overrides) -> SystemParams:
    values = dict(omega_e=2.0, g=0.0, omega_c=2.0, gamma=0.0, kappa=0.0)
    values.update(overrides)
    return SystemParams(**values)


def _random_params(rng: np.random.Generator) -> SystemParams:
    return SystemParams(
        omega_e=2.0,
        g=rng.uniform(0, 0.1),
        omega_c=2.0 + rng.uniform(-0.05, 0.05),
        gamma=rng.uniform(0, 0.01),
        kappa=rng.uniform(0, 0.05),
    )


def _random_state(rng: np.random.Generator) -> np.ndarray:
    m = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    rho = m @ m.conj().T
    return rho / np.trace(rho)


class TestSystemParams:
    def test_rejects_negative_rates(self):
        with pytest.raises(ValueError):
            _params(kappa=-0.01)

    def test_rejects_non_positive_energies(self):
        with pytest.raises(ValueError):
            _params(omega_c=0.0)

    def test_frame_frequency(self):
        assert _params().frame_frequency == 2.0
        assert _params(rotating_frame=False).frame_frequency == 0.0


def test_vectorization_is_column_stacking():
    rho = np.arange(9).reshape(3, 3)
    vec = vectorize(rho)
    assert vec[1 + 3 * 2] == rho[1, 2]
    np.testing.assert_array_equal(devectorize(vec), rho)


def test_is_physical():
    assert is_physical(basis_projector(EXCITED))
    assert not is_physical(np.zeros((3, 3)))
    coherence = np.zeros((3, 3))
    coherence[EXCITED, GROUND] = 1.0
    assert not is_physical(coherence)


class TestHamiltonian:
    def test_resonant_rotating_frame_without_coupling_is_zero(self):
        np.testing.assert_array_equal(jc_hamiltonian(_params()), np.zeros((3, 3)))

    def test_polaron_shifted_cavity(self):
        h = jc_hamiltonian(_params(omega_c=2.0 - 0.03))
        assert h[EXCITED, EXCITED] == 0.0
        assert h[CAVITY, CAVITY] == pytest.approx(-0.03)

    def test_lab_frame_diagonal(self):
        h = jc_hamiltonian(_params(omega_c=1.9, rotating_frame=False))
        np.testing.assert_allclose(np.diag(h), [0.0, 2.0, 1.9])

    def test_resonant_eigenvalues(self):
        eigenvalues = np.linalg.eigvalsh(jc_hamiltonian(_params(g=0.05)))
        np.testing.assert_allclose(eigenvalues, [-0.05, 0.0, 0.05], atol=1e-14)


class TestLiouvillian:
    def test_zero_without_dynamics(self):
        np.testing.assert_array_equal(lindblad_liouvillian(_params()), 0)

    def test_trace_preserving(self):
        rng = np.random.default_rng(3)
        liouvillian = lindblad_liouvillian(_random_params(rng))
        trace_functional = vectorize(np.eye(3))
        np.testing.assert_allclose(trace_functional @ liouvillian, 0, atol=1e-12)

    def test_single_channel_decay(self):
        gamma = 0.004
        liouvillian = lindblad_liouvillian(_params(gamma=gamma))
        half = half_step_propagator(liouvillian, 50.0)
        rho = devectorize(half @ vectorize(basis_projector(EXCITED)))
        assert rho[EXCITED, EXCITED].real == pytest.approx(np.exp(-gamma * 25.0))
        assert rho[GROUND, GROUND].real == pytest.approx(1 - np.exp(-gamma * 25.0))

    def test_half_steps_compose(self):
        liouvillian = lindblad_liouvillian(_random_params(np.random.default_rng(5)))
        half = half_step_propagator(liouvillian, 5.0)
        full = half_step_propagator(liouvillian, 10.0)
        np.testing.assert_allclose(half @ half, full, atol=1e-12)

    def test_zero_liouvillian_gives_identity(self):
        np.testing.assert_allclose(
            half_step_propagator(np.zeros((9, 9)), 5.0), np.eye(9)
        )

    def test_non_positive_step(self):
        with pytest.raises(SystemParamsError):
            half_step_propagator(np.zeros((9, 9)), 0.0)


class TestExactLindbladDynamics:
    def test_frozen_without_dynamics(self):
        rho0 = _random_state(np.random.default_rng(1))
        trajectory = exact_lindblad_dynamics(_params(), rho0, [0.0, 10.0, 100.0])
        for rho in trajectory:
            np.testing.assert_allclose(rho, rho0, atol=1e-14)

    def test_vacuum_rabi(self):
        g = 0.05
        times = np.linspace(0, 300, 61)
        trajectory = exact_lindblad_dynamics(
            _params(g=g), basis_projector(EXCITED), times
        )
        np.testing.assert_allclose(
            trajectory[:, EXCITED, EXCITED].real, np.cos(g * times) ** 2, atol=1e-12
        )

    def test_free_decay(self):
        gamma = 0.004
        times = np.linspace(0, 1000, 11)
        trajectory = exact_lindblad_dynamics(
            _params(gamma=gamma), basis_projector(EXCITED), times
        )
        np.testing.assert_allclose(
            trajectory[:, EXCITED, EXCITED].real, np.exp(-gamma * times), atol=1e-12
        )

    def test_trace_hermiticity_positivity(self):
        rng = np.random.default_rng(11)
        for _ in range(5):
            trajectory = exact_lindblad_dynamics(
                _random_params(rng), _random_state(rng), np.linspace(0, 1000, 21)
            )
            for rho in trajectory:
                assert abs(np.trace(rho) - 1) < 1e-10
                np.testing.assert_allclose(rho, rho.conj().T, atol=1e-10)
                assert np.linalg.eigvalsh(rho).min() >= -1e-8

    def test_rotating_frame_keeps_populations(self):
        rho0 = basis_projector(EXCITED)
        times = np.linspace(0, 50, 26)
        rotating = exact_lindblad_dynamics(
            _params(g=0.02, omega_c=1.99, kappa=0.01), rho0, times
        )
        lab = exact_lindblad_dynamics(
            _params(g=0.02, omega_c=1.99, kappa=0.01, rotating_frame=False),
            rho0,
            times,
        )
        for index in (EXCITED, CAVITY):
            np.testing.assert_allclose(
                rotating[:, index, index].real, lab[:, index, index].real, atol=1e-9
            )

    def test_unsorted_grid(self):
        with pytest.raises(SystemParamsError):
            exact_lindblad_dynamics(_params(), basis_projector(GROUND), [0.0, 2.0, 1.0])

    def test_grid_must_start_at_zero(self):
        with pytest.raises(SystemParamsError):
            exact_lindblad_dynamics(_params(), basis_projector(GROUND), [1.0, 2.0])
