import numpy as np
import pytest

from cqed_tempo.packages.bath import (
    FrequencyGrid,
    MemoryKernel,
    ModeList,
    broaden,
    memory_kernel,
    scale_hrf,
)
from cqed_tempo.packages.system import (
    EXCITED,
    GROUND,
    basis_projector,
    exact_lindblad_dynamics,
)
from cqed_tempo.settings import settings
from cqed_tempo.tests.fixtures_physics import TEMPERATURE, polariton_params

from ..engine import TempoEngine, run_dynamics
from ..oracles import brute_force_adt, ibm_coherence_oracle
from ..tempo_types import EngineConfig, TempoError


class TestBruteForceAdt:
    def test_single_step_equals_engine(self, single_mode_density):
        cfg = EngineConfig(dt=5.0, max_steps=1)
        system = polariton_params(single_mode_density)
        kernel = memory_kernel(single_mode_density, TEMPERATURE, 5.0, 0)
        engine = TempoEngine(cfg, system, kernel)

        expected = engine.reduced_state(engine.initialize(basis_projector(EXCITED)))

        np.testing.assert_allclose(
            brute_force_adt(basis_projector(EXCITED), 1, cfg, system, kernel),
            expected,
            atol=1e-14,
        )

    def test_zero_kernel_matches_lindblad(self):
        dt = 5.0
        cfg = EngineConfig(dt=dt, max_steps=3)
        system = polariton_params(g=0.015, gamma=0.004, kappa=0.05)
        kernel = MemoryKernel(dt=dt, temperature=TEMPERATURE, eta=np.zeros(3, complex))

        rho = brute_force_adt(basis_projector(EXCITED), 3, cfg, system, kernel)
        exact = exact_lindblad_dynamics(system, basis_projector(EXCITED), [0.0, 3 * dt])

        np.testing.assert_allclose(rho, exact[-1], atol=1e-12)

    def test_rejects_large_step_counts(self, single_mode_density):
        cfg = EngineConfig(dt=5.0, max_steps=9)
        kernel = memory_kernel(single_mode_density, TEMPERATURE, 5.0, 8)
        with pytest.raises(TempoError):
            brute_force_adt(
                basis_projector(EXCITED), 9, cfg, polariton_params(), kernel
            )

    def test_respects_memory_budget(self, single_mode_density, mocker):
        mocker.patch.object(settings, "BRUTE_FORCE_MEMORY_BUDGET_BYTES", 1024)
        cfg = EngineConfig(dt=5.0, max_steps=3)
        kernel = memory_kernel(single_mode_density, TEMPERATURE, 5.0, 2)
        with pytest.raises(TempoError):
            brute_force_adt(
                basis_projector(EXCITED), 3, cfg, polariton_params(), kernel
            )


class TestIbmCoherenceOracle:
    def test_starts_at_one(self, smooth_gaussian_density):
        assert ibm_coherence_oracle(
            smooth_gaussian_density, TEMPERATURE, 0.004, 0.0
        ) == pytest.approx(1.0)

    def test_without_phonons_is_free_decay(self, smooth_gaussian_density):
        density = scale_hrf(smooth_gaussian_density, 0.0)
        times = np.linspace(0, 500, 11)
        np.testing.assert_allclose(
            ibm_coherence_oracle(density, TEMPERATURE, 0.004, times),
            np.exp(-0.002 * times),
            rtol=1e-14,
        )

    def test_single_mode_modulus_is_periodic(self):
        nu = 0.1
        density = broaden(
            ModeList.from_pairs([(nu, 0.3)]),
            1e-5,
            FrequencyGrid(0.09995, 0.10005, 2001),
        )
        period = 2 * np.pi / nu
        times = np.linspace(0, period, 7)
        np.testing.assert_allclose(
            np.abs(ibm_coherence_oracle(density, TEMPERATURE, 0.0, times)),
            np.abs(ibm_coherence_oracle(density, TEMPERATURE, 0.0, times + period)),
            rtol=1e-4,
        )

    @pytest.mark.slow
    def test_matches_tempo(self, smooth_gaussian_density):
        gamma, dt, n_steps = 0.004, 1.0, 200
        cfg = EngineConfig(dt=dt, max_steps=n_steps)
        system = polariton_params(g=0.0, gamma=gamma)
        kernel = memory_kernel(smooth_gaussian_density, TEMPERATURE, dt, n_steps - 1)
        rho0 = np.zeros((3, 3))
        rho0[np.ix_([GROUND, EXCITED], [GROUND, EXCITED])] = 0.5

        trajectory = run_dynamics(rho0, cfg, system, kernel)

        expected = (
            ibm_coherence_oracle(
                smooth_gaussian_density, TEMPERATURE, gamma, trajectory.times
            )
            / 2
        )
        np.testing.assert_allclose(
            trajectory.rho[:, EXCITED, GROUND], expected, rtol=1e-4
        )
        np.testing.assert_allclose(
            trajectory.excited_population, np.exp(-gamma * trajectory.times) / 2,
            atol=1e-8,
        )
