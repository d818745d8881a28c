import numpy as np
import pytest
from scipy.integrate import trapezoid

from cqed_tempo.packages.bath import MemoryKernel
from cqed_tempo.packages.system import GROUND
from cqed_tempo.packages.tempo import EngineConfig
from cqed_tempo.tests.fixtures_physics import TEMPERATURE, polariton_params

from ..response import absorption_spectrum, find_splitting, response_function
from ..spectra_types import DriveMode, ResponseSeries, SpectrumError


def _zero_kernel(dt: float, delta_max: int) -> MemoryKernel:
    return MemoryKernel(
        dt=dt, temperature=TEMPERATURE, eta=np.zeros(delta_max + 1, dtype=complex)
    )


def _series(values: np.ndarray, dt: float, frame: float = 2.0) -> ResponseSeries:
    return ResponseSeries(
        times=dt * np.arange(len(values)),
        values=values.astype(complex),
        drive=DriveMode.DIPOLE,
        dt=dt,
        frame_frequency=frame,
        equilibration_residual=abs(values[-1]),
    )


def _half_maximum_width(omega: np.ndarray, values: np.ndarray) -> float:
    half = values.max() / 2
    above = np.flatnonzero(values >= half)
    low, high = above[0], above[-1]
    left = np.interp(half, [values[low - 1], values[low]], [omega[low - 1], omega[low]])
    right = np.interp(
        half, [values[high + 1], values[high]], [omega[high + 1], omega[high]]
    )
    return right - left


class TestDriveMode:
    @pytest.mark.parametrize("drive", list(DriveMode))
    def test_operator(self, drive):
        mu = drive.operator
        np.testing.assert_array_equal(mu, mu.conj().T)
        assert (mu @ mu)[GROUND, GROUND] == 1.0


class TestResponseFunction:
    @pytest.mark.parametrize("drive", list(DriveMode))
    def test_starts_at_one(self, drive):
        cfg = EngineConfig(dt=5.0, max_steps=10)
        series = response_function(
            drive, cfg, polariton_params(), _zero_kernel(5.0, 9), n_steps=10
        )
        assert abs(series.values[0]) == pytest.approx(1.0, abs=1e-9)
        assert len(series.values) == 11

    def test_vacuum_rabi_response(self):
        g = 0.05
        cfg = EngineConfig(dt=1.0, max_steps=200)
        system = polariton_params(g=g, gamma=0.0, kappa=0.0)

        series = response_function(
            DriveMode.DIPOLE, cfg, system, _zero_kernel(1.0, 199), n_steps=200
        )

        np.testing.assert_allclose(series.values, np.cos(g * series.times), atol=1e-10)
        assert not series.equilibrated

    def test_free_decay_response(self):
        gamma = 0.004
        cfg = EngineConfig(dt=5.0, max_steps=100)
        system = polariton_params(g=0.0, gamma=gamma)

        series = response_function(
            DriveMode.DIPOLE, cfg, system, _zero_kernel(5.0, 99), n_steps=100
        )

        np.testing.assert_allclose(
            series.values, np.exp(-gamma * series.times / 2), atol=1e-10
        )

    def test_runs_until_equilibrated(self):
        cfg = EngineConfig(dt=5.0, max_steps=5000)
        system = polariton_params(g=0.0, gamma=0.02)

        series = response_function(
            DriveMode.DIPOLE, cfg, system, _zero_kernel(5.0, 4999)
        )

        assert series.equilibrated
        assert series.equilibration_residual < 1e-4
        assert len(series.values) < 5001

    def test_warns_when_cut_short(self, mocker):
        logger = mocker.patch("cqed_tempo.packages.spectra.response.logger")
        cfg = EngineConfig(dt=5.0, max_steps=10)
        series = response_function(
            DriveMode.CAVITY,
            cfg,
            polariton_params(kappa=0.001),
            _zero_kernel(5.0, 9),
        )
        assert series.warnings
        assert logger.warning.call_args.args[0] == "response_not_equilibrated"


class TestAbsorptionSpectrum:
    GAMMA = 0.004
    DT = 5.0

    def _lorentzian_series(self) -> ResponseSeries:
        times = self.DT * np.arange(4000)
        return _series(np.exp(-self.GAMMA * times / 2), self.DT)

    def test_lorentzian(self):
        spectrum = absorption_spectrum(self._lorentzian_series())

        peak = np.argmax(spectrum.values)
        assert spectrum.omega[peak] == pytest.approx(2.0, abs=spectrum.resolution)
        assert spectrum.values[peak] == pytest.approx(4 / self.GAMMA, rel=0.02)
        width = _half_maximum_width(spectrum.omega, spectrum.values)
        assert width == pytest.approx(self.GAMMA, rel=0.02)

    def test_grid(self):
        spectrum = absorption_spectrum(self._lorentzian_series(), pad_to=2**13)
        assert len(spectrum.omega) == 2**13
        np.testing.assert_allclose(np.diff(spectrum.omega), spectrum.resolution)

    def test_sum_rule(self):
        spectrum = absorption_spectrum(self._lorentzian_series())
        assert trapezoid(spectrum.values, spectrum.omega) == pytest.approx(
            2 * np.pi, rel=0.01
        )

    def test_padding_neutral(self):
        series = self._lorentzian_series()
        coarse = absorption_spectrum(series, pad_to=2**13)
        fine = absorption_spectrum(series, pad_to=2**14)

        coarse_peak = coarse.omega[np.argmax(coarse.values)]
        fine_peak = fine.omega[np.argmax(fine.values)]
        assert abs(coarse_peak - fine_peak) < coarse.resolution
        assert trapezoid(fine.values, fine.omega) == pytest.approx(
            trapezoid(coarse.values, coarse.omega), rel=1e-3
        )

    def test_hann_window_keeps_peak(self):
        spectrum = absorption_spectrum(self._lorentzian_series(), window="hann")
        assert spectrum.omega[np.argmax(spectrum.values)] == pytest.approx(
            2.0, abs=spectrum.resolution
        )
        assert spectrum.metadata["window"] == "hann"

    def test_rejects_non_power_of_two(self):
        with pytest.raises(SpectrumError):
            absorption_spectrum(self._lorentzian_series(), pad_to=5000)

    def test_rejects_short_padding(self):
        with pytest.raises(SpectrumError):
            absorption_spectrum(self._lorentzian_series(), pad_to=2048)

    def test_frame_consistency(self):
        omega_e, gamma, dt = 0.2, 0.01, 1.0
        cfg = EngineConfig(dt=dt, max_steps=2000)
        peaks = []
        for rotating in (True, False):
            system = polariton_params(
                g=0.0,
                gamma=gamma,
                omega_e=omega_e,
                omega_c=omega_e,
                rotating_frame=rotating,
            )
            series = response_function(
                DriveMode.DIPOLE, cfg, system, _zero_kernel(dt, 1999), n_steps=2000
            )
            spectrum = absorption_spectrum(series, pad_to=2**13)
            peaks.append(spectrum.omega[np.argmax(spectrum.values)])
            resolution = spectrum.resolution

        assert peaks[0] == pytest.approx(omega_e, abs=resolution)
        assert abs(peaks[0] - peaks[1]) <= resolution


class TestFindSplitting:
    def test_two_polaritons(self):
        g, gamma, dt = 0.015, 0.004, 5.0
        times = dt * np.arange(4000)
        spectrum = absorption_spectrum(
            _series(np.cos(g * times) * np.exp(-gamma * times / 2), dt)
        )

        splitting = find_splitting(spectrum)

        assert splitting.splitting == pytest.approx(2 * g, abs=spectrum.resolution)
        center = sum(splitting.peak_positions) / 2
        assert center == pytest.approx(2.0, abs=spectrum.resolution)

    def test_single_peak_is_an_error(self):
        times = 5.0 * np.arange(4000)
        spectrum = absorption_spectrum(_series(np.exp(-0.002 * times), 5.0))
        with pytest.raises(SpectrumError):
            find_splitting(spectrum)
