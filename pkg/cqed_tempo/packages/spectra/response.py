import numpy as np
import structlog
from scipy.signal import find_peaks
from scipy.signal.windows import hann

from cqed_tempo.packages.bath import MemoryKernel
from cqed_tempo.packages.influence import CouplingDiagonal
from cqed_tempo.packages.system import GROUND, SystemParams, basis_projector
from cqed_tempo.packages.tempo import EngineConfig, TempoEngine

from .spectra_types import DriveMode, ResponseSeries, Spectrum, SpectrumError, Splitting

logger = structlog.stdlib.get_logger(__name__)

EQUILIBRATION_THRESHOLD = 1e-4
EQUILIBRATION_WINDOW = 64
DEFAULT_PAD = 2**15


def response_function(
    drive: DriveMode,
    cfg: EngineConfig,
    system: SystemParams,
    kernel: MemoryKernel,
    n_steps: int | None = None,
    coupling: CouplingDiagonal | None = None,
    threshold: float = EQUILIBRATION_THRESHOLD,
    window: int = EQUILIBRATION_WINDOW,
) -> ResponseSeries:
    """Propagate ϱ(0) = μ|g,0⟩⟨g,0| and record tr(μϱ(t)).

    With n_steps set, exactly that many steps are taken. Otherwise the run
    stops once |S¹| has stayed below threshold·|S¹(0)| for a whole window,
    or at cfg.max_steps.
    """
    if n_steps is not None:
        cfg = cfg.model_copy(update={"max_steps": n_steps})
    engine = TempoEngine(cfg, system, kernel, coupling)
    mu = drive.operator
    rho0 = mu @ basis_projector(GROUND)

    values = [np.trace(mu @ rho0)]
    state = engine.initialize(rho0, allow_unphysical=True)
    values.append(np.trace(mu @ engine.reduced_state(state)))
    max_bond = state.max_bond_dimension

    initial = abs(values[0])
    while state.step < cfg.max_steps:
        state = engine.step(state)
        values.append(np.trace(mu @ engine.reduced_state(state)))
        max_bond = max(max_bond, state.max_bond_dimension)
        if n_steps is None and len(values) >= window:
            if max(abs(v) for v in values[-window:]) < threshold * initial:
                break

    residual = abs(values[-1]) / initial
    warnings = []
    if residual >= threshold:
        warnings.append(
            f"Response not equilibrated: |S(t_end)|/|S(0)| = {residual:.3e}"
        )
        logger.warning(
            "response_not_equilibrated",
            drive=str(drive),
            residual=residual,
            steps=state.step,
        )

    series = np.asarray(values, dtype=np.complex128)
    logger.info(
        "response_finished",
        drive=str(drive),
        steps=state.step,
        residual=residual,
        max_bond_dimension=max_bond,
    )
    return ResponseSeries(
        times=cfg.dt * np.arange(len(series)),
        values=series,
        drive=drive,
        dt=cfg.dt,
        frame_frequency=system.frame_frequency,
        equilibration_residual=residual,
        max_bond_dimension=max_bond,
        discarded_weight=state.cumulative_discarded_weight,
        warnings=warnings,
    )


def absorption_spectrum(
    s: ResponseSeries, pad_to: int = DEFAULT_PAD, window: str | None = None
) -> Spectrum:
    """A(ω) = 2 Re Σ_k w_k S¹(t_k) e^{iωt_k} δt with w_0 = ½, w_k = 1.

    The sum is evaluated for the FFT frequencies of the zero-padded series
    and returned on an ascending grid, shifted back by the frame frequency.
    """
    n = len(s.values)
    if pad_to < n:
        raise SpectrumError(f"pad_to={pad_to} is shorter than the series ({n})")
    if pad_to < 1 or pad_to & (pad_to - 1):
        raise SpectrumError(f"pad_to must be a power of two, got {pad_to}")

    weighted = s.values.copy()
    weighted[0] *= 0.5
    if window == "hann":
        # falling half of a Hann window, 1 at t = 0
        weighted *= hann(2 * n, sym=False)[n:]
    elif window is not None:
        raise SpectrumError(f"Unknown window {window!r}")

    padded = np.zeros(pad_to, dtype=np.complex128)
    padded[:n] = weighted
    # Σ_k x_k e^{+iω_m t_k} = N·ifft(x)_m
    transform = pad_to * np.fft.ifft(padded) * s.dt
    omega = 2 * np.pi * np.fft.fftfreq(pad_to, d=s.dt)

    values = np.fft.fftshift(2 * transform.real)
    omega = np.fft.fftshift(omega) + s.frame_frequency
    return Spectrum(
        omega=omega,
        values=values,
        pad_to=pad_to,
        resolution=2 * np.pi / (pad_to * s.dt),
        metadata={
            "drive": str(s.drive),
            "dt": s.dt,
            "pad_to": pad_to,
            "window": window or "none",
            "equilibration_residual": s.equilibration_residual,
        },
    )


def _refine(values: np.ndarray, omega: np.ndarray, index: int) -> float:
    """Vertex of the parabola through three neighbouring samples."""
    if index == 0 or index == len(values) - 1:
        return float(omega[index])
    left, center, right = values[index - 1 : index + 2]
    curvature = left - 2 * center + right
    if curvature == 0:
        return float(omega[index])
    offset = 0.5 * (left - right) / curvature
    return float(omega[index] + offset * (omega[1] - omega[0]))


def find_splitting(spec: Spectrum, prominence_fraction: float = 0.02) -> Splitting:
    """Positions of the two most prominent peaks and their separation."""
    peaks, properties = find_peaks(
        spec.values, prominence=prominence_fraction * spec.values.max()
    )
    if len(peaks) < 2:
        raise SpectrumError(
            f"Found {len(peaks)} peak(s) above the prominence threshold; "
            "the Rabi splitting is not resolved"
        )
    strongest = peaks[np.argsort(properties["prominences"])[-2:]]
    lower, upper = sorted(_refine(spec.values, spec.omega, i) for i in strongest)
    return Splitting(lower=lower, upper=upper)
