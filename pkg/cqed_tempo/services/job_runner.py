"""Job orchestration: turns a validated JobConfig into output files and a
manifest."""

import asyncio
import itertools
import logging
import math
import time
from collections.abc import Callable
from concurrent.futures import Executor, ProcessPoolExecutor
from dataclasses import dataclass
from datetime import UTC, datetime
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd
import sentry_sdk
import structlog

from cqed_tempo.packages.bath import (
    FrequencyGrid,
    MemoryKernel,
    ModeList,
    SpectralDensity,
    broaden,
    correlation_function,
    default_grid,
    effective_width_sd,
    franck_condon,
    gaussian_density,
    load_modes,
    memory_kernel,
    reorganization_energy,
    scale_hrf,
    total_hrf,
)
from cqed_tempo.packages.bath.spectral_density import GRID_SIGMAS
from cqed_tempo.packages.influence import CouplingDiagonal, influence_tensor
from cqed_tempo.packages.spectra import (
    SpectrumError,
    absorption_spectrum,
    find_splitting,
    response_function,
)
from cqed_tempo.packages.system import (
    CAVITY,
    EXCITED,
    GROUND,
    SystemParams,
    basis_projector,
)
from cqed_tempo.packages.tempo import EngineConfig, run_dynamics
from cqed_tempo.settings import settings
from cqed_tempo.utils.logging_utils import run_context, setup_logger
from cqed_tempo.utils.sentry import init_sentry
from cqed_tempo.utils.units import ev_to_mev, inverse_ev_to_fs, mev_to_ev

from .job_config import ConfigError, JobConfig, JobKind, dynamics_steps, timestep
from .output_service import (
    RunManifest,
    RunRecord,
    write_csv,
    write_json,
    write_manifest,
)

logger = structlog.stdlib.get_logger(__name__)

INITIAL_STATES = {"excited": EXCITED, "ground": GROUND, "cavity": CAVITY}


def build_density(cfg: JobConfig) -> SpectralDensity:
    """Unscaled (α = 1) density of the configured bath."""
    bath = cfg.bath
    if bath.mode_file is not None:
        modes = load_modes(bath.mode_file, bath.mode_units)
        sigma = mev_to_ev(bath.sigma_mev)
        density = broaden(modes, sigma, default_grid(modes, sigma, bath.grid_points))
    elif bath.analytic is not None:
        center = mev_to_ev(bath.analytic.center_mev)
        width = mev_to_ev(bath.analytic.width_mev)
        n_points = bath.grid_points or settings.DEFAULT_GRID_POINTS
        if bath.analytic.shape == "gaussian":
            grid = FrequencyGrid(0.0, center + GRID_SIGMAS * width, n_points)
            density = gaussian_density(center, width, bath.analytic.s_tot, grid)
        else:
            modes = ModeList.from_pairs([(center, bath.analytic.s_tot)])
            density = broaden(modes, width, default_grid(modes, width, n_points))
    else:
        raise ConfigError("bath needs a mode_file or an analytic density")

    if bath.effective_width:
        density = effective_width_sd(density)
    return density


def single_alpha(cfg: JobConfig) -> float:
    alphas = cfg.bath.alphas
    if len(alphas) != 1:
        raise ConfigError(
            f"{cfg.job.kind} jobs take a single alpha_hrf, got {len(alphas)}; "
            "use the sweep command for lists"
        )
    return alphas[0]


def system_params(
    cfg: JobConfig, density: SpectralDensity, g_mev: float, kappa_mev: float
) -> SystemParams:
    """SystemParams in eV; Ω_c defaults to ω_e − λ of the (scaled) density."""
    omega_c = cfg.system.omega_c_ev
    if omega_c is None:
        omega_c = cfg.system.omega_e_ev - reorganization_energy(density)
    return SystemParams(
        omega_e=cfg.system.omega_e_ev,
        g=mev_to_ev(g_mev),
        omega_c=omega_c,
        gamma=mev_to_ev(cfg.system.gamma_mev),
        kappa=mev_to_ev(kappa_mev),
        rotating_frame=cfg.system.rotating_frame,
    )


def engine_config(cfg: JobConfig, dt: float, max_steps: int) -> EngineConfig:
    return EngineConfig(
        dt=dt,
        svd_cutoff=cfg.engine.svd_cutoff,
        memory_cutoff=cfg.engine.memory_cutoff,
        max_steps=max_steps,
        max_bond_dimension=cfg.engine.max_bond_dimension,
    )


def kernel_for(
    engine: EngineConfig, density: SpectralDensity, temperature: float
) -> MemoryKernel:
    lags = engine.max_steps - 1
    if engine.memory_cutoff is not None:
        lags = min(lags, engine.memory_cutoff)
    return memory_kernel(density, temperature, engine.dt, lags)


def run_parameters(
    cfg: JobConfig,
    system: SystemParams,
    engine: EngineConfig,
    density: SpectralDensity,
    s_tot: float,
) -> dict[str, Any]:
    """Every physical and numerical input of one engine run, in eV units."""
    return {
        "system": system.model_dump(),
        "engine": engine.model_dump(),
        "bath": {
            "source": str(cfg.bath.mode_file or cfg.bath.analytic),
            "kind": str(density.kind),
            "sigma_ev": density.sigma,
            "temperature_k": cfg.bath.temperature_k,
            "alpha_hrf": density.alpha,
            "s_tot_unscaled": s_tot,
            "reorganization_energy_ev": reorganization_energy(density),
            "grid": {
                "omega_min": density.grid.omega_min,
                "omega_max": density.grid.omega_max,
                "n_points": density.grid.n_points,
            },
        },
        "pad_to": cfg.engine.pad_to,
        "window": cfg.engine.window,
        "drive": str(cfg.job.drive),
        "initial_state": cfg.job.initial_state,
    }


def run_dynamics_job(cfg: JobConfig, out_dir: Path) -> RunRecord:
    start = time.perf_counter()
    unscaled = build_density(cfg)
    density = scale_hrf(unscaled, single_alpha(cfg))
    system = system_params(cfg, density, cfg.system.g_mev, cfg.system.kappa_mev)
    dt = timestep(cfg)
    engine = engine_config(cfg, dt, dynamics_steps(cfg, dt))
    kernel = kernel_for(engine, density, cfg.bath.temperature_k)

    rho0 = basis_projector(INITIAL_STATES[cfg.job.initial_state])
    trajectory = run_dynamics(rho0, engine, system, kernel)
    path = write_csv(trajectory.to_frame(), out_dir / "dynamics.csv")

    return RunRecord(
        label="dynamics",
        outputs=[path.name],
        parameters=run_parameters(cfg, system, engine, density, total_hrf(unscaled)),
        max_bond_dimension=int(trajectory.bond_dimensions.max()),
        discarded_weight=float(trajectory.discarded_weights[-1]),
        wall_clock_s=time.perf_counter() - start,
    )


@dataclass(frozen=True)
class SpectrumRun:
    record: RunRecord
    splitting_ev: float | None


def compute_spectrum(
    cfg: JobConfig,
    out_dir: Path,
    g_mev: float,
    kappa_mev: float,
    alpha: float,
    label: str,
    root: Path | None = None,
) -> SpectrumRun:
    """One response run and its spectrum, written under out_dir.

    Output names in the record are relative to root (default out_dir).
    """
    start = time.perf_counter()
    unscaled = build_density(cfg)
    density = scale_hrf(unscaled, alpha)
    system = system_params(cfg, density, g_mev, kappa_mev)
    dt = timestep(cfg, system.g)

    n_steps = cfg.engine.n_steps
    max_steps = n_steps if n_steps is not None else cfg.engine.max_steps
    if max_steps + 1 > cfg.engine.pad_to:
        raise ConfigError(
            f"Response of {max_steps + 1} samples does not fit "
            f"pad_to={cfg.engine.pad_to}"
        )
    engine = engine_config(cfg, dt, max_steps)
    kernel = kernel_for(engine, density, cfg.bath.temperature_k)

    series = response_function(
        cfg.job.drive,
        engine,
        system,
        kernel,
        n_steps=n_steps,
        threshold=cfg.engine.equilibration_threshold,
    )
    spectrum = absorption_spectrum(series, cfg.engine.pad_to, cfg.engine.window)

    warnings = list(series.warnings)
    try:
        splitting: float | None = find_splitting(spectrum).splitting
    except SpectrumError as exc:
        splitting = None
        warnings.append(str(exc))

    out_dir.mkdir(parents=True, exist_ok=True)
    response_path = write_csv(
        pd.DataFrame(
            {
                "t_ev_inv": series.times,
                "re_S": series.values.real,
                "im_S": series.values.imag,
            }
        ),
        out_dir / "response.csv",
    )
    spectrum_path = write_csv(spectrum.to_frame(), out_dir / "spectrum.csv")
    parameters = run_parameters(cfg, system, engine, density, total_hrf(unscaled))
    sidecar = write_json(
        {
            **spectrum.metadata,
            "resolution_ev": spectrum.resolution,
            "frame_frequency_ev": series.frame_frequency,
            "response_steps": len(series.values) - 1,
            "splitting_ev": splitting,
            "parameters": parameters,
        },
        out_dir / "spectrum.json",
    )

    record = RunRecord(
        label=label,
        outputs=[
            str(p.relative_to(root or out_dir))
            for p in (response_path, spectrum_path, sidecar)
        ],
        parameters=parameters,
        max_bond_dimension=series.max_bond_dimension,
        discarded_weight=series.discarded_weight,
        equilibration_residual=series.equilibration_residual,
        warnings=warnings,
        wall_clock_s=time.perf_counter() - start,
    )
    return SpectrumRun(record=record, splitting_ev=splitting)


def run_spectrum_job(cfg: JobConfig, out_dir: Path) -> RunRecord:
    return compute_spectrum(
        cfg,
        out_dir,
        cfg.system.g_mev,
        cfg.system.kappa_mev,
        single_alpha(cfg),
        label="spectrum",
    ).record


def run_corr_job(cfg: JobConfig, out_dir: Path) -> RunRecord:
    """C(t) of the configured density next to its effective-width twin."""
    start = time.perf_counter()
    temperature = cfg.bath.temperature_k
    density = scale_hrf(build_density(cfg), single_alpha(cfg))
    times = np.linspace(0.0, cfg.job.corr_t_max_ev_inv, cfg.job.corr_points)
    corr = correlation_function(density, temperature, times)

    columns = {
        "t_ev_inv": times,
        "t_fs": inverse_ev_to_fs(times),
        "re_C": corr.real,
        "im_C": corr.imag,
    }
    densities = [density]
    if total_hrf(density) > 0 and not cfg.bath.effective_width:
        effective = effective_width_sd(density)
        corr_eff = correlation_function(effective, temperature, times)
        columns["re_C_effective"] = corr_eff.real
        columns["im_C_effective"] = corr_eff.imag
        densities.append(effective)

    corr_path = write_csv(pd.DataFrame(columns), out_dir / "corr.csv")
    density_path = write_csv(
        pd.concat(
            [
                pd.DataFrame({"kind": str(j.kind), "omega_ev": j.omega, "J": j.values})
                for j in densities
            ],
            ignore_index=True,
        ),
        out_dir / "density.csv",
    )
    return RunRecord(
        label="corr",
        outputs=[corr_path.name, density_path.name],
        parameters={
            "bath": {
                "kind": [str(j.kind) for j in densities],
                "temperature_k": temperature,
                "alpha_hrf": density.alpha,
                "sigma_ev": density.sigma,
                "s_tot": total_hrf(density),
                "reorganization_energy_ev": reorganization_energy(density),
            },
            "corr_t_max_ev_inv": cfg.job.corr_t_max_ev_inv,
            "corr_points": cfg.job.corr_points,
        },
        wall_clock_s=time.perf_counter() - start,
    )


def run_kernel_job(cfg: JobConfig, out_dir: Path) -> RunRecord:
    """Dump η_Δ and the entries of b_Δ for inspection."""
    start = time.perf_counter()
    density = scale_hrf(build_density(cfg), single_alpha(cfg))
    dt = timestep(cfg)
    kernel = memory_kernel(
        density, cfg.bath.temperature_k, dt, cfg.job.kernel_delta_max
    )
    coupling = CouplingDiagonal.emitter()

    deltas = np.arange(kernel.delta_max + 1)
    kernel_path = write_csv(
        pd.DataFrame(
            {"delta": deltas, "re_eta": kernel.eta.real, "im_eta": kernel.eta.imag}
        ),
        out_dir / "kernel.csv",
    )

    rows = []
    for delta in deltas:
        values = influence_tensor(kernel, int(delta), coupling).values
        for later, earlier in itertools.product(range(values.shape[0]), repeat=2):
            rows.append(
                (
                    delta,
                    later,
                    earlier,
                    values[later, earlier].real,
                    values[later, earlier].imag,
                )
            )
    influence_path = write_csv(
        pd.DataFrame(
            rows, columns=["delta", "beta_later", "beta_earlier", "re_b", "im_b"]
        ),
        out_dir / "influence.csv",
    )
    return RunRecord(
        label="kernel",
        outputs=[kernel_path.name, influence_path.name],
        parameters={
            "dt": dt,
            "temperature_k": kernel.temperature,
            "delta_max": kernel.delta_max,
            "alpha_hrf": density.alpha,
            "s_tot": total_hrf(density),
            "sigma_ev": density.sigma,
        },
        wall_clock_s=time.perf_counter() - start,
    )


@dataclass(frozen=True)
class SweepEntry:
    index: int
    g_mev: float
    kappa_mev: float
    alpha: float

    @property
    def label(self) -> str:
        return f"g{self.g_mev:g}_kappa{self.kappa_mev:g}_alpha{self.alpha:g}"


@dataclass(frozen=True)
class SweepResult:
    entry: SweepEntry
    record: RunRecord
    splitting_ev: float | None


def sweep_entries(cfg: JobConfig) -> list[SweepEntry]:
    points = cfg.coupling_points()
    return [
        SweepEntry(index=i, g_mev=point.g_mev, kappa_mev=point.kappa_mev, alpha=alpha)
        for i, (point, alpha) in enumerate(itertools.product(points, cfg.bath.alphas))
    ]


def run_sweep_entry(cfg: JobConfig, out_dir: Path, entry: SweepEntry) -> SweepResult:
    """Runs in a worker; failures are returned, never raised."""
    with run_context(job="sweep", entry=entry.label):
        try:
            run = compute_spectrum(
                cfg,
                out_dir / entry.label,
                entry.g_mev,
                entry.kappa_mev,
                entry.alpha,
                label=entry.label,
                root=out_dir,
            )
        except Exception as exc:
            logger.exception("sweep_entry_failed", error=str(exc))
            sentry_sdk.capture_exception(exc)
            record = RunRecord(
                label=entry.label,
                status="failed",
                error=f"{type(exc).__name__}: {exc}",
            )
            return SweepResult(entry=entry, record=record, splitting_ev=None)
    return SweepResult(entry=entry, record=run.record, splitting_ev=run.splitting_ev)


def summarize_sweep(results: list[SweepResult], s_tot: float) -> pd.DataFrame:
    """Splitting per entry next to its ratio to the α = 0 entry of the same
    (g, κ) pair and the Franck-Condon factor exp(−α S_Tot/2)."""
    reference = {
        (r.entry.g_mev, r.entry.kappa_mev): r.splitting_ev
        for r in results
        if r.entry.alpha == 0.0 and r.splitting_ev is not None
    }
    rows = []
    for r in results:
        base = reference.get((r.entry.g_mev, r.entry.kappa_mev))
        splitting = r.splitting_ev
        rows.append(
            {
                "g_mev": r.entry.g_mev,
                "kappa_mev": r.entry.kappa_mev,
                "alpha_hrf": r.entry.alpha,
                "splitting_mev": (
                    ev_to_mev(splitting) if splitting is not None else math.nan
                ),
                "splitting_ratio": (
                    splitting / base if splitting is not None and base else math.nan
                ),
                "franck_condon": franck_condon(r.entry.alpha, s_tot),
                "status": r.record.status,
            }
        )
    return pd.DataFrame(rows)


def _init_worker(log_level: str) -> None:
    """Worker processes start without the parent's logging and Sentry setup."""
    setup_logger(log_level)
    init_sentry()


async def run_sweep_job(
    cfg: JobConfig, out_dir: Path, workers: int
) -> tuple[list[RunRecord], list[str]]:
    entries = sweep_entries(cfg)
    s_tot = total_hrf(build_density(cfg))
    logger.info("sweep_started", entries=len(entries), workers=workers)

    loop = asyncio.get_running_loop()
    semaphore = asyncio.Semaphore(workers)
    log_level = logging.getLevelName(logging.getLogger().getEffectiveLevel())
    executor: Executor | None = (
        ProcessPoolExecutor(
            max_workers=workers,
            initializer=_init_worker,
            initargs=(log_level,),
        )
        if workers > 1
        else None
    )

    async def submit(entry: SweepEntry) -> SweepResult:
        async with semaphore:
            return await loop.run_in_executor(
                executor, run_sweep_entry, cfg, out_dir, entry
            )

    try:
        # gather keeps submission order
        results = await asyncio.gather(*(submit(entry) for entry in entries))
    finally:
        if executor is not None:
            executor.shutdown()

    for result in results:
        if result.record.status == "failed":
            logger.error(
                "sweep_entry_failed",
                entry=result.entry.label,
                error=result.record.error,
            )

    summary = write_csv(summarize_sweep(results, s_tot), out_dir / "summary.csv")
    return [r.record for r in results], [summary.name]


JOBS: dict[JobKind, Callable[[JobConfig, Path], RunRecord]] = {
    JobKind.DYNAMICS: run_dynamics_job,
    JobKind.SPECTRUM: run_spectrum_job,
    JobKind.CORR: run_corr_job,
    JobKind.KERNEL: run_kernel_job,
}


async def run_job(
    cfg: JobConfig,
    out_dir: Path | None = None,
    workers: int | None = None,
    seedless: bool = False,
) -> int:
    """Run the configured job and write its outputs and manifest.

    Returns the process exit status: 0 on success, 1 if the job or any
    sweep entry failed.
    """
    kind = cfg.job.kind
    if kind is None:
        raise ConfigError("No job kind given")
    out_dir = Path(out_dir or cfg.output.directory)
    out_dir.mkdir(parents=True, exist_ok=True)
    workers = workers or settings.DEFAULT_WORKERS

    manifest = RunManifest(
        kind=str(kind),
        config=cfg.model_dump(mode="json"),
        seedless=seedless,
        started_at=datetime.now(UTC),
    )
    start = time.perf_counter()

    with run_context(job=str(kind)):
        logger.info("job_started", out_dir=str(out_dir), workers=workers)
        try:
            if kind is JobKind.SWEEP:
                manifest.runs, manifest.outputs = await run_sweep_job(
                    cfg, out_dir, workers
                )
            else:
                manifest.runs = [await asyncio.to_thread(JOBS[kind], cfg, out_dir)]
        except Exception as exc:
            logger.exception("job_failed", error=str(exc))
            sentry_sdk.capture_exception(exc)
            manifest.runs = [
                RunRecord(
                    label=str(kind),
                    status="failed",
                    error=f"{type(exc).__name__}: {exc}",
                )
            ]

        manifest.outputs += [o for run in manifest.runs for o in run.outputs]
        manifest.wall_clock_s = time.perf_counter() - start
        write_manifest(manifest, out_dir)
        logger.info(
            "job_finished",
            failed=len(manifest.failed),
            wall_clock_s=manifest.wall_clock_s,
        )

    return 1 if manifest.failed else 0
