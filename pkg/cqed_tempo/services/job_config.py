"""Job configuration files.

A job is described by a TOML file with the sections system, bath, engine,
job and output. Every physical quantity carries its unit in the key name.
"""

import math
import tomllib
from enum import StrEnum
from pathlib import Path
from typing import Literal

import structlog
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    ValidationInfo,
    field_validator,
    model_validator,
)

from cqed_tempo.packages.spectra import DriveMode
from cqed_tempo.utils.units import fs_to_inverse_ev, mev_to_ev

logger = structlog.stdlib.get_logger(__name__)


class ConfigError(ValueError):
    """Raised when a job configuration cannot be read or validated."""

    def __init__(self, message: str, errors: list[str] | None = None):
        super().__init__(message)
        self.errors = errors or []


class JobKind(StrEnum):
    DYNAMICS = "dynamics"
    SPECTRUM = "spectrum"
    CORR = "corr"
    KERNEL = "kernel"
    SWEEP = "sweep"


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class SystemSection(StrictModel):
    omega_e_ev: float = Field(default=2.0, gt=0)
    g_mev: float = Field(ge=0)
    omega_c_ev: float | None = Field(default=None, gt=0)
    gamma_mev: float = Field(default=4.0, ge=0)
    kappa_mev: float = Field(ge=0)
    rotating_frame: bool = True


class AnalyticDensitySection(StrictModel):
    shape: Literal["gaussian", "single_mode"]
    center_mev: float = Field(gt=0)
    width_mev: float = Field(gt=0)
    s_tot: float = Field(ge=0)


class BathSection(StrictModel):
    mode_file: Path | None = None
    mode_units: Literal["ev", "mev"] = "ev"
    analytic: AnalyticDensitySection | None = None
    sigma_mev: float = Field(default=2.5, gt=0)
    temperature_k: float = Field(default=4.0, gt=0)
    alpha_hrf: float | list[float] = 1.0
    effective_width: bool = False
    grid_points: int | None = Field(default=None, ge=3)

    @field_validator("mode_file")
    @classmethod
    def resolve_mode_file(cls, value: Path | None, info: ValidationInfo):
        if value is None:
            return value
        base_dir = (info.context or {}).get("base_dir")
        if base_dir is not None and not value.is_absolute():
            value = Path(base_dir) / value
        if not value.is_file():
            raise ValueError(f"mode file {value} does not exist")
        return value

    @field_validator("alpha_hrf")
    @classmethod
    def check_alpha(cls, value: float | list[float]):
        values = value if isinstance(value, list) else [value]
        if not values:
            raise ValueError("alpha_hrf sweep list is empty")
        for alpha in values:
            if not 0.0 <= alpha <= 1.0:
                raise ValueError(f"alpha_hrf {alpha} outside [0, 1]")
        return value

    @model_validator(mode="after")
    def check_source(self):
        if (self.mode_file is None) == (self.analytic is None):
            raise ValueError("exactly one of mode_file and analytic is required")
        return self

    @property
    def alphas(self) -> list[float]:
        return self.alpha_hrf if isinstance(self.alpha_hrf, list) else [self.alpha_hrf]


class EngineSection(StrictModel):
    dt_ev_inv: float | None = Field(default=None, gt=0)
    dt_fs: float | None = Field(default=None, gt=0)
    svd_cutoff: float = Field(default=1e-6, ge=0)
    n_steps: int | None = Field(default=None, ge=1)
    max_steps: int = Field(default=8192, ge=1)
    memory_cutoff: int | None = Field(default=None, ge=0)
    max_bond_dimension: int | None = Field(default=None, ge=1)
    pad_to: int = 2**15
    window: Literal["hann"] | None = None
    equilibration_threshold: float = Field(default=1e-4, gt=0)

    @field_validator("pad_to")
    @classmethod
    def check_pad(cls, value: int):
        if value < 1 or value & (value - 1):
            raise ValueError(f"pad_to must be a power of two, got {value}")
        return value

    @model_validator(mode="after")
    def check_timestep(self):
        if self.dt_ev_inv is not None and self.dt_fs is not None:
            raise ValueError("give at most one of dt_ev_inv and dt_fs")
        return self


class CouplingPoint(StrictModel):
    g_mev: float = Field(ge=0)
    kappa_mev: float = Field(ge=0)


class JobSection(StrictModel):
    kind: JobKind | None = None
    drive: DriveMode = DriveMode.CAVITY
    initial_state: Literal["excited", "ground", "cavity"] = "excited"
    couplings: list[CouplingPoint] = Field(default_factory=list)
    corr_t_max_ev_inv: float = Field(default=1000.0, gt=0)
    corr_points: int = Field(default=2001, ge=2)
    kernel_delta_max: int = Field(default=20, ge=0)


class OutputSection(StrictModel):
    directory: Path = Path("out")


class JobConfig(StrictModel):
    system: SystemSection
    bath: BathSection
    engine: EngineSection = EngineSection()
    job: JobSection = JobSection()
    output: OutputSection = OutputSection()

    def with_kind(self, kind: JobKind) -> "JobConfig":
        if self.job.kind is not None and self.job.kind != kind:
            raise ConfigError(
                f"Config declares job kind {self.job.kind!s}, "
                f"command asked for {kind!s}"
            )
        return self.model_copy(
            update={"job": self.job.model_copy(update={"kind": kind})}
        )

    def coupling_points(self) -> list[CouplingPoint]:
        if self.job.couplings:
            return list(self.job.couplings)
        return [CouplingPoint(g_mev=self.system.g_mev, kappa_mev=self.system.kappa_mev)]


def default_timestep(g: float) -> float:
    """Converged time step in eV⁻¹ for a light-matter coupling g in eV."""
    if g <= 0.015:
        return 5.0
    if g <= 0.05:
        return 3.0
    return 2.0


def timestep(cfg: JobConfig, g: float | None = None) -> float:
    if cfg.engine.dt_ev_inv is not None:
        return cfg.engine.dt_ev_inv
    if cfg.engine.dt_fs is not None:
        return fs_to_inverse_ev(cfg.engine.dt_fs)
    return default_timestep(mev_to_ev(cfg.system.g_mev) if g is None else g)


def dynamics_steps(cfg: JobConfig, dt: float) -> int:
    """Explicit n_steps, else enough steps to reach 5/Γ (or 5/κ)."""
    if cfg.engine.n_steps is not None:
        return cfg.engine.n_steps
    rate = mev_to_ev(cfg.system.gamma_mev) or mev_to_ev(cfg.system.kappa_mev)
    if rate <= 0:
        raise ConfigError("engine.n_steps is required when gamma and kappa are zero")
    return math.ceil(5 / (rate * dt))


def _format_errors(exc: ValidationError) -> list[str]:
    return [
        f"{'.'.join(str(part) for part in error['loc']) or '<root>'}: {error['msg']}"
        for error in exc.errors()
    ]


def parse_config(path: Path | str) -> JobConfig:
    path = Path(path)
    try:
        with path.open("rb") as f:
            data = tomllib.load(f)
    except FileNotFoundError as exc:
        raise ConfigError(f"Config file not found: {path}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc

    try:
        cfg = JobConfig.model_validate(data, context={"base_dir": path.parent})
    except ValidationError as exc:
        errors = _format_errors(exc)
        logger.error("config_invalid", path=str(path), errors=errors)
        raise ConfigError(f"{path}: {len(errors)} invalid entries", errors) from exc

    logger.info("config_loaded", path=str(path), kind=cfg.job.kind)
    return cfg
