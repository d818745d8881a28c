from pydantic_settings import BaseSettings, SettingsConfigDict


class GeneralConfig(BaseSettings):
    SENTRY_DSN: str = ""
    SENTRY_ENVIRONMENT: str = ""


class NumericsConfig(BaseSettings):
    DEFAULT_GRID_POINTS: int = 20001
    """Number of frequency samples used when a spectral density is built
    without an explicit grid."""

    KERNEL_CHUNK_SIZE: int = 64
    BRUTE_FORCE_MAX_STEPS: int = 8
    BRUTE_FORCE_MEMORY_BUDGET_BYTES: int = 4 * 1024**3
    PROGRESS_LOG_INTERVAL: int = 100


class RunnerConfig(BaseSettings):
    DEFAULT_WORKERS: int = 1


class Settings(
    GeneralConfig,
    NumericsConfig,
    RunnerConfig,
    BaseSettings,
):
    model_config = SettingsConfigDict(
        env_file=(".env",),
        extra="allow",
    )


settings = Settings()
