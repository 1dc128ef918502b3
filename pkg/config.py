# config.py
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    # Truncation
    tail_tol: float = 1e-12
    normalization_tol: float = 1e-10
    moment_margin_tol: float = 1e-8

    # Cubic solver
    degeneracy_tol: float = 1e-7
    arccos_clip_tol: float = 1e-12

    # Cascade
    projection_floor: float = 1e-8

    # RK4 oracle
    oracle_dt: float = 1e-3
    oracle_steps_per_period: int = 400
    oracle_norm_drift_tol: float = 1e-6

    # Observables
    eigenvalue_clip: float = 1e-10
    wigner_coverage_tol: float = 1e-6

    log_level: str = "INFO"

    model_config = SettingsConfigDict(
        env_prefix="CAVITY_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )


settings = Settings()
