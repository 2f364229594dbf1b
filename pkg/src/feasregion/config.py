"""Configuration settings for feasregion."""

from functools import lru_cache

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Solver and imputation settings loaded from environment variables.

    Every field can be overridden with a ``FEASREGION_`` prefixed variable,
    e.g. ``FEASREGION_SOLVER_NODE_LIMIT=5000``.
    """

    model_config = SettingsConfigDict(env_file=".env", env_prefix="FEASREGION_", extra="ignore")

    # Solver limits
    SOLVER_PIVOT_LIMIT: int = 50_000
    SOLVER_NODE_LIMIT: int = 100_000
    BLAND_AFTER_DEGENERATE: int = 1_000

    # Tolerances
    FEASIBILITY_TOL: float = 1e-7
    INTEGRALITY_TOL: float = 1e-6
    OPTIMALITY_TOL: float = 1e-6
    NORMALIZATION_TOL: float = 1e-9

    # Active-set QP guard
    QP_MAX_VARS: int = 16
    QP_MAX_ROWS: int = 24

    # Imputation
    COMBINED_EPSILON: float = 1e-7
    CANONICALIZE_ROWS: bool = True
    # joint models with more binaries use pooled compactness rows
    JOINT_MAX_BINARIES: int = 200

    LOG_LEVEL: str = "INFO"


@lru_cache
def get_settings() -> Settings:
    """Settings read once from the environment and cached.

    Call ``get_settings.cache_clear()`` after changing ``FEASREGION_*``
    variables at runtime.
    """
    return Settings()


# Global settings instance
settings = Settings()
