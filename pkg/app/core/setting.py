from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Application settings class.
    Reads CLAIRAUT_* variables from the environment or a .env file.
    Every numerical default used by the services lives here.
    """

    PROJECT_NAME: str = "clairaut-lab"
    LOG_LEVEL: str = "INFO"

    # Geodesic integration
    RTOL: float = 1e-10
    ATOL: float = 1e-12
    T_MAX: float = 10.0
    MAX_STEP: float = float("inf")
    BLOWUP_NORM_THRESHOLD: float = 1e8
    BLOWUP_STEP_FLOOR: float = 1e-12
    BLOWUP_BRACKET_TOL: float = 1e-3

    # Random searches
    SEED: int = 0
    NEWTON_RESTARTS: int = 64
    NEWTON_TOL: float = 1e-10
    NEWTON_MAX_ITER: int = 100
    IDEMPOTENT_DEDUP: float = 1e-6
    PD_FORM_RESTARTS: int = 32

    # Linear algebra cutoffs
    RANK_RTOL: float = 1e-9
    ALGEBRA_TOL: float = 1e-12
    HOMOMORPHISM_TOL: float = 1e-10

    # Verdict probes
    PROBES: int = 8
    PROBE_T_MAX: float = 10.0

    # Growth scans (log-spaced grid)
    GROWTH_T_MIN: float = 0.1
    GROWTH_T_MAX: float = 100.0
    GROWTH_POINTS: int = 60

    # Curve length quadrature
    QUAD_RTOL: float = 1e-8
    QUAD_MAX_DOUBLINGS: int = 14

    # Output / concurrency
    MAX_WORKERS: int = 4
    FLOAT_DIGITS: int = 17

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="CLAIRAUT_",
        case_sensitive=True,
        extra="ignore"
    )
# It creates the 'config' object that every service uses for defaults.
config = Settings()
