"""Environment configuration for conelab."""

import os
from dataclasses import dataclass
from dotenv import load_dotenv

load_dotenv()


def _float(name: str, default: float) -> float:
    try:
        return float(os.getenv(name, default))
    except ValueError:
        return float("nan")


def _int(name: str, default: int) -> int:
    try:
        return int(os.getenv(name, default))
    except ValueError:
        return -1


@dataclass(frozen=True)
class RuntimeConfig:
    """Seed and parallelism."""
    seed: int = 42
    threads: int = 4

    @property
    def is_valid(self) -> bool:
        return self.seed >= 0 and self.threads >= 1


@dataclass(frozen=True)
class LoggingConfig:
    """Diagnostic stream configuration."""
    level: str = "INFO"
    log_file: str | None = None

    @property
    def is_valid(self) -> bool:
        return self.level.upper() in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}


@dataclass(frozen=True)
class SymbolicConfig:
    """Exact-arithmetic limits."""
    factor_degree_cap: int = 24
    puiseux_depth_cap: int = 64

    @property
    def is_valid(self) -> bool:
        return self.factor_degree_cap > 0 and self.puiseux_depth_cap > 0


@dataclass(frozen=True)
class NumericConfig:
    """Tolerances and sampling sizes for the numeric kernels."""
    angular_tol: float = 1e-2
    residual_tol: float = 1e-9
    resolution: float = 1e-3
    sphere_samples: int = 2000
    line_shots: int = 64

    @property
    def is_valid(self) -> bool:
        return (
            0 < self.angular_tol < 1
            and 0 < self.residual_tol < 1
            and self.resolution > 0
            and self.sphere_samples > 0
            and self.line_shots > 0
        )


@dataclass(frozen=True)
class VerdictConfig:
    """Decision thresholds of the classification pipeline."""
    support_threshold: float = 1e-3
    multiplicity_margin: float = 0.1

    @property
    def is_valid(self) -> bool:
        return self.support_threshold > 0 and 0 <= self.multiplicity_margin < 0.5


@dataclass(frozen=True)
class Config:
    """Application configuration."""
    runtime: RuntimeConfig
    logging: LoggingConfig
    symbolic: SymbolicConfig
    numeric: NumericConfig
    verdict: VerdictConfig

    def validate(self) -> list[str]:
        """Validate configuration and return list of errors."""
        errors = []
        if not self.runtime.is_valid:
            errors.append("Runtime configuration invalid (CONELAB_SEED >= 0, CONELAB_THREADS >= 1)")
        if not self.logging.is_valid:
            errors.append("Logging configuration invalid (CONELAB_LOG_LEVEL)")
        if not self.symbolic.is_valid:
            errors.append("Symbolic configuration invalid (CONELAB_FACTOR_DEGREE_CAP, CONELAB_PUISEUX_DEPTH_CAP)")
        if not self.numeric.is_valid:
            errors.append(
                "Numeric configuration invalid (CONELAB_ANGULAR_TOL, CONELAB_RESIDUAL_TOL, "
                "CONELAB_RESOLUTION, CONELAB_SPHERE_SAMPLES, CONELAB_LINE_SHOTS)"
            )
        if not self.verdict.is_valid:
            errors.append("Verdict configuration invalid (CONELAB_SUPPORT_THRESHOLD, CONELAB_MULTIPLICITY_MARGIN)")
        return errors


def load_config() -> Config:
    """Load configuration from environment variables."""
    return Config(
        runtime=RuntimeConfig(
            seed=_int("CONELAB_SEED", 42),
            threads=_int("CONELAB_THREADS", 4),
        ),
        logging=LoggingConfig(
            level=os.getenv("CONELAB_LOG_LEVEL", "INFO"),
            log_file=os.getenv("CONELAB_LOG_FILE"),
        ),
        symbolic=SymbolicConfig(
            factor_degree_cap=_int("CONELAB_FACTOR_DEGREE_CAP", 24),
            puiseux_depth_cap=_int("CONELAB_PUISEUX_DEPTH_CAP", 64),
        ),
        numeric=NumericConfig(
            angular_tol=_float("CONELAB_ANGULAR_TOL", 1e-2),
            residual_tol=_float("CONELAB_RESIDUAL_TOL", 1e-9),
            resolution=_float("CONELAB_RESOLUTION", 1e-3),
            sphere_samples=_int("CONELAB_SPHERE_SAMPLES", 2000),
            line_shots=_int("CONELAB_LINE_SHOTS", 64),
        ),
        verdict=VerdictConfig(
            support_threshold=_float("CONELAB_SUPPORT_THRESHOLD", 1e-3),
            multiplicity_margin=_float("CONELAB_MULTIPLICITY_MARGIN", 0.1),
        ),
    )


config = load_config()
