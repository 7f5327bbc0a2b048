from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from dotenv import load_dotenv

BACKENDS = ("exact", "float")


@dataclass
class SolverConfig:
    """Tolerances, backend choice and seed shared by every operation."""

    backend: str = "float"
    eps: float = 1e-9
    delta: float = 1e-6
    tol_pole: float = 1e-8
    tol_psd: float = 1e-8
    tol_rank: float = 1e-10
    tol_roundtrip: float = 1e-6
    seed: int = 0
    sample_count: int = 20
    sample_radius: float = 20.0
    sample_margin: float = 0.5
    sample_tol: float = 1e-9
    log_level: str = "INFO"
    extra: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.backend not in BACKENDS:
            raise ValueError(f"backend must be one of {BACKENDS} (got {self.backend})")
        for name in (
            "eps",
            "delta",
            "tol_pole",
            "tol_psd",
            "tol_rank",
            "tol_roundtrip",
            "sample_radius",
            "sample_margin",
            "sample_tol",
        ):
            value = getattr(self, name)
            if not value > 0:
                raise ValueError(f"{name} must be positive (got {value})")
        if self.sample_count < 1:
            raise ValueError(f"sample_count must be >= 1 (got {self.sample_count})")

    @property
    def exact(self) -> bool:
        return self.backend == "exact"

    def field(self):
        """Coefficient field matching the configured backend."""
        from specred.algebra.fields import ExactField, FloatField

        if self.exact:
            return ExactField()
        return FloatField(eps=self.eps, delta=self.delta)

    def float_field(self):
        from specred.algebra.fields import FloatField

        return FloatField(eps=self.eps, delta=self.delta)

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)

    def with_backend(self, backend: str) -> SolverConfig:
        return replace(self, backend=backend)

    @property
    def log_level_value(self) -> int:
        return logging.getLevelName(self.log_level.upper()) if self.log_level else logging.INFO

    @classmethod
    def from_env(cls, env_file: str | Path | None = None) -> SolverConfig:
        """Create a SolverConfig populated from environment variables and .env file."""
        if env_file is not None:
            load_dotenv(env_file)
        else:
            load_dotenv()

        return cls(
            backend=os.getenv("SPECRED_BACKEND", "float"),
            eps=float(os.getenv("SPECRED_EPS", "1e-9")),
            delta=float(os.getenv("SPECRED_DELTA", "1e-6")),
            tol_pole=float(os.getenv("SPECRED_TOL_POLE", "1e-8")),
            tol_psd=float(os.getenv("SPECRED_TOL_PSD", "1e-8")),
            tol_rank=float(os.getenv("SPECRED_TOL_RANK", "1e-10")),
            seed=int(os.getenv("SPECRED_SEED", "0")),
            log_level=os.getenv("SPECRED_LOG", "INFO"),
        )


def resolve(config: SolverConfig | None) -> SolverConfig:
    return config if config is not None else SolverConfig()
