"""Projection hyperparameters shared by fit, transform, and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, asdict

from .neighbors import METRICS
from .rng import MASK64


@dataclass(frozen=True)
class UmapParams:
    """Defaults reproduce the published map configuration
    (n_neighbors=15, min_dist=0.5, cosine metric)."""

    n_neighbors: int = 15
    min_dist: float = 0.5
    spread: float = 1.0
    metric: str = "cosine"
    n_epochs: int = 200
    negative_sample_rate: int = 5
    initial_learning_rate: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.n_neighbors < 2:
            raise ValueError("n_neighbors must be >= 2")
        if self.min_dist < 0:
            raise ValueError("min_dist must be non-negative")
        if self.spread <= 0:
            raise ValueError("spread must be positive")
        if not self.min_dist < 3.0 * self.spread:
            raise ValueError("min_dist must be < 3 * spread")
        if self.metric not in METRICS:
            raise ValueError(f"metric must be one of {METRICS}")
        if self.n_epochs < 1:
            raise ValueError("n_epochs must be positive")
        if self.negative_sample_rate < 1:
            raise ValueError("negative_sample_rate must be positive")
        if self.initial_learning_rate <= 0:
            raise ValueError("initial_learning_rate must be positive")
        if not 0 <= self.seed <= MASK64:
            raise ValueError("seed must fit in 64 unsigned bits")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "UmapParams":
        return cls(**data)
