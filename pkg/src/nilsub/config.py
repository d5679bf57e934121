"""Configuration for nilsub."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

_PACKAGE_DATA = Path(__file__).resolve().parent / "data"


@dataclass
class NilsubConfig:
    """Runtime configuration shared by the library and the command line.

    Attributes:
        data_dir: Directory holding catalog and worked-example files.
        seed: Seed for every randomized search (isomorphism witnesses, sampling).
        default_field: Field used when none is given, a prime or ``Q``.
        random_trials: Random candidates tried before falling back to an exact method.
        max_census_dim: Largest total dimension a census accepts without ``deep``.
        exhaustive_limit: Largest hom space size searched element by element.
        jobs: Worker processes for census sharding.
        tracing_enabled: Whether spans are exported over OTLP.
        endpoint: OTLP HTTP collector endpoint.
        service_name: Service name attached to exported spans.
        debug: Enable debug logging.
    """

    data_dir: Path = field(
        default_factory=lambda: Path(os.environ.get("NILSUB_DATA_DIR", str(_PACKAGE_DATA)))
    )
    seed: int = field(
        default_factory=lambda: int(os.environ.get("NILSUB_SEED", "20240601"))
    )
    default_field: str = field(
        default_factory=lambda: os.environ.get("NILSUB_FIELD", "2")
    )
    random_trials: int = field(
        default_factory=lambda: int(os.environ.get("NILSUB_RANDOM_TRIALS", "16"))
    )
    max_census_dim: int = field(
        default_factory=lambda: int(os.environ.get("NILSUB_MAX_CENSUS_DIM", "12"))
    )
    exhaustive_limit: int = field(
        default_factory=lambda: int(os.environ.get("NILSUB_EXHAUSTIVE_LIMIT", str(2**20)))
    )
    jobs: int = field(
        default_factory=lambda: int(os.environ.get("NILSUB_JOBS", "1"))
    )
    tracing_enabled: bool = field(
        default_factory=lambda: os.environ.get("NILSUB_TRACING_ENABLED", "false").lower() == "true"
    )
    endpoint: str = field(
        default_factory=lambda: os.environ.get("NILSUB_ENDPOINT", "http://localhost:4318")
    )
    service_name: str = field(
        default_factory=lambda: os.environ.get("NILSUB_SERVICE_NAME", "nilsub")
    )
    debug: bool = field(
        default_factory=lambda: os.environ.get("NILSUB_DEBUG", "false").lower() == "true"
    )

    def validate(self) -> None:
        """Validate the configuration."""
        from nilsub.exactla import Field

        if self.random_trials < 1:
            raise ValueError("random_trials must be at least 1")
        if self.max_census_dim < 1:
            raise ValueError("max_census_dim must be at least 1")
        if self.exhaustive_limit < 1:
            raise ValueError("exhaustive_limit must be at least 1")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")
        Field.parse(self.default_field)

    @classmethod
    def from_env(cls) -> "NilsubConfig":
        """Create configuration from environment variables."""
        return cls()
