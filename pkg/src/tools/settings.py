"""
This module defines the application settings using the Pydantic library.
"""

from dataclasses import asdict, dataclass
from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Application settings class.

    This class inherits from the Pydantic BaseSettings class and defines the configuration settings for the
    application. Default values can be overridden by setting environment variables.

    Attributes:
        PTW_CACHE: Directory of the oracle result cache.
        PTW_MAX_ENUMERATION: Largest number of group elements an oracle may enumerate.
    """

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    PTW_CACHE: str = ".ptw_cache"
    PTW_MAX_ENUMERATION: int = 10**8


settings = Settings()


default_config = {
    # working context
    "context": {
        "prime": 3,
        # maximal coset level k_max
        "precision": 6,
        "regime": "symbolic",
    },
    # comparison of numeric values
    "numeric": {
        "tolerance": 1e-9,
    },
    # brute-force ground truth
    "oracle": {
        "enabled": True,
        "cache": settings.PTW_CACHE,
    },
    # CSV and JSON reports
    "report": {
        "out": None,
    },
}


@dataclass(frozen=True)
class RunConfig:
    """
    The resolved options of one command line run.

    Attributes:
        prime: The prime p.
        precision: The maximal coset level k_max.
        regime: ``symbolic`` or ``numeric``.
        tolerance: Comparison tolerance; numeric comparisons only.
        out: Directory of the CSV and JSON reports, or None for console output only.
        suite: The subcommand being run.
    """

    prime: int = 3
    precision: int = 6
    regime: str = "symbolic"
    tolerance: float = 1e-9
    out: Optional[str] = None
    suite: str = ""

    def __post_init__(self) -> None:
        if self.tolerance <= 0:
            raise ValueError("the tolerance must be positive")
        if self.regime not in ("symbolic", "numeric"):
            raise ValueError(f"unknown regime: {self.regime}")

    @classmethod
    def from_config(cls, config: dict, suite: str = "", **overrides) -> "RunConfig":
        """Build from a merged configuration dict; overrides that are None are ignored."""
        context = config.get("context") or {}
        values = {
            "prime": context.get("prime", 3),
            "precision": context.get("precision", 6),
            "regime": context.get("regime", "symbolic"),
            "tolerance": (config.get("numeric") or {}).get("tolerance", 1e-9),
            "out": (config.get("report") or {}).get("out"),
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(suite=suite, **values)

    def to_dict(self) -> dict:
        return asdict(self)
