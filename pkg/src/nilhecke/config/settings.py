"""Configuration settings for nilhecke."""
from __future__ import annotations

import json
import tomllib
from pathlib import Path
from typing import Literal

from pydantic import BaseModel
from pydantic import Field
from pydantic import ValidationError
from pydantic import model_validator
from pydantic_settings import BaseSettings

from nilhecke.errors import ConfigError
from nilhecke.rings.field import is_prime


class CurveConfig(BaseModel):
    """A curve specification file: the projective line or a Weierstrass model."""

    type: Literal["p1", "elliptic"] = Field(..., description="Curve backend")
    q: int = Field(..., ge=2, description="Order of the base field; global backends need a prime")
    a: int = Field(default=0, description="Coefficient of x in y^2 = x^3 + a x + b")
    b: int = Field(default=0, description="Constant term in y^2 = x^3 + a x + b")

    @model_validator(mode="after")
    def _check_backend(self) -> CurveConfig:
        if self.type == "p1" and (self.a or self.b):
            msg = "the projective line takes no Weierstrass coefficients"
            raise ValueError(msg)
        if not is_prime(self.q):
            msg = f"global backends need a prime field, got q={self.q}; prime powers are local-only"
            raise ValueError(msg)
        return self

    def label(self) -> str:
        if self.type == "p1":
            return f"p1-q{self.q}"
        return f"elliptic-q{self.q}-a{self.a % self.q}-b{self.b % self.q}"


def load_curve_config(path: str | Path) -> CurveConfig:
    """Read a JSON or TOML curve file.

    Raises:
        ConfigError: If the file is unreadable or fails validation.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        msg = f"cannot read curve file {path}: {e}"
        raise ConfigError(msg) from e
    try:
        if path.suffix.lower() == ".toml":
            data = tomllib.loads(text)
        else:
            data = json.loads(text)
    except (json.JSONDecodeError, tomllib.TOMLDecodeError) as e:
        msg = f"curve file {path} is not valid {path.suffix.lstrip('.') or 'json'}: {e}"
        raise ConfigError(msg) from e
    return parse_curve_config(data)


def parse_curve_config(data: object) -> CurveConfig:
    """Validate raw curve data, reporting pydantic failures as ConfigError."""
    try:
        return CurveConfig.model_validate(data)
    except ValidationError as e:
        msg = f"invalid curve specification: {e}"
        raise ConfigError(msg) from e


class RunConfig(BaseModel):
    """One pipeline invocation; echoed into every report."""

    curve: CurveConfig | None = Field(default=None, description="Curve backend")
    curve_path: str | None = Field(default=None, description="Curve file the run was read from")
    det: str = Field(default="0", description="Determinant label, e.g. '0', '1', '0;1,0'")
    precision: int = Field(default=24, ge=8, description="Local truncation N")
    gap: int = Field(default=2, ge=0, le=12, description="Window gap B")
    dmax: int = Field(default=1, ge=0, description="Largest stratum degree")
    divisors: list[str] = Field(
        default_factory=list, description="Simple divisors as 'place:f_c', e.g. '0:t+eps'"
    )
    alpha: int | None = Field(default=None, description="Non-square for the Hitchin fiber")
    stages: list[str] = Field(
        default_factory=lambda: ["enumerate", "hecke", "cuspidal", "spectral"],
        description="Pipeline stages to run, in order",
    )
    output: str | None = Field(default=None, description="Report path")
    seed: int = Field(default=0, description="Seed for randomised checks")

    @model_validator(mode="after")
    def _check_curve(self) -> RunConfig:
        if self.curve is None and not self.curve_path:
            msg = "a curve or a curve file is required"
            raise ValueError(msg)
        return self


class AppSettings(BaseSettings):
    """Application settings with environment variable support."""

    # Storage
    cache_dir: str = Field(
        default="./.nilhecke_cache/", description="Directory of window cache files"
    )

    # Computation
    precision: int = Field(default=24, description="Local truncation precision N")
    window_gap: int = Field(default=2, description="Default window gap B")
    dmax: int = Field(default=1, description="Default largest stratum degree")
    strata_margin: int = Field(
        default=2, description="Extra gap scanned beyond the window when listing strata"
    )
    max_window_classes: int = Field(
        default=20_000, description="Resource guard on the number of window classes"
    )
    seed: int = Field(default=0, description="Default seed for randomised checks")

    # Logging settings
    verbose: bool = Field(default=False, description="Enable verbose logging")
    log_level: str = Field(default="INFO", description="Logging level")

    class Config:
        """Pydantic configuration."""

        env_prefix = "NILHECKE_"
        env_file = ".env"
        env_file_encoding = "utf-8"


# Global settings instance
settings = AppSettings()
