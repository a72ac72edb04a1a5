"""Configuration management modules."""

from nilhecke.config.settings import AppSettings
from nilhecke.config.settings import CurveConfig
from nilhecke.config.settings import RunConfig
from nilhecke.config.settings import load_curve_config
from nilhecke.config.settings import parse_curve_config
from nilhecke.config.settings import settings


__all__ = [
    "AppSettings",
    "CurveConfig",
    "RunConfig",
    "load_curve_config",
    "parse_curve_config",
    "settings",
]
