"""Curve files, run configuration and environment settings."""

from __future__ import annotations

import json
from pathlib import Path

import pytest
from pydantic import ValidationError

from nilhecke.config.settings import AppSettings
from nilhecke.config.settings import CurveConfig
from nilhecke.config.settings import RunConfig
from nilhecke.config.settings import load_curve_config
from nilhecke.config.settings import parse_curve_config
from nilhecke.curves import load_curve
from nilhecke.curves.elliptic import EllipticCurve
from nilhecke.curves.projective_line import ProjectiveLine
from nilhecke.errors import ConfigError


class TestCurveConfig:
    def test_labels(self) -> None:
        assert CurveConfig(type="p1", q=3).label() == "p1-q3"
        assert CurveConfig(type="elliptic", q=3, a=4, b=-1).label() == "elliptic-q3-a1-b2"

    def test_p1_takes_no_coefficients(self) -> None:
        with pytest.raises(ConfigError, match="Weierstrass"):
            parse_curve_config({"type": "p1", "q": 3, "a": 1})

    @pytest.mark.parametrize("kind", ["p1", "elliptic"])
    def test_prime_powers_are_rejected(self, kind: str) -> None:
        with pytest.raises(ConfigError, match="prime field"):
            parse_curve_config({"type": kind, "q": 9})

    @pytest.mark.parametrize("data", [{"type": "hyperelliptic", "q": 3}, {"type": "p1", "q": 1}, {}])
    def test_invalid(self, data: dict[str, object]) -> None:
        with pytest.raises(ConfigError):
            parse_curve_config(data)

    def test_json_file(self, tmp_path: Path) -> None:
        path = tmp_path / "curve.json"
        path.write_text(json.dumps({"type": "elliptic", "q": 3, "a": 1, "b": 0}), encoding="utf-8")
        curve = load_curve(load_curve_config(path))
        assert isinstance(curve, EllipticCurve)
        assert curve.count_points() == 4

    def test_toml_file(self, tmp_path: Path) -> None:
        path = tmp_path / "curve.toml"
        path.write_text('type = "p1"\nq = 2\n', encoding="utf-8")
        assert isinstance(load_curve(load_curve_config(path)), ProjectiveLine)

    def test_missing_file(self, tmp_path: Path) -> None:
        with pytest.raises(ConfigError, match="cannot read"):
            load_curve_config(tmp_path / "absent.json")

    def test_malformed_file(self, tmp_path: Path) -> None:
        path = tmp_path / "curve.toml"
        path.write_text("type = ", encoding="utf-8")
        with pytest.raises(ConfigError, match="not valid toml"):
            load_curve_config(path)


class TestRunConfig:
    def test_needs_a_curve(self) -> None:
        with pytest.raises(ValidationError, match="curve"):
            RunConfig()

    def test_defaults(self) -> None:
        config = RunConfig(curve=CurveConfig(type="p1", q=3))
        assert config.gap == 2
        assert config.stages == ["enumerate", "hecke", "cuspidal", "spectral"]
        assert config.model_dump(mode="json")["curve"] == {"type": "p1", "q": 3, "a": 0, "b": 0}

    def test_bounds(self) -> None:
        with pytest.raises(ValidationError):
            RunConfig(curve_path="c.json", precision=4)


class TestAppSettings:
    def test_environment_overrides(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("NILHECKE_WINDOW_GAP", "4")
        monkeypatch.setenv("NILHECKE_CACHE_DIR", "/tmp/nilhecke")
        settings = AppSettings()
        assert settings.window_gap == 4
        assert settings.cache_dir == "/tmp/nilhecke"
