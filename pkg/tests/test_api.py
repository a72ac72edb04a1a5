"""Pipeline runs and the command line."""

from __future__ import annotations

import json
from pathlib import Path

import pytest
from typer.testing import CliRunner

from nilhecke import __version__
from nilhecke.config.settings import CurveConfig
from nilhecke.config.settings import RunConfig
from nilhecke.config.settings import settings
from nilhecke.core import api
from nilhecke.core.api import default_divisors
from nilhecke.core.api import parse_stages
from nilhecke.core.api import run_pipeline
from nilhecke.curves.projective_line import ProjectiveLine
from nilhecke.errors import ConfigError
from nilhecke.errors import InteriorEmpty
from nilhecke.errors import StageError
from nilhecke.main import app
from nilhecke.reports.writer import SCHEMA
from nilhecke.types import Stage


runner = CliRunner()


def _p1(q: int, **fields: object) -> RunConfig:
    return RunConfig(curve=CurveConfig(type="p1", q=q), **fields)  # type: ignore[arg-type]


class TestPipeline:
    def test_stage_order(self) -> None:
        assert parse_stages(["hecke", "enumerate"]) == [Stage.ENUMERATE, Stage.HECKE]
        with pytest.raises(ConfigError):
            parse_stages(["enumerate", "bogus"])

    def test_default_divisors(self, p1_q3: ProjectiveLine) -> None:
        assert default_divisors(p1_q3) == ["0:t", "0:t+eps", "1:t"]

    def test_local_commute(self, tmp_path: Path) -> None:
        out = tmp_path / "local.json"
        config = _p1(
            2,
            precision=8,
            divisors=["0:t", "0:t+eps"],
            stages=["local-commute"],
            output=str(out),
        )
        result = run_pipeline(config)
        assert result.ok
        assert result.report_path == str(out)
        report = json.loads(out.read_text(encoding="utf-8"))
        assert report["schema"] == SCHEMA
        assert report["verdicts"] == {
            "local-commute.commutation": True,
            "local-commute.witness": True,
        }

    def test_enumerate(self, tmp_path: Path) -> None:
        config = _p1(3, gap=1, precision=12, stages=["enumerate"])
        result = run_pipeline(config, cache_dir=str(tmp_path))
        assert result.ok
        assert result.verdicts()["enumerate.euler"]
        assert all(e["h0"] - e["h1"] == e["expected"] for e in result.stages[0].data["euler"])
        assert result.report["config"]["gap"] == 1
        assert list(tmp_path.glob("q3-p1_*.json"))

    def test_bad_determinant(self) -> None:
        with pytest.raises(ConfigError):
            run_pipeline(_p1(3, det="1;0", stages=["enumerate"]))

    def test_stage_failure_names_the_stage(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setattr(settings, "max_window_classes", 1)
        with pytest.raises(StageError) as info:
            run_pipeline(_p1(3, gap=2, precision=12, stages=["enumerate"]))
        assert info.value.stage == "enumerate"

    @pytest.mark.slow
    def test_spectral_is_skipped_in_characteristic_two(self) -> None:
        result = run_pipeline(_p1(2, gap=1, precision=12, stages=["cuspidal", "spectral"]))
        spectral = result.stages[-1]
        assert spectral.data == {"skipped": "characteristic 2"}
        assert result.verdicts()["cuspidal.genus0_nullity"]

    @pytest.mark.slow
    @pytest.mark.integration
    def test_hecke_stage(self, tmp_path: Path) -> None:
        config = _p1(2, gap=1, precision=12, stages=["enumerate", "hecke"])
        result = run_pipeline(config, matrix_dir=str(tmp_path))
        assert result.ok, result.verdicts()
        assert list(tmp_path.glob("*.csv"))
        control = result.stages[-1].data["negative_control"]
        assert set(control) >= {"detected", "mismatches"}

    @pytest.mark.slow
    def test_empty_interior_fails_the_hecke_stage(self, monkeypatch: pytest.MonkeyPatch) -> None:
        def empty(*args: object) -> None:
            msg = "no interior rows"
            raise InteriorEmpty(msg)

        monkeypatch.setattr(api, "verify_duality", empty)
        with pytest.raises(StageError) as info:
            run_pipeline(_p1(2, gap=1, precision=12, stages=["hecke"]))
        assert info.value.stage == "hecke"
        assert isinstance(info.value.__cause__, InteriorEmpty)


class TestCli:
    def test_version(self) -> None:
        result = runner.invoke(app, ["--version"])
        assert result.exit_code == 0
        assert __version__ in result.output

    def test_missing_curve_file(self, tmp_path: Path) -> None:
        result = runner.invoke(app, ["enumerate", "--curve", str(tmp_path / "absent.json")])
        assert result.exit_code == 1
        assert "Config error" in result.output

    def test_local_commute(self) -> None:
        result = runner.invoke(
            app, ["local-commute", "--q", "2", "-N", "8", "--fc", "t", "--fc", "t+eps"]
        )
        assert result.exit_code == 0, result.output
        assert "local-commute.witness" in result.output

    def test_enumerate(self, tmp_path: Path) -> None:
        curve = tmp_path / "p1.toml"
        curve.write_text('type = "p1"\nq = 3\n', encoding="utf-8")
        out = tmp_path / "report.json"
        result = runner.invoke(
            app,
            ["enumerate", "-c", str(curve), "-B", "1", "-N", "12", "--no-cache", "-o", str(out)],
        )
        assert result.exit_code == 0, result.output
        assert json.loads(out.read_text(encoding="utf-8"))["ok"] is True
