"""Report files, matrix exports and the window cache."""

from __future__ import annotations

import csv
import json
from pathlib import Path

from nilhecke import __version__
from nilhecke.bundles.pic import parse_det_label
from nilhecke.bundles.window import Moduli
from nilhecke.bundles.window import WindowSpec
from nilhecke.curves.elliptic import EllipticCurve
from nilhecke.curves.projective_line import ProjectiveLine
from nilhecke.reports.cache import WindowCache
from nilhecke.reports.cache import curve_key
from nilhecke.reports.writer import SCHEMA
from nilhecke.reports.writer import report_envelope
from nilhecke.reports.writer import write_json
from nilhecke.reports.writer import write_triplets


class TestWriter:
    def test_json_is_sorted_and_leaves_no_temp_files(self, tmp_path: Path) -> None:
        path = write_json(tmp_path / "nested" / "report.json", {"b": 1, "a": [1, 2]})
        text = path.read_text(encoding="utf-8")
        assert json.loads(text) == {"a": [1, 2], "b": 1}
        assert text.index('"a"') < text.index('"b"')
        assert [p.name for p in path.parent.iterdir()] == ["report.json"]

    def test_envelope(self) -> None:
        report = report_envelope({"gap": 2}, {"enumerate": {}}, {"enumerate.mass": True})
        assert report["schema"] == SCHEMA
        assert report["version"] == __version__
        assert report["ok"] is True
        assert report_envelope({}, {}, {"x": True, "y": False})["ok"] is False

    def test_triplets(self, tmp_path: Path) -> None:
        path = write_triplets(tmp_path / "t.csv", [(0, 1, 2), (1, 0, 1)])
        with path.open(encoding="utf-8", newline="") as f:
            rows = list(csv.reader(f))
        assert rows == [["row", "col", "value"], ["0", "1", "2"], ["1", "0", "1"]]


class TestWindowCache:
    def test_curve_key(self, p1_q3: ProjectiveLine, elliptic: EllipticCurve) -> None:
        assert curve_key(p1_q3) == "q3-p1"
        assert curve_key(elliptic) == "a1-b0-q3-elliptic"

    def test_store_then_load(self, tmp_path: Path, p1_moduli: Moduli) -> None:
        cache = WindowCache(tmp_path, p1_moduli.curve)
        spec = WindowSpec(parse_det_label(p1_moduli.curve, "-1"), 2)
        window, cached = cache.window(p1_moduli, spec)
        assert not cached
        again, cached = cache.window(p1_moduli, spec)
        assert cached
        assert again.classes == window.classes

    def test_key_mismatch_is_ignored(self, tmp_path: Path, p1_moduli: Moduli) -> None:
        cache = WindowCache(tmp_path, p1_moduli.curve)
        spec = WindowSpec(parse_det_label(p1_moduli.curve, "0"), 1)
        path = cache.store(p1_moduli.enumerate_window(spec))
        data = json.loads(path.read_text(encoding="utf-8"))
        data["key"]["gap"] = 5
        path.write_text(json.dumps(data), encoding="utf-8")
        assert cache.load(spec) is None

    def test_unreadable_file_is_ignored(self, tmp_path: Path, p1_q3: ProjectiveLine) -> None:
        cache = WindowCache(tmp_path, p1_q3)
        spec = WindowSpec(parse_det_label(p1_q3, "0"), 0)
        cache.path(spec).write_text("{not json", encoding="utf-8")
        assert cache.load(spec) is None
