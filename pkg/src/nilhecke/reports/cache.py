"""On-disk cache of enumerated windows.

One JSON file per curve, determinant and gap. A file whose recorded key
differs from the request is ignored and recomputed.
"""

from __future__ import annotations

import json
import logging
import re
from pathlib import Path
from typing import Any

from nilhecke.bundles.window import Moduli
from nilhecke.bundles.window import Window
from nilhecke.bundles.window import WindowSpec
from nilhecke.bundles.window import bundle_class_from_dict
from nilhecke.curves.base import Curve
from nilhecke.reports.writer import SCHEMA
from nilhecke.reports.writer import write_json


logger = logging.getLogger(__name__)


def curve_key(curve: Curve) -> str:
    return "-".join(f"{k}{v}" if k != "type" else str(v) for k, v in sorted(curve.spec().items()))


class WindowCache:
    """Windows of one curve under ``cache_dir``.

    Args:
        cache_dir: Directory of the cache files; created on first write.
        curve: The curve all cached windows belong to.
    """

    def __init__(self, cache_dir: str | Path, curve: Curve) -> None:
        self.root = Path(cache_dir)
        self.curve = curve

    def _key(self, spec: WindowSpec) -> dict[str, Any]:
        return {"curve": self.curve.spec(), "det": spec.det.label(), "gap": spec.gap}

    def path(self, spec: WindowSpec) -> Path:
        det = re.sub(r"[^A-Za-z0-9]+", "_", spec.det.label()).strip("_")
        return self.root / f"{curve_key(self.curve)}_{det}_B{spec.gap}.json"

    def load(self, spec: WindowSpec) -> Window | None:
        path = self.path(spec)
        if not path.exists():
            return None
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            logger.warning("ignoring unreadable cache file %s: %s", path, e)
            return None
        if data.get("schema") != SCHEMA or data.get("key") != self._key(spec):
            logger.warning("ignoring cache file %s: key mismatch", path)
            return None
        classes = [bundle_class_from_dict(self.curve, c) for c in data["classes"]]
        if any(c.det != spec.det for c in classes):
            logger.warning("ignoring cache file %s: determinant mismatch", path)
            return None
        return Window(spec, classes)

    def store(self, window: Window) -> Path:
        data = {
            "schema": SCHEMA,
            "key": self._key(window.spec),
            "classes": [c.as_dict() for c in window],
        }
        return write_json(self.path(window.spec), data)

    def window(self, moduli: Moduli, spec: WindowSpec) -> tuple[Window, bool]:
        """The window of ``spec``, from the cache when possible.

        Returns:
            The window and whether it was read from the cache.
        """
        hit = self.load(spec)
        if hit is not None:
            logger.info("window %s gap %d read from %s", spec.det.label(), spec.gap, self.path(spec))
            return hit, True
        window = moduli.enumerate_window(spec)
        self.store(window)
        return window, False
