"""Report writing and the window cache."""

from __future__ import annotations

from nilhecke.reports.cache import WindowCache
from nilhecke.reports.writer import SCHEMA
from nilhecke.reports.writer import report_envelope
from nilhecke.reports.writer import write_json
from nilhecke.reports.writer import write_triplets


__all__ = [
    "SCHEMA",
    "WindowCache",
    "report_envelope",
    "write_json",
    "write_triplets",
]
