"""Loaders for the embedded critical-value tables.

Tables ship as plain-text CSV data files so they can be diffed, versioned
and regenerated by the simulation harness (``ardlkit critvals``).
"""
from __future__ import annotations

from functools import lru_cache
from importlib import resources

from .errors import MissingBoundsEntry

LEVELS = (1, 5, 10)


def _read_table(filename: str):
    text = resources.files("ardlkit.tables").joinpath(filename).read_text()
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        rows.append(line.split(","))
    return rows


def _parse_t_range(text: str):
    lo, _, hi = text.partition("-")
    return int(lo), (int(hi) if hi else None)


@lru_cache(maxsize=None)
def _unitroot_table():
    table = []
    for test, case, level, t_range, value in _read_table("unitroot_cv.csv"):
        lo, hi = _parse_t_range(t_range)
        table.append((test, case, int(level), lo, hi, float(value)))
    return table


def unitroot_critical_values(test: str, case: str, nobs: int) -> dict:
    """Critical values {1: cv, 5: cv, 10: cv} for a test/case at sample size ``nobs``."""
    out = {}
    for t, c, level, lo, hi, value in _unitroot_table():
        if t == test and c == case and nobs >= lo and (hi is None or nobs <= hi):
            out[level] = value
    if set(out) != set(LEVELS):
        raise KeyError(f"no critical values for {test}/{case} at T={nobs}")
    return out


@lru_cache(maxsize=None)
def _bounds_table():
    table = {}
    for case, k, level, lower, upper in _read_table("bounds_cv.csv"):
        table[(case, int(k), int(level))] = (float(lower), float(upper))
    return table


BOUNDS_CASES = ("I", "II", "III", "IV", "V")


def bounds_critical_values(case: str, k: int) -> dict:
    """Bounds {level: (I0_bound, I1_bound)} for a Pesaran case and regressor count."""
    case = case.upper()
    if case not in BOUNDS_CASES:
        raise ValueError(f"unknown bounds case {case!r}")
    table = _bounds_table()
    out = {}
    for level in LEVELS:
        try:
            out[level] = table[(case, k, level)]
        except KeyError:
            raise MissingBoundsEntry(
                f"no embedded bounds entry for case {case}, k={k}; "
                "generate one with `ardlkit critvals --test bounds`"
            ) from None
    return out
