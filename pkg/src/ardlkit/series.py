"""Date-indexed series, panel alignment and the level/log/difference/lag transforms.

Alignment puts every series on a common daily calendar-date index.  Weekly
series (coin supply is published weekly) are forward-filled; gaps in daily
macro series (weekends, holidays) are handled per the fill policy.
"""
from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from .errors import (
    EmptyOverlap,
    InsufficientLength,
    LeadingGap,
    NonPositiveLog,
    ParseError,
)

ROLES = ("dependent", "dynamic_regressor", "exogenous_regressor", "dummy")
FILL_POLICIES = ("forward_fill", "drop_row")


@dataclass(frozen=True)
class TimeSeries:
    """A named, date-indexed sequence of real observations."""

    name: str
    dates: tuple[dt.date, ...]
    values: np.ndarray
    frequency: str = "daily"  # daily | weekly

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        dates = tuple(self.dates)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "dates", dates)
        if self.frequency not in ("daily", "weekly"):
            raise ValueError(f"unknown frequency {self.frequency!r}")
        if len(dates) != len(values):
            raise ValueError("dates and values length mismatch")
        if any(b <= a for a, b in zip(dates, dates[1:])):
            raise ValueError(f"dates of {self.name!r} not strictly increasing")
        if not np.isfinite(values).all():
            raise ValueError(f"non-finite values in {self.name!r}")

    def __len__(self) -> int:
        return len(self.values)

    def to_pandas(self) -> pd.Series:
        idx = pd.DatetimeIndex([pd.Timestamp(d) for d in self.dates])
        return pd.Series(self.values, index=idx, name=self.name)


def read_series_csv(path, name: str | None = None, frequency: str = "daily") -> TimeSeries:
    """Load one series from a ``date,value`` CSV with ISO-8601 dates.

    The series name defaults to the file stem.  Rows with an empty value
    field are dropped (ingestion cleaning); non-finite parsed values raise.
    """
    path = Path(path)
    if name is None:
        name = path.stem
    try:
        frame = pd.read_csv(path)
    except Exception as exc:
        raise ParseError(f"{path}: {exc}") from exc
    cols = [c.strip().lower() for c in frame.columns]
    if cols[:2] != ["date", "value"]:
        raise ParseError(f"{path}: expected header 'date,value', got {list(frame.columns)}")
    frame = frame.dropna(subset=[frame.columns[1]])
    try:
        dates = [dt.date.fromisoformat(str(d).strip()) for d in frame.iloc[:, 0]]
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    values = frame.iloc[:, 1].to_numpy(dtype=float)
    return TimeSeries(name=name, dates=tuple(dates), values=values, frequency=frequency)


@dataclass(frozen=True)
class Panel:
    """Aligned observation matrix with per-column variable roles."""

    dates: tuple[dt.date, ...]
    columns: tuple[tuple[str, np.ndarray], ...]
    roles: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.dates)
        cols = tuple((name, np.asarray(v, dtype=float)) for name, v in self.columns)
        object.__setattr__(self, "columns", cols)
        names = [name for name, _ in cols]
        if len(set(names)) != len(names):
            raise ValueError("duplicate column names in panel")
        for name, v in cols:
            if v.shape != (n,):
                raise ValueError(f"column {name!r} does not share the panel index")
        for name, role in self.roles.items():
            if role not in ROLES:
                raise ValueError(f"unknown role {role!r} for {name!r}")
            if name not in names:
                raise ValueError(f"role assigned to unknown column {name!r}")
        dependents = [n_ for n_, r in self.roles.items() if r == "dependent"]
        if self.roles and len(dependents) != 1:
            raise ValueError(f"exactly one dependent required, got {dependents}")
        for name, role in self.roles.items():
            if role == "dummy":
                v = dict(cols)[name]
                if not np.isin(v, (0.0, 1.0)).all():
                    raise ValueError(f"dummy column {name!r} must be 0/1")

    @property
    def nobs(self) -> int:
        return len(self.dates)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.columns)

    def column(self, name: str) -> np.ndarray:
        for n_, v in self.columns:
            if n_ == name:
                return v
        raise KeyError(name)

    def with_roles(self, roles: dict) -> "Panel":
        return Panel(self.dates, self.columns, dict(roles))


def align_panel(series, date_range, fill_policy: str = "forward_fill") -> Panel:
    """Align series onto a common daily calendar index.

    The panel covers the intersection of the requested range and every
    series' coverage (after filling).  Weekly series are forward-filled to
    daily.  Interior gaps in daily series are forward-filled or the whole
    row dropped, per ``fill_policy``.
    """
    series = list(series)
    if not series:
        raise ValueError("no series to align")
    if fill_policy not in FILL_POLICIES:
        raise ValueError(f"unknown fill policy {fill_policy!r}")
    start, end = date_range
    if end < start:
        raise ValueError("empty date range")

    frames = {ts.name: ts.to_pandas() for ts in series}

    # Common coverage: a series contributes from its first observation
    # (forward fill cannot invent values before the first one).
    cov_start = max(max(ts.dates[0] for ts in series), start)
    cov_end = min(min(ts.dates[-1] for ts in series), end)
    if cov_end < cov_start:
        raise EmptyOverlap(
            f"no common coverage inside [{start}, {end}]"
        )
    for ts in series:
        if ts.dates[0] > end:
            raise LeadingGap(f"{ts.name!r} starts after the requested range")

    index = pd.date_range(pd.Timestamp(cov_start), pd.Timestamp(cov_end), freq="D")
    aligned = pd.DataFrame(index=index)
    for name, s in frames.items():
        aligned[name] = s.reindex(index.union(s.index)).ffill().reindex(index)

    if fill_policy == "drop_row":
        # Only forward-fill what weekly publication implies; then drop
        # calendar days where any daily series is still missing.
        aligned = pd.DataFrame(index=index)
        for ts in series:
            s = frames[ts.name]
            if ts.frequency == "weekly":
                aligned[ts.name] = s.reindex(index.union(s.index)).ffill().reindex(index)
            else:
                aligned[ts.name] = s.reindex(index)
        aligned = aligned.dropna()
        if aligned.empty:
            raise EmptyOverlap("no complete rows after dropping gaps")

    if aligned.isna().any().any():
        missing = [c for c in aligned.columns if aligned[c].isna().any()]
        raise LeadingGap(f"unfillable leading gap in {missing}")

    dates = tuple(d.date() for d in aligned.index)
    columns = tuple((ts.name, aligned[ts.name].to_numpy()) for ts in series)
    return Panel(dates=dates, columns=columns)


@dataclass(frozen=True)
class Transform:
    """One of level | log | first_difference | lag(k)."""

    kind: str
    order: int = 0

    KINDS = ("level", "log", "first_difference", "lag")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown transform {self.kind!r}")
        if self.kind == "lag" and self.order < 1:
            raise ValueError("lag order must be >= 1")

    @classmethod
    def parse(cls, text: str) -> "Transform":
        text = text.strip()
        if text.startswith("lag(") and text.endswith(")"):
            return cls("lag", int(text[4:-1]))
        return cls(text)


def apply_transform(values, transform: Transform) -> np.ndarray:
    """Apply a transform to a value column.

    Difference and lag shorten the column by their order; the result stays
    aligned to the *last* observations (index t).
    """
    v = np.asarray(values, dtype=float)
    if transform.kind == "level":
        return v.copy()
    if transform.kind == "log":
        if (v <= 0).any():
            raise NonPositiveLog("log transform requires strictly positive values")
        return np.log(v)
    if transform.kind == "first_difference":
        if len(v) < 2:
            raise InsufficientLength("need length > 1 to difference")
        return np.diff(v)
    # lag(k): v_{t-k} aligned to positions k+1..n
    k = transform.order
    if len(v) <= k:
        raise InsufficientLength(f"need length > {k} for lag({k})")
    return v[:-k].copy()


def build_lag_design(panel: Panel, p: int, q: int, *, case: str = "constant_trend",
                     dummies=(), sample_start: int | None = None):
    """Lagged design for an autoregressive distributed-lag regression.

    Columns, in stable order: intercept, trend (per ``case``), dependent
    lags 1..p, each dynamic regressor at lags 0..q, exogenous regressors,
    dummy columns.  Rows cover t = max(p, q)+1 .. T (1-based), so the row
    count is T - max(p, q).  ``sample_start`` forces a later first row so
    several lag orders can share one estimation sample.

    Returns ``(DesignMatrix, response)``.
    """
    from .linreg import DesignMatrix
    from .errors import TooFewObservations

    if p < 1 or q < 0:
        raise ValueError("need p >= 1 and q >= 0")
    roles = panel.roles
    dep = next(n for n, r in roles.items() if r == "dependent")
    xs = [n for n, _ in panel.columns if roles.get(n) == "dynamic_regressor"]
    ws = [n for n, _ in panel.columns if roles.get(n) == "exogenous_regressor"]
    dummy_names = list(dummies) or [n for n, _ in panel.columns if roles.get(n) == "dummy"]

    T = panel.nobs
    m = max(p, q)
    if sample_start is not None:
        m = max(m, sample_start)
    nrows = T - m

    names: list[str] = []
    cols: list[np.ndarray] = []

    if case not in ("none", "constant", "constant_trend"):
        raise ValueError(f"unknown deterministic case {case!r}")
    if case in ("constant", "constant_trend"):
        names.append("const")
        cols.append(np.ones(nrows))
    if case == "constant_trend":
        # trend indexed by the 1-based position of t in the full panel
        names.append("trend")
        cols.append(np.arange(m + 1, T + 1, dtype=float))

    y = panel.column(dep)
    for i in range(1, p + 1):
        names.append(f"{dep}.l{i}")
        cols.append(y[m - i: T - i])
    for x in xs:
        v = panel.column(x)
        for i in range(0, q + 1):
            names.append(f"{x}.l{i}")
            cols.append(v[m - i: T - i])
    for w in ws:
        names.append(w)
        cols.append(panel.column(w)[m:])
    for d in dummy_names:
        names.append(d)
        cols.append(panel.column(d)[m:])

    if nrows < len(names) + 10:
        raise TooFewObservations(
            f"{nrows} usable rows for {len(names)} columns (need >= cols + 10)"
        )
    design = DesignMatrix(tuple(names), np.column_stack(cols))
    return design, y[m:].copy()
