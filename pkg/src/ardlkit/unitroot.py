"""Unit-root battery: ADF, GLS-detrended ADF, and the single-break minimum-t
test, plus the integration-order classifier that gates the bounds test.

All three statistics are left-tailed: a more negative value is stronger
evidence against a unit root.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .critical_values import unitroot_critical_values
from .errors import DegenerateAfterDetrend, RankDeficient, TooShort
from .linreg import DesignMatrix, information_criteria, ols_fit

DETERMINISTIC_CASES = ("none", "constant", "constant_trend")
BREAK_MODELS = ("intercept", "trend", "both")


def default_max_lags(nobs: int) -> int:
    """Schwert-style rule: floor(12 * (T/100)^(1/4))."""
    return int(np.floor(12.0 * (nobs / 100.0) ** 0.25))


@dataclass(frozen=True)
class LagSelection:
    """fixed(k) | aic | bic."""

    rule: str  # "fixed" | "aic" | "bic"
    k: int = 0

    def __post_init__(self):
        if self.rule not in ("fixed", "aic", "bic"):
            raise ValueError(f"unknown lag selection rule {self.rule!r}")
        if self.rule == "fixed" and self.k < 0:
            raise ValueError("fixed lag order must be >= 0")

    @classmethod
    def parse(cls, text) -> "LagSelection":
        if isinstance(text, LagSelection):
            return text
        text = str(text).strip().lower()
        if text.startswith("fixed(") and text.endswith(")"):
            return cls("fixed", int(text[6:-1]))
        if text.isdigit():
            return cls("fixed", int(text))
        return cls(text)


@dataclass(frozen=True)
class UnitRootResult:
    test: str
    statistic: float
    lags_used: int
    case: str
    critical_values: dict
    reject_unit_root: dict
    break_index: int | None = None
    break_date: object = None
    break_model: str | None = None
    candidate_statistics: tuple = field(default=(), repr=False)

    def rejects_at(self, level: int) -> bool:
        return self.reject_unit_root[level]


def _rejections(statistic: float, critical_values: dict) -> dict:
    return {level: statistic < cv for level, cv in critical_values.items()}


def _adf_regression(y: np.ndarray, case: str, k: int, *, sample_start: int | None = None):
    """Design and response for the augmented regression with k lagged differences.

    Rows start at (1-based) t = start+1 where start = k+1, or at
    ``sample_start`` to put several lag orders on a common sample.
    """
    dy = np.diff(y)
    start = (k + 1) if sample_start is None else sample_start
    nrows = len(dy) - start + 1  # responses dy[start-1:], 0-based

    names: list[str] = []
    cols: list[np.ndarray] = []
    if case in ("constant", "constant_trend"):
        names.append("const")
        cols.append(np.ones(nrows))
    if case == "constant_trend":
        names.append("trend")
        cols.append(np.arange(start + 1, len(y) + 1, dtype=float))
    names.append("y.l1")
    cols.append(y[start - 1: -1])
    for i in range(1, k + 1):
        names.append(f"dy.l{i}")
        cols.append(dy[start - 1 - i: len(dy) - i])

    design = DesignMatrix(tuple(names), np.column_stack(cols))
    return design, dy[start - 1:]


def _t_on(fit, name: str) -> float:
    i = fit.column_names.index(name)
    se = np.sqrt(fit.covariance[i, i])
    return float(fit.coefficients[i] / se)


def _select_adf_lags(y, case, max_lags, selection: LagSelection) -> int:
    if selection.rule == "fixed":
        return selection.k
    criterion = selection.rule
    # Common estimation sample: every candidate starts at t = max_lags + 2
    # so the criteria are comparable.
    common_start = max_lags + 2
    best_k, best_val = 0, np.inf
    for k in range(0, max_lags + 1):
        design, resp = _adf_regression(y, case, k, sample_start=common_start)
        try:
            fit = ols_fit(design, resp)
        except RankDeficient:
            continue
        val = information_criteria(fit)[criterion]
        if val < best_val - 1e-12:
            best_k, best_val = k, val
    return best_k


def adf_test(series, case: str = "constant", max_lags: int | None = None,
             lag_selection="aic") -> UnitRootResult:
    """Augmented Dickey-Fuller test.

    Regresses the first difference on deterministics, the lagged level and
    ``k`` lagged differences; the statistic is the t-ratio on the lagged
    level.  ``k`` is picked by ``lag_selection`` scanning 0..max_lags on a
    common sample.
    """
    y = np.asarray(series, dtype=float)
    if case not in DETERMINISTIC_CASES:
        raise ValueError(f"unknown deterministic case {case!r}")
    selection = LagSelection.parse(lag_selection)
    if max_lags is None:
        max_lags = default_max_lags(len(y))
    if len(y) < max_lags + 15:
        raise TooShort(f"need at least max_lags + 15 = {max_lags + 15} observations")

    k = _select_adf_lags(y, case, max_lags, selection)
    design, resp = _adf_regression(y, case, k)
    fit = ols_fit(design, resp)
    statistic = _t_on(fit, "y.l1")

    cvs = unitroot_critical_values("adf", case, len(y))
    return UnitRootResult(
        test="adf",
        statistic=statistic,
        lags_used=k,
        case=case,
        critical_values=cvs,
        reject_unit_root=_rejections(statistic, cvs),
    )


# Local-to-unity quasi-differencing constants for GLS detrending.
GLS_CBAR = {"constant": -7.0, "constant_trend": -13.5}


def gls_detrend(series, case: str) -> np.ndarray:
    """Remove deterministics estimated on quasi-differenced data."""
    y = np.asarray(series, dtype=float)
    T = len(y)
    abar = 1.0 + GLS_CBAR[case] / T

    if case == "constant":
        d = np.ones((T, 1))
    else:
        d = np.column_stack([np.ones(T), np.arange(1, T + 1, dtype=float)])

    zy = np.concatenate([[y[0]], y[1:] - abar * y[:-1]])
    zd = np.vstack([d[:1], d[1:] - abar * d[:-1]])
    beta, *_ = np.linalg.lstsq(zd, zy, rcond=None)
    return y - d @ beta


def dfgls_test(series, case: str = "constant", max_lags: int | None = None,
               lag_selection="aic") -> UnitRootResult:
    """GLS-detrended Dickey-Fuller test.

    Quasi-differences the series with alpha-bar = 1 + cbar/T (cbar = -7 for
    the demeaned case, -13.5 for the detrended case), removes deterministics
    estimated on the quasi-differenced data, then runs the ADF regression
    with no deterministic terms on the detrended series.
    """
    y = np.asarray(series, dtype=float)
    if case not in ("constant", "constant_trend"):
        raise ValueError("dfgls is defined for case constant or constant_trend")
    selection = LagSelection.parse(lag_selection)
    if max_lags is None:
        max_lags = default_max_lags(len(y))
    if len(y) < max_lags + 15:
        raise TooShort(f"need at least max_lags + 15 = {max_lags + 15} observations")

    ytilde = gls_detrend(y, case)
    scale = float(np.max(np.abs(y))) or 1.0
    if float(np.max(np.abs(ytilde))) <= 1e-10 * scale:
        raise DegenerateAfterDetrend(
            "series is an exact deterministic function; nothing left after detrending"
        )

    k = _select_adf_lags(ytilde, "none", max_lags, selection)
    design, resp = _adf_regression(ytilde, "none", k)
    fit = ols_fit(design, resp)
    statistic = _t_on(fit, "y.l1")

    cvs = unitroot_critical_values("dfgls", case, len(y))
    return UnitRootResult(
        test="dfgls",
        statistic=statistic,
        lags_used=k,
        case=case,
        critical_values=cvs,
        reject_unit_root=_rejections(statistic, cvs),
    )


def _za_design(y: np.ndarray, break_model: str, k: int, bp: int):
    """Break-augmented regression for candidate break after position ``bp``
    (1-based; the level/trend shift applies to t > bp)."""
    dy = np.diff(y)
    start = k + 1
    nrows = len(dy) - start + 1
    t_index = np.arange(start + 1, len(y) + 1, dtype=float)

    names = ["const", "trend"]
    cols = [np.ones(nrows), t_index]
    if break_model in ("intercept", "both"):
        names.append("du")
        cols.append((t_index > bp).astype(float))
    if break_model in ("trend", "both"):
        names.append("dt")
        cols.append(np.where(t_index > bp, t_index - bp, 0.0))
    names.append("y.l1")
    cols.append(y[start - 1: -1])
    for i in range(1, k + 1):
        names.append(f"dy.l{i}")
        cols.append(dy[start - 1 - i: len(dy) - i])

    design = DesignMatrix(tuple(names), np.column_stack(cols))
    return design, dy[start - 1:]


def za_test(series, break_model: str = "intercept", max_lags: int | None = None,
            trim: float = 0.15, lag_selection="aic", dates=None) -> UnitRootResult:
    """Minimum-t unit-root test with one endogenously chosen structural break.

    Scans candidate break positions in the trimmed interval
    [trim*T, (1-trim)*T], fits the break-augmented ADF-type regression at
    each, and reports the minimum t-ratio on the lagged level together with
    the argmin break position.  The augmentation lag is chosen once, on the
    plain trended ADF regression, and held fixed over the scan.
    """
    y = np.asarray(series, dtype=float)
    T = len(y)
    if break_model not in BREAK_MODELS:
        raise ValueError(f"unknown break model {break_model!r}")
    if not 0.0 < trim < 0.5:
        raise ValueError("trim must be in (0, 0.5)")
    if T < 50:
        raise TooShort("need at least 50 observations for the break scan")
    selection = LagSelection.parse(lag_selection)
    if max_lags is None:
        max_lags = default_max_lags(T)

    k = _select_adf_lags(y, "constant_trend", max_lags, selection)

    lo = max(int(np.floor(trim * T)), 2)
    hi = min(int(np.ceil((1.0 - trim) * T)), T - 2)
    best_stat, best_bp = np.inf, None
    candidates = []
    for bp in range(lo, hi + 1):
        design, resp = _za_design(y, break_model, k, bp)
        try:
            fit = ols_fit(design, resp)
        except RankDeficient:
            candidates.append((bp, np.nan))  # skipped near-edge candidate
            continue
        stat = _t_on(fit, "y.l1")
        candidates.append((bp, stat))
        if stat < best_stat:
            best_stat, best_bp = stat, bp
    if best_bp is None:
        raise RankDeficient(["du", "dt"])

    cvs = unitroot_critical_values("za", break_model, T)
    break_date = None
    if dates is not None:
        break_date = dates[best_bp - 1]  # last pre-break observation date
    return UnitRootResult(
        test="za",
        statistic=best_stat,
        lags_used=k,
        case="constant_trend",
        critical_values=cvs,
        reject_unit_root=_rejections(best_stat, cvs),
        break_index=best_bp,
        break_date=break_date,
        break_model=break_model,
        candidate_statistics=tuple(candidates),
    )


@dataclass(frozen=True)
class IntegrationConfig:
    test: str = "adf"  # adf | dfgls
    case: str = "constant"
    max_lags: int | None = None
    lag_selection: object = "aic"
    level: int = 5


@dataclass(frozen=True)
class IntegrationOrder:
    order: str  # I0 | I1 | I2_or_higher
    level_result: UnitRootResult
    difference_result: UnitRootResult | None

    @property
    def blocks_bounds_test(self) -> bool:
        return self.order == "I2_or_higher"


def classify_integration(series, config: IntegrationConfig = IntegrationConfig()) -> IntegrationOrder:
    """Classify a series as I(0), I(1) or I(2)+ from tests on level and difference."""
    runner = {"adf": adf_test, "dfgls": dfgls_test}[config.test]
    y = np.asarray(series, dtype=float)

    level_result = runner(y, case=config.case, max_lags=config.max_lags,
                          lag_selection=config.lag_selection)
    if level_result.rejects_at(config.level):
        return IntegrationOrder("I0", level_result, None)

    diff_result = runner(np.diff(y), case=config.case, max_lags=config.max_lags,
                         lag_selection=config.lag_selection)
    if diff_result.rejects_at(config.level):
        return IntegrationOrder("I1", level_result, diff_result)
    return IntegrationOrder("I2_or_higher", level_result, diff_result)
