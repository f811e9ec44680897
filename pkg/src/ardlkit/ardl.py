"""ARDL estimation, the bounds cointegration test, and the error-correction
reparameterization.

The levels model regresses y_t on its own lags 1..p, each dynamic regressor
at lags 0..q (one shared q), exogenous regressors contemporaneously,
deterministics and step dummies.  ``to_ecm`` rewrites a levels fit exactly
into speed-of-adjustment / long-run / short-run form; the two
parameterizations share the same residual vector by construction.
"""
from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import stats

from .critical_values import bounds_critical_values
from .errors import (
    DummyOutsideSample,
    NearSingularAdjustment,
    TooFewObservations,
)
from .linreg import (
    CoefficientTable,
    DesignMatrix,
    RegressionFit,
    information_criteria,
    ols_fit,
    significance_stars,
    t_statistics,
    wald_f_test,
)
from .series import Panel, build_lag_design

# default Pesaran case per deterministic specification
DEFAULT_BOUNDS_CASE = {"none": "I", "constant": "III", "constant_trend": "V"}


@dataclass(frozen=True)
class ArdlSpec:
    """Variable roles and lag orders for one levels model."""

    dependent: str
    dynamic_regressors: tuple[str, ...] = ()
    exogenous: tuple[str, ...] = ()
    case: str = "constant"
    p: int = 1
    q: int = 1
    dummies: tuple[tuple[str, dt.date], ...] = ()
    bounds_case: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "dynamic_regressors", tuple(self.dynamic_regressors))
        object.__setattr__(self, "exogenous", tuple(self.exogenous))
        object.__setattr__(self, "dummies", tuple(tuple(d) for d in self.dummies))
        if self.p < 1 or self.q < 0:
            raise ValueError("need p >= 1 and q >= 0")
        regs = self.dynamic_regressors + self.exogenous
        if self.dependent in regs:
            raise ValueError("dependent cannot also be a regressor")
        if len(set(regs)) != len(regs):
            raise ValueError("duplicate regressor names")

    @property
    def k(self) -> int:
        return len(self.dynamic_regressors)

    def resolved_bounds_case(self) -> str:
        return self.bounds_case or DEFAULT_BOUNDS_CASE[self.case]


def _dummy_column(panel: Panel, break_date: dt.date) -> np.ndarray:
    """Step indicator: 1 strictly after the break date."""
    dates = panel.dates
    if break_date < dates[0] or break_date >= dates[-1]:
        raise DummyOutsideSample(f"break date {break_date} outside sample")
    col = np.array([1.0 if d > break_date else 0.0 for d in dates])
    n_post = int(col.sum())
    if n_post < 10 or len(col) - n_post < 10:
        raise DummyOutsideSample(
            f"break date {break_date} leaves fewer than 10 observations on one side"
        )
    return col


def _spec_panel(panel: Panel, spec: ArdlSpec) -> Panel:
    """Panel restricted to the spec's variables, with roles and dummy columns."""
    roles = {spec.dependent: "dependent"}
    for x in spec.dynamic_regressors:
        roles[x] = "dynamic_regressor"
    for w in spec.exogenous:
        roles[w] = "exogenous_regressor"

    columns = [(n, panel.column(n)) for n in roles]
    for name, break_date in spec.dummies:
        columns.append((name, _dummy_column(panel, break_date)))
        roles[name] = "dummy"
    return Panel(panel.dates, tuple(columns), roles)


@dataclass(frozen=True)
class ArdlFit:
    """A levels fit together with its symbolic coefficient map."""

    spec: ArdlSpec
    fit: RegressionFit

    @property
    def dep_lag_names(self) -> tuple[str, ...]:
        return tuple(f"{self.spec.dependent}.l{i}" for i in range(1, self.spec.p + 1))

    def x_lag_names(self, x: str) -> tuple[str, ...]:
        return tuple(f"{x}.l{i}" for i in range(0, self.spec.q + 1))

    @property
    def dummy_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.spec.dummies)

    def phi(self) -> np.ndarray:
        """Coefficients on the dependent's own lags."""
        return np.array([self.fit.coef(n) for n in self.dep_lag_names])

    def beta(self, x: str) -> np.ndarray:
        """Coefficients on lags 0..q of a dynamic regressor."""
        return np.array([self.fit.coef(n) for n in self.x_lag_names(x)])

    @property
    def alpha(self) -> float:
        """Speed of adjustment implied by the levels fit: 1 - sum(phi)."""
        return 1.0 - float(self.phi().sum())

    def long_run(self, x: str) -> float:
        return float(self.beta(x).sum()) / self.alpha

    def coefficient_table(self) -> CoefficientTable:
        return t_statistics(self.fit)


def fit_ardl(panel: Panel, spec: ArdlSpec, *, sample_start: int | None = None) -> ArdlFit:
    """Estimate the levels model by OLS."""
    spanel = _spec_panel(panel, spec)
    design, response = build_lag_design(
        spanel, spec.p, spec.q, case=spec.case,
        dummies=[n for n, _ in spec.dummies], sample_start=sample_start,
    )
    return ArdlFit(spec=spec, fit=ols_fit(design, response))


def select_lags(panel: Panel, spec_template: ArdlSpec, p_max: int, q_max: int,
                criterion: str = "aic", q_min: int = 0) -> tuple[int, int]:
    """Exhaustive (p, q) scan on the common sample implied by (p_max, q_max).

    Ties break toward smaller p, then smaller q.  ``q_min`` restricts the
    scan (the error-correction form needs q >= 1).
    """
    if criterion not in ("aic", "bic"):
        raise ValueError(f"unknown criterion {criterion!r}")
    if p_max < 1 or q_max < q_min or q_min < 0:
        raise ValueError("need p_max >= 1 and 0 <= q_min <= q_max")

    common = max(p_max, q_max)
    best = None
    last_error: Exception | None = None
    for p in range(1, p_max + 1):
        for q in range(q_min, q_max + 1):
            candidate = replace(spec_template, p=p, q=q)
            try:
                fit = fit_ardl(panel, candidate, sample_start=common)
            except Exception as exc:  # propagate only if every candidate fails
                last_error = exc
                continue
            val = information_criteria(fit.fit)[criterion]
            if best is None or val < best[0] - 1e-9:
                best = (val, p, q)
    if best is None:
        raise last_error if last_error is not None else TooFewObservations("no candidates")
    return best[1], best[2]


@dataclass(frozen=True)
class BoundsResult:
    f_statistic: float
    k: int
    case_id: str
    bounds: dict  # level -> (lower, upper)
    conclusion: dict  # level -> cointegrated | not_cointegrated | inconclusive
    df1: int = 0
    df2: int = 0

    def conclusion_at(self, level: int) -> str:
        return self.conclusion[level]


def _bounds_conclusions(f: float, bounds: dict) -> dict:
    out = {}
    for level, (lower, upper) in bounds.items():
        if f > upper:
            out[level] = "cointegrated"
        elif f < lower:
            out[level] = "not_cointegrated"
        else:
            out[level] = "inconclusive"
    return out


def _conditional_ecm_design(panel: Panel, spec: ArdlSpec):
    """Unrestricted conditional ECM: differences plus lagged levels of y and x."""
    spanel = _spec_panel(panel, spec)
    dep = spec.dependent
    y = spanel.column(dep)
    T = len(y)
    m = max(spec.p, spec.q, 1)
    nrows = T - m

    names: list[str] = []
    cols: list[np.ndarray] = []
    if spec.case in ("constant", "constant_trend"):
        names.append("const")
        cols.append(np.ones(nrows))
    if spec.case == "constant_trend":
        names.append("trend")
        cols.append(np.arange(m + 1, T + 1, dtype=float))

    level_names = [f"{dep}.l1"]
    cols_levels = [y[m - 1: -1]]
    for x in spec.dynamic_regressors:
        v = spanel.column(x)
        level_names.append(f"{x}.l1")
        cols_levels.append(v[m - 1: -1])
    names.extend(level_names)
    cols.extend(cols_levels)

    dy = np.diff(y)
    for i in range(1, spec.p):
        names.append(f"d.{dep}.l{i}")
        cols.append(dy[m - 1 - i: len(dy) - i])
    for x in spec.dynamic_regressors:
        dv = np.diff(spanel.column(x))
        for i in range(0, spec.q):
            names.append(f"d.{x}.l{i}")
            cols.append(dv[m - 1 - i: len(dv) - i])
    for w in spec.exogenous:
        names.append(w)
        cols.append(spanel.column(w)[m:])
    for name, _ in spec.dummies:
        names.append(name)
        cols.append(spanel.column(name)[m:])

    if nrows < len(names) + 10:
        raise TooFewObservations(
            f"{nrows} usable rows for {len(names)} columns (need >= cols + 10)"
        )
    design = DesignMatrix(tuple(names), np.column_stack(cols))
    return design, dy[m - 1:], tuple(level_names)


def bounds_test(panel: Panel, spec: ArdlSpec) -> BoundsResult:
    """Pesaran-style bounds F-test for a long-run level relationship.

    The F-statistic restricts the lagged levels of the dependent and every
    dynamic regressor to zero in the unrestricted conditional ECM; it is
    compared against the (I0, I1) bounds for the spec's deterministic case
    and k regressors.
    """
    design, response, level_names = _conditional_ecm_design(panel, spec)
    fit = ols_fit(design, response)
    wald = wald_f_test(fit, level_names)

    case_id = spec.resolved_bounds_case()
    bounds = bounds_critical_values(case_id, spec.k)
    f = wald["f_statistic"]
    return BoundsResult(
        f_statistic=f,
        k=spec.k,
        case_id=case_id,
        bounds=bounds,
        conclusion=_bounds_conclusions(f, bounds),
        df1=wald["df1"],
        df2=wald["df2"],
    )


@dataclass(frozen=True)
class EcmFit:
    """Error-correction form of a levels fit.

    ``coefficients``/``covariance`` are the exact reparameterization of the
    levels estimates; ``theta`` carries delta-method long-run inference.
    """

    ardl: ArdlFit
    column_names: tuple[str, ...]
    coefficients: np.ndarray
    covariance: np.ndarray
    alpha: float
    alpha_se: float
    theta: dict  # x name -> (estimate, se, t, p, stars)
    residuals: np.ndarray = field(repr=False)
    df_resid: int = 0

    def short_run_table(self) -> CoefficientTable:
        se = np.sqrt(np.diag(self.covariance))
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(se > 0, self.coefficients / se, 0.0)
        p = 2.0 * stats.t.sf(np.abs(t), self.df_resid)
        return CoefficientTable(
            names=self.column_names,
            estimates=self.coefficients.copy(),
            std_errors=se,
            t_values=t,
            p_values=p,
            stars=tuple(significance_stars(pv) for pv in p),
        )

    def long_run_table(self) -> CoefficientTable:
        names = tuple(self.theta)
        est = np.array([self.theta[n][0] for n in names])
        se = np.array([self.theta[n][1] for n in names])
        t = np.array([self.theta[n][2] for n in names])
        p = np.array([self.theta[n][3] for n in names])
        return CoefficientTable(names, est, se, t, p,
                                tuple(self.theta[n][4] for n in names))


def ecm_column_names(ardl: ArdlFit) -> tuple[str, ...]:
    spec = ardl.spec
    dep = spec.dependent
    names: list[str] = []
    if spec.case in ("constant", "constant_trend"):
        names.append("const")
    if spec.case == "constant_trend":
        names.append("trend")
    names.append(f"{dep}.l1")
    for x in spec.dynamic_regressors:
        names.append(f"{x}.l1")
    for i in range(1, spec.p):
        names.append(f"d.{dep}.l{i}")
    for x in spec.dynamic_regressors:
        for i in range(0, spec.q):
            names.append(f"d.{x}.l{i}")
    names.extend(spec.exogenous)
    names.extend(ardl.dummy_names)
    return tuple(names)


def _ecm_transform_matrix(ardl: ArdlFit) -> tuple[np.ndarray, np.ndarray, tuple[str, ...]]:
    """Linear map (L, offset) with ecm_coefs = L @ levels_coefs + offset.

    Valid because every ECM regressor is a linear combination of levels
    regressors (requires q >= 1 when dynamic regressors are present).
    """
    spec = ardl.spec
    levels_names = ardl.fit.column_names
    ecm_names = ecm_column_names(ardl)
    idx = {n: i for i, n in enumerate(levels_names)}

    L = np.zeros((len(ecm_names), len(levels_names)))
    offset = np.zeros(len(ecm_names))
    dep = spec.dependent

    for r, name in enumerate(ecm_names):
        if name in ("const", "trend") or name in spec.exogenous \
                or name in ardl.dummy_names:
            L[r, idx[name]] = 1.0
        elif name == f"{dep}.l1":
            for j in range(1, spec.p + 1):
                L[r, idx[f"{dep}.l{j}"]] = 1.0
            offset[r] = -1.0  # pi_y = sum(phi) - 1 = -alpha
    # dependent-difference lags: phi*_i = -sum_{j>i} phi_j
    for i in range(1, spec.p):
        r = ecm_names.index(f"d.{dep}.l{i}")
        for j in range(i + 1, spec.p + 1):
            L[r, idx[f"{dep}.l{j}"]] = -1.0
    for x in spec.dynamic_regressors:
        # lagged level: pi_x = sum_i beta_i
        r = ecm_names.index(f"{x}.l1")
        for j in range(0, spec.q + 1):
            L[r, idx[f"{x}.l{j}"]] = 1.0
        # contemporaneous difference: omega = beta_0
        if spec.q >= 1:
            r = ecm_names.index(f"d.{x}.l0")
            L[r, idx[f"{x}.l0"]] = 1.0
        # lagged differences: phi*_{x,i} = -sum_{j>i} beta_j
        for i in range(1, spec.q):
            r = ecm_names.index(f"d.{x}.l{i}")
            for j in range(i + 1, spec.q + 1):
                L[r, idx[f"{x}.l{j}"]] = -1.0
    return L, offset, ecm_names


def to_ecm(ardl: ArdlFit) -> EcmFit:
    """Exact algebraic reparameterization of a levels fit into ECM form.

    alpha = 1 - sum(phi); theta_x = sum(beta_x) / alpha with delta-method
    standard errors from the levels covariance.  Residuals are identical to
    the levels residuals by construction.
    """
    spec = ardl.spec
    if spec.dynamic_regressors and spec.q < 1:
        raise ValueError("the error-correction form needs q >= 1 for dynamic regressors")
    L, offset, ecm_names = _ecm_transform_matrix(ardl)
    b = ardl.fit.coefficients
    c = L @ b + offset
    cov = L @ ardl.fit.covariance @ L.T

    i_piy = ecm_names.index(f"{spec.dependent}.l1")
    alpha = -float(c[i_piy])
    alpha_se = float(np.sqrt(cov[i_piy, i_piy]))
    if abs(alpha) <= 1e-6:
        raise NearSingularAdjustment(
            f"speed of adjustment {alpha:.2e} is numerically zero; "
            "no error-correction representation"
        )

    df = ardl.fit.df_resid
    theta = {}
    for x in spec.dynamic_regressors:
        i_pix = ecm_names.index(f"{x}.l1")
        pix = float(c[i_pix])
        th = pix / alpha
        # delta method over (pi_y, pi_x): grad = (theta/alpha, 1/alpha)
        g = np.array([th / alpha, 1.0 / alpha])
        sub = cov[np.ix_([i_piy, i_pix], [i_piy, i_pix])]
        se = float(np.sqrt(g @ sub @ g))
        t = th / se if se > 0 else 0.0
        p = float(2.0 * stats.t.sf(abs(t), df))
        theta[x] = (th, se, t, p, significance_stars(p))

    return EcmFit(
        ardl=ardl,
        column_names=ecm_names,
        coefficients=c,
        covariance=cov,
        alpha=alpha,
        alpha_se=alpha_se,
        theta=theta,
        residuals=ardl.fit.residuals.copy(),
        df_resid=df,
    )


def fit_ecm_with_dummies(panel: Panel, spec: ArdlSpec) -> EcmFit:
    """Levels fit with step dummies, rewritten into ECM form."""
    return to_ecm(fit_ardl(panel, spec))
