"""Ordinary least squares with inference, information criteria and Wald F-tests.

Everything downstream (unit-root tests, ARDL fits, the bounds test) funnels
through :func:`ols_fit`.  The solver uses a QR decomposition; the normal
equations are never formed for the solve step.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .errors import DimensionMismatch, RankDeficient

# Relative tolerance on the R diagonal used to declare rank deficiency.
# Dummies plus trend can be near-collinear on short samples and must fail loudly.
RANK_RTOL = 1e-10

STAR_LEVELS = ((0.01, "***"), (0.05, "**"), (0.10, "*"))


def significance_stars(p_value: float) -> str:
    """Star code for a two-sided p-value: *** 1%, ** 5%, * 10%, else empty."""
    for level, stars in STAR_LEVELS:
        if p_value <= level:
            return stars
    return ""


@dataclass(frozen=True)
class DesignMatrix:
    """Named regressor matrix (n x k)."""

    column_names: tuple[str, ...]
    rows: np.ndarray

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=float)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "column_names", tuple(self.column_names))
        if rows.ndim != 2:
            raise DimensionMismatch("design must be 2-dimensional")
        n, k = rows.shape
        if len(self.column_names) != k:
            raise DimensionMismatch(
                f"{len(self.column_names)} names for {k} columns"
            )
        if len(set(self.column_names)) != k:
            raise ValueError("duplicate column names in design")
        if n <= k:
            raise DimensionMismatch(f"need n > k, got n={n}, k={k}")
        if not np.isfinite(rows).all():
            raise ValueError("non-finite entries in design")

    @property
    def nobs(self) -> int:
        return self.rows.shape[0]

    @property
    def ncols(self) -> int:
        return self.rows.shape[1]

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, self.column_names.index(name)]

    def drop(self, names) -> "DesignMatrix":
        names = set(names)
        keep = [i for i, c in enumerate(self.column_names) if c not in names]
        return DesignMatrix(
            tuple(self.column_names[i] for i in keep), self.rows[:, keep]
        )


@dataclass(frozen=True)
class RegressionFit:
    """Result of a single OLS estimation."""

    design: DesignMatrix
    response: np.ndarray
    coefficients: np.ndarray
    covariance: np.ndarray
    residuals: np.ndarray
    sigma2: float
    loglik: float
    nobs: int
    df_resid: int

    @property
    def column_names(self) -> tuple[str, ...]:
        return self.design.column_names

    @property
    def rss(self) -> float:
        return float(self.residuals @ self.residuals)

    @property
    def fitted(self) -> np.ndarray:
        return self.response - self.residuals

    def coef(self, name: str) -> float:
        return float(self.coefficients[self.column_names.index(name)])

    def stderr(self, name: str) -> float:
        i = self.column_names.index(name)
        return float(np.sqrt(self.covariance[i, i]))


def _check_rank(r_diag: np.ndarray, column_names, piv=None):
    """Raise RankDeficient naming the columns with a collapsed R diagonal."""
    scale = np.max(np.abs(r_diag))
    if scale == 0.0:
        raise RankDeficient(column_names)
    bad = np.abs(r_diag) <= RANK_RTOL * scale
    if bad.any():
        if piv is not None:
            names = [column_names[piv[i]] for i in np.nonzero(bad)[0]]
        else:
            names = [column_names[i] for i in np.nonzero(bad)[0]]
        raise RankDeficient(names)


def ols_fit(design: DesignMatrix, response) -> RegressionFit:
    """Least-squares fit of ``response`` on ``design``.

    Coefficients solve min ||y - Xb||^2 via QR; covariance is
    sigma2 * (X'X)^{-1} with sigma2 = RSS / (n - k).

    Raises RankDeficient (naming offending columns) or DimensionMismatch.
    """
    y = np.asarray(response, dtype=float)
    if y.ndim != 1 or y.shape[0] != design.nobs:
        raise DimensionMismatch(
            f"response length {y.shape} does not match design n={design.nobs}"
        )
    if not np.isfinite(y).all():
        raise ValueError("non-finite entries in response")

    X = design.rows
    n, k = X.shape

    # Pivoted QR so rank deficiency can be attributed to specific columns.
    from scipy.linalg import qr as _qr, solve_triangular

    Q, R, piv = _qr(X, mode="economic", pivoting=True)
    _check_rank(np.diag(R), design.column_names, piv)

    b_piv = solve_triangular(R, Q.T @ y)
    beta = np.empty(k)
    beta[piv] = b_piv

    resid = y - X @ beta
    rss = float(resid @ resid)
    df_resid = n - k
    sigma2 = rss / df_resid

    # (X'X)^{-1} from the pivoted R factor (inference only, not the solve).
    Rinv = solve_triangular(R, np.eye(k))
    xtx_inv_piv = Rinv @ Rinv.T
    xtx_inv = np.empty((k, k))
    xtx_inv[np.ix_(piv, piv)] = xtx_inv_piv
    cov = sigma2 * xtx_inv

    # Gaussian profile log-likelihood.
    loglik = -0.5 * n * (np.log(2.0 * np.pi) + np.log(rss / n) + 1.0)

    return RegressionFit(
        design=design,
        response=y,
        coefficients=beta,
        covariance=cov,
        residuals=resid,
        sigma2=sigma2,
        loglik=float(loglik),
        nobs=n,
        df_resid=df_resid,
    )


@dataclass(frozen=True)
class CoefficientTable:
    """Per-coefficient inference: estimate, std error, t, p, stars."""

    names: tuple[str, ...]
    estimates: np.ndarray
    std_errors: np.ndarray
    t_values: np.ndarray
    p_values: np.ndarray
    stars: tuple[str, ...] = field(default=())

    def row(self, name: str):
        i = self.names.index(name)
        return (
            float(self.estimates[i]),
            float(self.std_errors[i]),
            float(self.t_values[i]),
            float(self.p_values[i]),
            self.stars[i],
        )


def t_statistics(fit: RegressionFit) -> CoefficientTable:
    """Student-t inference for every coefficient of ``fit``.

    p-values are two-sided with df = n - k; stars at the 1/5/10% levels.
    """
    if fit.df_resid < 1:
        raise DimensionMismatch("no residual degrees of freedom")
    se = np.sqrt(np.diag(fit.covariance))
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(se > 0, fit.coefficients / se, 0.0)
    p = 2.0 * stats.t.sf(np.abs(t), fit.df_resid)
    stars = tuple(significance_stars(pv) for pv in p)
    return CoefficientTable(
        names=fit.column_names,
        estimates=fit.coefficients.copy(),
        std_errors=se,
        t_values=t,
        p_values=p,
        stars=stars,
    )


def information_criteria(fit: RegressionFit) -> dict:
    """AIC and BIC from the Gaussian profile log-likelihood."""
    k = fit.design.ncols
    n = fit.nobs
    return {
        "aic": -2.0 * fit.loglik + 2.0 * k,
        "bic": -2.0 * fit.loglik + k * np.log(n),
    }


def wald_f_test(fit: RegressionFit, restricted_columns) -> dict:
    """F-test of joint nullity of ``restricted_columns``, by restricted refit.

    F = ((RSS_r - RSS_u) / r) / (RSS_u / df_resid); df1 = r, df2 = n - k.
    """
    restricted = tuple(restricted_columns)
    if not restricted:
        raise ValueError("restricted set must be non-empty")
    missing = set(restricted) - set(fit.column_names)
    if missing:
        raise ValueError(f"not in design: {sorted(missing)}")

    if len(restricted) == len(fit.column_names):
        rss_r = float(fit.response @ fit.response)
    else:
        reduced = fit.design.drop(restricted)
        rss_r = ols_fit(reduced, fit.response).rss

    r = len(restricted)
    f = ((rss_r - fit.rss) / r) / (fit.rss / fit.df_resid)
    return {"f_statistic": float(f), "df1": r, "df2": fit.df_resid}
