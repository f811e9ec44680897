import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ardlkit.critical_values import unitroot_critical_values
from ardlkit.errors import DegenerateAfterDetrend, TooShort
from ardlkit.mc import Dgp, generate
from ardlkit.unitroot import (
    IntegrationConfig,
    LagSelection,
    adf_test,
    classify_integration,
    default_max_lags,
    dfgls_test,
    gls_detrend,
    za_test,
)


def _rw(T, seed=0):
    return generate(Dgp("random_walk", T, seed)).values


def _ar(T, rho, seed=0):
    return generate(Dgp("ar1", T, seed, {"rho": rho})).values


def manual_adf_stat(y, k, case="constant"):
    """Reference computation of the ADF t-ratio with plain numpy."""
    dy = np.diff(y)
    start = k + 1
    rows = []
    if case in ("constant", "constant_trend"):
        rows.append(np.ones(len(dy) - start + 1))
    if case == "constant_trend":
        rows.append(np.arange(start + 1, len(y) + 1, dtype=float))
    rows.append(y[start - 1:-1])
    for i in range(1, k + 1):
        rows.append(dy[start - 1 - i: len(dy) - i])
    X = np.column_stack(rows)
    resp = dy[start - 1:]
    beta, *_ = np.linalg.lstsq(X, resp, rcond=None)
    resid = resp - X @ beta
    sigma2 = resid @ resid / (len(resp) - X.shape[1])
    cov = sigma2 * np.linalg.inv(X.T @ X)
    j = X.shape[1] - 1 - k  # position of the lagged level
    return beta[j] / np.sqrt(cov[j, j])


@pytest.mark.parametrize("k", [0, 2])
@pytest.mark.parametrize("case", ["none", "constant", "constant_trend"])
def test_adf_statistic_against_manual(case, k):
    y = _rw(150, seed=7)
    res = adf_test(y, case=case, lag_selection=f"fixed({k})")
    assert res.statistic == pytest.approx(manual_adf_stat(y, k, case), rel=1e-9)
    assert res.lags_used == k


def test_adf_discriminates():
    stationary = _ar(300, 0.5, seed=2)
    walk = _rw(300, seed=2)
    assert adf_test(stationary).rejects_at(5)
    assert not adf_test(walk).rejects_at(5)


statsmodels = pytest.importorskip("statsmodels.tsa.stattools")


@pytest.mark.parametrize("seed", [0, 1, 5])
@pytest.mark.parametrize("k", [0, 3])
def test_adf_against_statsmodels(seed, k):
    y = _rw(250, seed=seed)
    ours = adf_test(y, case="constant", lag_selection=f"fixed({k})").statistic
    ref = statsmodels.adfuller(y, maxlag=k, regression="c", autolag=None)[0]
    assert ours == pytest.approx(ref, rel=1e-8)


@pytest.mark.parametrize("seed", [3, 8])
def test_za_against_statsmodels(seed):
    y = generate(Dgp("level_shift", 200, seed, {"tau": 120, "size": 6.0})).values
    ours = za_test(y, break_model="intercept", trim=0.15, lag_selection="fixed(2)")
    ref_stat, _, _, _, ref_bp = statsmodels.zivot_andrews(
        y, trim=0.15, maxlag=2, regression="c", autolag=None)
    assert ours.statistic == pytest.approx(ref_stat, rel=1e-6)


def test_adf_too_short():
    with pytest.raises(TooShort):
        adf_test(np.arange(10.0))


def test_default_max_lags():
    assert default_max_lags(100) == 12
    assert default_max_lags(200) == 14
    assert default_max_lags(50) == 10


def test_lag_selection_parse():
    assert LagSelection.parse("fixed(3)") == LagSelection("fixed", 3)
    assert LagSelection.parse("aic").rule == "aic"
    assert LagSelection.parse("4") == LagSelection("fixed", 4)
    with pytest.raises(ValueError):
        LagSelection.parse("magic")


def test_adf_aic_picks_true_lag_order():
    # AR(2) in differences: Δy has one significant lag, so k = 1 should win
    rng = np.random.default_rng(12)
    T = 600
    dy = np.empty(T)
    eps = rng.standard_normal(T)
    dy[0] = eps[0]
    for t in range(1, T):
        dy[t] = 0.6 * dy[t - 1] + eps[t]
    y = np.cumsum(dy)
    res = adf_test(y, lag_selection="aic")
    assert res.lags_used >= 1


# --- dfgls -----------------------------------------------------------------


def test_gls_detrend_hand_computed():
    y = np.array([1.0, 2.0, 4.0, 7.0, 11.0, 16.0, 22.0, 29.0])
    T = len(y)
    abar = 1.0 - 7.0 / T
    zy = np.concatenate([[y[0]], y[1:] - abar * y[:-1]])
    zd = np.concatenate([[1.0], np.full(T - 1, 1.0 - abar)])
    mu = (zd @ zy) / (zd @ zd)
    assert np.allclose(gls_detrend(y, "constant"), y - mu, atol=1e-12)


def test_dfgls_demeaning_is_not_ols_demeaning():
    y = _rw(200, seed=3)
    assert not np.allclose(gls_detrend(y, "constant"), y - y.mean())


def test_dfgls_discriminates():
    assert dfgls_test(_ar(300, 0.6, seed=5)).rejects_at(5)
    assert not dfgls_test(_rw(300, seed=5)).rejects_at(5)


def test_dfgls_degenerate_series():
    with pytest.raises(DegenerateAfterDetrend):
        dfgls_test(np.full(100, 3.7))


def test_dfgls_case_validation():
    with pytest.raises(ValueError):
        dfgls_test(_rw(100), case="none")


# --- zivot-andrews ---------------------------------------------------------


def test_za_recovers_injected_break():
    y = generate(Dgp("level_shift", 300, 9, {"tau": 150, "size": 10.0})).values
    res = za_test(y, break_model="intercept", lag_selection="fixed(0)")
    assert abs(res.break_index - 150) <= 2
    assert res.rejects_at(1)


def test_za_trim_bounds_candidates():
    y = _rw(100, seed=2)
    res = za_test(y, trim=0.15, lag_selection="fixed(0)")
    positions = [bp for bp, _ in res.candidate_statistics]
    assert min(positions) >= 15
    assert max(positions) <= 85


def test_za_statistic_is_minimum_over_candidates():
    y = _rw(120, seed=4)
    res = za_test(y, lag_selection="fixed(0)")
    stats = [s for _, s in res.candidate_statistics if np.isfinite(s)]
    assert res.statistic == pytest.approx(min(stats))


def test_za_break_date_mapping():
    import datetime as dt

    y = generate(Dgp("level_shift", 200, 11, {"tau": 100, "size": 8.0})).values
    dates = tuple(dt.date(2013, 1, 1) + dt.timedelta(days=i) for i in range(200))
    res = za_test(y, dates=dates, lag_selection="fixed(0)")
    assert res.break_date == dates[res.break_index - 1]


def test_za_needs_50_obs():
    with pytest.raises(TooShort):
        za_test(np.random.default_rng(0).standard_normal(40))


# --- classifier ------------------------------------------------------------


def test_classify_i0_i1_i2():
    wn = generate(Dgp("white_noise", 300, 22)).values
    rw = _rw(300, seed=22)
    i2 = np.cumsum(rw)
    assert classify_integration(wn).order == "I0"
    assert classify_integration(rw).order == "I1"
    c = classify_integration(i2)
    assert c.order == "I2_or_higher"
    assert c.blocks_bounds_test


def test_classifier_respects_test_choice():
    rw = _rw(250, seed=30)
    res = classify_integration(rw, IntegrationConfig(test="dfgls"))
    assert res.level_result.test == "dfgls"


# --- critical-value lookup -------------------------------------------------


def test_cv_bands():
    assert unitroot_critical_values("adf", "constant", 30)[5] == pytest.approx(-2.949)
    assert unitroot_critical_values("adf", "constant", 500)[5] == pytest.approx(-2.862)
    assert unitroot_critical_values("za", "intercept", 300)[5] == pytest.approx(-4.80)


def test_cv_unknown_entry():
    from ardlkit.errors import MissingBoundsEntry

    with pytest.raises((KeyError, MissingBoundsEntry)):
        unitroot_critical_values("adf", "quadratic_trend", 100)


# --- invariance ------------------------------------------------------------


@settings(max_examples=25, deadline=None)
@given(scale=st.floats(min_value=0.05, max_value=50.0),
       shift=st.floats(min_value=-100.0, max_value=100.0),
       seed=st.integers(min_value=0, max_value=10_000))
def test_affine_invariance(scale, shift, seed):
    """With a constant included, the statistics ignore affine transforms."""
    y = _rw(120, seed=seed)
    z = scale * y + shift
    a1 = adf_test(y, lag_selection="fixed(1)").statistic
    a2 = adf_test(z, lag_selection="fixed(1)").statistic
    assert a2 == pytest.approx(a1, abs=1e-9)
    g1 = dfgls_test(y, lag_selection="fixed(0)").statistic
    g2 = dfgls_test(z, lag_selection="fixed(0)").statistic
    assert g2 == pytest.approx(g1, abs=1e-9)
