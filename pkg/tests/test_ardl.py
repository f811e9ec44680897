import datetime as dt

import numpy as np
import pytest

from ardlkit.ardl import (
    ArdlSpec,
    _dummy_column,
    bounds_test,
    fit_ardl,
    fit_ecm_with_dummies,
    select_lags,
    to_ecm,
)
from ardlkit.critical_values import bounds_critical_values
from ardlkit.errors import (
    DummyOutsideSample,
    MissingBoundsEntry,
    NearSingularAdjustment,
)
from ardlkit.mc import Dgp, generate, innovation_rng
from ardlkit.series import Panel


def _dates(n):
    return tuple(dt.date(2013, 1, 1) + dt.timedelta(days=i) for i in range(n))


def _pair_panel(T=400, seed=0, theta=2.0, alpha=0.5):
    y, x = generate(Dgp("cointegrated_pair", T, seed,
                        {"theta": theta, "alpha": alpha}))
    return Panel(_dates(T), (("y", y.values), ("x", x.values)))


def _rw_panel(T=400, seed=0):
    g = innovation_rng(seed, 0)
    return Panel(_dates(T), (("y", np.cumsum(g.standard_normal(T))),
                             ("x", np.cumsum(g.standard_normal(T)))))


def test_spec_validation():
    with pytest.raises(ValueError):
        ArdlSpec("y", dynamic_regressors=("y",))
    with pytest.raises(ValueError):
        ArdlSpec("y", dynamic_regressors=("x",), exogenous=("x",))
    with pytest.raises(ValueError):
        ArdlSpec("y", p=0)
    assert ArdlSpec("y", case="constant").resolved_bounds_case() == "III"
    assert ArdlSpec("y", case="constant_trend").resolved_bounds_case() == "V"
    assert ArdlSpec("y", case="none").resolved_bounds_case() == "I"


def test_fit_recovers_ardl_coefficients():
    # strong ARDL(1,1) signal, large T: OLS should sit on the truth
    y, x = generate(Dgp("ardl_process", 3000, 4,
                        {"phi": [0.5], "beta": [1.0, 0.25], "sigma": 0.5}))
    panel = Panel(_dates(3000), (("y", y.values), ("x", x.values)))
    fit = fit_ardl(panel, ArdlSpec("y", ("x",), case="constant", p=1, q=1))
    assert fit.phi()[0] == pytest.approx(0.5, abs=0.05)
    assert fit.beta("x")[0] == pytest.approx(1.0, abs=0.05)
    assert fit.beta("x")[1] == pytest.approx(0.25, abs=0.07)
    assert fit.long_run("x") == pytest.approx(2.5, abs=0.1)


def test_ecm_residuals_identical_to_levels():
    panel = _pair_panel(seed=3)
    fit = fit_ardl(panel, ArdlSpec("y", ("x",), case="constant", p=2, q=2))
    ecm = to_ecm(fit)
    assert np.allclose(ecm.residuals, fit.fit.residuals, atol=1e-12)
    assert ecm.alpha == pytest.approx(fit.alpha, rel=1e-12)
    assert ecm.theta["x"][0] == pytest.approx(fit.long_run("x"), rel=1e-12)


def test_ecm_against_direct_difference_regression():
    """The reparameterized coefficients equal a from-scratch OLS of the
    difference-form regression built with plain numpy."""
    panel = _pair_panel(T=300, seed=8)
    p, q = 2, 2
    spec = ArdlSpec("y", ("x",), case="constant", p=p, q=q)
    ecm = to_ecm(fit_ardl(panel, spec))

    y = panel.column("y")
    x = panel.column("x")
    dy, dx = np.diff(y), np.diff(x)
    m = max(p, q)
    cols = [np.ones(len(y) - m), y[m - 1:-1], x[m - 1:-1]]
    cols.append(dy[m - 2: len(dy) - 1])       # d.y.l1
    cols.append(dx[m - 1:])                   # d.x.l0
    cols.append(dx[m - 2: len(dx) - 1])       # d.x.l1
    X = np.column_stack(cols)
    resp = dy[m - 1:]
    ref, *_ = np.linalg.lstsq(X, resp, rcond=None)

    by_name = dict(zip(ecm.column_names, ecm.coefficients))
    order = ["const", "y.l1", "x.l1", "d.y.l1", "d.x.l0", "d.x.l1"]
    ours = np.array([by_name[n] for n in order])
    assert np.allclose(ours, ref, atol=1e-8)
    resid_ref = resp - X @ ref
    assert np.allclose(ecm.residuals, resid_ref, atol=1e-8)


def test_ecm_needs_q_at_least_one():
    panel = _pair_panel(seed=5)
    fit = fit_ardl(panel, ArdlSpec("y", ("x",), case="constant", p=1, q=0))
    with pytest.raises(ValueError):
        to_ecm(fit)


def test_near_singular_adjustment():
    # y_t = y_{t-1} + 1 exactly: phi-hat = 1, alpha = 0
    T = 60
    y = np.arange(1.0, T + 1)
    panel = Panel(_dates(T), (("y", y),))
    fit = fit_ardl(panel, ArdlSpec("y", case="constant", p=1, q=0))
    with pytest.raises(NearSingularAdjustment):
        to_ecm(fit)


def test_theta_recovery():
    panel = _pair_panel(T=1000, seed=6, theta=2.0, alpha=0.5)
    ecm = to_ecm(fit_ardl(panel, ArdlSpec("y", ("x",), case="constant", p=1, q=1)))
    est, se, t, p, stars = ecm.theta["x"]
    assert est == pytest.approx(2.0, abs=0.05)
    assert abs(est - 2.0) < 3 * se
    assert stars == "***"


# --- dummies ---------------------------------------------------------------


def test_dummy_column_strictly_after():
    panel = Panel(_dates(40), (("y", np.ones(40)),))
    col = _dummy_column(panel, dt.date(2013, 1, 20))
    assert col[:20].sum() == 0
    assert col[20:].sum() == 20


def test_dummy_outside_sample():
    panel = Panel(_dates(40), (("y", np.ones(40)),))
    with pytest.raises(DummyOutsideSample):
        _dummy_column(panel, dt.date(2012, 12, 31))
    with pytest.raises(DummyOutsideSample):
        _dummy_column(panel, dt.date(2013, 2, 5))  # < 10 obs after


def test_ecm_with_dummies_absorbs_shift():
    T = 500
    g = innovation_rng(13, 0)
    x = np.cumsum(g.standard_normal(T))
    e = 0.5 * g.standard_normal(T)
    y = np.empty(T)
    shift = np.zeros(T)
    shift[250:] = 5.0
    y[0] = 2.0 * x[0]
    for t in range(1, T):
        eq = 2.0 * x[t - 1] + shift[t - 1]
        y[t] = y[t - 1] - 0.4 * (y[t - 1] - eq) + e[t]
    panel = Panel(_dates(T), (("y", y), ("x", x)))
    spec = ArdlSpec("y", ("x",), case="constant", p=1, q=1,
                    dummies=(("DU1", _dates(T)[249]),))
    ecm = fit_ecm_with_dummies(panel, spec)
    est = ecm.theta["x"][0]
    assert est == pytest.approx(2.0, abs=0.1)
    tab = ecm.short_run_table()
    assert tab.row("DU1")[3] < 0.01  # the dummy picks up the shift


# --- lag selection ---------------------------------------------------------


def test_select_lags_recovers_order():
    y, x = generate(Dgp("ardl_process", 2000, 17,
                        {"phi": [0.6, -0.3], "beta": [1.0, 0.5], "sigma": 0.4}))
    panel = Panel(_dates(2000), (("y", y.values), ("x", x.values)))
    p, q = select_lags(panel, ArdlSpec("y", ("x",), case="constant"),
                       p_max=3, q_max=3, criterion="bic")
    assert p == 2
    assert q == 1


def test_select_lags_q_min():
    panel = _pair_panel(seed=19)
    p, q = select_lags(panel, ArdlSpec("y", ("x",), case="constant"),
                       p_max=2, q_max=2, q_min=1)
    assert q >= 1


# --- bounds test -----------------------------------------------------------


def test_bounds_cointegrated_pair():
    res = bounds_test(_pair_panel(T=500, seed=23),
                      ArdlSpec("y", ("x",), case="constant", p=1, q=1))
    assert res.k == 1
    assert res.case_id == "III"
    assert res.df1 == 2
    assert res.conclusion_at(5) == "cointegrated"


def test_bounds_independent_walks():
    res = bounds_test(_rw_panel(T=500, seed=30),
                      ArdlSpec("y", ("x",), case="constant", p=1, q=1))
    assert res.conclusion_at(5) == "not_cointegrated"


def test_bounds_tri_state():
    from ardlkit.ardl import _bounds_conclusions

    bounds = {5: (4.94, 5.73)}
    assert _bounds_conclusions(6.0, bounds)[5] == "cointegrated"
    assert _bounds_conclusions(5.0, bounds)[5] == "inconclusive"
    assert _bounds_conclusions(3.0, bounds)[5] == "not_cointegrated"


def test_bounds_cv_table():
    cv = bounds_critical_values("III", 1)
    assert cv[5] == (4.94, 5.73)
    assert cv[1] == (6.84, 7.84)
    cv0 = bounds_critical_values("III", 0)
    assert cv0[5][0] == cv0[5][1] == pytest.approx(8.21)


def test_bounds_missing_entry():
    with pytest.raises(MissingBoundsEntry):
        bounds_critical_values("II", 1)
    with pytest.raises(MissingBoundsEntry):
        bounds_critical_values("III", 11)


def test_bounds_scale_invariance():
    panel = _pair_panel(T=300, seed=31)
    spec = ArdlSpec("y", ("x",), case="constant", p=1, q=1)
    f1 = bounds_test(panel, spec).f_statistic
    scaled = Panel(panel.dates, (("y", 10.0 * panel.column("y")),
                                 ("x", 0.1 * panel.column("x"))))
    f2 = bounds_test(scaled, spec).f_statistic
    assert f2 == pytest.approx(f1, rel=1e-9)
