"""Seeded Monte Carlo harness: synthetic data-generating processes with known
answers, and simulation of critical-value tables.

Innovations come from the Philox counter-based generator with one
documented stream per replication (key = seed << 64 | stream), so results
are bit-stable and independent of evaluation order.
"""
from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidDgp
from .series import TimeSeries

BURN_IN = 100  # discarded initial observations for stationary processes
_EPOCH = dt.date(2013, 1, 1)


def innovation_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Philox generator for one (seed, stream) pair."""
    key = (int(seed) & 0xFFFFFFFFFFFFFFFF) << 64 | (int(stream) & 0xFFFFFFFFFFFFFFFF)
    return np.random.Generator(np.random.Philox(key=key))


def _dates(n: int) -> tuple[dt.date, ...]:
    return tuple(_EPOCH + dt.timedelta(days=i) for i in range(n))


@dataclass(frozen=True)
class Dgp:
    """A synthetic data-generating process.

    Kinds: white_noise | ar1 | random_walk | random_walk_drift |
    cointegrated_pair | level_shift | ardl_process.
    """

    kind: str
    T: int
    seed: int
    params: dict = field(default_factory=dict)

    KINDS = ("white_noise", "ar1", "random_walk", "random_walk_drift",
             "cointegrated_pair", "level_shift", "ardl_process")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise InvalidDgp(f"unknown DGP kind {self.kind!r}")
        if self.T < 30:
            raise InvalidDgp("need T >= 30")
        p = self.params
        if self.kind == "ar1" and abs(p.get("rho", 0.0)) > 1.0:
            raise InvalidDgp("|rho| must be <= 1")
        if self.kind == "cointegrated_pair":
            a = p.get("alpha", 0.0)
            if not 0.0 < abs(a) <= 1.0:
                raise InvalidDgp("|alpha| must be in (0, 1]")
        if self.kind == "level_shift":
            tau = p.get("tau", 0)
            if not 0 < tau < self.T:
                raise InvalidDgp("tau must lie inside the sample")
        if self.kind == "ardl_process":
            if not p.get("phi"):
                raise InvalidDgp("ardl_process needs at least one phi coefficient")


def generate(dgp: Dgp, stream: int = 0):
    """Realize a DGP; deterministic given (seed, stream).

    Returns one TimeSeries, or a (y, x) pair for the bivariate kinds.
    """
    g = innovation_rng(dgp.seed, stream)
    T, p = dgp.T, dgp.params

    if dgp.kind == "white_noise":
        sigma = p.get("sigma", 1.0)
        return _series("y", g.standard_normal(T) * sigma)

    if dgp.kind == "ar1":
        rho = p["rho"]
        eps = g.standard_normal(T + BURN_IN)
        y = np.empty(T + BURN_IN)
        y[0] = eps[0]
        for t in range(1, len(y)):
            y[t] = rho * y[t - 1] + eps[t]
        return _series("y", y[BURN_IN:])

    if dgp.kind == "random_walk":
        return _series("y", np.cumsum(g.standard_normal(T)))

    if dgp.kind == "random_walk_drift":
        mu = p.get("mu", 0.0)
        return _series("y", np.cumsum(mu + g.standard_normal(T)))

    if dgp.kind == "cointegrated_pair":
        theta, alpha = p["theta"], p["alpha"]
        sigma = p.get("sigma", 1.0)
        ex = g.standard_normal(T)
        ey = g.standard_normal(T) * sigma
        x = np.cumsum(ex)
        y = np.empty(T)
        y[0] = theta * x[0] + ey[0]
        for t in range(1, T):
            y[t] = y[t - 1] - alpha * (y[t - 1] - theta * x[t - 1]) + ey[t]
        return _series("y", y), _series("x", x)

    if dgp.kind == "level_shift":
        tau, size = p["tau"], p["size"]
        sigma = p.get("sigma", 1.0)
        y = g.standard_normal(T) * sigma
        y[tau:] += size  # shift applies strictly after position tau (1-based)
        return _series("y", y)

    # ardl_process: y_t = sum phi_i y_{t-i} + sum beta_i x_{t-i} + eps,
    # x a random walk
    phi = np.asarray(p["phi"], dtype=float)
    beta = np.asarray(p.get("beta", ()), dtype=float)
    sigma = p.get("sigma", 1.0)
    n = T + BURN_IN
    x = np.cumsum(g.standard_normal(n))
    eps = g.standard_normal(n) * sigma
    y = np.zeros(n)
    pmax = len(phi)
    qmax = len(beta) - 1
    for t in range(max(pmax, qmax), n):
        acc = eps[t]
        for i, ph in enumerate(phi, start=1):
            acc += ph * y[t - i]
        for i, b in enumerate(beta):
            acc += b * x[t - i]
        y[t] = acc
    return _series("y", y[BURN_IN:]), _series("x", x[BURN_IN:])


def _series(name: str, values: np.ndarray) -> TimeSeries:
    return TimeSeries(name=name, dates=_dates(len(values)), values=values)


def _quantile_with_se(sorted_stats: np.ndarray, prob: float):
    """Empirical quantile and an order-statistic Monte Carlo standard error."""
    n = len(sorted_stats)
    q = float(np.quantile(sorted_stats, prob))
    half = 1.959964 * np.sqrt(n * prob * (1.0 - prob))
    r = prob * n
    lo = int(np.clip(np.floor(r - half), 0, n - 1))
    hi = int(np.clip(np.ceil(r + half), 0, n - 1))
    se = (sorted_stats[hi] - sorted_stats[lo]) / (2.0 * 1.959964)
    return q, float(se)


def simulate_critical_values(test: str, T: int, replications: int, seed: int,
                             **options) -> dict:
    """Simulate the null distribution of a test statistic and return its
    1/5/10% quantiles with Monte Carlo standard errors.

    ``test`` is one of adf | dfgls | za | bounds.  Unit-root tests draw
    driftless random walks; the bounds test draws an I(1) dependent with
    either I(0) or I(1) regressors (``bounds_kind``), giving the lower or
    upper bound.  Options: case, break_model, trim, k, bounds_kind,
    lag_selection (defaults to fixed(0) under the serially uncorrelated null).
    """
    from . import unitroot
    from .ardl import ArdlSpec, bounds_test
    from .series import Panel

    lag_selection = options.get("lag_selection", "fixed(0)")
    stats_out = np.empty(replications)

    if test in ("adf", "dfgls"):
        case = options.get("case", "constant")
        runner = unitroot.adf_test if test == "adf" else unitroot.dfgls_test
        for rep in range(replications):
            y = generate(Dgp("random_walk", T, seed), stream=rep).values
            stats_out[rep] = runner(y, case=case, lag_selection=lag_selection).statistic
    elif test == "za":
        model = options.get("break_model", "intercept")
        trim = options.get("trim", 0.15)
        for rep in range(replications):
            y = generate(Dgp("random_walk", T, seed), stream=rep).values
            stats_out[rep] = unitroot.za_test(
                y, break_model=model, trim=trim, lag_selection=lag_selection
            ).statistic
    elif test == "bounds":
        k = options.get("k", 1)
        case_id = str(options.get("bounds_case", "III")).upper()
        bounds_kind = options.get("bounds_kind", "I1")
        det = {"I": "none", "II": "constant", "III": "constant",
               "IV": "constant_trend", "V": "constant_trend"}[case_id]
        xnames = tuple(f"x{j}" for j in range(k))
        spec = ArdlSpec(dependent="y", dynamic_regressors=xnames, case=det,
                        p=1, q=1, bounds_case=case_id)
        for rep in range(replications):
            g = innovation_rng(seed, rep)
            y = np.cumsum(g.standard_normal(T))
            if bounds_kind == "I1":
                xs = [np.cumsum(g.standard_normal(T)) for _ in range(k)]
            else:
                xs = [g.standard_normal(T) for _ in range(k)]
            cols = [("y", y)] + [(n, v) for n, v in zip(xnames, xs)]
            panel = Panel(_dates(T), tuple(cols))
            stats_out[rep] = bounds_test(panel, spec).f_statistic
    else:
        raise ValueError(f"unknown test {test!r}")

    stats_sorted = np.sort(stats_out)
    # left-tailed t statistics use lower-tail quantiles; the bounds F uses upper
    upper_tail = test == "bounds"
    quantiles = {}
    for level in (1, 5, 10):
        prob = (1.0 - level / 100.0) if upper_tail else level / 100.0
        q, se = _quantile_with_se(stats_sorted, prob)
        quantiles[level] = {"value": q, "mc_se": se}
    return {
        "test": test,
        "T": T,
        "replications": replications,
        "seed": seed,
        "options": dict(options),
        "quantiles": quantiles,
        "statistics": stats_out,
    }


@dataclass(frozen=True)
class McSummary:
    """Paired size/power summary of a test over seeded replications."""

    replications: int
    null_rejection_rates: dict
    alt_rejection_rates: dict
    null_quantiles: dict
    recovered_mean: float | None = None
    recovered_std: float | None = None


def size_power_experiment(test_runner, null_dgp: Dgp, alt_dgp: Dgp,
                          replications: int, seed: int | None = None) -> McSummary:
    """Rejection rates of ``test_runner`` under a null and an alternative DGP.

    ``test_runner(values) -> UnitRootResult``; both DGPs are re-seeded per
    replication via their own seed and the replication stream.
    """
    levels = (1, 5, 10)
    null_rej = {lv: 0 for lv in levels}
    alt_rej = {lv: 0 for lv in levels}
    null_stats = np.empty(replications)
    for rep in range(replications):
        y0 = generate(null_dgp, stream=rep)
        y0 = (y0[0] if isinstance(y0, tuple) else y0).values
        res0 = test_runner(y0)
        null_stats[rep] = res0.statistic
        y1 = generate(alt_dgp, stream=rep)
        y1 = (y1[0] if isinstance(y1, tuple) else y1).values
        res1 = test_runner(y1)
        for lv in levels:
            null_rej[lv] += res0.rejects_at(lv)
            alt_rej[lv] += res1.rejects_at(lv)

    sorted_null = np.sort(null_stats)
    quantiles = {lv: _quantile_with_se(sorted_null, lv / 100.0)[0] for lv in levels}
    return McSummary(
        replications=replications,
        null_rejection_rates={lv: null_rej[lv] / replications for lv in levels},
        alt_rejection_rates={lv: alt_rej[lv] / replications for lv in levels},
        null_quantiles=quantiles,
    )
