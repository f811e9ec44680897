"""Regenerate the bundled paper-shape dataset and model configuration.

Writes configs/paper-shape/{manifest.csv,models.yaml,data/*.csv}.  The data
are fully synthetic and seeded, so this script is deterministic; the
committed files are its output for seed 20130101.

Structure: 19 synthetic currency prices (vc01..vc19), a market index,
macro/financial drivers (gold, oil, stocks, fx), an attention proxy, and
one weekly supply series per currency.  Odd-numbered currencies are
generated with an error-correction pull toward gold and the market index
(so bounds tests should find cointegration); even-numbered ones are
independent random walks, some with a mid-sample level shift.  Eight model
templates per currency give a 152-model batch.
"""
from __future__ import annotations

import datetime as dt
from pathlib import Path

import numpy as np

import sys

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from ardlkit.mc import innovation_rng  # noqa: E402

SEED = 20130101
T = 420
N_CURRENCIES = 19
START = dt.date(2013, 1, 1)

ROOT = Path(__file__).resolve().parents[1] / "configs" / "paper-shape"


def write_csv(path: Path, dates, values):
    with open(path, "w") as fh:
        fh.write("date,value\n")
        for d, v in zip(dates, values):
            fh.write(f"{d.isoformat()},{float(v)!r}\n")


def main():
    data = ROOT / "data"
    data.mkdir(parents=True, exist_ok=True)
    dates = [START + dt.timedelta(days=i) for i in range(T)]
    weekly = dates[::7]

    # Shared drivers: geometric random walks, stored in levels (the manifest
    # applies the log transform at ingestion).
    stream = 0

    def rng():
        nonlocal stream
        g = innovation_rng(SEED, stream)
        stream += 1
        return g

    def geo_rw(g, level, vol, drift=0.0):
        return level * np.exp(np.cumsum(drift + vol * g.standard_normal(T)))

    gold = geo_rw(rng(), 1200.0, 0.008)
    oil = geo_rw(rng(), 95.0, 0.012)
    stocks = geo_rw(rng(), 1600.0, 0.009, drift=0.0003)
    fx = geo_rw(rng(), 1.30, 0.004)
    attn = geo_rw(rng(), 55.0, 0.03)
    mkt = geo_rw(rng(), 100.0, 0.02, drift=0.0005)

    for name, vals in (("gold", gold), ("oil", oil), ("stocks", stocks),
                       ("fx", fx), ("attn", attn), ("mkt", mkt)):
        write_csv(data / f"{name}.csv", dates, vals)

    lg, lm = np.log(gold), np.log(mkt)
    manifest_rows = [("gold", "daily"), ("oil", "daily"), ("stocks", "daily"),
                     ("fx", "daily"), ("attn", "daily"), ("mkt", "daily")]

    for i in range(1, N_CURRENCIES + 1):
        name = f"vc{i:02d}"
        g = rng()
        eps = 0.02 * g.standard_normal(T)
        ly = np.empty(T)
        if i % 2 == 1:
            # error-correction pull toward a gold/market combination; vc09
            # additionally gets a permanent shift in the equilibrium constant
            theta_g = 0.8 + 0.05 * (i % 5)
            theta_m = 0.5 + 0.04 * (i % 3)
            alpha = 0.15 + 0.02 * (i % 4)
            c = 2.0 - theta_g * lg[0] - theta_m * lm[0]
            shift_at = int(0.6 * T) if i == 9 else None
            ly[0] = c + theta_g * lg[0] + theta_m * lm[0]
            for t in range(1, T):
                if shift_at is not None and t == shift_at:
                    c += 0.5
                eq = c + theta_g * lg[t - 1] + theta_m * lm[t - 1]
                ly[t] = ly[t - 1] - alpha * (ly[t - 1] - eq) + eps[t]
        else:
            ly[0] = np.log(5.0 + i)
            ly[1:] = ly[0] + np.cumsum(1.5 * eps[1:])
            if i % 4 == 0:
                # permanent level shift at 60% of the sample
                ly[int(0.6 * T):] += 0.25
        write_csv(data / f"{name}.csv", dates, np.exp(ly))
        manifest_rows.append((name, "daily"))

        gs = rng()
        growth = np.abs(0.002 + 0.0005 * gs.standard_normal(len(weekly)))
        supply = 1e6 * (1.0 + i / 10.0) * np.cumprod(1.0 + growth)
        write_csv(data / f"sup{i:02d}.csv", weekly, supply)
        manifest_rows.append((f"sup{i:02d}", "weekly"))

    with open(ROOT / "manifest.csv", "w") as fh:
        fh.write("name,path,frequency,transform\n")
        for name, freq in manifest_rows:
            fh.write(f"{name},data/{name}.csv,{freq},log\n")

    templates = [
        ("M1.1", ["gold", "oil"], False),
        ("M1.2", ["gold", "oil", "stocks", "fx"], False),
        ("M1.3", ["gold", "oil", "stocks", "fx", "attn"], False),
        ("M1.4", ["gold", "oil", "stocks", "fx", "attn"], True),
        ("M2.1", ["mkt"], False),
        ("M2.2", ["mkt", "gold", "oil"], False),
        ("M2.3", ["mkt", "gold", "oil", "stocks", "fx", "attn"], False),
        ("M2.4", ["mkt", "gold", "oil", "stocks", "fx", "attn"], True),
    ]
    with open(ROOT / "models.yaml", "w") as fh:
        fh.write("# 8 model templates per synthetic currency (152 models).\n")
        fh.write("defaults:\n")
        fh.write("  case: constant\n")
        fh.write("  p_max: 2\n")
        fh.write("  q_max: 1\n")
        fh.write("  criterion: aic\n")
        fh.write("  dummy_policy: {kind: auto_za, level: 5}\n")
        fh.write("  integration_test: adf\n")
        fh.write("models:\n")
        shift_date = START + dt.timedelta(days=int(0.6 * T) - 1)
        for i in range(1, N_CURRENCIES + 1):
            dep = f"vc{i:02d}"
            for tid, regs, with_supply in templates:
                fh.write(f"  - model_id: {tid}-{dep}\n")
                fh.write(f"    dependent: {dep}\n")
                fh.write(f"    dynamic_regressors: [{', '.join(regs)}]\n")
                if with_supply:
                    fh.write(f"    exogenous: [sup{i:02d}]\n")
                if i == 9:
                    # the known equilibrium-shift date of vc09
                    fh.write("    dummy_policy: {kind: explicit, dates: "
                             f"[{shift_date.isoformat()}]}}\n")
    print(f"wrote {ROOT}")


if __name__ == "__main__":
    main()
