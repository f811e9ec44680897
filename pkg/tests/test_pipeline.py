import datetime as dt
import json
from pathlib import Path

import numpy as np
import pytest

from ardlkit.errors import ParseError, UnknownVariable
from ardlkit.mc import innovation_rng
from ardlkit.pipeline import (
    DummyPolicy,
    ReportCell,
    _lag_group_cell,
    _single_cell,
    build_panel,
    load_manifest_and_config,
    run_batch,
    run_model,
)
from ardlkit.report import render_csv, render_json, render_reports

ROOT = Path(__file__).resolve().parents[1]
PAPER_SHAPE = ROOT / "configs" / "paper-shape"


def _write_series(path, values, start=dt.date(2013, 1, 1), step=1):
    with open(path, "w") as fh:
        fh.write("date,value\n")
        for i, v in enumerate(values):
            fh.write(f"{start + dt.timedelta(days=i * step)},{float(v)!r}\n")


@pytest.fixture
def toy_workspace(tmp_path):
    """Tiny two-model workspace: one cointegrated pair, one I(2) dependent."""
    g = innovation_rng(101, 0)
    T = 300
    x = np.cumsum(g.standard_normal(T))
    e = 0.5 * g.standard_normal(T)
    y = np.empty(T)
    y[0] = 2.0 * x[0]
    for t in range(1, T):
        y[t] = y[t - 1] - 0.3 * (y[t - 1] - 2.0 * x[t - 1]) + e[t]
    z = np.cumsum(np.cumsum(g.standard_normal(T)))  # I(2)

    data = tmp_path / "data"
    data.mkdir()
    _write_series(data / "x.csv", x + 50.0)
    _write_series(data / "y.csv", y + 50.0)
    _write_series(data / "z.csv", z + 500.0)
    (tmp_path / "manifest.csv").write_text(
        "name,path,frequency,transform\n"
        "x,data/x.csv,daily,level\n"
        "y,data/y.csv,daily,level\n"
        "z,data/z.csv,daily,level\n"
    )
    (tmp_path / "models.yaml").write_text(
        "defaults:\n"
        "  case: constant\n"
        "  p_max: 2\n"
        "  q_max: 1\n"
        "models:\n"
        "  - model_id: GOOD\n"
        "    dependent: y\n"
        "    dynamic_regressors: [x]\n"
        "  - model_id: BAD\n"
        "    dependent: z\n"
        "    dynamic_regressors: [x]\n"
    )
    return tmp_path


# --- loading ---------------------------------------------------------------


def test_load_happy_path(toy_workspace):
    manifest, configs = load_manifest_and_config(
        toy_workspace / "manifest.csv", toy_workspace / "models.yaml")
    assert set(manifest) == {"x", "y", "z"}
    assert [c.model_id for c in configs] == ["GOOD", "BAD"]
    assert configs[0].p_max == 2


def test_unknown_variable_names_model(toy_workspace):
    (toy_workspace / "models.yaml").write_text(
        "models:\n"
        "  - model_id: M7\n"
        "    dependent: y\n"
        "    dynamic_regressors: [nope]\n"
    )
    with pytest.raises(UnknownVariable) as exc:
        load_manifest_and_config(toy_workspace / "manifest.csv",
                                 toy_workspace / "models.yaml")
    assert "M7" in str(exc.value)
    assert "nope" in str(exc.value)


def test_duplicate_model_id(toy_workspace):
    (toy_workspace / "models.yaml").write_text(
        "models:\n"
        "  - {model_id: M1, dependent: y}\n"
        "  - {model_id: M1, dependent: x}\n"
    )
    with pytest.raises(ParseError, match="M1"):
        load_manifest_and_config(toy_workspace / "manifest.csv",
                                 toy_workspace / "models.yaml")


def test_duplicate_manifest_name(toy_workspace):
    (toy_workspace / "manifest.csv").write_text(
        "name,path\nx,data/x.csv\nx,data/y.csv\n")
    with pytest.raises(ParseError):
        load_manifest_and_config(toy_workspace / "manifest.csv",
                                 toy_workspace / "models.yaml")


def test_bad_transform_in_manifest(toy_workspace):
    (toy_workspace / "manifest.csv").write_text(
        "name,path,frequency,transform\nx,data/x.csv,daily,cubesplit\n")
    with pytest.raises(ParseError):
        load_manifest_and_config(toy_workspace / "manifest.csv",
                                 toy_workspace / "models.yaml")


def test_dummy_policy_parsing():
    assert DummyPolicy("none").kind == "none"
    with pytest.raises(ValueError):
        DummyPolicy("whenever")


# --- run_model -------------------------------------------------------------


def test_run_model_sections(toy_workspace):
    manifest, configs = load_manifest_and_config(
        toy_workspace / "manifest.csv", toy_workspace / "models.yaml")
    panel = build_panel(manifest, configs)
    sections = run_batch(panel, configs, manifest)
    by_id = {s.model_id: s for s in sections}

    good = by_id["GOOD"]
    assert good.status == "ok"
    assert good.cointegrated
    assert good.long_run["x"].sign == "+"
    assert good.integration == {"y": "I1", "x": "I1"}

    bad = by_id["BAD"]
    assert bad.status == "skipped"
    assert "z" in bad.reason
    assert bad.bounds is None  # guard: no bounds result for an I(2) model


def test_long_run_block_requires_cointegration(toy_workspace):
    manifest, configs = load_manifest_and_config(
        toy_workspace / "manifest.csv", toy_workspace / "models.yaml")
    panel = build_panel(manifest, configs)
    g = innovation_rng(55, 1)
    walk = np.cumsum(g.standard_normal(panel.nobs))
    panel2 = type(panel)(panel.dates,
                         panel.columns[:1] + (("y", walk + 100.0),) + panel.columns[2:])
    section = run_model(panel2, configs[0], manifest)
    assert section.status == "ok"
    if not section.cointegrated:
        assert section.long_run == {}
    assert section.short_run  # short-run block always present


def test_batch_isolation(toy_workspace):
    manifest, configs = load_manifest_and_config(
        toy_workspace / "manifest.csv", toy_workspace / "models.yaml")
    panel = build_panel(manifest, configs)
    full = run_batch(panel, configs, manifest)
    solo = run_batch(panel, configs[:1], manifest)
    full_good = render_json([s for s in full if s.model_id == "GOOD"])
    assert render_json(solo) == full_good


# --- cell grammar ----------------------------------------------------------


def test_single_cell_grammar():
    assert _single_cell(2.1, 0.03, "**").long_run_text() == "(+)**"
    assert _single_cell(-0.4, 0.004, "***").long_run_text() == "(-)***"
    assert _single_cell(1.0, 0.4, "").long_run_text() == ""


def test_lag_group_cell_grammar():
    # significant at lags 0 and 2 with opposite signs at 5% -> (±)2**
    rows = [(0.8, 0.03, "**"), (0.1, 0.60, ""), (-0.5, 0.04, "**")]
    cell = _lag_group_cell(rows)
    assert cell.short_run_text() == "(±)2**"
    all_pos = [(0.8, 0.005, "***"), (0.2, 0.08, "*")]
    assert _lag_group_cell(all_pos).short_run_text() == "(+)2***"
    nothing = [(0.8, 0.5, ""), (0.2, 0.9, "")]
    assert _lag_group_cell(nothing).short_run_text() == ""


def test_report_cell_empty():
    assert ReportCell().empty
    assert not _single_cell(1.0, 0.01, "***").empty


# --- rendering -------------------------------------------------------------


def test_render_formats(toy_workspace, tmp_path):
    manifest, configs = load_manifest_and_config(
        toy_workspace / "manifest.csv", toy_workspace / "models.yaml")
    panel = build_panel(manifest, configs)
    sections = run_batch(panel, configs, manifest)
    out = tmp_path / "out"
    paths = render_reports(sections, out, formats=("markdown", "csv", "json"),
                           panel=panel)
    names = {p.name for p in paths}
    assert {"report.md", "longrun.csv", "shortrun.csv", "estimates.csv",
            "report.json"} <= names
    assert "bounds_f.png" in names

    doc = json.loads((out / "report.json").read_text())
    ids = [m["model_id"] for m in doc["models"]]
    assert ids == sorted(ids)
    good = next(m for m in doc["models"] if m["model_id"] == "GOOD")
    assert good["cointegrated"] is True
    assert "long_run" in good
    bad = next(m for m in doc["models"] if m["model_id"] == "BAD")
    assert bad["status"] == "skipped"
    assert "bounds" not in bad

    md = (out / "report.md").read_text()
    assert "| GOOD |" in md
    assert "skipped" in md


def test_render_byte_stability(toy_workspace):
    manifest, configs = load_manifest_and_config(
        toy_workspace / "manifest.csv", toy_workspace / "models.yaml")
    panel = build_panel(manifest, configs)
    a = run_batch(panel, configs, manifest)
    b = run_batch(panel, configs, manifest)
    assert render_json(a) == render_json(b)
    assert render_csv(a) == render_csv(b)


# --- cli -------------------------------------------------------------------


def test_cli_exit_codes(toy_workspace, tmp_path):
    from click.testing import CliRunner

    from ardlkit.cli import main

    runner = CliRunner()
    out = tmp_path / "cli_out"
    # batch with one skipped model -> exit 2
    res = runner.invoke(main, ["run", "--manifest", str(toy_workspace / "manifest.csv"),
                               "--config", str(toy_workspace / "models.yaml"),
                               "--out", str(out), "--format", "json",
                               "--no-figures"])
    assert res.exit_code == 2
    assert (out / "report.json").exists()

    # config error -> exit 1
    (toy_workspace / "broken.yaml").write_text("models: [{model_id: Q, dependent: ghost}]\n")
    res = runner.invoke(main, ["run", "--manifest", str(toy_workspace / "manifest.csv"),
                               "--config", str(toy_workspace / "broken.yaml"),
                               "--out", str(out)])
    assert res.exit_code == 1

    # all models fine -> exit 0
    (toy_workspace / "good.yaml").write_text(
        "models:\n  - model_id: ONLY\n    dependent: y\n    dynamic_regressors: [x]\n")
    res = runner.invoke(main, ["run", "--manifest", str(toy_workspace / "manifest.csv"),
                               "--config", str(toy_workspace / "good.yaml"),
                               "--out", str(out), "--no-figures"])
    assert res.exit_code == 0


def test_cli_unitroot_and_critvals(toy_workspace):
    from click.testing import CliRunner

    from ardlkit.cli import main

    runner = CliRunner()
    res = runner.invoke(main, ["unitroot", "--series",
                               str(toy_workspace / "data" / "z.csv"),
                               "--test", "adf"])
    assert res.exit_code == 0
    assert "statistic" in res.output

    res = runner.invoke(main, ["critvals", "--test", "adf", "--T", "80",
                               "--reps", "100", "--seed", "1"])
    assert res.exit_code == 0
    assert "5%" in res.output


def test_cli_simulate_roundtrip(tmp_path):
    from click.testing import CliRunner

    from ardlkit.cli import main
    from ardlkit.series import read_series_csv

    runner = CliRunner()
    out = tmp_path / "sim.csv"
    res = runner.invoke(main, ["simulate", "--dgp", "ar1", "--T", "60",
                               "--seed", "3", "--param", "rho=0.5",
                               "--out", str(out)])
    assert res.exit_code == 0
    ts = read_series_csv(out)
    assert len(ts) == 60


def test_paper_shape_config_loads():
    manifest, configs = load_manifest_and_config(
        PAPER_SHAPE / "manifest.csv", PAPER_SHAPE / "models.yaml")
    assert len(configs) == 152
    deps = {c.dependent for c in configs}
    assert len(deps) == 19
