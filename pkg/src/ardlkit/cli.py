"""Command-line interface.

Exit codes for ``run``: 0 when every model estimated, 2 when some models were
skipped (I(2) guard or estimation failure), 1 on configuration or ingestion
errors.
"""
from __future__ import annotations

import sys
from concurrent.futures import ThreadPoolExecutor

import click

from .errors import ArdlkitError
from .mc import Dgp, generate, simulate_critical_values
from .pipeline import build_panel, load_manifest_and_config, run_model
from .report import render_reports
from .series import read_series_csv
from .unitroot import adf_test, dfgls_test, za_test


@click.group()
@click.version_option()
def main():
    """ARDL bounds-testing toolkit."""


@main.command()
@click.option("--manifest", "manifest_path", required=True,
              type=click.Path(exists=True), help="CSV manifest of series files.")
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True), help="YAML model configuration.")
@click.option("--out", "out_dir", required=True, type=click.Path(),
              help="Output directory for report files.")
@click.option("--format", "formats", multiple=True,
              type=click.Choice(["markdown", "csv", "json"]),
              help="Report format; may repeat.  Default: markdown.")
@click.option("--seed", type=int, default=0, show_default=True,
              help="Determinism anchor recorded with the run (the pipeline "
                   "itself draws no random numbers).")
@click.option("--jobs", type=int, default=1, show_default=True,
              help="Models estimated in parallel.")
@click.option("--figures/--no-figures", default=True, show_default=True,
              help="Render diagnostic figures next to the tables.")
def run(manifest_path, config_path, out_dir, formats, seed, jobs, figures):
    """Run every configured model and render the batch report."""
    del seed  # accepted for interface stability; estimation is deterministic
    try:
        manifest, configs = load_manifest_and_config(manifest_path, config_path)
        panel = build_panel(manifest, configs)
    except ArdlkitError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)

    cache: dict = {}
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(run_model, panel, cfg, manifest, cache)
                       for cfg in configs]
            sections = [f.result() for f in futures]
    else:
        sections = [run_model(panel, cfg, manifest, cache) for cfg in configs]
    sections.sort(key=lambda s: s.model_id)

    written = render_reports(sections, out_dir, formats=formats or ("markdown",),
                             panel=panel, figures=figures)
    for path in written:
        click.echo(str(path))
    skipped = [s for s in sections if s.status != "ok"]
    for s in skipped:
        click.echo(f"skipped {s.model_id}: {s.reason}", err=True)
    sys.exit(2 if skipped else 0)


@main.command()
@click.option("--series", "series_path", required=True, type=click.Path(exists=True),
              help="date,value CSV with one series.")
@click.option("--test", "test_name", required=True,
              type=click.Choice(["adf", "dfgls", "za"]))
@click.option("--case", default="constant", show_default=True,
              type=click.Choice(["none", "constant", "constant_trend"]))
@click.option("--max-lags", type=int, default=None)
@click.option("--lag-selection", default="aic", show_default=True,
              help="aic | bic | fixed(k)")
@click.option("--break-model", default="intercept", show_default=True,
              type=click.Choice(["intercept", "trend", "both"]),
              help="Break specification (za only).")
@click.option("--trim", type=float, default=0.15, show_default=True,
              help="Break-scan trimming fraction (za only).")
def unitroot(series_path, test_name, case, max_lags, lag_selection, break_model, trim):
    """Run one unit-root test on a CSV series."""
    try:
        ts = read_series_csv(series_path)
        if test_name == "adf":
            res = adf_test(ts.values, case=case, max_lags=max_lags,
                           lag_selection=lag_selection)
        elif test_name == "dfgls":
            res = dfgls_test(ts.values, case=case, max_lags=max_lags,
                             lag_selection=lag_selection)
        else:
            res = za_test(ts.values, break_model=break_model, max_lags=max_lags,
                          trim=trim, lag_selection=lag_selection, dates=ts.dates)
    except ArdlkitError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)

    click.echo(f"test: {res.test}  case: {res.case}  lags: {res.lags_used}")
    click.echo(f"statistic: {res.statistic:.4f}")
    for level in (1, 5, 10):
        mark = "reject" if res.rejects_at(level) else "fail to reject"
        click.echo(f"  {level:>2}%: cv {res.critical_values[level]:.3f}  {mark}")
    if res.break_index is not None:
        where = res.break_date if res.break_date is not None else res.break_index
        click.echo(f"break after: {where} (model {res.break_model})")


@main.command()
@click.option("--dgp", "kind", required=True, help="DGP kind, e.g. random_walk.")
@click.option("--T", "nobs", type=int, required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--stream", type=int, default=0, show_default=True)
@click.option("--param", "params", multiple=True, metavar="NAME=VALUE",
              help="DGP parameter; may repeat (e.g. --param rho=0.5).")
@click.option("--out", "out_path", type=click.Path(), default=None,
              help="Write date,value CSV(s); bivariate DGPs get a _x suffix "
                   "for the regressor.  Default: print to stdout.")
def simulate(kind, nobs, seed, stream, params, out_path):
    """Draw one realization of a synthetic data-generating process."""
    parsed = {}
    for item in params:
        name, _, value = item.partition("=")
        try:
            parsed[name] = float(value)
        except ValueError:
            click.echo(f"error: bad --param {item!r}", err=True)
            sys.exit(1)
    if "tau" in parsed:
        parsed["tau"] = int(parsed["tau"])
    if "phi" in parsed:
        parsed["phi"] = [parsed["phi"]]
    if "beta" in parsed:
        parsed["beta"] = [parsed["beta"]]
    try:
        out = generate(Dgp(kind, nobs, seed, parsed), stream=stream)
    except ArdlkitError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    series = out if isinstance(out, tuple) else (out,)

    def dump(ts, fh):
        fh.write("date,value\n")
        for d, v in zip(ts.dates, ts.values):
            fh.write(f"{d.isoformat()},{float(v)!r}\n")

    if out_path is None:
        import io

        for ts in series:
            buf = io.StringIO()
            dump(ts, buf)
            click.echo(f"# {ts.name}")
            click.echo(buf.getvalue(), nl=False)
    else:
        from pathlib import Path

        base = Path(out_path)
        for i, ts in enumerate(series):
            path = base if i == 0 else base.with_name(base.stem + "_x" + base.suffix)
            with open(path, "w") as fh:
                dump(ts, fh)
            click.echo(str(path))


@main.command()
@click.option("--test", "test_name", required=True,
              type=click.Choice(["adf", "dfgls", "za", "bounds"]))
@click.option("--T", "nobs", type=int, default=200, show_default=True)
@click.option("--reps", type=int, required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--case", default="constant", show_default=True)
@click.option("--break-model", default="intercept", show_default=True)
@click.option("--trim", type=float, default=0.15, show_default=True)
@click.option("--k", type=int, default=1, show_default=True,
              help="Number of dynamic regressors (bounds only).")
@click.option("--bounds-case", default="III", show_default=True)
@click.option("--bounds-kind", default="I1", show_default=True,
              type=click.Choice(["I0", "I1"]),
              help="Regressor integration order giving the lower or upper bound.")
@click.option("--lag-selection", default="fixed(0)", show_default=True)
def critvals(test_name, nobs, reps, seed, case, break_model, trim, k,
             bounds_case, bounds_kind, lag_selection):
    """Simulate critical values for one test by seeded Monte Carlo."""
    options = {"lag_selection": lag_selection}
    if test_name in ("adf", "dfgls"):
        options["case"] = case
    elif test_name == "za":
        options.update(break_model=break_model, trim=trim)
    else:
        options.update(k=k, bounds_case=bounds_case, bounds_kind=bounds_kind)
    result = simulate_critical_values(test_name, nobs, reps, seed, **options)
    click.echo(f"test: {test_name}  T: {nobs}  replications: {reps}  seed: {seed}")
    for level in (1, 5, 10):
        q = result["quantiles"][level]
        click.echo(f"  {level:>2}%: {q['value']:.4f}  (mc se {q['mc_se']:.4f})")


if __name__ == "__main__":
    main()
