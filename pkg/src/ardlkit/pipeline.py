"""End-to-end model runner: manifest/config loading, the per-model pipeline
(transforms, integration guard, break detection, lag selection, bounds test,
ECM estimation), and assembly of report sections.

A batch never dies on one bad model: estimation failures and the I(2) guard
mark the section as skipped with a reason and the run continues.
"""
from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
import yaml

from .ardl import ArdlSpec, BoundsResult, EcmFit, bounds_test, fit_ecm_with_dummies, select_lags
from .errors import ArdlkitError, I2VariableDetected, ParseError, UnknownVariable
from .series import Panel, TimeSeries, Transform, align_panel, apply_transform, read_series_csv
from .unitroot import IntegrationConfig, classify_integration, za_test

SIGNIFICANCE_CUTOFF = 0.10  # a coefficient counts as significant at 10% or better


@dataclass(frozen=True)
class SeriesSource:
    """One manifest row: where a series lives and how it enters models."""

    name: str
    path: Path
    frequency: str = "daily"
    transform: Transform = Transform("level")

    def load(self) -> TimeSeries:
        return read_series_csv(self.path, name=self.name, frequency=self.frequency)


@dataclass(frozen=True)
class DummyPolicy:
    """auto_za(model, trim) | explicit(dates) | none.

    Under auto_za a step dummy enters the model only when the break test
    rejects at ``level`` (searched breaks invalidate the bounds critical
    values, so an unsupported candidate break is not imposed).
    """

    kind: str = "none"
    break_model: str = "intercept"
    trim: float = 0.15
    level: int = 10
    dates: tuple[dt.date, ...] = ()

    def __post_init__(self):
        if self.kind not in ("auto_za", "explicit", "none"):
            raise ValueError(f"unknown dummy policy {self.kind!r}")
        object.__setattr__(self, "dates", tuple(self.dates))


@dataclass(frozen=True)
class ModelConfig:
    model_id: str
    dependent: str
    dynamic_regressors: tuple[str, ...] = ()
    exogenous: tuple[str, ...] = ()
    transforms: dict = field(default_factory=dict)  # overrides of manifest defaults
    case: str = "constant"
    p_max: int = 2
    q_max: int = 2
    criterion: str = "aic"
    bounds_case: str | None = None
    dummy_policy: DummyPolicy = DummyPolicy()
    sample: tuple[dt.date, dt.date] | None = None
    integration_test: str = "adf"
    conclusion_level: int = 5

    @property
    def variables(self) -> tuple[str, ...]:
        return (self.dependent,) + self.dynamic_regressors + self.exogenous


def _parse_date(value, where: str) -> dt.date:
    if isinstance(value, dt.date):
        return value
    try:
        return dt.date.fromisoformat(str(value))
    except ValueError as exc:
        raise ParseError(f"{where}: bad date {value!r}") from exc


def load_manifest(path) -> dict:
    """CSV manifest: name,path,frequency,transform (paths relative to the manifest)."""
    path = Path(path)
    import csv

    manifest: dict[str, SeriesSource] = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"name", "path"}
        if reader.fieldnames is None or not required <= set(reader.fieldnames):
            raise ParseError(f"{path}: manifest needs at least columns name,path")
        for lineno, row in enumerate(reader, start=2):
            name = row["name"].strip()
            if not name:
                raise ParseError(f"{path}:{lineno}: empty series name")
            if name in manifest:
                raise ParseError(f"{path}:{lineno}: duplicate series {name!r}")
            try:
                transform = Transform.parse(row.get("transform") or "level")
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from exc
            manifest[name] = SeriesSource(
                name=name,
                path=(path.parent / row["path"].strip()),
                frequency=(row.get("frequency") or "daily").strip(),
                transform=transform,
            )
    if not manifest:
        raise ParseError(f"{path}: empty manifest")
    return manifest


def _parse_dummy_policy(raw, where: str) -> DummyPolicy:
    if raw is None or raw == "none":
        return DummyPolicy("none")
    if raw == "auto_za":
        return DummyPolicy("auto_za")
    if isinstance(raw, dict):
        kind = raw.get("kind", "auto_za")
        if kind == "explicit":
            dates = tuple(_parse_date(d, where) for d in raw.get("dates", ()))
            return DummyPolicy("explicit", dates=dates)
        return DummyPolicy(
            kind,
            break_model=raw.get("break_model", "intercept"),
            trim=float(raw.get("trim", 0.15)),
            level=int(raw.get("level", 10)),
        )
    raise ParseError(f"{where}: bad dummy_policy {raw!r}")


def load_config(path, manifest: dict) -> list[ModelConfig]:
    """YAML model config: top-level ``defaults`` plus a ``models`` list."""
    path = Path(path)
    try:
        with open(path) as fh:
            doc = yaml.safe_load(fh)
    except yaml.YAMLError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    if not isinstance(doc, dict) or "models" not in doc:
        raise ParseError(f"{path}: expected a mapping with a 'models' list")

    defaults = doc.get("defaults") or {}
    sample = None
    if "sample" in doc and doc["sample"]:
        sample = (
            _parse_date(doc["sample"]["start"], str(path)),
            _parse_date(doc["sample"]["end"], str(path)),
        )

    configs: list[ModelConfig] = []
    seen: set[str] = set()
    for i, block in enumerate(doc["models"]):
        where = f"{path}:models[{i}]"
        if not isinstance(block, dict) or "model_id" not in block or "dependent" not in block:
            raise ParseError(f"{where}: each model needs model_id and dependent")
        model_id = str(block["model_id"])
        if model_id in seen:
            raise ParseError(f"{where}: duplicate model_id {model_id!r}")
        seen.add(model_id)

        def get(key, fallback):
            return block.get(key, defaults.get(key, fallback))

        transforms = {}
        for name, t in {**defaults.get("transforms", {}), **block.get("transforms", {})}.items():
            try:
                transforms[name] = Transform.parse(str(t))
            except ValueError as exc:
                raise ParseError(f"{where}: {exc}") from exc

        cfg = ModelConfig(
            model_id=model_id,
            dependent=str(block["dependent"]),
            dynamic_regressors=tuple(block.get("dynamic_regressors", ())),
            exogenous=tuple(block.get("exogenous", ())),
            transforms=transforms,
            case=get("case", "constant"),
            p_max=int(get("p_max", 2)),
            q_max=int(get("q_max", 2)),
            criterion=str(get("criterion", "aic")),
            bounds_case=get("bounds_case", None),
            dummy_policy=_parse_dummy_policy(get("dummy_policy", "none"), where),
            sample=sample,
            integration_test=str(get("integration_test", "adf")),
            conclusion_level=int(get("conclusion_level", 5)),
        )
        for name in cfg.variables:
            if name not in manifest:
                raise UnknownVariable(model_id, name)
        configs.append(cfg)
    if not configs:
        raise ParseError(f"{path}: no models defined")
    return configs


def load_manifest_and_config(manifest_path, config_path):
    manifest = load_manifest(manifest_path)
    configs = load_config(config_path, manifest)
    return manifest, configs


def build_panel(manifest: dict, configs, fill_policy: str = "forward_fill") -> Panel:
    """Load and align every series any model references."""
    names = sorted({n for cfg in configs for n in cfg.variables})
    series = [manifest[n].load() for n in names]
    starts = [ts.dates[0] for ts in series]
    ends = [ts.dates[-1] for ts in series]
    sample = configs[0].sample
    date_range = sample if sample else (min(starts), max(ends))
    return align_panel(series, date_range, fill_policy=fill_policy)


# --- report rows -----------------------------------------------------------


@dataclass(frozen=True)
class ReportCell:
    """One symbolic table cell plus the numbers behind it."""

    sign: str = ""  # "+", "-", "±" or ""
    stars: str = ""
    lag_count: int = 0
    estimates: tuple = ()

    @property
    def empty(self) -> bool:
        return self.sign == ""

    def long_run_text(self) -> str:
        return "" if self.empty else f"({self.sign}){self.stars}"

    def short_run_text(self) -> str:
        return "" if self.empty else f"({self.sign}){self.lag_count}{self.stars}"


def _aggregate_sign(values) -> str:
    """+ if all positive, - if all negative, ± otherwise."""
    if all(v > 0 for v in values):
        return "+"
    if all(v < 0 for v in values):
        return "-"
    return "±"


def _single_cell(estimate, p_value, stars) -> ReportCell:
    if p_value > SIGNIFICANCE_CUTOFF:
        return ReportCell(estimates=((estimate, p_value),))
    return ReportCell(
        sign="+" if estimate > 0 else "-",
        stars=stars,
        lag_count=1,
        estimates=((estimate, p_value),),
    )


def _lag_group_cell(rows) -> ReportCell:
    """Cell for a group of lag coefficients: (estimate, p, stars) triples."""
    significant = [(e, p, s) for e, p, s in rows if p <= SIGNIFICANCE_CUTOFF]
    if not significant:
        return ReportCell(estimates=tuple((e, p) for e, p, _ in rows))
    strongest = min(significant, key=lambda r: r[1])
    return ReportCell(
        sign=_aggregate_sign([e for e, _, _ in significant]),
        stars=strongest[2],
        lag_count=len(significant),
        estimates=tuple((e, p) for e, p, _ in rows),
    )


@dataclass(frozen=True)
class ModelSection:
    """Everything one model contributes to the run report."""

    model_id: str
    config: ModelConfig
    status: str  # ok | skipped
    reason: str = ""
    integration: dict = field(default_factory=dict)
    break_dates: dict = field(default_factory=dict)
    p: int | None = None
    q: int | None = None
    bounds: BoundsResult | None = None
    cointegrated: bool = False
    alpha: float | None = None
    alpha_stars: str = ""
    long_run: dict = field(default_factory=dict)  # row label -> ReportCell
    short_run: dict = field(default_factory=dict)
    nobs: int = 0
    sample: tuple = ()
    ecm: EcmFit | None = field(default=None, repr=False)


def prepare_model_panel(panel: Panel, config: ModelConfig, manifest: dict | None = None) -> Panel:
    """Apply each variable's transform and restrict to the model's variables."""
    columns = []
    for name in config.variables:
        transform = config.transforms.get(name)
        if transform is None and manifest is not None:
            transform = manifest[name].transform
        transform = transform or Transform("level")
        if transform.kind in ("lag", "first_difference"):
            raise ParseError(
                f"model {config.model_id!r}: per-variable ingestion transform for "
                f"{name!r} must be level or log"
            )
        columns.append((name, apply_transform(panel.column(name), transform)))
    return Panel(panel.dates, tuple(columns))


def run_model(panel: Panel, config: ModelConfig, manifest: dict | None = None,
              integration_cache: dict | None = None) -> ModelSection:
    """Execute the full pipeline for one model and package a report section."""
    try:
        return _run_model(panel, config, manifest, integration_cache)
    except I2VariableDetected as exc:
        return ModelSection(
            model_id=config.model_id, config=config, status="skipped",
            reason=str(exc),
            integration=getattr(exc, "integration", {}),
        )
    except ArdlkitError as exc:
        return ModelSection(
            model_id=config.model_id, config=config, status="skipped",
            reason=f"{type(exc).__name__}: {exc}",
        )


def _run_model(panel, config, manifest, integration_cache):
    mpanel = prepare_model_panel(panel, config, manifest)
    cache = integration_cache if integration_cache is not None else {}

    int_config = IntegrationConfig(test=config.integration_test, case=config.case
                                   if config.case != "none" else "constant")
    integration = {}
    for name in (config.dependent,) + config.dynamic_regressors:
        key = (name, int_config)
        if key not in cache:
            cache[key] = classify_integration(mpanel.column(name), int_config)
        integration[name] = cache[key].order
    i2 = sorted(n for n, order in integration.items() if order == "I2_or_higher")
    if i2:
        exc = I2VariableDetected(i2)
        exc.integration = integration
        raise exc

    # break detection feeding the step dummies
    dummies: list[tuple[str, dt.date]] = []
    break_dates: dict[str, object] = {}
    policy = config.dummy_policy
    if policy.kind == "auto_za":
        za_key = ("za", config.dependent, policy.break_model, policy.trim)
        if za_key not in cache:
            cache[za_key] = za_test(
                mpanel.column(config.dependent),
                break_model=policy.break_model,
                trim=policy.trim,
                dates=mpanel.dates,
            )
        za = cache[za_key]
        if za.rejects_at(policy.level):
            dummies.append((f"DU_{config.dependent}", za.break_date))
            break_dates[config.dependent] = za.break_date
    elif policy.kind == "explicit":
        for i, date in enumerate(policy.dates, start=1):
            dummies.append((f"DU{i}", date))
            break_dates[f"DU{i}"] = date

    template = ArdlSpec(
        dependent=config.dependent,
        dynamic_regressors=config.dynamic_regressors,
        exogenous=config.exogenous,
        case=config.case,
        dummies=tuple(dummies),
        bounds_case=config.bounds_case,
    )
    # q >= 1 so the error-correction form stays an exact reparameterization
    p, q = select_lags(panel=mpanel, spec_template=template,
                       p_max=config.p_max, q_max=max(config.q_max, 1),
                       criterion=config.criterion, q_min=1)
    spec = replace(template, p=p, q=q)

    bounds = bounds_test(mpanel, spec)
    level = config.conclusion_level
    cointegrated = bounds.conclusion_at(level) == "cointegrated"

    ecm = fit_ecm_with_dummies(mpanel, spec)
    table = ecm.short_run_table()

    # long-run block (only rendered when cointegrated)
    long_run: dict[str, ReportCell] = {}
    if cointegrated:
        for x in config.dynamic_regressors:
            est, se, t, pv, stars = ecm.theta[x]
            long_run[x] = _single_cell(est, pv, stars)
        for name in ("const", "trend"):
            if name in table.names:
                est, se, t, pv, stars = table.row(name)
                long_run[name] = _single_cell(est, pv, stars)
        for dname, _ in spec.dummies:
            est, se, t, pv, stars = table.row(dname)
            long_run[dname] = _single_cell(est, pv, stars)

    # short-run block: lag groups of differences, incl. the contemporaneous term
    short_run: dict[str, ReportCell] = {}
    own = [table.row(f"d.{config.dependent}.l{i}") for i in range(1, p)]
    if own:
        short_run["own_lags"] = _lag_group_cell([(e, pv, st) for e, se, t, pv, st in own])
    for x in config.dynamic_regressors:
        rows = [table.row(f"d.{x}.l{i}") for i in range(0, q)]
        short_run[x] = _lag_group_cell([(e, pv, st) for e, se, t, pv, st in rows])
    for w in config.exogenous:
        e, se, t, pv, st = table.row(w)
        short_run[w] = _single_cell(e, pv, st)
    for dname, _ in spec.dummies:
        e, se, t, pv, st = table.row(dname)
        short_run[dname] = _single_cell(e, pv, st)
    for name in ("const", "trend"):
        if name in table.names:
            e, se, t, pv, st = table.row(name)
            short_run[name] = _single_cell(e, pv, st)

    alpha_pv = _alpha_p_value(ecm)
    return ModelSection(
        model_id=config.model_id,
        config=config,
        status="ok",
        integration=integration,
        break_dates=break_dates,
        p=p, q=q,
        bounds=bounds,
        cointegrated=cointegrated,
        alpha=ecm.alpha,
        alpha_stars=_alpha_stars(alpha_pv),
        long_run=long_run,
        short_run=short_run,
        nobs=ecm.ardl.fit.nobs,
        sample=(mpanel.dates[0].isoformat(), mpanel.dates[-1].isoformat()),
        ecm=ecm,
    )


def _alpha_p_value(ecm: EcmFit) -> float:
    from scipy import stats as _st

    t = ecm.alpha / ecm.alpha_se if ecm.alpha_se > 0 else 0.0
    return float(2.0 * _st.t.sf(abs(t), ecm.df_resid))


def _alpha_stars(p_value: float) -> str:
    from .linreg import significance_stars

    return significance_stars(p_value)


def run_batch(panel: Panel, configs, manifest: dict | None = None) -> list[ModelSection]:
    """Run every model; sections come back sorted by model_id."""
    cache: dict = {}
    sections = [run_model(panel, cfg, manifest, cache) for cfg in configs]
    return sorted(sections, key=lambda s: s.model_id)
