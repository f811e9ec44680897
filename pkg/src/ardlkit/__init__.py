"""ARDL bounds-testing toolkit for price panels."""

from .ardl import (
    ArdlFit,
    ArdlSpec,
    BoundsResult,
    EcmFit,
    bounds_test,
    fit_ardl,
    fit_ecm_with_dummies,
    select_lags,
    to_ecm,
)
from .linreg import (
    DesignMatrix,
    RegressionFit,
    information_criteria,
    ols_fit,
    t_statistics,
    wald_f_test,
)
from .mc import Dgp, McSummary, generate, simulate_critical_values, size_power_experiment
from .pipeline import (
    ModelConfig,
    ModelSection,
    build_panel,
    load_manifest_and_config,
    run_batch,
    run_model,
)
from .report import render_reports
from .series import (
    Panel,
    TimeSeries,
    Transform,
    align_panel,
    apply_transform,
    build_lag_design,
    read_series_csv,
)
from .unitroot import (
    IntegrationConfig,
    IntegrationOrder,
    UnitRootResult,
    adf_test,
    classify_integration,
    dfgls_test,
    za_test,
)

__version__ = "0.1.0"
