from src.experiments.config import (
    ExperimentConfig,
    KokarevConfig,
    MetricConfig,
    NormalizeConfig,
    OracleConfig,
    QuasiIsoConfig,
    SpectrumConfig,
    SweepConfig,
    VerifyConfig,
    load_experiment,
    parse_experiment,
    with_overrides,
)
from src.experiments.checks import (
    KokarevResult,
    QuasiIsoReport,
    kokarev_check,
    normalize_volume,
    quasi_isometry_ratio,
    quasi_iso_check,
)
from src.experiments.sweep import SweepRow, metric_spec, rows_to_frame, run_sweep
from src.experiments.verify import AcceptanceSuite, CheckResult, run_verify
