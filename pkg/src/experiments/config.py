"""
Experiment configuration: one YAML record per run, parsed into frozen
dataclasses. Unknown keys are rejected and every error names the dotted
path of the offending field. Missing fields fall back to the
`experiments` section of configs/config.yaml.
"""
import dataclasses
import math
import os
import typing
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

from src.constants import Constants
from src.exceptions import ConfigError, DomainError
from src.spectra_closed import spectrum_from_record
from src.utilities.config_parser import load_config
from src.warp_profile.metric import METRIC_MODES, PROFILE_ROLES

BOUNDARY_SETUPS = ('both', 'mixed')
ORACLE_PROFILES = ('constant', 'bump', 'plateau')
PHI_SHAPES = ('one', 'collar')
VERIFY_CHECKS = (
    'cylinder',
    'oracle',
    'mixed',
    'monotone_lambda',
    'volume_element',
    'growth',
    'kokarev',
    'quasi_iso',
    'normalize_volume',
    'convergence',
)
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class MetricConfig:
    n: int
    k: int
    collar_length: float
    cross_section: Dict[str, Any]
    fiber: Dict[str, Any]
    mode: str = Constants.VOLUME_PRESERVING
    profile_role: str = Constants.ROLE_WARP
    bc: str = 'both'
    symmetric: Optional[bool] = None

    @property
    def is_symmetric(self) -> bool:
        """
        Profiles follow the distance to the Steklov boundary unless set.
        """
        return self.bc == 'both' if self.symmetric is None else self.symmetric

    def validate(self, path: str) -> None:
        if self.n < 1 or self.k < 1:
            raise ConfigError(f"{path}.n", f"dimensions must be >= 1, got n={self.n}, k={self.k}")
        if self.mode not in METRIC_MODES:
            raise ConfigError(f"{path}.mode", f"must be one of {METRIC_MODES}, got {self.mode!r}")
        if self.profile_role not in PROFILE_ROLES:
            raise ConfigError(f"{path}.profile_role", f"must be one of {PROFILE_ROLES}, got {self.profile_role!r}")
        if self.bc not in BOUNDARY_SETUPS:
            raise ConfigError(f"{path}.bc", f"must be one of {BOUNDARY_SETUPS}, got {self.bc!r}")
        if not self.collar_length > 0.0:
            raise ConfigError(f"{path}.collar_length", f"must be positive, got {self.collar_length}")
        for name in ('cross_section', 'fiber'):
            try:
                spectrum_from_record(getattr(self, name))
            except (DomainError, KeyError, TypeError, ValueError) as exc:
                raise ConfigError(f"{path}.{name}", f"invalid closed spectrum record ({exc})") from exc


@dataclass(frozen=True)
class SpectrumConfig(MetricConfig):
    epsilon: Optional[float] = None
    delta: Optional[float] = None
    top: float = 2.0
    count: Optional[int] = None

    def validate(self, path: str) -> None:
        super().validate(path)
        if not self.top > 0.0:
            raise ConfigError(f"{path}.top", f"must be positive, got {self.top}")
        if self.count is not None and self.count < 1:
            raise ConfigError(f"{path}.count", f"must be >= 1, got {self.count}")
        if self.epsilon is not None and self.delta is None:
            raise ConfigError(f"{path}.delta", "required when epsilon is set")


@dataclass(frozen=True)
class SweepConfig(MetricConfig):
    epsilon_list: Tuple[float, ...] = ()
    delta: Optional[float] = None
    unwarped: bool = False
    timing: bool = True

    @property
    def growth_hypotheses(self) -> bool:
        """
        True when the run is a volume-preserving sweep with n > k.
        """
        return self.mode == Constants.VOLUME_PRESERVING and self.n > self.k

    def validate(self, path: str) -> None:
        super().validate(path)
        if not self.epsilon_list:
            raise ConfigError(f"{path}.epsilon_list", "at least one epsilon is required")
        if any(b >= a for a, b in zip(self.epsilon_list, self.epsilon_list[1:])):
            raise ConfigError(f"{path}.epsilon_list", "must be strictly descending")
        if self.unwarped:
            return
        if self.delta is None:
            raise ConfigError(f"{path}.delta", "required field missing")
        low = self.k / self.n if self.growth_hypotheses else 0.0
        if not low < self.delta < 1.0:
            raise ConfigError(f"{path}.delta", f"must satisfy {low:.6g} < delta < 1, got {self.delta}")


@dataclass(frozen=True)
class KokarevConfig(SweepConfig):
    genus: int = 0

    def validate(self, path: str) -> None:
        super().validate(path)
        if self.n != 1 or self.k != 1:
            raise ConfigError(f"{path}.n", f"the surface bound needs n = k = 1, got n={self.n}, k={self.k}")
        if self.genus < 0:
            raise ConfigError(f"{path}.genus", f"must be >= 0, got {self.genus}")


@dataclass(frozen=True)
class OracleConfig:
    length: float = 1.0
    fiber_length: float = TWO_PI
    profile: str = 'bump'
    value: float = 1.0
    epsilon: Optional[float] = None
    delta: Optional[float] = None
    bc: str = 'both'
    n_t: int = 257
    n_theta: int = 128
    top: float = 4.0
    tol: float = 1.0e-2
    count: Optional[int] = None
    compare: bool = True

    def validate(self, path: str) -> None:
        if self.profile not in ORACLE_PROFILES:
            raise ConfigError(f"{path}.profile", f"must be one of {ORACLE_PROFILES}, got {self.profile!r}")
        if self.profile == 'plateau' and (self.epsilon is None or self.delta is None):
            raise ConfigError(f"{path}.epsilon", "plateau profiles need epsilon and delta")
        if self.bc not in BOUNDARY_SETUPS:
            raise ConfigError(f"{path}.bc", f"must be one of {BOUNDARY_SETUPS}, got {self.bc!r}")
        for name in ('length', 'fiber_length', 'value', 'top', 'tol'):
            if not getattr(self, name) > 0.0:
                raise ConfigError(f"{path}.{name}", f"must be positive, got {getattr(self, name)}")


@dataclass(frozen=True)
class QuasiIsoConfig:
    pairs: int = 20
    k_max: int = 5
    collar_length: float = 1.0
    fiber_length: float = TWO_PI
    max_scale: float = 1.3

    def validate(self, path: str) -> None:
        if self.pairs < 1:
            raise ConfigError(f"{path}.pairs", f"must be >= 1, got {self.pairs}")
        if self.k_max < 1:
            raise ConfigError(f"{path}.k_max", f"must be >= 1, got {self.k_max}")
        if not self.max_scale > 1.0:
            raise ConfigError(f"{path}.max_scale", f"must exceed 1, got {self.max_scale}")


@dataclass(frozen=True)
class NormalizeConfig:
    target: Optional[float] = None
    dim: int = 2
    phi: str = 'collar'
    flat_length: float = 0.3
    points: int = 1001

    def validate(self, path: str) -> None:
        if self.target is None or not self.target > 0.0:
            raise ConfigError(f"{path}.target", "a positive target volume is required")
        if self.dim < 1:
            raise ConfigError(f"{path}.dim", f"must be >= 1, got {self.dim}")
        if self.phi not in PHI_SHAPES:
            raise ConfigError(f"{path}.phi", f"must be one of {PHI_SHAPES}, got {self.phi!r}")
        if not 0.0 <= self.flat_length < 1.0:
            raise ConfigError(f"{path}.flat_length", f"must lie in [0, 1), got {self.flat_length}")
        if self.points < 3:
            raise ConfigError(f"{path}.points", f"must be >= 3, got {self.points}")


@dataclass(frozen=True)
class VerifyConfig:
    checks: Tuple[str, ...] = ()
    delta: float = 0.75
    epsilon_list: Tuple[float, ...] = (0.1, 0.05, 0.025, 0.0125)
    growth_ratio_min: float = 1.5
    envelope: float = Constants.GROWTH_ENVELOPE
    oracle_n_t: int = 257
    oracle_n_theta: int = 128
    quasi_pairs: int = 20

    @property
    def selected(self) -> Tuple[str, ...]:
        return self.checks or VERIFY_CHECKS

    def validate(self, path: str) -> None:
        unknown = [name for name in self.checks if name not in VERIFY_CHECKS]
        if unknown:
            raise ConfigError(f"{path}.checks", f"unknown checks {unknown}; known: {VERIFY_CHECKS}")
        if not 0.5 < self.delta < 1.0:
            raise ConfigError(f"{path}.delta", f"must satisfy 0.5 < delta < 1, got {self.delta}")


SECTIONS = {
    'spectrum': SpectrumConfig,
    'oracle': OracleConfig,
    'sweep': SweepConfig,
    'kokarev': KokarevConfig,
    'quasi_iso': QuasiIsoConfig,
    'normalize_volume': NormalizeConfig,
    'verify': VerifyConfig,
}
TOP_LEVEL = ('kind', 'output', 'mesh', 'seed', 'workers')


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    params: Any
    output: Optional[str] = None
    mesh: int = Constants.DEFAULT_MESH_ELEMENTS
    seed: int = 0
    workers: int = 1
    source: Optional[str] = field(default=None, compare=False)


def _type_name(annotation) -> str:
    return getattr(annotation, '__name__', str(annotation))


def _coerce(value, annotation, path: str):
    origin = typing.get_origin(annotation)
    args = typing.get_args(annotation)
    if origin is typing.Union:
        if value is None:
            return None
        inner = [arg for arg in args if arg is not type(None)]
        return _coerce(value, inner[0], path)
    if origin in (tuple, Tuple):
        if not isinstance(value, (list, tuple)):
            raise ConfigError(path, f"expected a list, got {value!r}")
        return tuple(_coerce(item, args[0], f"{path}[{index}]") for index, item in enumerate(value))
    if origin in (dict, Dict):
        if not isinstance(value, dict):
            raise ConfigError(path, f"expected a mapping, got {value!r}")
        return dict(value)
    if annotation is bool:
        if not isinstance(value, bool):
            raise ConfigError(path, f"expected true/false, got {value!r}")
        return value
    if annotation is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(path, f"expected an integer, got {value!r}")
        return value
    if annotation is float:
        if isinstance(value, str):
            # PyYAML reads 1e-3 without a decimal point as a string
            try:
                return float(value)
            except ValueError:
                pass
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(path, f"expected a number, got {value!r}")
        return float(value)
    if annotation is str:
        if not isinstance(value, str):
            raise ConfigError(path, f"expected a string, got {value!r}")
        return value
    raise ConfigError(path, f"unsupported field type {_type_name(annotation)}")


def build_section(cls, record, path: str):
    """
    Instantiate the dataclass `cls` from a mapping, checking field names and
    types, then run its `validate`.
    """
    if not isinstance(record, dict):
        raise ConfigError(path, f"expected a mapping, got {record!r}")
    hints = typing.get_type_hints(cls)
    names = [f.name for f in dataclasses.fields(cls)]
    unknown = sorted(set(record) - set(names))
    if unknown:
        raise ConfigError(f"{path}.{unknown[0]}", "unknown field")
    kwargs = {}
    for f in dataclasses.fields(cls):
        if f.name in record:
            kwargs[f.name] = _coerce(record[f.name], hints[f.name], f"{path}.{f.name}")
        elif f.default is dataclasses.MISSING and f.default_factory is dataclasses.MISSING:
            raise ConfigError(f"{path}.{f.name}", "required field missing")
    section = cls(**kwargs)
    section.validate(path)
    return section


def parse_experiment(record: Dict[str, Any], defaults: Optional[Dict[str, Any]] = None, source: str = None) -> ExperimentConfig:
    """
    Build an ExperimentConfig from a mapping such as

        kind: sweep
        output: output/sweep.csv
        sweep: {delta: 0.75, ...}

    `defaults` is the `experiments` section of the application config.
    """
    if not isinstance(record, dict):
        raise ConfigError('<root>', 'expected a mapping')
    kind = record.get('kind')
    if kind is None:
        raise ConfigError('kind', 'required field missing')
    if kind not in SECTIONS:
        raise ConfigError('kind', f"must be one of {tuple(SECTIONS)}, got {kind!r}")
    unknown = sorted(set(record) - set(TOP_LEVEL) - {kind})
    if unknown:
        raise ConfigError(unknown[0], 'unknown field')

    defaults = defaults or {}
    section = {**(defaults.get(kind) or {}), **(record.get(kind) or {})}
    params = build_section(SECTIONS[kind], section, kind)

    solver = load_config().get('solver') or {}
    top = {
        'output': _coerce(record.get('output'), Optional[str], 'output'),
        'mesh': _coerce(record.get('mesh', solver.get('mesh_elements', Constants.DEFAULT_MESH_ELEMENTS)), int, 'mesh'),
        'seed': _coerce(record.get('seed', 0), int, 'seed'),
        'workers': _coerce(record.get('workers', solver.get('workers', 1)), int, 'workers'),
    }
    if top['mesh'] < Constants.MIN_ELEMENTS:
        raise ConfigError('mesh', f"must be >= {Constants.MIN_ELEMENTS}, got {top['mesh']}")
    if top['workers'] < 1:
        raise ConfigError('workers', f"must be >= 1, got {top['workers']}")
    return ExperimentConfig(kind=kind, params=params, source=source, **top)


def load_experiment(config_file: str, defaults: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
    path = os.path.abspath(config_file)
    if not os.path.exists(path):
        raise ConfigError('--config', f"no such file {config_file}")
    record = load_config(path)
    if defaults is None:
        defaults = load_config().get('experiments') or {}
    return parse_experiment(record, defaults, source=path)


def with_overrides(cfg: ExperimentConfig, **overrides) -> ExperimentConfig:
    """
    Apply command-line flags. `top` and `count` go to the experiment
    section; `mesh`, `seed` and `out` to the run.
    """
    run = {}
    params = {}
    for name, value in overrides.items():
        if value is None:
            continue
        if name in ('top', 'count'):
            if not hasattr(cfg.params, name):
                raise ConfigError(f"{cfg.kind}.{name}", f"not applicable to {cfg.kind} runs")
            params[name] = value
        elif name == 'out':
            run['output'] = value
        else:
            run[name] = value
    if params:
        section = dataclasses.replace(cfg.params, **params)
        section.validate(cfg.kind)
        run['params'] = section
    updated = dataclasses.replace(cfg, **run)
    if updated.mesh < Constants.MIN_ELEMENTS:
        raise ConfigError('mesh', f"must be >= {Constants.MIN_ELEMENTS}, got {updated.mesh}")
    return updated
