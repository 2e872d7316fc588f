"""
Alert Swarm Configuration
World, exchange and risk knobs plus the YAML loader.

Config objects are frozen dataclasses. The shipped default lives next to
this module in config.yaml; missing keys take the dataclass defaults.
"""

import logging
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union

import yaml

from .core.anomaly import DEFAULT_SEVERITY_WEIGHTS, AlertnessBands, Thresholds
from .core.gso_domain import GsoParams
from .core.model import DEFAULT_ALPHABET, AlertnessLevel, ThreatLevel
from .errors import ParseError, ValidationError
from .sim.profiles import DEFAULT_PROFILES, AdversaryProfile, ProfileKind
from .validation import ConfigValidator, ValidationIssue

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = Path(__file__).with_name('config.yaml')

DEFAULT_MIX: Dict[ProfileKind, float] = {
    ProfileKind.HONEST: 0.7,
    ProfileKind.SILENT_TRUTHFUL: 0.1,
    ProfileKind.SILENT_LIAR: 0.1,
    ProfileKind.RESPONSIVE_LIAR: 0.1,
}

DEFAULT_QUERY_PERIODS: Dict[AlertnessLevel, int] = {
    AlertnessLevel.LOW: 4,
    AlertnessLevel.ELEVATED: 2,
    AlertnessLevel.HIGH: 1,
}


@dataclass(frozen=True)
class AwarenessConfig:
    """Belief exchange and behavior scoring."""
    alpha: float = 0.3             # EWMA weight of the newest outcome
    window: int = 20               # responsiveness window, ticks
    staleness: int = 30            # max observation age that still scores a response
    subjects_per_query: int = 3    # cells asked about per query round
    log_capacity: int = 64         # entries kept per interaction log


@dataclass(frozen=True)
class RiskConfig:
    """Risk scalarization and alertness."""
    severity_weights: Mapping[ThreatLevel, float] = field(
        default_factory=lambda: dict(DEFAULT_SEVERITY_WEIGHTS)
    )
    alertness_bands: Tuple[float, float] = (0.25, 0.6)
    merge_period: int = 1
    peer_risk_weight: float = 0.2

    @property
    def bands(self) -> AlertnessBands:
        return AlertnessBands(*self.alertness_bands)


@dataclass(frozen=True)
class ExchangeConfig:
    """How often agents query, per alertness level."""
    query_periods: Mapping[AlertnessLevel, int] = field(
        default_factory=lambda: dict(DEFAULT_QUERY_PERIODS)
    )
    probe_when_isolated: bool = True


@dataclass(frozen=True)
class BehaviorShift:
    """Switch `count` agents of kind `source` to kind `target` at `tick`."""
    tick: int
    source: ProfileKind
    target: ProfileKind
    count: int


@dataclass(frozen=True)
class WorldConfig:
    """Everything a seeded run depends on."""
    n_agents: int = 50
    world_size: float = 100.0
    grid_cells: int = 20           # cells per axis
    alphabet: Tuple[str, ...] = DEFAULT_ALPHABET
    profile_mix: Mapping[ProfileKind, float] = field(default_factory=lambda: dict(DEFAULT_MIX))
    profiles: Mapping[ProfileKind, AdversaryProfile] = field(default_factory=lambda: dict(DEFAULT_PROFILES))
    behavior_shifts: Tuple[BehaviorShift, ...] = ()
    seed: int = 7
    ticks: int = 300
    gso: GsoParams = GsoParams()
    thresholds: Thresholds = Thresholds()
    awareness: AwarenessConfig = AwarenessConfig()
    risk: RiskConfig = field(default_factory=RiskConfig)
    exchange: ExchangeConfig = field(default_factory=ExchangeConfig)

    @property
    def cell_size(self) -> float:
        return self.world_size / self.grid_cells

    def with_seed(self, seed: int) -> 'WorldConfig':
        return replace(self, seed=seed)

    def to_dict(self) -> Dict[str, Any]:
        """Plain nested dict in the YAML layout."""
        return {
            'n_agents': self.n_agents,
            'world_size': self.world_size,
            'grid_cells': self.grid_cells,
            'alphabet': list(self.alphabet),
            'profile_mix': {k.value: v for k, v in self.profile_mix.items()},
            'profiles': {
                k.value: {'respond_prob': p.respond_prob, 'lie_prob': p.lie_prob}
                for k, p in self.profiles.items()
            },
            'behavior_shifts': [
                {'tick': s.tick, 'from': s.source.value, 'to': s.target.value, 'count': s.count}
                for s in self.behavior_shifts
            ],
            'seed': self.seed,
            'ticks': self.ticks,
            'gso': {f.name: getattr(self.gso, f.name) for f in fields(self.gso)},
            'thresholds': {f.name: getattr(self.thresholds, f.name) for f in fields(self.thresholds)},
            'awareness': {f.name: getattr(self.awareness, f.name) for f in fields(self.awareness)},
            'risk': {
                'severity_weights': {k.value: v for k, v in self.risk.severity_weights.items()},
                'alertness_bands': list(self.risk.alertness_bands),
                'merge_period': self.risk.merge_period,
                'peer_risk_weight': self.risk.peer_risk_weight,
            },
            'exchange': {
                'query_periods': {k.value: v for k, v in self.exchange.query_periods.items()},
                'probe_when_isolated': self.exchange.probe_when_isolated,
            },
        }


# =============================================================================
# YAML loading
# =============================================================================

TOP_LEVEL_KEYS = frozenset({
    'n_agents', 'world_size', 'grid_cells', 'alphabet', 'profile_mix', 'profiles',
    'behavior_shifts', 'seed', 'ticks', 'gso', 'thresholds', 'awareness', 'risk', 'exchange',
})


class _Reader:
    """Typed access to a YAML tree; wrong node types raise ParseError."""

    def __init__(self, source: Optional[str]):
        self.source = source
        self.issues: List[ValidationIssue] = []

    def fail(self, key: str, message: str) -> ParseError:
        return ParseError(f"{key}: {message}", self.source)

    def mapping(self, node: Any, key: str) -> Dict[str, Any]:
        if node is None:
            return {}
        if not isinstance(node, dict):
            raise self.fail(key, f"expected a mapping, got {type(node).__name__}")
        return node

    def number(self, node: Any, key: str) -> float:
        if isinstance(node, bool) or not isinstance(node, (int, float)):
            raise self.fail(key, f"expected a number, got {node!r}")
        return float(node)

    def integer(self, node: Any, key: str) -> int:
        if isinstance(node, bool) or not isinstance(node, int):
            raise self.fail(key, f"expected an integer, got {node!r}")
        return node

    def boolean(self, node: Any, key: str) -> bool:
        if not isinstance(node, bool):
            raise self.fail(key, f"expected true/false, got {node!r}")
        return node

    def kind(self, node: Any, key: str) -> ProfileKind:
        try:
            return ProfileKind.parse(str(node))
        except ValueError as exc:
            raise self.fail(key, str(exc)) from None

    def unknown_keys(self, node: Mapping[str, Any], allowed, prefix: str = '') -> None:
        for key in node:
            if key not in allowed:
                self.issues.append(ValidationIssue(f"{prefix}{key}", node[key], "unknown key"))

    def section(self, node: Mapping[str, Any], key: str, default, prefix: str, skip=()):
        """Overlay a flat section onto a dataclass default, keeping its field types."""
        data = self.mapping(node.get(key), key)
        names = {f.name: f for f in fields(default) if f.name not in skip}
        self.unknown_keys(data, names, prefix)
        values = {}
        for name in names:
            if name not in data:
                continue
            current = getattr(default, name)
            path = f"{prefix}{name}"
            if isinstance(current, bool):
                values[name] = self.boolean(data[name], path)
            elif isinstance(current, int):
                values[name] = self.integer(data[name], path)
            else:
                values[name] = self.number(data[name], path)
        return replace(default, **values)


def parse_config(data: Any, source: Optional[str] = None) -> Tuple[WorldConfig, List[ValidationIssue]]:
    """
    Build a WorldConfig from a parsed YAML tree.

    Returns the config plus issues found while reading (unknown keys or
    unknown names); invariants are left to ConfigValidator.
    """
    r = _Reader(source)
    root = r.mapping(data, 'config')
    r.unknown_keys(root, TOP_LEVEL_KEYS)
    base = WorldConfig()
    values: Dict[str, Any] = {}

    for key in ('n_agents', 'grid_cells', 'seed', 'ticks'):
        if key in root:
            values[key] = r.integer(root[key], key)
    if 'world_size' in root:
        values['world_size'] = r.number(root['world_size'], 'world_size')
    if 'alphabet' in root:
        symbols = root['alphabet']
        if not isinstance(symbols, list) or not all(isinstance(s, str) for s in symbols):
            raise r.fail('alphabet', f"expected a list of strings, got {symbols!r}")
        values['alphabet'] = tuple(symbols)

    if 'profile_mix' in root:
        mix = {}
        for name, fraction in r.mapping(root['profile_mix'], 'profile_mix').items():
            try:
                kind = ProfileKind.parse(str(name))
            except ValueError:
                r.issues.append(ValidationIssue(f"profile_mix.{name}", fraction, "unknown profile kind"))
                continue
            mix[kind] = r.number(fraction, f"profile_mix.{name}")
        values['profile_mix'] = mix

    if 'profiles' in root:
        profiles = dict(base.profiles)
        for name, node in r.mapping(root['profiles'], 'profiles').items():
            try:
                kind = ProfileKind.parse(str(name))
            except ValueError:
                r.issues.append(ValidationIssue(f"profiles.{name}", node, "unknown profile kind"))
                continue
            profiles[kind] = r.section({name: node}, name, profiles[kind], f"profiles.{name}.", skip=("kind",))
        values['profiles'] = profiles

    if 'behavior_shifts' in root:
        shifts_node = root['behavior_shifts'] or []
        if not isinstance(shifts_node, list):
            raise r.fail('behavior_shifts', "expected a list")
        shifts = []
        for k, node in enumerate(shifts_node):
            path = f"behavior_shifts[{k}]"
            node = r.mapping(node, path)
            r.unknown_keys(node, {'tick', 'from', 'to', 'count'}, f"{path}.")
            for required in ('tick', 'from', 'to', 'count'):
                if required not in node:
                    raise r.fail(f"{path}.{required}", "missing")
            shifts.append(BehaviorShift(
                tick=r.integer(node['tick'], f"{path}.tick"),
                source=r.kind(node['from'], f"{path}.from"),
                target=r.kind(node['to'], f"{path}.to"),
                count=r.integer(node['count'], f"{path}.count"),
            ))
        values['behavior_shifts'] = tuple(shifts)

    values['gso'] = r.section(root, 'gso', base.gso, 'gso.')
    values['thresholds'] = r.section(root, 'thresholds', base.thresholds, 'thresholds.')
    values['awareness'] = r.section(root, 'awareness', base.awareness, 'awareness.')
    values['risk'] = _parse_risk(r, r.mapping(root.get('risk'), 'risk'), base.risk)
    values['exchange'] = _parse_exchange(r, r.mapping(root.get('exchange'), 'exchange'), base.exchange)

    return replace(base, **values), r.issues


def _parse_risk(r: _Reader, node: Mapping[str, Any], base: RiskConfig) -> RiskConfig:
    r.unknown_keys(node, {'severity_weights', 'alertness_bands', 'merge_period', 'peer_risk_weight'}, 'risk.')
    weights = dict(base.severity_weights)
    for name, value in r.mapping(node.get('severity_weights'), 'risk.severity_weights').items():
        try:
            level = ThreatLevel(str(name))
        except ValueError:
            r.issues.append(ValidationIssue(f"risk.severity_weights.{name}", value, "unknown threat level"))
            continue
        weights[level] = r.number(value, f"risk.severity_weights.{name}")

    bands = base.alertness_bands
    if 'alertness_bands' in node:
        raw = node['alertness_bands']
        if not isinstance(raw, list) or len(raw) != 2:
            raise r.fail('risk.alertness_bands', f"expected [low, high], got {raw!r}")
        bands = (r.number(raw[0], 'risk.alertness_bands[0]'), r.number(raw[1], 'risk.alertness_bands[1]'))

    return replace(
        base,
        severity_weights=weights,
        alertness_bands=bands,
        merge_period=r.integer(node['merge_period'], 'risk.merge_period') if 'merge_period' in node else base.merge_period,
        peer_risk_weight=(
            r.number(node['peer_risk_weight'], 'risk.peer_risk_weight')
            if 'peer_risk_weight' in node else base.peer_risk_weight
        ),
    )


def _parse_exchange(r: _Reader, node: Mapping[str, Any], base: ExchangeConfig) -> ExchangeConfig:
    r.unknown_keys(node, {'query_periods', 'probe_when_isolated'}, 'exchange.')
    periods = dict(base.query_periods)
    for name, value in r.mapping(node.get('query_periods'), 'exchange.query_periods').items():
        try:
            level = AlertnessLevel(str(name))
        except ValueError:
            r.issues.append(ValidationIssue(f"exchange.query_periods.{name}", value, "unknown alertness level"))
            continue
        periods[level] = r.integer(value, f"exchange.query_periods.{name}")
    probe = base.probe_when_isolated
    if 'probe_when_isolated' in node:
        probe = r.boolean(node['probe_when_isolated'], 'exchange.probe_when_isolated')
    return replace(base, query_periods=periods, probe_when_isolated=probe)


def check_config(config: WorldConfig, min_agents: int = 2, parse_issues=None) -> WorldConfig:
    """Validate `config`; raise ValidationError listing every violated rule."""
    report = ConfigValidator(min_agents=min_agents).validate(config, parse_issues)
    if not report.passed:
        raise ValidationError(report.errors)
    return config


def load_config(path: Union[str, Path] = DEFAULT_CONFIG_PATH) -> WorldConfig:
    """
    Read, parse and validate a YAML config file.

    Raises:
        ParseError: unreadable file, malformed YAML or wrong node types
        ValidationError: one or more invariants broken
    """
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as exc:
        raise ParseError(f"cannot read config: {exc.strerror or exc}", str(path)) from exc
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ParseError(f"malformed YAML: {exc}", str(path)) from exc

    config, issues = parse_config(data, source=str(path))
    check_config(config, parse_issues=issues)
    logger.info(
        "Loaded config %s: %d agents, %d ticks, seed %d",
        path, config.n_agents, config.ticks, config.seed,
    )
    return config
