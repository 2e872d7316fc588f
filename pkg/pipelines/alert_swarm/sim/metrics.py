"""
Alert Swarm - Detection Metrics
Per-tick metric rows, final detection statistics and multi-seed summaries.

Confusion matrices count (honest observer, labelled subject) pairs: rows are
the subject's current profile kind, columns the ThreatLevel assigned.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from ..core.model import ThreatLevel
from .profiles import ADVERSARIAL_KINDS, PROFILE_ORDER, ProfileKind
from .world import World

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
FORMATS = ('csv', 'json')


def _cm_column(kind: ProfileKind, level: ThreatLevel) -> str:
    return f"cm_{kind.column}_{level.value.lower()}"


COLUMNS: Tuple[str, ...] = (
    ('tick',)
    + tuple(f"mean_risk_{k.column}" for k in PROFILE_ORDER)
    + ('messages', 'responses', 'report_requests',
       'mean_domain_size', 'mean_range', 'mean_luciferin', 'mean_kappa', 'mean_alertness')
    + tuple(f"{stat}_{k.column}" for k in ADVERSARIAL_KINDS for stat in ('tp', 'fp', 'fn', 'tn'))
    + tuple(_cm_column(k, level) for k in PROFILE_ORDER for level in ThreatLevel)
    + ('mean_queries_near_responsive_liar', 'mean_queries_adversary_free')
)


def _mean(values: Sequence[float]) -> float:
    return float(np.mean(values)) if len(values) else float('nan')


def tick_metrics(world: World) -> Dict[str, Any]:
    """Metric row for the tick that produced `world`."""
    agents = world.agents
    row: Dict[str, Any] = {'tick': int(world.tick) - 1}

    for kind in PROFILE_ORDER:
        row[f"mean_risk_{kind.column}"] = _mean([a.risk for a in agents if a.kind is kind])

    row['messages'] = world.stats.messages
    row['responses'] = world.stats.responses
    row['report_requests'] = world.stats.report_requests
    row['mean_domain_size'] = _mean([len(a.domain) for a in agents])
    row['mean_range'] = _mean([a.luciferin.r_d for a in agents])
    row['mean_luciferin'] = _mean([a.luciferin.g for a in agents])
    row['mean_kappa'] = _mean(world.stats.kappas)
    row['mean_alertness'] = _mean([a.alertness.rank for a in agents])

    cm = {kind: {level: 0 for level in ThreatLevel} for kind in PROFILE_ORDER}
    for observer in agents:
        if observer.kind is not ProfileKind.HONEST:
            continue
        for subject, level in observer.labels.items():
            cm[agents[subject].kind][level] += 1

    total = sum(sum(r.values()) for r in cm.values())
    for kind in ADVERSARIAL_KINDS:
        expected = kind.expected_level
        tp = cm[kind][expected]
        fn = sum(cm[kind].values()) - tp
        fp = sum(cm[other][expected] for other in PROFILE_ORDER if other is not kind)
        row[f"tp_{kind.column}"] = tp
        row[f"fp_{kind.column}"] = fp
        row[f"fn_{kind.column}"] = fn
        row[f"tn_{kind.column}"] = total - tp - fp - fn
    for kind in PROFILE_ORDER:
        for level in ThreatLevel:
            row[_cm_column(kind, level)] = cm[kind][level]

    near, free = _query_groups(world)
    elapsed = max(1, int(world.tick))
    row['mean_queries_near_responsive_liar'] = _mean([agents[a].queries_sent / elapsed for a in near])
    row['mean_queries_adversary_free'] = _mean([agents[a].queries_sent / elapsed for a in free])
    return row


def _query_groups(world: World) -> Tuple[List[int], List[int]]:
    """Honest agents with a ResponsiveLiar within r_s, and those with no adversary in range."""
    r_s = world.config.gso.r_s
    distances = world.geometry.distances
    near, free = [], []
    for agent in world.agents:
        if agent.kind is not ProfileKind.HONEST:
            continue
        in_range = [
            other.kind for other in world.agents
            if other.agent_id != agent.agent_id and distances[agent.agent_id, other.agent_id] <= r_s
        ]
        if ProfileKind.RESPONSIVE_LIAR in in_range:
            near.append(agent.agent_id)
        if not any(kind.is_adversarial for kind in in_range):
            free.append(agent.agent_id)
    return near, free


class MetricsCollector:
    """Accumulates one row per tick."""

    def __init__(self):
        self.rows: List[Dict[str, Any]] = []

    def observe(self, world: World) -> None:
        self.rows.append(tick_metrics(world))

    def frame(self) -> pd.DataFrame:
        if not self.rows:
            return pd.DataFrame(columns=list(COLUMNS))
        return pd.DataFrame(self.rows, columns=list(COLUMNS))


# =============================================================================
# Final statistics
# =============================================================================

@dataclass
class DetectionMetricsConfig:
    """Configuration for detection statistics."""
    kinds: Tuple[ProfileKind, ...] = ADVERSARIAL_KINDS


class DetectionMetricsCalculator:
    """Final detection statistics from a per-tick metrics frame."""

    def __init__(self, config: DetectionMetricsConfig = None):
        self.config = config or DetectionMetricsConfig()

    def calculate_all_metrics(self, frame: pd.DataFrame) -> Dict[str, Any]:
        """
        Final statistics of one run.

        Everything is derived from integer columns, so re-reading a written
        metrics file reproduces these values exactly.
        """
        if frame.empty:
            return {
                'ticks': 0,
                'not_applicable': True,
                'precision': {k.value: None for k in self.config.kinds},
                'recall': {k.value: None for k in self.config.kinds},
                'ticks_to_stable': {k.value: None for k in self.config.kinds},
                'messages_per_tick': None,
                'confusion': {},
            }
        return {
            'ticks': int(len(frame)),
            'not_applicable': False,
            'precision': {k.value: self.precision(frame, k) for k in self.config.kinds},
            'recall': {k.value: self.recall(frame, k) for k in self.config.kinds},
            'ticks_to_stable': {k.value: self.ticks_to_stable(frame, k) for k in self.config.kinds},
            'messages_per_tick': self.messages_per_tick(frame),
            'confusion': self.confusion_matrix(frame),
        }

    def precision(self, frame: pd.DataFrame, kind: ProfileKind) -> Optional[float]:
        """
        Precision of the kind's expected label at the final tick.

        Formula: TP / (TP + FP)
        """
        last = frame.iloc[-1]
        tp, fp = int(last[f"tp_{kind.column}"]), int(last[f"fp_{kind.column}"])
        return tp / (tp + fp) if tp + fp else None

    def recall(self, frame: pd.DataFrame, kind: ProfileKind) -> Optional[float]:
        """
        Recall of the kind's expected label at the final tick.

        Formula: TP / (TP + FN)
        """
        last = frame.iloc[-1]
        tp, fn = int(last[f"tp_{kind.column}"]), int(last[f"fn_{kind.column}"])
        return tp / (tp + fn) if tp + fn else None

    def modal_labels(self, frame: pd.DataFrame, kind: ProfileKind) -> List[Optional[ThreatLevel]]:
        """Most frequent label honest observers gave the kind, per tick (severity order breaks ties)."""
        counts = frame[[_cm_column(kind, level) for level in ThreatLevel]].astype(int).to_numpy()
        levels = list(ThreatLevel)
        return [levels[int(np.argmax(row))] if row.sum() else None for row in counts]

    def ticks_to_stable(self, frame: pd.DataFrame, kind: ProfileKind) -> Optional[int]:
        """
        First tick from which the modal label equals the expected level
        through the end of the run; None if it never settles there.
        """
        modal = self.modal_labels(frame, kind)
        ticks = frame['tick'].astype(int).tolist()
        stable_from = None
        for tick, label in zip(ticks, modal):
            if label is kind.expected_level:
                if stable_from is None:
                    stable_from = tick
            else:
                stable_from = None
        return stable_from

    def messages_per_tick(self, frame: pd.DataFrame) -> float:
        return float(frame['messages'].astype(int).mean())

    def confusion_matrix(self, frame: pd.DataFrame, row: int = -1) -> Dict[str, Dict[str, int]]:
        """Nested {kind: {level: count}} matrix at one tick (final by default)."""
        record = frame.iloc[row]
        return {
            kind.value: {level.value: int(record[_cm_column(kind, level)]) for level in ThreatLevel}
            for kind in PROFILE_ORDER
        }

    def format_metrics_summary(self, metrics: Dict[str, Any]) -> str:
        """Format final statistics as readable summary."""
        if metrics['not_applicable']:
            return "Detection Summary\n" + "=" * 40 + "\nNo ticks simulated (not applicable)"
        lines = ["Detection Summary", "=" * 40]
        for kind in self.config.kinds:
            name = kind.value
            lines.append(
                f"{name:<16} precision {_fmt(metrics['precision'][name]):>6}  "
                f"recall {_fmt(metrics['recall'][name]):>6}  "
                f"stable@ {_fmt(metrics['ticks_to_stable'][name], '{}'):>5}"
            )
        lines += ["", f"Ticks:             {metrics['ticks']:,}",
                  f"Messages per tick: {metrics['messages_per_tick']:.2f}"]
        return "\n".join(lines)


def _fmt(value, pattern: str = '{:.3f}') -> str:
    return 'n/a' if value is None else pattern.format(value)


@dataclass
class MetricsRecord:
    """Per-tick series plus final statistics of one seeded run."""
    seed: int
    ticks: pd.DataFrame
    final: Dict[str, Any] = field(default_factory=dict)


# =============================================================================
# Files and summaries
# =============================================================================

def metrics_path(out_dir: Union[str, Path], seed: int, fmt: str = 'csv') -> Path:
    return Path(out_dir) / f"metrics_{seed}.{fmt}"


def write_metrics(frame: pd.DataFrame, path: Union[str, Path], fmt: str = 'csv') -> Path:
    """Write a per-tick frame; CSV has a fixed header, JSON is a records array."""
    path = Path(path)
    if fmt == 'csv':
        frame.to_csv(path, index=False, float_format='%.12g', lineterminator='\n')
    elif fmt == 'json':
        frame.to_json(path, orient='records', double_precision=12)
    else:
        raise ValueError(f"unknown metrics format {fmt!r}; expected one of {FORMATS}")
    logger.debug("Saved: %s", path)
    return path


def read_metrics(path: Union[str, Path]) -> pd.DataFrame:
    """Read a metrics file written by write_metrics, in either format."""
    path = Path(path)
    if path.suffix == '.csv':
        frame = pd.read_csv(path)
    elif path.suffix == '.json':
        frame = pd.read_json(path, orient='records', convert_dates=False)
    else:
        raise ValueError(f"unsupported metrics file {path}")
    return frame.reindex(columns=list(COLUMNS))


def seed_of(path: Union[str, Path]) -> int:
    """Seed encoded in a metrics_<seed>.<fmt> file name."""
    stem = Path(path).stem
    if not stem.startswith('metrics_'):
        raise ValueError(f"not a metrics file: {path}")
    return int(stem[len('metrics_'):])


def _mean_stdev(values: Sequence[Optional[float]]) -> Dict[str, Optional[float]]:
    defined = [v for v in values if v is not None]
    if not defined:
        return {'mean': None, 'stdev': None}
    return {'mean': float(np.mean(defined)), 'stdev': float(np.std(defined, ddof=0))}


def summarize_runs(
    frames: Mapping[int, pd.DataFrame],
    failed: Sequence[Mapping[str, Any]] = (),
) -> Dict[str, Any]:
    """
    Aggregate per-seed frames into the versioned summary document.

    Stdev is the population standard deviation; statistics no run defines
    are null. `failed` lists seeds that produced no frame.
    """
    calculator = DetectionMetricsCalculator()
    runs, confusion = [], {}
    for seed in sorted(frames):
        stats = calculator.calculate_all_metrics(frames[seed])
        confusion[str(seed)] = stats.pop('confusion')
        runs.append({'seed': int(seed), **stats})

    kinds = [k.value for k in calculator.config.kinds]
    aggregate = {
        metric: {name: _mean_stdev([run[metric][name] for run in runs]) for name in kinds}
        for metric in ('precision', 'recall', 'ticks_to_stable')
    }
    aggregate['messages_per_tick'] = _mean_stdev([run['messages_per_tick'] for run in runs])
    return {
        'schema_version': SCHEMA_VERSION,
        'seeds': [int(s) for s in sorted(frames)],
        'runs': runs,
        'aggregate': aggregate,
        'confusion': confusion,
        'failed': [dict(f) for f in failed],
    }
