"""
Alert Swarm - Experiment Orchestrator
Coordinates seeded runs and writes their outputs.

Features:
- Run one or many seeds, in a process pool when more than one worker is allowed
- Track per-seed status; a failing seed never aborts the others
- Write one metrics file per seed and a versioned summary.json
- Re-aggregate an existing metrics directory
"""

import json
import logging
import os
import time
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import pandas as pd

from .config import WorldConfig
from .sim.experiment import run_experiment
from .sim.metrics import FORMATS, MetricsRecord, metrics_path, read_metrics, seed_of, summarize_runs, write_metrics

logger = logging.getLogger(__name__)

SUMMARY_FILE = 'summary.json'


class RunStatus(Enum):
    """Seed run status."""
    PENDING = 'pending'
    RUNNING = 'running'
    COMPLETED = 'completed'
    FAILED = 'failed'


@dataclass
class SeedRunResult:
    """Result of one seeded run."""
    seed: int
    status: RunStatus = RunStatus.PENDING
    ticks: int = 0
    output_path: Optional[str] = None
    error: Optional[str] = None
    duration_sec: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        result = asdict(self)
        result['status'] = self.status.value
        return result


@dataclass(frozen=True)
class RunManifest:
    """What a `run` invocation asks for."""
    config_path: Path
    seeds: Tuple[int, ...]
    out_dir: Path
    fmt: str = 'csv'
    workers: Optional[int] = None

    def __post_init__(self):
        if not self.seeds:
            raise ValueError("at least one seed is required")
        if self.fmt not in FORMATS:
            raise ValueError(f"unknown format {self.fmt!r}; expected one of {FORMATS}")
        if self.workers is not None and self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")


def parse_seeds(value: str, base_seed: int) -> Tuple[int, ...]:
    """
    Seed list from a --seeds argument.

    "N" means base_seed .. base_seed+N-1; a comma-separated list is taken
    literally.
    """
    text = value.strip()
    if ',' in text:
        seeds = tuple(int(part) for part in text.split(',') if part.strip())
    else:
        count = int(text)
        if count < 1:
            raise ValueError(f"seed count must be >= 1, got {count}")
        seeds = tuple(base_seed + k for k in range(count))
    if not seeds:
        raise ValueError("at least one seed is required")
    if len(set(seeds)) != len(seeds):
        raise ValueError(f"duplicate seeds in {value!r}")
    for seed in seeds:
        if not 0 <= seed < 2 ** 64:
            raise ValueError(f"seed {seed} is not a 64-bit unsigned integer")
    return seeds


def _simulate(config: WorldConfig) -> MetricsRecord:
    return run_experiment(config)


def _timed_simulate(config: WorldConfig) -> Tuple[MetricsRecord, float]:
    """Run one seed and measure it where it runs, so pooled seeds time only themselves."""
    started = time.perf_counter()
    record = _simulate(config)
    return record, time.perf_counter() - started


class ExperimentOrchestrator:
    """
    Orchestrates seeded experiment runs.

    Example:
        orchestrator = ExperimentOrchestrator(config, 'results/', workers=4)
        results = orchestrator.run_seeds([7, 8, 9])
        orchestrator.write_summary()
    """

    def __init__(
        self,
        config: WorldConfig,
        out_dir: Union[str, Path],
        fmt: str = 'csv',
        workers: Optional[int] = None,
    ):
        if fmt not in FORMATS:
            raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
        self.config = config
        self.out_dir = Path(out_dir)
        self.fmt = fmt
        self.workers = workers
        self.results: Dict[int, SeedRunResult] = {}
        self.frames: Dict[int, pd.DataFrame] = {}

    def run_seeds(self, seeds: Sequence[int]) -> List[SeedRunResult]:
        """Run every seed; outputs are written in seed order by this process."""
        os.makedirs(self.out_dir, exist_ok=True)
        workers = self.workers or min(len(seeds), os.cpu_count() or 1)
        logger.info("=" * 60)
        logger.info("Alert Swarm: %d seed(s), %d worker(s) -> %s", len(seeds), workers, self.out_dir)
        logger.info("=" * 60)

        for seed in seeds:
            self.results[seed] = SeedRunResult(seed=seed, status=RunStatus.RUNNING)

        if workers == 1:
            for seed in seeds:
                started = time.perf_counter()
                try:
                    record, elapsed = _timed_simulate(self.config.with_seed(seed))
                except Exception as exc:
                    self._fail(seed, exc, time.perf_counter() - started)
                    continue
                self._finish(seed, record, elapsed)
        else:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                futures = {seed: pool.submit(_timed_simulate, self.config.with_seed(seed)) for seed in seeds}
                for seed in seeds:
                    try:
                        record, elapsed = futures[seed].result()
                    except Exception as exc:
                        # a failed worker reports no timing
                        self._fail(seed, exc, 0.0)
                        continue
                    self._finish(seed, record, elapsed)

        return [self.results[seed] for seed in seeds]

    def _finish(self, seed: int, record: MetricsRecord, elapsed: float) -> None:
        result = self.results[seed]
        path = metrics_path(self.out_dir, seed, self.fmt)
        try:
            write_metrics(record.ticks, path, self.fmt)
        except OSError as exc:
            self._fail(seed, OSError(f"cannot write {path}: {exc.strerror or exc}"), elapsed)
            return
        result.status = RunStatus.COMPLETED
        result.ticks = record.final['ticks']
        result.output_path = str(path)
        result.duration_sec = elapsed
        self.frames[seed] = record.ticks
        logger.info("[seed %d] Completed %d ticks in %.2fs -> %s", seed, result.ticks, elapsed, path)

    def _fail(self, seed: int, exc: BaseException, elapsed: float) -> None:
        result = self.results[seed]
        result.status = RunStatus.FAILED
        result.error = str(exc)
        result.duration_sec = elapsed
        logger.error("[seed %d] Run failed: %s", seed, exc)
        logger.error("".join(traceback.format_exception(type(exc), exc, exc.__traceback__)))

    def build_summary(self) -> Dict[str, Any]:
        failed = [
            {'seed': r.seed, 'error': r.error}
            for r in sorted(self.results.values(), key=lambda r: r.seed)
            if r.status == RunStatus.FAILED
        ]
        return summarize_runs(self.frames, failed)

    def write_summary(self) -> Path:
        """Write summary.json once every seed has finished."""
        return write_summary(self.build_summary(), self.out_dir / SUMMARY_FILE)

    @property
    def succeeded(self) -> bool:
        return bool(self.results) and all(r.status == RunStatus.COMPLETED for r in self.results.values())

    def get_summary(self) -> Dict[str, Any]:
        """Orchestrator counters."""
        results = list(self.results.values())
        return {
            'total_runs': len(results),
            'completed_runs': sum(1 for r in results if r.status == RunStatus.COMPLETED),
            'failed_runs': sum(1 for r in results if r.status == RunStatus.FAILED),
            'total_ticks': sum(r.ticks for r in results),
        }


def write_summary(summary: Dict[str, Any], path: Union[str, Path]) -> Path:
    """Serialize a summary document; key order and spacing are fixed."""
    path = Path(path)
    path.write_text(json.dumps(summary, sort_keys=True, indent=2) + '\n', encoding='utf-8')
    logger.info("Saved: %s", path)
    return path


def load_directory(in_dir: Union[str, Path]) -> Dict[int, pd.DataFrame]:
    """Read every metrics_<seed>.{csv,json} file under `in_dir`."""
    in_dir = Path(in_dir)
    if not in_dir.is_dir():
        raise FileNotFoundError(f"metrics directory not found: {in_dir}")
    frames: Dict[int, pd.DataFrame] = {}
    for path in sorted(in_dir.glob('metrics_*')):
        if path.suffix.lstrip('.') not in FORMATS:
            continue
        seed = seed_of(path)
        if seed in frames:
            raise ValueError(f"seed {seed} has more than one metrics file in {in_dir}")
        frames[seed] = read_metrics(path)
    if not frames:
        raise FileNotFoundError(f"no metrics files in {in_dir}")
    return frames


def report_directory(in_dir: Union[str, Path], out: Optional[Union[str, Path]] = None) -> Tuple[Path, Dict[str, Any]]:
    """Re-aggregate an existing metrics directory into a summary.json."""
    frames = load_directory(in_dir)
    summary = summarize_runs(frames)
    target = Path(out) if out is not None else Path(in_dir) / SUMMARY_FILE
    return write_summary(summary, target), summary
