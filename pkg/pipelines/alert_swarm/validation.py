"""
Alert Swarm - Config Validation
Rule-based checks over a parsed WorldConfig.

Every rule runs; each violation becomes a ValidationIssue naming the field,
the offending value and the rule, so one pass reports everything wrong with
a config file.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Any, Dict, Iterable, List, Optional

from .core.model import AlertnessLevel, ThreatLevel
from .sim.profiles import PROFILE_ORDER

if TYPE_CHECKING:
    from .config import WorldConfig

logger = logging.getLogger(__name__)

MIX_TOLERANCE = 1e-9


class ValidationSeverity(Enum):
    """Severity levels for validation issues."""
    ERROR = "error"      # Blocks the run
    WARNING = "warning"  # Logged but continues


@dataclass(frozen=True)
class ValidationIssue:
    """A single violated rule."""
    field: str
    value: Any
    rule: str
    severity: ValidationSeverity = ValidationSeverity.ERROR

    def __str__(self) -> str:
        return f"{self.field}: {self.rule} (got {self.value!r})"

    def to_dict(self) -> Dict[str, Any]:
        return {
            'field': self.field,
            'value': repr(self.value),
            'rule': self.rule,
            'severity': self.severity.value,
        }


@dataclass
class ValidationReport:
    """Outcome of validating one config."""
    rules_checked: int = 0
    issues: List[ValidationIssue] = field(default_factory=list)

    @property
    def errors(self) -> List[ValidationIssue]:
        return [i for i in self.issues if i.severity == ValidationSeverity.ERROR]

    @property
    def warnings(self) -> List[ValidationIssue]:
        return [i for i in self.issues if i.severity == ValidationSeverity.WARNING]

    @property
    def passed(self) -> bool:
        return not self.errors

    def to_dict(self) -> Dict[str, Any]:
        return {
            'rules_checked': self.rules_checked,
            'passed': self.passed,
            'issues': [i.to_dict() for i in self.issues],
        }


class ConfigValidator:
    """
    Checks every WorldConfig invariant.

    Example:
        report = ConfigValidator().validate(config)
        if not report.passed:
            raise ValidationError(report.errors)
    """

    def __init__(self, min_agents: int = 2):
        self.min_agents = min_agents
        self._issues: List[ValidationIssue] = []
        self._checked = 0

    def validate(
        self,
        config: 'WorldConfig',
        parse_issues: Optional[Iterable[ValidationIssue]] = None,
    ) -> ValidationReport:
        """Run all rules; `parse_issues` (e.g. unknown keys) are folded in."""
        self._issues = list(parse_issues or [])
        self._checked = len(self._issues)

        self._check_world(config)
        self._check_mix(config)
        self._check_profiles(config)
        self._check_gso(config)
        self._check_thresholds(config)
        self._check_awareness(config)
        self._check_risk(config)
        self._check_exchange(config)
        self._check_shifts(config)

        report = ValidationReport(rules_checked=self._checked, issues=list(self._issues))
        for issue in report.warnings:
            logger.warning("config: %s", issue)
        logger.debug("config validation: %d rules, %d issues", report.rules_checked, len(report.issues))
        return report

    def _rule(self, ok: bool, field_name: str, value: Any, rule: str,
              severity: ValidationSeverity = ValidationSeverity.ERROR) -> None:
        self._checked += 1
        if not ok:
            self._issues.append(ValidationIssue(field_name, value, rule, severity))

    def _unit(self, value: float, field_name: str, label: str) -> None:
        self._rule(_finite(value) and 0.0 <= value <= 1.0, field_name, value, f"{label} must be in [0,1]")

    # -------------------------------------------------------------------------
    # Rules
    # -------------------------------------------------------------------------

    def _check_world(self, c: 'WorldConfig') -> None:
        self._rule(c.n_agents >= self.min_agents, 'n_agents', c.n_agents,
                   f"n_agents must be >= {self.min_agents}")
        self._rule(_finite(c.world_size) and c.world_size > 0, 'world_size', c.world_size,
                   "world_size must be > 0")
        self._rule(c.grid_cells >= 1, 'grid_cells', c.grid_cells, "grid_cells must be >= 1")
        self._rule(len(set(c.alphabet)) >= 2 and len(set(c.alphabet)) == len(c.alphabet),
                   'alphabet', list(c.alphabet), "alphabet needs at least 2 distinct symbols")
        self._rule(0 <= c.seed < 2 ** 64, 'seed', c.seed, "seed must be a 64-bit unsigned integer")
        self._rule(c.ticks >= 0, 'ticks', c.ticks, "ticks must be >= 0")

    def _check_mix(self, c: 'WorldConfig') -> None:
        for kind, fraction in c.profile_mix.items():
            self._unit(fraction, f"profile_mix.{kind.value}", "fraction")
        total = math.fsum(c.profile_mix.values())
        self._rule(abs(total - 1.0) <= MIX_TOLERANCE, 'profile_mix', total,
                   "profile_mix fractions must sum to 1")

    def _check_profiles(self, c: 'WorldConfig') -> None:
        respond_threshold = c.thresholds.respond_threshold
        for kind in PROFILE_ORDER:
            profile = c.profiles[kind]
            prefix = f"profiles.{kind.value}"
            self._unit(profile.respond_prob, f"{prefix}.respond_prob", "respond_prob")
            self._unit(profile.lie_prob, f"{prefix}.lie_prob", "lie_prob")
            if kind.is_truthful:
                self._rule(profile.lie_prob == 0.0, f"{prefix}.lie_prob", profile.lie_prob,
                           f"{kind.value} must have lie_prob 0")
            else:
                self._rule(profile.lie_prob > 0.0, f"{prefix}.lie_prob", profile.lie_prob,
                           f"{kind.value} never lies with lie_prob 0", ValidationSeverity.WARNING)
            # Off-side response rates make the expected label unreachable
            if kind.is_responsive:
                self._rule(profile.respond_prob > respond_threshold, f"{prefix}.respond_prob",
                           profile.respond_prob, f"{kind.value} should respond above respond_threshold",
                           ValidationSeverity.WARNING)
            else:
                self._rule(profile.respond_prob < respond_threshold, f"{prefix}.respond_prob",
                           profile.respond_prob, f"{kind.value} should respond below respond_threshold",
                           ValidationSeverity.WARNING)

    def _check_gso(self, c: 'WorldConfig') -> None:
        g = c.gso
        self._rule(_finite(g.rho) and 0.0 < g.rho < 1.0, 'gso.rho', g.rho, "rho must be in (0,1)")
        self._rule(_finite(g.gamma) and g.gamma > 0, 'gso.gamma', g.gamma, "gamma must be > 0")
        self._rule(_finite(g.beta) and g.beta > 0, 'gso.beta', g.beta, "beta must be > 0")
        self._rule(g.n_t >= 1, 'gso.n_t', g.n_t, "n_t must be >= 1")
        self._rule(_finite(g.r_s) and g.r_s > 0, 'gso.r_s', g.r_s, "r_s must be > 0")
        self._rule(g.s >= 1, 'gso.s', g.s, "s must be >= 1")
        self._rule(_finite(g.g0) and g.g0 >= 0, 'gso.g0', g.g0, "g0 must be >= 0")
        if _finite(g.r_s) and _finite(c.world_size):
            self._rule(g.r_s <= c.world_size * math.sqrt(2), 'gso.r_s', g.r_s,
                       "r_s exceeds the world diagonal", ValidationSeverity.WARNING)

    def _check_thresholds(self, c: 'WorldConfig') -> None:
        for name in ('respond_threshold', 'truth_threshold'):
            value = getattr(c.thresholds, name)
            self._rule(_finite(value) and 0.0 < value < 1.0, f"thresholds.{name}", value,
                       f"{name} must be in (0,1)")

    def _check_awareness(self, c: 'WorldConfig') -> None:
        a = c.awareness
        self._rule(_finite(a.alpha) and 0.0 < a.alpha <= 1.0, 'awareness.alpha', a.alpha,
                   "alpha must be in (0,1]")
        self._rule(a.window >= 1, 'awareness.window', a.window, "window must be >= 1")
        self._rule(a.staleness >= 0, 'awareness.staleness', a.staleness, "staleness must be >= 0")
        self._rule(a.subjects_per_query >= 1, 'awareness.subjects_per_query', a.subjects_per_query,
                   "subjects_per_query must be >= 1")
        self._rule(a.log_capacity >= 1, 'awareness.log_capacity', a.log_capacity,
                   "log_capacity must be >= 1")

    def _check_risk(self, c: 'WorldConfig') -> None:
        r = c.risk
        for level in ThreatLevel:
            self._unit(r.severity_weights.get(level, float('nan')),
                       f"risk.severity_weights.{level.value}", "severity weight")
        low, high = r.alertness_bands
        self._rule(_finite(low) and _finite(high) and 0.0 <= low < high <= 1.0,
                   'risk.alertness_bands', [low, high], "alertness bands must satisfy 0 <= low < high <= 1")
        self._rule(r.merge_period >= 1, 'risk.merge_period', r.merge_period, "merge_period must be >= 1")
        self._unit(r.peer_risk_weight, 'risk.peer_risk_weight', "peer_risk_weight")

    def _check_exchange(self, c: 'WorldConfig') -> None:
        for level in AlertnessLevel:
            period = c.exchange.query_periods.get(level, 0)
            self._rule(period >= 1, f"exchange.query_periods.{level.value}", period,
                       "query period must be >= 1")

    def _check_shifts(self, c: 'WorldConfig') -> None:
        for k, shift in enumerate(c.behavior_shifts):
            self._rule(shift.tick >= 0, f"behavior_shifts[{k}].tick", shift.tick, "tick must be >= 0")
            self._rule(shift.count >= 1, f"behavior_shifts[{k}].count", shift.count, "count must be >= 1")
            self._rule(shift.source is not shift.target, f"behavior_shifts[{k}]",
                       shift.source.value, "from and to must differ")


def _finite(value: Any) -> bool:
    return isinstance(value, (int, float)) and math.isfinite(value)
