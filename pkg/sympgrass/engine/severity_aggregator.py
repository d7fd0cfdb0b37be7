# sympgrass/engine/severity_aggregator.py
# Threshold checks → pass/fail. Only CRITICAL issues fail a trial;
# warnings are collected into the report and never change the verdict.

from dataclasses import dataclass, field


@dataclass
class Check:
    name: str
    value: float
    limit: float
    critical: bool = True

    @property
    def ok(self) -> bool:
        # NaN compares false, so it fails
        return bool(self.value <= self.limit)

    def describe(self) -> str:
        return f"{self.name}: {self.value:.3e} exceeds {self.limit:.1e}"


@dataclass
class TrialChecks:
    checks: list = field(default_factory=list)
    critical: list = field(default_factory=list)
    warning: list = field(default_factory=list)

    def check(self, name: str, value: float, limit: float, critical: bool = True) -> float:
        self.checks.append(Check(name, float(value), float(limit), critical))
        return float(value)

    def fail(self, message: str) -> None:
        self.critical.append(message)

    def warn(self, message: str) -> None:
        self.warning.append(message)


def aggregate_validation_results(results: TrialChecks) -> dict:
    """
    Aggregates threshold checks into a pass/fail decision.

    Only CRITICAL issues fail the trial.
    Warnings are informational only.
    """
    critical = list(results.critical)
    warning = list(results.warning)
    for c in results.checks:
        if not c.ok:
            (critical if c.critical else warning).append(c.describe())

    return {
        "decision": "fail" if critical else "pass",
        "critical": critical,
        "warning": warning,
    }
