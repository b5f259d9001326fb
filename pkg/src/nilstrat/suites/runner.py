"""Runs every property suite against one bundle."""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Tuple, Type

import structlog

from nilstrat.core.models import SuiteMetrics
from nilstrat.suites.base import EnhancedBaseSuite, SuiteContext
from nilstrat.suites.orbits import GenericAgreementSuite, GenericitySuite, OrbitInvarianceSuite
from nilstrat.suites.propositions import GradSuite, IntermSuite, JumpConcatSuite, LemmaObvSuite, Main2Suite

logger = structlog.get_logger()

SUITES: Tuple[Type[EnhancedBaseSuite], ...] = (
    GradSuite,
    JumpConcatSuite,
    LemmaObvSuite,
    IntermSuite,
    Main2Suite,
    OrbitInvarianceSuite,
    GenericitySuite,
    GenericAgreementSuite,
)


@dataclass
class SelftestResult:
    trials: int
    seed: int
    suites: List[SuiteMetrics] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(metrics.passed for metrics in self.suites)

    def suite(self, suite_id: str) -> SuiteMetrics:
        return next(metrics for metrics in self.suites if metrics.suite_id == suite_id)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "trials": self.trials,
            "seed": self.seed,
            "passed": self.passed,
            "suites": [metrics.to_dict() for metrics in self.suites],
        }


def run_selftest(bundle, trials: int, seed: int, context: SuiteContext) -> SelftestResult:
    result = SelftestResult(trials=trials, seed=seed)
    for suite_class in SUITES:
        suite = suite_class(context)
        logger.info("Running suite", suite=suite.suite_id, trials=trials)
        result.suites.append(suite.run(bundle, trials, seed))
    logger.info(
        "Selftest finished",
        algebra=bundle.algebra.name,
        passed=result.passed,
        failing=[m.suite_id for m in result.suites if not m.passed],
    )
    return result
