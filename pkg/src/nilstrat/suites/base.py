import zlib
from abc import abstractmethod
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import structlog

from nilstrat.core.interfaces import BaseSuite, FunctionalSampler
from nilstrat.core.models import SuiteMetrics, TrialOutcome
from nilstrat.orbits.invariants import DEFAULT_POLICY, GenericPolicy
from nilstrat.orbits.sampling import DEFAULT_GROUP_BOUND, DEFAULT_GROUP_FACTORS, trial_rng

logger = structlog.get_logger()

TrialResult = Tuple[TrialOutcome, Optional[str]]


@dataclass(frozen=True)
class SuiteContext:
    """Sampling and e(n) settings shared by every suite of a selftest run"""
    sampler: FunctionalSampler
    policy: GenericPolicy = DEFAULT_POLICY
    group_bound: int = DEFAULT_GROUP_BOUND
    group_factors: int = DEFAULT_GROUP_FACTORS
    workers: int = 1


class EnhancedBaseSuite(BaseSuite):
    """Runs trials with per-trial seeded generators and collects metrics"""

    def __init__(self, context: SuiteContext):
        self.context = context
        self.sampler = context.sampler

    @property
    def stream(self) -> int:
        return zlib.crc32(self.suite_id.encode("utf-8"))

    def run(self, bundle, trials: int, seed: int) -> SuiteMetrics:
        metrics = SuiteMetrics(suite_id=self.suite_id)
        reason = self.not_applicable_reason(bundle)
        if reason:
            metrics.applicable = False
            metrics.reason = reason
            logger.info("Suite not applicable", suite=self.suite_id, reason=reason)
            return metrics

        self._prepare(bundle)
        if self.context.workers > 1:
            with ThreadPoolExecutor(max_workers=self.context.workers) as pool:
                results = list(pool.map(lambda index: self._guarded_trial(bundle, index, seed), range(trials)))
        else:
            results = [self._guarded_trial(bundle, index, seed) for index in range(trials)]

        for index, (outcome, detail, error) in enumerate(results):
            if error is not None:
                metrics.record_error(index, error)
            else:
                metrics.record(index, outcome, detail)
        self._finalize(metrics)
        logger.info(
            "Suite finished",
            suite=self.suite_id,
            algebra=bundle.algebra.name,
            trials=metrics.trials,
            informative=metrics.informative,
            failures=metrics.failures,
            errors=metrics.error_count,
        )
        return metrics

    def _guarded_trial(self, bundle, index: int, seed: int):
        try:
            outcome, detail = self._trial(bundle, trial_rng(seed, index, self.stream), index)
        except Exception as e:
            logger.error(f"Trial error in {self.suite_id}", trial=index, error=str(e))
            return None, None, f"{type(e).__name__}: {e}"
        if outcome is TrialOutcome.FAILED:
            logger.warning(f"Trial failed in {self.suite_id}", trial=index, detail=detail)
        return outcome, detail, None

    def _prepare(self, bundle) -> None:
        """Per-bundle precomputation, run once before the trials"""
        pass

    @abstractmethod
    def _trial(self, bundle, rng: np.random.Generator, index: int) -> TrialResult:
        pass

    def _finalize(self, metrics: SuiteMetrics) -> None:
        pass
