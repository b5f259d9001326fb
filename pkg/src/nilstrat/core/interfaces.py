from abc import ABC, abstractmethod
from typing import Optional, Protocol, runtime_checkable

import numpy as np

from nilstrat.core.models import SuiteMetrics


class BaseSuite(ABC):
    """A randomized property check run against one algebra bundle"""

    @property
    @abstractmethod
    def suite_id(self) -> str:
        """Unique suite identifier used in reports"""
        pass

    @property
    def description(self) -> str:
        return ""

    @abstractmethod
    def not_applicable_reason(self, bundle) -> Optional[str]:
        """None when the suite applies to ``bundle``"""
        pass

    @abstractmethod
    def run(self, bundle, trials: int, seed: int) -> SuiteMetrics:
        pass


@runtime_checkable
class FunctionalSampler(Protocol):
    def functional(self, rng: np.random.Generator, m: int):
        ...

    def functional_in(self, rng: np.random.Generator, functionals):
        ...

    def group_element(self, rng: np.random.Generator, m: int, factors: int, bound: int):
        ...
