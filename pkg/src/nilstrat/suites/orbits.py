"""Suites over whole coadjoint orbits and over the generic stratum."""

from typing import List, Optional

import numpy as np
import structlog

from nilstrat.core.exceptions import EliminationStuck
from nilstrat.core.models import Comparison, GenericMode, StratumKind, SuiteMetrics, TrialOutcome
from nilstrat.lie.algebra import LieAlgebra
from nilstrat.lie.flags import in_flag_basis
from nilstrat.linalg.pfaffian import pfaffian
from nilstrat.orbits.functionals import Functional, coadjoint_act, isotropy
from nilstrat.orbits.invariants import (
    GenericPolicy,
    decomposition_check,
    generic_jump_set,
    jump_set,
    restricted_form,
    restriction_injectivity_check,
    stratum_membership,
)
from nilstrat.stepwise.canonical import canonical_representative
from nilstrat.stepwise.data import StepwiseData
from nilstrat.stepwise.hypotheses import layer_nesting_check, x_membership
from nilstrat.suites.base import EnhancedBaseSuite, TrialResult

logger = structlog.get_logger()


def _describe(xi: Functional) -> str:
    return "xi=(" + ",".join(xi.to_strings()) + ")"


def _pfaffian_abs(algebra: LieAlgebra, xi: Functional):
    e = jump_set(algebra, None, xi)
    if len(e) == 0:
        return None
    return abs(pfaffian(restricted_form(algebra, None, xi, e)))


class OrbitInvarianceSuite(EnhancedBaseSuite):
    """ξ and Ad*(g)ξ share every orbit invariant"""

    @property
    def suite_id(self) -> str:
        return "orbit_invariance"

    @property
    def description(self) -> str:
        return "jump set, isotropy dimension, |Pf_e|, X-membership and ξ₀ are constant on orbits"

    def not_applicable_reason(self, bundle) -> Optional[str]:
        return None

    def _prepare(self, bundle) -> None:
        self.rebased = in_flag_basis(bundle.algebra, bundle.flag)
        self.local: Optional[StepwiseData] = (
            bundle.stepwise.in_flag(bundle.flag) if bundle.stepwise is not None else None
        )

    def _mismatches(self, xi: Functional, moved: Functional) -> List[str]:
        algebra = self.rebased
        problems = []
        if jump_set(algebra, None, xi) != jump_set(algebra, None, moved):
            problems.append("jump set")
        if isotropy(algebra, xi).isotropy.dim != isotropy(algebra, moved).isotropy.dim:
            problems.append("isotropy dimension")
        if _pfaffian_abs(algebra, xi) != _pfaffian_abs(algebra, moved):
            problems.append("|Pf_e|")
        if not decomposition_check(algebra, None, moved):
            problems.append("n = n(ξ) ∔ n_e")
        if not restriction_injectivity_check(algebra, None, moved):
            problems.append("restriction to n_e")
        return problems

    def _canonical_mismatch(self, xi: Functional, moved: Functional) -> Optional[str]:
        policy = self.context.policy
        inside = x_membership(self.rebased, None, self.local, xi, policy)
        if inside != x_membership(self.rebased, None, self.local, moved, policy):
            return "X-membership"
        if not inside:
            return None
        try:
            first = canonical_representative(self.rebased, None, self.local, xi, policy)
            second = canonical_representative(self.rebased, None, self.local, moved, policy)
        except EliminationStuck as e:
            where = ", ".join(f"{key}={value}" for key, value in sorted(e.details.items()))
            return f"canonical point stuck ({e.message}" + (f", {where})" if where else ")")
        if first.xi0 != second.xi0:
            return "canonical point"
        return None

    def _trial(self, bundle, rng: np.random.Generator, index: int) -> TrialResult:
        m = self.rebased.dim
        xi = self.sampler.functional(rng, m)
        g = self.sampler.group_element(rng, m, self.context.group_factors, self.context.group_bound)
        moved = coadjoint_act(self.rebased, g, xi)
        problems = self._mismatches(xi, moved)
        if self.local is not None:
            mismatch = self._canonical_mismatch(xi, moved)
            if mismatch:
                problems.append(mismatch)
        if problems:
            return TrialOutcome.FAILED, f"{_describe(xi)}, factors={len(g)}: " + ", ".join(problems)
        return TrialOutcome.CONFIRMED, None


class GenericitySuite(EnhancedBaseSuite):
    """Fraction of samples in the fine layer, plus fine ⊆ X ⊆ coarse"""

    @property
    def suite_id(self) -> str:
        return "genericity"

    @property
    def description(self) -> str:
        return "random rational functionals lie in the fine layer"

    def not_applicable_reason(self, bundle) -> Optional[str]:
        return None

    def _prepare(self, bundle) -> None:
        self.rebased = in_flag_basis(bundle.algebra, bundle.flag)
        self.local = bundle.stepwise.in_flag(bundle.flag) if bundle.stepwise is not None else None

    def _trial(self, bundle, rng: np.random.Generator, index: int) -> TrialResult:
        policy = self.context.policy
        xi = self.sampler.functional(rng, self.rebased.dim)
        if self.local is not None and not layer_nesting_check(self.rebased, None, self.local, xi, policy):
            return TrialOutcome.FAILED, f"{_describe(xi)}: fine ⊆ X ⊆ coarse broken"
        if stratum_membership(self.rebased, None, xi, StratumKind.FINE, policy):
            return TrialOutcome.CONFIRMED, None
        coarse = stratum_membership(self.rebased, None, xi, StratumKind.COARSE, policy)
        found = "coarse layer only" if coarse else "outside the coarse layer"
        jumps = jump_set(self.rebased, None, xi).to_list()
        return TrialOutcome.FAILED, f"{_describe(xi)} not in the fine layer ({found}, J={jumps})"

    def _finalize(self, metrics: SuiteMetrics) -> None:
        metrics.extras["fine_fraction"] = f"{metrics.informative}/{metrics.trials}"


class GenericAgreementSuite(EnhancedBaseSuite):
    """No sampled jump set lies ≺-below the symbolic e(n)"""

    @property
    def suite_id(self) -> str:
        return "generic_agreement"

    @property
    def description(self) -> str:
        return "sampled jump sets never precede the symbolic e(n)"

    def not_applicable_reason(self, bundle) -> Optional[str]:
        return None

    def _prepare(self, bundle) -> None:
        self.rebased = in_flag_basis(bundle.algebra, bundle.flag)
        policy = self.context.policy
        symbolic = GenericPolicy(
            mode=GenericMode.SYMBOLIC,
            symbolic_max_dim=policy.symbolic_max_dim,
            trials=policy.trials,
            seed=policy.seed,
            bound=policy.bound,
        )
        self.generic = generic_jump_set(self.rebased, None, symbolic)

    def _trial(self, bundle, rng: np.random.Generator, index: int) -> TrialResult:
        xi = self.sampler.functional(rng, self.rebased.dim)
        relation = jump_set(self.rebased, None, xi).compare(self.generic)
        if relation is Comparison.LESS:
            return TrialOutcome.FAILED, f"{_describe(xi)} precedes e(n) = {self.generic.to_list()}"
        if relation is Comparison.EQUAL:
            return TrialOutcome.CONFIRMED, None
        return TrialOutcome.VACUOUS, None
