"""Suites for the isotropy splitting, jump concatenation and the lemmas around them."""

from typing import List, Optional, Tuple

import numpy as np
from sympy.polys.domains import QQ

from nilstrat.core.exceptions import HypothesisFailed
from nilstrat.core.models import TrialOutcome
from nilstrat.lie.algebra import LieAlgebra, Subspace, center
from nilstrat.lie.flags import SemidirectSplit, in_flag_basis
from nilstrat.orbits.functionals import Functional
from nilstrat.stepwise.checks import (
    grad_check,
    interm_check,
    jump_concat_check,
    layer_split,
    lemma_obv_check,
    main2_equivalence_check,
)
from nilstrat.suites.base import EnhancedBaseSuite, TrialResult

LayerCase = Tuple[int, LieAlgebra, SemidirectSplit, Subspace, Functional]


def _describe(xi: Functional) -> str:
    return "xi=(" + ",".join(xi.to_strings()) + ")"


class _LayerSplitSuite(EnhancedBaseSuite):
    """Trials cycle through the splits n_j = m_j ⋉ n_(j-1), j >= 2"""

    def not_applicable_reason(self, bundle) -> Optional[str]:
        if bundle.stepwise is None:
            return "bundle has no stepwise data"
        if bundle.stepwise.q < 2:
            return f"needs at least two layers, bundle has {bundle.stepwise.q}"
        return None

    def _prepare(self, bundle) -> None:
        self.cases: List[LayerCase] = []
        local = bundle.stepwise.in_flag(bundle.flag)
        for layer in range(2, bundle.stepwise.q + 1):
            algebra, split = layer_split(bundle.algebra, bundle.flag, bundle.stepwise, layer)
            brackets = algebra.bracket_sets(split.m_part.vectors, split.n_part.vectors)
            killing = Subspace.span(algebra.dim, brackets).annihilator()
            k = algebra.dim
            canonical = [QQ.zero] * k
            for part in local.layers[:layer]:
                positions = part.z.positions()
                if positions and positions[0] < k:
                    canonical[positions[0]] = QQ.one
            self.cases.append((layer, algebra, split, killing, Functional(tuple(canonical))))

    def _case(self, index: int) -> LayerCase:
        return self.cases[index % len(self.cases)]

    def _projected(self, rng: np.random.Generator, killing: Subspace) -> Functional:
        return self.sampler.functional_in(rng, killing)


class GradSuite(_LayerSplitSuite):
    @property
    def suite_id(self) -> str:
        return "grad"

    @property
    def description(self) -> str:
        return "ñ(ξ) = m(ξ|m) ∔ n(ξ|n) whenever ξ kills [m, n]"

    def _trial(self, bundle, rng: np.random.Generator, index: int) -> TrialResult:
        layer, algebra, split, killing, _ = self._case(index)
        xi = self._projected(rng, killing)
        if grad_check(algebra, split, xi):
            return TrialOutcome.CONFIRMED, None
        return TrialOutcome.FAILED, f"layer {layer}, {_describe(xi)}"


class JumpConcatSuite(_LayerSplitSuite):
    @property
    def suite_id(self) -> str:
        return "jump_concat"

    @property
    def description(self) -> str:
        return "J(ξ) = J(ξ|n) ⊔ (k + J(ξ|m)) whenever the isotropy splits"

    def _trial(self, bundle, rng: np.random.Generator, index: int) -> TrialResult:
        layer, algebra, split, killing, canonical = self._case(index)
        if index < len(self.cases):
            xi = canonical
        elif index % 2 == 0:
            xi = self._projected(rng, killing)
        else:
            xi = self.sampler.functional(rng, algebra.dim)
        try:
            holds = jump_concat_check(algebra, None, split, xi)
        except HypothesisFailed:
            return TrialOutcome.VACUOUS, None
        if holds:
            return TrialOutcome.CONFIRMED, None
        return TrialOutcome.FAILED, f"layer {layer}, {_describe(xi)}"


class IntermSuite(_LayerSplitSuite):
    @property
    def suite_id(self) -> str:
        return "interm"

    @property
    def description(self) -> str:
        return "generic on ñ and n with [m, n] ⊆ Ker ξ forces J(ξ|m) = e(m)"

    def _trial(self, bundle, rng: np.random.Generator, index: int) -> TrialResult:
        layer, algebra, split, killing, _ = self._case(index)
        xi = self._projected(rng, killing)
        result = interm_check(algebra, None, split, xi, self.context.policy)
        if not result.informative:
            return TrialOutcome.VACUOUS, None
        if result.holds:
            return TrialOutcome.CONFIRMED, None
        return TrialOutcome.FAILED, f"layer {layer}, {_describe(xi)}"


class LemmaObvSuite(EnhancedBaseSuite):
    @property
    def suite_id(self) -> str:
        return "lemma_obv"

    @property
    def description(self) -> str:
        return "generic jump set forces ξ ≠ 0 on a one-dimensional center"

    def not_applicable_reason(self, bundle) -> Optional[str]:
        rebased = in_flag_basis(bundle.algebra, bundle.flag)
        dim_z = center(rebased).dim
        if dim_z != 1 or rebased.dim <= 1:
            return f"needs dim Z = 1 < dim n, got dim Z = {dim_z}, dim n = {rebased.dim}"
        return None

    def _prepare(self, bundle) -> None:
        self.rebased = in_flag_basis(bundle.algebra, bundle.flag)
        self.center_killing = center(self.rebased).annihilator()

    def _trial(self, bundle, rng: np.random.Generator, index: int) -> TrialResult:
        if index % 4 == 3:
            xi = self.sampler.functional_in(rng, self.center_killing)
        else:
            xi = self.sampler.functional(rng, self.rebased.dim)
        result = lemma_obv_check(self.rebased, None, xi, self.context.policy)
        if not result.informative:
            return TrialOutcome.VACUOUS, None
        if result.holds:
            return TrialOutcome.CONFIRMED, None
        return TrialOutcome.FAILED, _describe(xi)


class Main2Suite(EnhancedBaseSuite):
    @property
    def suite_id(self) -> str:
        return "main2"

    @property
    def description(self) -> str:
        return "with two layers and dim Z = 1, X equals the coarse layer"

    def not_applicable_reason(self, bundle) -> Optional[str]:
        if bundle.stepwise is None:
            return "bundle has no stepwise data"
        if bundle.stepwise.q != 2:
            return f"needs exactly two layers, bundle has {bundle.stepwise.q}"
        dim_z = center(in_flag_basis(bundle.algebra, bundle.flag)).dim
        if dim_z != 1:
            return f"needs a one-dimensional center, got {dim_z}"
        return None

    def _prepare(self, bundle) -> None:
        self.rebased = in_flag_basis(bundle.algebra, bundle.flag)
        self.local = bundle.stepwise.in_flag(bundle.flag)
        self.center_killing = center(self.rebased).annihilator()

    def _trial(self, bundle, rng: np.random.Generator, index: int) -> TrialResult:
        if index == 0:
            xi = Functional.zero(self.rebased.dim)
        elif index % 4 == 3:
            xi = self.sampler.functional_in(rng, self.center_killing)
        else:
            xi = self.sampler.functional(rng, self.rebased.dim)
        if main2_equivalence_check(self.rebased, None, self.local, xi, self.context.policy):
            return TrialOutcome.CONFIRMED, None
        return TrialOutcome.FAILED, _describe(xi)
