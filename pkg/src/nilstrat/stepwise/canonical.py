"""The canonical point of an orbit in X and the constant attached to it.

The canonical point ξ₀ vanishes on n_e = V_1 ∔ ... ∔ V_q and has isotropy
s = z_1 + ... + z_q. It is reached by sequential elimination: the
coordinates of n_e are cleared in increasing flag order, each by acting
with exp(t F_i) for a partner direction F_i of n_e and a rational root t.
"""

from dataclasses import dataclass
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple

import structlog
import sympy
from sympy.polys.domains import QQ

from nilstrat.core.exceptions import EliminationStuck, InvariantViolation, NotInX, PreconditionFailed
from nilstrat.core.models import JumpSet, SquareIntegrabilityData
from nilstrat.lie.algebra import LieAlgebra
from nilstrat.lie.flags import Flag, in_flag_basis
from nilstrat.linalg.matrix import Vector
from nilstrat.linalg.scalars import Scalar, format_scalar
from nilstrat.orbits.functionals import Functional, GroupElement, coadjoint_act, isotropy
from nilstrat.orbits.invariants import DEFAULT_POLICY, GenericPolicy, square_integrability_constant
from nilstrat.stepwise.data import StepwiseData
from nilstrat.stepwise.hypotheses import x_membership

logger = structlog.get_logger()

_T = sympy.Symbol("t")


@dataclass(frozen=True)
class CanonicalRep:
    xi0: Functional
    certificate: GroupElement

    def to_dict(self, labels: Sequence[str]) -> Dict:
        return {
            "xi0": self.xi0.to_strings(),
            "certificate": [
                {label: format_scalar(c) for label, c in zip(labels, factor) if c != QQ.zero}
                for factor in self.certificate.factors
            ],
        }


def coordinate_polynomial(algebra: LieAlgebra, xi: Functional, i: int, j: int) -> List[Scalar]:
    """Coefficients (lowest degree first) of t ↦ (Ad*(exp t F_i) ξ)(F_j)"""
    coefficients = []
    w = algebra.basis_vector(j)
    k = 0
    while any(c != QQ.zero for c in w):
        sign = QQ.one if k % 2 == 0 else -QQ.one
        coefficients.append(sign * xi.evaluate(w) / QQ(factorial(k)))
        w = algebra.bracket(algebra.basis_vector(i), w)
        k += 1
    return coefficients


def rational_roots(coefficients: Sequence[Scalar]) -> List[Scalar]:
    """Distinct rational roots, smallest magnitude first"""
    trimmed = list(coefficients)
    while trimmed and trimmed[-1] == QQ.zero:
        trimmed.pop()
    if len(trimmed) < 2:
        return []
    if len(trimmed) == 2:
        return [-trimmed[0] / trimmed[1]]
    poly = sympy.Poly.from_list([QQ.to_sympy(c) for c in reversed(trimmed)], _T, domain=sympy.QQ)
    roots = sorted(poly.ground_roots(), key=lambda r: (abs(r), r))
    return [QQ.from_sympy(r) for r in roots]


def _choose_step(
    algebra: LieAlgebra, positions: Sequence[int], xi: Functional, j: int, cleared: Sequence[int]
) -> Optional[Tuple[Vector, Functional, bool]]:
    fallback = None
    for i in positions:
        if i == j or xi.evaluate(algebra.constant(i, j)) == QQ.zero:
            continue
        for t in rational_roots(coordinate_polynomial(algebra, xi, i, j)):
            factor = tuple(t if k == i else QQ.zero for k in range(algebra.dim))
            acted = coadjoint_act(algebra, GroupElement((factor,)), xi)
            if all(acted.coords[p] == QQ.zero for p in cleared):
                return factor, acted, True
            if fallback is None:
                fallback = (factor, acted, False)
    return fallback


def _elimination_pass(
    algebra: LieAlgebra, positions: Sequence[int], xi: Functional, certificate: GroupElement
) -> Tuple[Functional, GroupElement, bool]:
    cleared: List[int] = []
    for j in positions:
        if xi.coords[j] != QQ.zero:
            step = _choose_step(algebra, positions, xi, j, cleared)
            if step is None:
                raise EliminationStuck("no rational elimination step", position=j + 1)
            factor, xi, preserved = step
            certificate = certificate.then(factor)
            if not preserved:
                return xi, certificate, False
        cleared.append(j)
    return xi, certificate, True


def canonical_representative(
    algebra: LieAlgebra,
    flag: Optional[Flag],
    data: StepwiseData,
    xi: Functional,
    policy: GenericPolicy = DEFAULT_POLICY,
) -> CanonicalRep:
    """ξ₀ in the orbit of ξ with ξ₀|V = 0, plus a certificate g with Ad*(g)ξ = ξ₀"""
    if not x_membership(algebra, flag, data, xi, policy):
        raise NotInX("functional lies outside X", xi=",".join(xi.to_strings()))
    rebased = in_flag_basis(algebra, flag)
    local = data.in_flag(flag)
    m = rebased.dim
    positions = list(local.v_sum(m).positions())

    current, certificate = xi, GroupElement.identity()
    for attempt in range(max(m, 1)):
        current, certificate, settled = _elimination_pass(rebased, positions, current, certificate)
        if settled:
            break
        logger.debug("Elimination pass disturbed cleared coordinates", attempt=attempt + 1)
    else:
        raise EliminationStuck("elimination did not settle", passes=m)

    if coadjoint_act(rebased, certificate, xi) != current:
        raise InvariantViolation("certificate does not reproduce the canonical point")
    if not isotropy(rebased, current).isotropy.equals(local.center_sum(m)):
        raise InvariantViolation("isotropy of the canonical point differs from s")
    return CanonicalRep(current, certificate)


def main3_constant(
    algebra: LieAlgebra, flag: Optional[Flag], data: StepwiseData, xi: Functional
) -> SquareIntegrabilityData:
    """Constant at a point vanishing on V, with e the V positions"""
    rebased = in_flag_basis(algebra, flag)
    m = rebased.dim
    data.check_chain(m)
    local = data.in_flag(flag)
    positions = local.v_sum(m).positions()
    if any(xi.coords[p] != QQ.zero for p in positions):
        raise PreconditionFailed("ξ does not vanish on V_1 + ... + V_q", clause="vanishes on V")
    for index, layer in enumerate(local.layers, start=1):
        if layer.z.dim == 0 or xi.evaluate(layer.z.vectors[0]) == QQ.zero:
            raise PreconditionFailed(f"ξ vanishes on z_{index}", clause=f"nonzero on z_{index}")
    if not isotropy(rebased, xi).isotropy.equals(local.center_sum(m)):
        raise InvariantViolation("isotropy differs from s at a point vanishing on V")
    e = JumpSet.of((p + 1 for p in positions), m)
    return square_integrability_constant(rebased, None, xi, e)
