"""Hypotheses of the stepwise decomposition and membership in X."""

from typing import Optional

import structlog
from sympy.polys.domains import QQ

from nilstrat.core.models import HypothesisReport, LayerReport, StratumKind
from nilstrat.lie.algebra import LieAlgebra, Subspace, center, embed, is_subalgebra, restrict
from nilstrat.lie.flags import Flag, SemidirectSplit, in_flag_basis, semidirect_split_check, truncate
from nilstrat.orbits.functionals import Functional
from nilstrat.orbits.invariants import DEFAULT_POLICY, GenericPolicy, flat_orbit_test, generic_jump_set, jump_set, stratum_membership
from nilstrat.stepwise.data import StepwiseData

logger = structlog.get_logger()


def check_hypotheses(algebra: LieAlgebra, flag: Optional[Flag], data: StepwiseData) -> HypothesisReport:
    """Layer by layer: m_j a subalgebra, n_j an ideal, Z(m_j) = z_j, m_j = z_j ∔ V_j, m_j flat"""
    rebased = in_flag_basis(algebra, flag)
    m = rebased.dim
    data.check_chain(m)
    local = data.in_flag(flag)
    lower_v = Subspace.zero(m)
    lower_z = Subspace.zero(m)
    reports = []
    for index, (k, layer) in enumerate(zip(local.chain, local.layers)):
        witnesses = []
        previous = local.previous(index)
        n_j = Subspace.coordinate(m, range(k))
        n_prev = Subspace.coordinate(m, range(previous))

        center_dim_1 = flat = False
        if is_subalgebra(rebased, layer.m):
            part = restrict(rebased, layer.m, name=f"{algebra.name}:m{index + 1}")
            part_center = Subspace.span(m, [embed(layer.m, v) for v in center(part).vectors])
            center_dim_1 = layer.z.dim == 1 and part_center.equals(layer.z)
            if not center_dim_1:
                witnesses.append(f"center of m_{index + 1} has dim {part_center.dim}")
            flat = flat_orbit_test(part).flat
        else:
            witnesses.append(f"m_{index + 1} is not a subalgebra")

        direct_sum = (
            layer.m.includes(layer.z)
            and layer.m.includes(layer.v)
            and layer.z.dim + layer.v.dim == layer.m.dim
            and layer.z.join(layer.v).dim == layer.m.dim
        )

        if n_j.includes(layer.m):
            split = SemidirectSplit(layer.m.truncated(k), n_prev.truncated(k))
            split_report = semidirect_split_check(truncate(rebased, k), split)
            semidirect = split_report.ok
            witnesses.extend(split_report.witnesses)
        else:
            semidirect = False
            witnesses.append(f"m_{index + 1} leaves n_{index + 1}")

        escaping = [
            value
            for value in rebased.bracket_sets(layer.m.vectors, n_prev.vectors)
            if not lower_v.contains(value)
        ]
        if escaping:
            witnesses.append(f"[m_{index + 1}, n_{index}] leaves lower V: {rebased.describe(escaping[0])}")
        noncommuting = [
            value
            for value in rebased.bracket_sets(layer.m.vectors, lower_z.vectors)
            if any(c != QQ.zero for c in value)
        ]
        if noncommuting:
            witnesses.append(f"[m_{index + 1}, lower z] = {rebased.describe(noncommuting[0])}")

        reports.append(
            LayerReport(
                index=index + 1,
                center_dim_1=center_dim_1,
                direct_sum=direct_sum,
                flat=flat,
                semidirect=semidirect,
                bracket_into_lower_V=not escaping,
                commutes_with_lower_z=not noncommuting,
                compatible=layer.v.is_coordinate(),
                witnesses=tuple(witnesses),
            )
        )
        lower_v = lower_v.join(layer.v)
        lower_z = lower_z.join(layer.z)

    report = HypothesisReport(tuple(reports))
    if not report.ok:
        logger.info(
            "Stepwise hypotheses violated",
            algebra=algebra.name,
            layers=[layer.index for layer in report.layers if not layer.ok],
        )
    return report


def x_membership(
    algebra: LieAlgebra,
    flag: Optional[Flag],
    data: StepwiseData,
    xi: Functional,
    policy: GenericPolicy = DEFAULT_POLICY,
) -> bool:
    """J(ξ|n_j) = e(n_j) at every chain position"""
    rebased = in_flag_basis(algebra, flag)
    data.check_chain(rebased.dim)
    for k in data.chain:
        layer = truncate(rebased, k)
        if jump_set(layer, None, xi.restrict(k)) != generic_jump_set(layer, None, policy):
            return False
    return True


def layer_nesting_check(
    algebra: LieAlgebra,
    flag: Optional[Flag],
    data: StepwiseData,
    xi: Functional,
    policy: GenericPolicy = DEFAULT_POLICY,
) -> bool:
    """fine layer ⊆ X ⊆ coarse layer, evaluated at ξ"""
    fine = stratum_membership(algebra, flag, xi, StratumKind.FINE, policy)
    member = x_membership(algebra, flag, data, xi, policy)
    coarse = stratum_membership(algebra, flag, xi, StratumKind.COARSE, policy)
    return (not fine or member) and (not member or coarse)
