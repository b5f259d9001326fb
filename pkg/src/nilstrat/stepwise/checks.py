"""Checkers for the isotropy splitting and jump-set concatenation statements."""

from typing import Optional, Tuple

from sympy.polys.domains import QQ

from nilstrat.core.exceptions import FlagMismatch, HypothesisFailed, NotApplicable, ValidationError
from nilstrat.core.models import ImplicationResult, JumpSet, StratumKind
from nilstrat.lie.algebra import LieAlgebra, Subspace, center, embed, restrict
from nilstrat.lie.flags import Flag, SemidirectSplit, in_flag_basis, quotient_at, semidirect_split_check, truncate
from nilstrat.linalg.matrix import solve_in_basis
from nilstrat.linalg.scalars import format_scalar
from nilstrat.orbits.functionals import Functional, isotropy
from nilstrat.orbits.invariants import DEFAULT_POLICY, GenericPolicy, generic_jump_set, jump_set, stratum_membership
from nilstrat.stepwise.data import StepwiseData
from nilstrat.stepwise.hypotheses import x_membership


def _localize(
    algebra: LieAlgebra, flag: Optional[Flag], split: SemidirectSplit
) -> Tuple[LieAlgebra, SemidirectSplit]:
    rebased = in_flag_basis(algebra, flag)
    local = split if flag is None or flag.is_standard() else split.to_flag(flag)
    report = semidirect_split_check(rebased, local)
    if not report.ok:
        raise HypothesisFailed("split is not a semidirect product", witnesses="; ".join(report.witnesses))
    return rebased, local


def kernel_violation(algebra: LieAlgebra, split: SemidirectSplit, xi: Functional) -> Optional[str]:
    """First bracket of [m, n] on which ξ does not vanish"""
    for a in split.m_part.vectors:
        for b in split.n_part.vectors:
            value = xi.evaluate(algebra.bracket(a, b))
            if value != QQ.zero:
                return f"ξ([{algebra.describe(a)}, {algebra.describe(b)}]) = {format_scalar(value)}"
    return None


def _isotropy_inside(algebra: LieAlgebra, subspace: Subspace, xi: Functional) -> Subspace:
    if subspace.dim == 0:
        return Subspace.zero(algebra.dim)
    part = restrict(algebra, subspace)
    inner = isotropy(part, xi.on_subspace(subspace)).isotropy
    return Subspace.span(algebra.dim, [embed(subspace, v) for v in inner.vectors])


def grad_sides(algebra: LieAlgebra, split: SemidirectSplit, xi: Functional) -> Tuple[Subspace, Subspace]:
    """ñ(ξ) and m(ξ|m) + n(ξ|n), both in ambient coordinates"""
    left = isotropy(algebra, xi).isotropy
    right = _isotropy_inside(algebra, split.m_part, xi).join(_isotropy_inside(algebra, split.n_part, xi))
    return left, right


def grad_check(
    algebra: LieAlgebra, split: SemidirectSplit, xi: Functional, flag: Optional[Flag] = None
) -> bool:
    """ñ(ξ) = m(ξ|m) + n(ξ|n); raises HypothesisFailed unless [m, n] ⊆ Ker ξ"""
    rebased, local = _localize(algebra, flag, split)
    violation = kernel_violation(rebased, local, xi)
    if violation:
        raise HypothesisFailed("[m, n] is not contained in Ker ξ", bracket=violation)
    left, right = grad_sides(rebased, local, xi)
    return left.equals(right)


def _flag_position(algebra: LieAlgebra, split: SemidirectSplit) -> int:
    k = split.n_part.dim
    if not split.n_part.equals(Subspace.coordinate(algebra.dim, range(k))):
        raise FlagMismatch("flag does not pass through the ideal", size=k)
    return k


def quotient_functional(algebra: LieAlgebra, split: SemidirectSplit, xi: Functional, k: int) -> Functional:
    """ζ on ñ/n given by ξ on the m-component of each F_i, i > k"""
    basis = split.m_part.vectors + split.n_part.vectors
    coords = []
    for i in range(k, algebra.dim):
        coefficients = solve_in_basis(basis, algebra.basis_vector(i))
        m_component = embed(split.m_part, coefficients[: split.m_part.dim])
        coords.append(xi.evaluate(m_component))
    return Functional(tuple(coords))


def jump_concat_parts(
    algebra: LieAlgebra, flag: Optional[Flag], split: SemidirectSplit, xi: Functional
) -> Tuple[JumpSet, JumpSet, JumpSet]:
    """J(ξ), J(ξ|n) on the truncated flag and J(ξ|m) on the quotient flag"""
    rebased, local = _localize(algebra, flag, split)
    k = _flag_position(rebased, local)
    full = jump_set(rebased, None, xi)
    inner = jump_set(truncate(rebased, k), None, xi.restrict(k))
    outer = jump_set(quotient_at(rebased, k), None, quotient_functional(rebased, local, xi, k))
    return full, inner, outer


def jump_concat_check(
    algebra: LieAlgebra, flag: Optional[Flag], split: SemidirectSplit, xi: Functional
) -> bool:
    """J(ξ) is J(ξ|n) followed by J(ξ|m) shifted past n"""
    rebased, local = _localize(algebra, flag, split)
    left, right = grad_sides(rebased, local, xi)
    if not left.equals(right):
        raise HypothesisFailed(
            "isotropy does not split along m and n", left_dim=left.dim, right_dim=right.dim
        )
    full, inner, outer = jump_concat_parts(rebased, None, local, xi)
    return full == inner.union(outer.shifted(inner.size, full.size))


def lemma_obv_check(
    algebra: LieAlgebra, flag: Optional[Flag], xi: Functional, policy: GenericPolicy = DEFAULT_POLICY
) -> ImplicationResult:
    """J(ξ) = e(n) forces ξ to be nonzero on a one-dimensional center"""
    rebased = in_flag_basis(algebra, flag)
    z = center(rebased)
    if z.dim != 1 or rebased.dim <= 1:
        return ImplicationResult(applicable=False, holds=True)
    if jump_set(rebased, None, xi) != generic_jump_set(rebased, None, policy):
        return ImplicationResult(applicable=True, holds=True)
    return ImplicationResult(applicable=True, holds=xi.evaluate(z.vectors[0]) != QQ.zero, informative=True)


def interm_check(
    algebra: LieAlgebra,
    flag: Optional[Flag],
    split: SemidirectSplit,
    xi: Functional,
    policy: GenericPolicy = DEFAULT_POLICY,
) -> ImplicationResult:
    """Generic on ñ and on n with [m, n] ⊆ Ker ξ forces J(ξ|m) = e(m)"""
    try:
        rebased, local = _localize(algebra, flag, split)
        k = _flag_position(rebased, local)
    except (HypothesisFailed, FlagMismatch):
        return ImplicationResult(applicable=False, holds=True)
    premise = (
        kernel_violation(rebased, local, xi) is None
        and jump_set(rebased, None, xi) == generic_jump_set(rebased, None, policy)
        and jump_set(truncate(rebased, k), None, xi.restrict(k))
        == generic_jump_set(truncate(rebased, k), None, policy)
    )
    if not premise:
        return ImplicationResult(applicable=True, holds=True)
    quotient_algebra = quotient_at(rebased, k)
    outer = jump_set(quotient_algebra, None, quotient_functional(rebased, local, xi, k))
    return ImplicationResult(
        applicable=True,
        holds=outer == generic_jump_set(quotient_algebra, None, policy),
        informative=True,
    )


def main2_equivalence_check(
    algebra: LieAlgebra,
    flag: Optional[Flag],
    data: StepwiseData,
    xi: Functional,
    policy: GenericPolicy = DEFAULT_POLICY,
) -> bool:
    """For two layers and a one-dimensional center, X is the coarse layer"""
    rebased = in_flag_basis(algebra, flag)
    if data.q != 2 or center(rebased).dim != 1:
        raise NotApplicable(
            "needs two layers and a one-dimensional center", layers=data.q, center_dim=center(rebased).dim
        )
    member = x_membership(algebra, flag, data, xi, policy)
    return member == stratum_membership(algebra, flag, xi, StratumKind.COARSE, policy)


def layer_split(
    algebra: LieAlgebra, flag: Optional[Flag], data: StepwiseData, layer: int
) -> Tuple[LieAlgebra, SemidirectSplit]:
    """n_j with its split m_j ⋉ n_(j-1), in flag coordinates of n_j (``layer`` is 1-based)"""
    rebased = in_flag_basis(algebra, flag)
    data.check_chain(rebased.dim)
    if not 1 <= layer <= data.q:
        raise ValidationError("no such stepwise layer", layer=layer, layers=data.q)
    local = data.in_flag(flag)
    k = local.chain[layer - 1]
    previous = local.previous(layer - 1)
    m_part = local.layers[layer - 1].m
    if not Subspace.coordinate(rebased.dim, range(k)).includes(m_part):
        raise ValidationError("m_j is not contained in n_j", layer=layer)
    split = SemidirectSplit(m_part.truncated(k), Subspace.coordinate(k, range(previous)))
    return truncate(rebased, k), split
