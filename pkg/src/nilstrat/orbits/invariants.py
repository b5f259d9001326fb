"""Orbit invariants: jump sets, e(n), flatness, strata and the Pfaffian constant."""

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import structlog
import sympy
from sympy.polys.domains import QQ

from nilstrat.core.exceptions import DegenerateOrbit, PreconditionFailed, SampleBudgetExhausted
from nilstrat.core.models import Comparison, FlatnessReport, GenericMode, JumpSet, SquareIntegrabilityData, StratumKind
from nilstrat.lie.algebra import LieAlgebra, Subspace, center
from nilstrat.lie.flags import Flag, in_flag_basis, truncate
from nilstrat.linalg.matrix import Mat
from nilstrat.linalg.pfaffian import pfaffian
from nilstrat.linalg.scalars import Scalar, symbolic_field
from nilstrat.orbits.functionals import Functional, isotropy
from nilstrat.orbits.sampling import DEFAULT_BOUND, IntegerSampler, trial_rng

logger = structlog.get_logger()

GENERIC_STREAM = 1
WITNESS_STREAM = 2


@dataclass(frozen=True)
class GenericPolicy:
    """How e(n) is computed wherever an operation needs it"""
    mode: GenericMode = GenericMode.AUTO
    symbolic_max_dim: int = 12
    trials: int = 1000
    seed: int = 0
    bound: int = DEFAULT_BOUND

    def resolve(self, dim: int) -> GenericMode:
        """Concrete mode for an algebra of dimension ``dim``"""
        if self.mode is GenericMode.AUTO:
            return GenericMode.SYMBOLIC if dim <= self.symbolic_max_dim else GenericMode.SAMPLED
        return self.mode


DEFAULT_POLICY = GenericPolicy()


def jumps_from_isotropy(isotropy_space: Subspace) -> JumpSet:
    """j jumps iff no isotropy vector has its last nonzero coordinate at j"""
    m = isotropy_space.ambient
    if isotropy_space.dim == 0:
        return JumpSet(tuple(range(1, m + 1)), m)
    reversed_rows = [list(reversed(v)) for v in isotropy_space.vectors]
    pivots = Mat.from_rows(reversed_rows, isotropy_space.domain).pivots()
    fixed = {m - p for p in pivots}
    return JumpSet(tuple(j for j in range(1, m + 1) if j not in fixed), m)


def jump_set(algebra: LieAlgebra, flag: Optional[Flag], xi: Functional) -> JumpSet:
    """J(ξ): flag positions where the orbit of ξ restricted to n_j grows"""
    return jumps_from_isotropy(isotropy(algebra, xi, flag).isotropy)


def jumpset_compare(e1: JumpSet, e2: JumpSet) -> Comparison:
    """≺ order of two jump sets of the same flag"""
    return e1.compare(e2)


@lru_cache(maxsize=512)
def _symbolic_generic(rebased: LieAlgebra) -> JumpSet:
    return jump_set(rebased, None, Functional.generic(rebased.dim))


@lru_cache(maxsize=512)
def _sampled_generic(rebased: LieAlgebra, trials: int, seed: int, bound: int) -> JumpSet:
    if trials < 1:
        raise SampleBudgetExhausted("sampled generic jump set needs at least one trial")
    sampler = IntegerSampler(bound)
    best = None
    for index in range(trials):
        xi = sampler.functional(trial_rng(seed, index, GENERIC_STREAM), rebased.dim)
        candidate = jump_set(rebased, None, xi)
        if best is None or candidate < best:
            best = candidate
    return best


def generic_jump_set(
    algebra: LieAlgebra, flag: Optional[Flag] = None, policy: GenericPolicy = DEFAULT_POLICY
) -> JumpSet:
    """e(n): the ≺-minimum of all jump sets"""
    rebased = in_flag_basis(algebra, flag)
    if rebased.dim == 0:
        return JumpSet.empty(0)
    mode = policy.resolve(rebased.dim)
    if mode is GenericMode.SYMBOLIC:
        return _symbolic_generic(rebased)
    return _sampled_generic(rebased, policy.trials, policy.seed, policy.bound)


def generic_isotropy_dim(algebra: LieAlgebra) -> int:
    """Isotropy dimension at the generic functional over QQ(u)"""
    return isotropy(algebra, Functional.generic(algebra.dim)).isotropy.dim


def flat_orbit_test(algebra: LieAlgebra, attempts: int = 64, seed: int = 0, bound: int = DEFAULT_BOUND) -> FlatnessReport:
    """Flat iff the generic isotropy algebra is the center"""
    m = algebra.dim
    center_dim = center(algebra).dim
    generic_dim = generic_isotropy_dim(algebra)
    if generic_dim != center_dim:
        return FlatnessReport(flat=False, generic_isotropy_dim=generic_dim, center_dim=center_dim)
    candidates = []
    if generic_dim == m:
        candidates.append(Functional.zero(m))
    candidates.extend(Functional(algebra.basis_vector(i)) for i in range(m))
    sampler = IntegerSampler(bound)
    candidates.extend(sampler.functional(trial_rng(seed, index, WITNESS_STREAM), m) for index in range(attempts))
    witness = next(
        (xi for xi in candidates if isotropy(algebra, xi).isotropy.dim == center_dim),
        None,
    )
    if witness is None:
        logger.warning("Flat algebra without a sampled witness", algebra=algebra.name, attempts=attempts)
    return FlatnessReport(
        flat=True,
        generic_isotropy_dim=generic_dim,
        center_dim=center_dim,
        witness=witness.coords if witness is not None else None,
    )


def restricted_form(algebra: LieAlgebra, flag: Optional[Flag], xi: Functional, e: JumpSet) -> Mat:
    """B(ξ) on the rows and columns indexed by e, in increasing flag order"""
    positions = [j - 1 for j in e]
    return isotropy(algebra, xi, flag).form.submatrix(positions, positions)


def pfaffian_polynomial(algebra: LieAlgebra, flag: Optional[Flag], e: JumpSet) -> Scalar:
    """Pf_e of the generic functional, an element of QQ(u1, ..., um)"""
    return pfaffian(restricted_form(algebra, flag, Functional.generic(algebra.dim), e))


def specialize(value: Scalar, xi: Functional) -> Scalar:
    """Evaluate an element of QQ(u1, ..., um) at a rational functional"""
    domain = symbolic_field(xi.dim)
    substitution = {u: QQ.to_sympy(c) for u, c in zip(domain.symbols, xi.coords)}
    return QQ.from_sympy(sympy.Rational(domain.to_sympy(value).subs(substitution)))


def square_integrability_constant(
    algebra: LieAlgebra, flag: Optional[Flag], xi: Functional, e: JumpSet
) -> SquareIntegrabilityData:
    """Exact parts of (2π)^(|e|/2) / |Pf_e(ξ)|; e must have even size"""
    if xi.domain != QQ:
        raise PreconditionFailed("constant needs a rational functional", clause="rational functional")
    if len(e) < 2 or len(e) % 2:
        raise PreconditionFailed(
            "jump set must have even size at least 2", clause="even jump set", size=len(e)
        )
    value = pfaffian(restricted_form(algebra, flag, xi, e))
    if value == QQ.zero:
        raise DegenerateOrbit("Pf_e vanishes at this functional", jump_set=e.to_list())
    return SquareIntegrabilityData(jump_set=e, orbit_dim=len(e), pfaffian_abs=abs(value))


def stratum_membership(
    algebra: LieAlgebra,
    flag: Optional[Flag],
    xi: Functional,
    kind: StratumKind,
    policy: GenericPolicy = DEFAULT_POLICY,
) -> bool:
    """Coarse: J(ξ) = e(n). Fine: J(ξ|n_j) = e(n_j) for every truncation n_j."""
    rebased = in_flag_basis(algebra, flag)
    if kind is StratumKind.COARSE:
        return jump_set(rebased, None, xi) == generic_jump_set(rebased, None, policy)
    for j in range(1, rebased.dim + 1):
        layer = truncate(rebased, j)
        if jump_set(layer, None, xi.restrict(j)) != generic_jump_set(layer, None, policy):
            return False
    return True


def decomposition_check(algebra: LieAlgebra, flag: Optional[Flag], xi: Functional) -> bool:
    """n = n(ξ) ∔ n_e for e = J(ξ)"""
    isotropy_space = isotropy(algebra, xi, flag).isotropy
    e = jumps_from_isotropy(isotropy_space)
    jump_part = Subspace.coordinate(algebra.dim, [j - 1 for j in e], xi.domain)
    return isotropy_space.dim + jump_part.dim == algebra.dim and isotropy_space.join(jump_part).dim == algebra.dim


def restriction_injectivity_check(algebra: LieAlgebra, flag: Optional[Flag], xi: Functional) -> bool:
    """The tangent map of O -> n_e* at ξ is injective.

    Tangent vectors are the rows ξ([x, ·]) of B(ξ); restricting them to n_e
    keeps the columns indexed by e.
    """
    result = isotropy(algebra, xi, flag)
    e = jumps_from_isotropy(result.isotropy)
    columns = [j - 1 for j in e]
    restricted = result.form.submatrix(list(range(algebra.dim)), columns)
    return restricted.rank() == result.rank
