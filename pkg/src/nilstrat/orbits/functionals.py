"""Linear functionals, factored group elements and the coadjoint action."""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from sympy.polys.domains import QQ
from sympy.polys.domains.domain import Domain

from nilstrat.core.exceptions import DimensionMismatch, ParseError
from nilstrat.lie.algebra import LieAlgebra, Subspace
from nilstrat.lie.flags import Flag, in_flag_basis
from nilstrat.linalg.matrix import Mat, Vector, nilpotent_exponential, rank_and_kernel, row_times
from nilstrat.linalg.scalars import FieldKind, Scalar, field_kind, format_scalar, parse_scalar, rational, symbolic_field


@dataclass(frozen=True)
class Functional:
    """Coordinates ξ(F_1), ..., ξ(F_m) in the dual flag basis"""
    coords: Tuple[Scalar, ...]
    domain: Domain = QQ

    @classmethod
    def rational(cls, values: Sequence) -> "Functional":
        return cls(tuple(rational(v) for v in values))

    @classmethod
    def parse(cls, text: str) -> "Functional":
        """Comma-separated rationals in flag order, e.g. "1,-1,0,1/2" """
        parts = [part for part in text.split(",")]
        if not text.strip() or any(not part.strip() for part in parts):
            raise ParseError(f"malformed functional {text!r}", field="xi")
        return cls(tuple(parse_scalar(part, field="xi") for part in parts))

    @classmethod
    def generic(cls, m: int) -> "Functional":
        """ξ(F_i) = u_i over QQ(u_1, ..., u_m)"""
        domain = symbolic_field(m)
        return cls(tuple(domain.gens), domain)

    @classmethod
    def zero(cls, m: int) -> "Functional":
        return cls((QQ.zero,) * m)

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def field(self) -> FieldKind:
        return field_kind(self.domain)

    def is_zero(self) -> bool:
        return all(c == self.domain.zero for c in self.coords)

    def evaluate(self, vector: Sequence[Scalar]) -> Scalar:
        total = self.domain.zero
        for c, x in zip(self.coords, vector):
            if x != QQ.zero:
                total += c * (x if self.domain == QQ else self.domain.convert_from(x, QQ))
        return total

    def restrict(self, k: int) -> "Functional":
        """ξ|n_k in flag coordinates"""
        return Functional(self.coords[:k], self.domain)

    def on_subspace(self, subspace: Subspace) -> "Functional":
        """Coordinates of ξ in the dual of ``subspace``'s own basis"""
        return Functional(tuple(self.evaluate(v) for v in subspace.vectors), self.domain)

    def to_strings(self):
        return [format_scalar(c, self.domain) for c in self.coords]


@dataclass(frozen=True)
class GroupElement:
    """exp(x_1) ... exp(x_r), kept factored"""
    factors: Tuple[Vector, ...] = ()

    @classmethod
    def identity(cls) -> "GroupElement":
        return cls(())

    def inverse(self) -> "GroupElement":
        """Factors reversed and negated"""
        return GroupElement(tuple(tuple(-c for c in x) for x in reversed(self.factors)))

    def then(self, factor: Sequence[Scalar]) -> "GroupElement":
        """Element acting by ``factor`` after this one"""
        return GroupElement((tuple(factor),) + self.factors)

    def __len__(self) -> int:
        return len(self.factors)


@dataclass(frozen=True)
class IsotropyResult:
    form: Mat
    isotropy: Subspace

    @property
    def rank(self) -> int:
        return self.form.shape[0] - self.isotropy.dim


def _check_length(algebra: LieAlgebra, xi: Functional) -> None:
    if xi.dim != algebra.dim:
        raise DimensionMismatch("functional length differs from algebra dimension", dim=algebra.dim, length=xi.dim)


def isotropy(algebra: LieAlgebra, xi: Functional, flag: Optional[Flag] = None) -> IsotropyResult:
    """B_ij = ξ([F_i, F_j]) and n(ξ) = ker B, in flag coordinates"""
    _check_length(algebra, xi)
    rebased = in_flag_basis(algebra, flag)
    form = rebased.form_matrix(xi.coords, xi.domain)
    _, kernel = rank_and_kernel(form)
    return IsotropyResult(form, Subspace(algebra.dim, tuple(kernel), xi.domain))


def coadjoint_act(
    algebra: LieAlgebra, g: GroupElement, xi: Functional, flag: Optional[Flag] = None
) -> Functional:
    """Ad*(g)ξ; each factor x maps ξ to ξ ∘ exp(-ad x), rightmost factor first"""
    _check_length(algebra, xi)
    rebased = in_flag_basis(algebra, flag)
    coords = xi.coords
    for x in reversed(g.factors):
        if all(c == QQ.zero for c in x):
            continue
        operator = nilpotent_exponential(-rebased.ad_matrix(x)).convert_to(xi.domain)
        coords = row_times(coords, operator)
    return Functional(tuple(coords), xi.domain)
