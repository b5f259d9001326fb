"""Jordan-Hölder flags, quotients and semidirect splits.

A flag is an ordered basis F_1..F_m of the algebra (a change of basis, not
a permutation). Everything downstream works in flag coordinates: the
algebra is rebased once with ``in_flag_basis`` and n_j becomes the span of
the first j coordinate vectors.
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Optional, Sequence, Tuple

import structlog
from sympy.polys.domains import QQ

from nilstrat.core.exceptions import FlagMismatch, NotABasis, NotAnIdeal, ValidationError
from nilstrat.core.models import FlagReport, SplitReport, SubspaceClass
from nilstrat.lie.algebra import LieAlgebra, Subspace, is_ideal, is_subalgebra
from nilstrat.linalg.matrix import Mat, Vector, apply
from nilstrat.linalg.scalars import Scalar

logger = structlog.get_logger()


@dataclass(frozen=True)
class Flag:
    vectors: Tuple[Vector, ...]
    labels: Tuple[str, ...]

    @classmethod
    def standard(cls, algebra: LieAlgebra) -> "Flag":
        return cls(tuple(algebra.basis_vector(i) for i in range(algebra.dim)), algebra.labels)

    @classmethod
    def from_vectors(cls, algebra: LieAlgebra, vectors: Sequence[Sequence[Scalar]]) -> "Flag":
        vectors = tuple(tuple(v) for v in vectors)
        if len(vectors) != algebra.dim or any(len(v) != algebra.dim for v in vectors):
            raise NotABasis("flag must list exactly dim vectors", dim=algebra.dim, given=len(vectors))
        if Mat.from_columns(vectors, algebra.dim).rank() != algebra.dim:
            raise NotABasis("flag vectors are linearly dependent")
        labels = []
        for j, vector in enumerate(vectors):
            nonzero = [i for i, c in enumerate(vector) if c != QQ.zero]
            if len(nonzero) == 1 and vector[nonzero[0]] == QQ.one:
                labels.append(algebra.labels[nonzero[0]])
            else:
                labels.append(f"F{j + 1}")
        return cls(vectors, tuple(labels))

    @classmethod
    def from_labels(cls, algebra: LieAlgebra, labels: Sequence[str]) -> "Flag":
        index = {label: i for i, label in enumerate(algebra.labels)}
        unknown = [label for label in labels if label not in index]
        if unknown:
            raise ValidationError("flag names unknown basis labels", labels=unknown)
        return cls.from_vectors(algebra, [algebra.basis_vector(index[label]) for label in labels])

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def is_standard(self) -> bool:
        return all(
            all(c == (QQ.one if i == j else QQ.zero) for i, c in enumerate(vector))
            for j, vector in enumerate(self.vectors)
        )

    def subspace(self, k: int) -> Subspace:
        """n_k in storage coordinates"""
        return Subspace(self.dim, self.vectors[:k])

    def change_of_basis(self) -> Mat:
        return Mat.from_columns(self.vectors, self.dim)

    def to_flag(self, vector: Sequence[Scalar]) -> Vector:
        return apply(_inverse(self), vector)

    def from_flag(self, coordinates: Sequence[Scalar]) -> Vector:
        return apply(self.change_of_basis(), coordinates)

    def subspace_to_flag(self, subspace: Subspace) -> Subspace:
        return Subspace(self.dim, tuple(self.to_flag(v) for v in subspace.vectors))

    def subspace_from_flag(self, subspace: Subspace) -> Subspace:
        return Subspace(self.dim, tuple(self.from_flag(v) for v in subspace.vectors))


@lru_cache(maxsize=256)
def _inverse(flag: Flag) -> Mat:
    return flag.change_of_basis().inverse()


@lru_cache(maxsize=256)
def in_flag_basis(algebra: LieAlgebra, flag: Optional[Flag] = None) -> LieAlgebra:
    """The same algebra with the flag vectors as its basis"""
    if flag is None or flag.is_standard():
        return algebra
    if flag.dim != algebra.dim:
        raise NotABasis("flag size differs from algebra dimension", dim=algebra.dim, flag=flag.dim)
    table = {}
    for i, j in combinations(range(flag.dim), 2):
        result = flag.to_flag(algebra.bracket(flag.vectors[i], flag.vectors[j]))
        table[(i, j)] = {k: c for k, c in enumerate(result) if c != QQ.zero}
    return LieAlgebra.from_table(algebra.name, flag.labels, table)


def validate_flag(algebra: LieAlgebra, flag: Flag) -> FlagReport:
    """Checks [n, n_j] ⊆ n_(j-1); reports the first position j whose vector breaks it"""
    rebased = in_flag_basis(algebra, flag)
    for j in range(rebased.dim):
        for i in range(j + 1):
            coefficients = rebased.constant(i, j)
            # [F_i, F_j] must lie in n_(i-1) for i <= j
            if any(c != QQ.zero for c in coefficients[i:]):
                logger.info("Flag rejected", algebra=algebra.name, position=j + 1)
                return FlagReport(
                    ok=False,
                    first_violation=j + 1,
                    offending=(flag.labels[i], flag.labels[j]),
                )
    return FlagReport(ok=True)


@lru_cache(maxsize=512)
def truncate(algebra: LieAlgebra, k: int) -> LieAlgebra:
    """n_k = span of the first k basis vectors, for an algebra already in flag basis"""
    table = {}
    for i, j, coefficients in algebra.brackets:
        if j >= k:
            continue
        if any(c != QQ.zero for c in coefficients[k:]):
            raise FlagMismatch("first basis vectors do not span a subalgebra", size=k)
        table[(i, j)] = {t: c for t, c in enumerate(coefficients[:k]) if c != QQ.zero}
    return LieAlgebra.from_table(f"{algebra.name}[:{k}]", algebra.labels[:k], table)


@lru_cache(maxsize=512)
def quotient_at(algebra: LieAlgebra, k: int) -> LieAlgebra:
    """n / n_k for an algebra in flag basis, with the images of X_(k+1)..X_m as basis"""
    table = {}
    for i, j, coefficients in algebra.brackets:
        if i < k:
            continue
        table[(i - k, j - k)] = {t - k: c for t, c in enumerate(coefficients) if t >= k and c != QQ.zero}
    return LieAlgebra.from_table(f"{algebra.name}/[:{k}]", algebra.labels[k:], table)


def quotient(algebra: LieAlgebra, ideal: Subspace, flag: Flag) -> Tuple[LieAlgebra, Flag]:
    if not is_ideal(algebra, ideal):
        raise NotAnIdeal("quotient by a subspace that is not an ideal", algebra=algebra.name)
    k = ideal.dim
    if not flag.subspace(k).equals(ideal):
        raise FlagMismatch("no flag subspace equals the ideal", size=k)
    result = quotient_at(in_flag_basis(algebra, flag), k)
    return result, Flag.standard(result)


def subspace_classify(algebra: LieAlgebra, subspace: Subspace, flag: Flag) -> SubspaceClass:
    compatible = sum(1 for vector in flag.vectors if subspace.contains(vector)) == subspace.dim
    return SubspaceClass(
        subalgebra=is_subalgebra(algebra, subspace),
        ideal=is_ideal(algebra, subspace),
        compatible=compatible,
    )


@dataclass(frozen=True)
class SemidirectSplit:
    """ñ = m ⋉ n with ``n_part`` the ideal"""
    m_part: Subspace
    n_part: Subspace

    def to_flag(self, flag: Flag) -> "SemidirectSplit":
        return SemidirectSplit(flag.subspace_to_flag(self.m_part), flag.subspace_to_flag(self.n_part))


def _first_escape(algebra: LieAlgebra, left, right, target: Subspace) -> Optional[str]:
    for x in left:
        for y in right:
            value = algebra.bracket(x, y)
            if not target.contains(value):
                return f"[{algebra.describe(x)}, {algebra.describe(y)}] = {algebra.describe(value)}"
    return None


def semidirect_split_check(algebra: LieAlgebra, split: SemidirectSplit) -> SplitReport:
    basis = [algebra.basis_vector(i) for i in range(algebra.dim)]
    witnesses = []
    ideal_witness = _first_escape(algebra, basis, split.n_part.vectors, split.n_part)
    if ideal_witness:
        witnesses.append(f"not an ideal: {ideal_witness}")
    subalgebra_witness = _first_escape(algebra, split.m_part.vectors, split.m_part.vectors, split.m_part)
    if subalgebra_witness:
        witnesses.append(f"not a subalgebra: {subalgebra_witness}")
    joined = split.m_part.join(split.n_part)
    direct_sum = split.m_part.dim + split.n_part.dim == algebra.dim and joined.dim == algebra.dim
    if not direct_sum:
        witnesses.append(
            f"not a direct sum: dims {split.m_part.dim} + {split.n_part.dim}, span {joined.dim} of {algebra.dim}"
        )
    return SplitReport(
        ideal=ideal_witness is None,
        subalgebra=subalgebra_witness is None,
        direct_sum=direct_sum,
        witnesses=tuple(witnesses),
    )
