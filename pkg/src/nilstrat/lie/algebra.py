"""Structure-constant Lie algebras and subspaces of them."""

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import structlog
from sympy.polys.domains import QQ
from sympy.polys.domains.domain import Domain

from nilstrat.core.exceptions import DependentSpanningSet, DimensionMismatch, NotASubalgebra, ValidationError
from nilstrat.core.models import StructureReport
from nilstrat.linalg.matrix import Mat, Vector, rank_and_kernel, solve_in_basis, standard_basis
from nilstrat.linalg.scalars import Scalar, format_scalar, lift

logger = structlog.get_logger()

Bracket = Tuple[int, int, Vector]


@dataclass(frozen=True)
class LieAlgebra:
    """Algebra with basis ``labels`` and [X_i, X_j] = Σ_k c^k_ij X_k.

    Only pairs i < j with a nonzero result are stored; antisymmetry is
    implied by the storage.
    """
    name: str
    labels: Tuple[str, ...]
    brackets: Tuple[Bracket, ...]

    @classmethod
    def from_table(
        cls,
        name: str,
        labels: Sequence[str],
        table: Mapping[Tuple[int, int], Mapping[int, Scalar]],
    ) -> "LieAlgebra":
        """Build from {(i, j): {k: c}} with 0-based indices in either order"""
        m = len(labels)
        normalized: Dict[Tuple[int, int], List[Scalar]] = {}
        for (i, j), result in table.items():
            if not (0 <= i < m and 0 <= j < m):
                raise ValidationError("bracket index out of range", left=i, right=j)
            coefficients = [QQ.zero] * m
            for k, value in result.items():
                coefficients[k] = coefficients[k] + value
            if i == j:
                if any(coefficients):
                    raise ValidationError(f"[{labels[i]},{labels[i]}] must vanish")
                continue
            sign = 1
            if i > j:
                i, j, sign = j, i, -1
            if (i, j) in normalized:
                raise ValidationError(f"bracket [{labels[i]},{labels[j]}] given twice")
            normalized[(i, j)] = [sign * c for c in coefficients]
        stored = tuple(
            (i, j, tuple(coefficients))
            for (i, j), coefficients in sorted(normalized.items())
            if any(coefficients)
        )
        return cls(name, tuple(labels), stored)

    @classmethod
    def abelian(cls, m: int, name: str = None) -> "LieAlgebra":
        return cls(name or f"abelian{m}", tuple(f"X{i}" for i in range(1, m + 1)), ())

    @property
    def dim(self) -> int:
        return len(self.labels)

    @cached_property
    def _table(self) -> Dict[Tuple[int, int], Vector]:
        table: Dict[Tuple[int, int], Vector] = {}
        for i, j, coefficients in self.brackets:
            table[(i, j)] = coefficients
            table[(j, i)] = tuple(-c for c in coefficients)
        return table

    def constant(self, i: int, j: int) -> Vector:
        """Coordinates of [X_i, X_j] (0-based)"""
        return self._table.get((i, j), self.zero())

    def zero(self) -> Vector:
        return (QQ.zero,) * self.dim

    def basis_vector(self, i: int) -> Vector:
        return tuple(QQ.one if k == i else QQ.zero for k in range(self.dim))

    def bracket(self, x: Sequence[Scalar], y: Sequence[Scalar]) -> Vector:
        if len(x) != self.dim or len(y) != self.dim:
            raise DimensionMismatch("vector length differs from algebra dimension", dim=self.dim)
        result = [QQ.zero] * self.dim
        for i, j, coefficients in self.brackets:
            weight = x[i] * y[j] - x[j] * y[i]
            if weight == QQ.zero:
                continue
            for k, c in enumerate(coefficients):
                if c != QQ.zero:
                    result[k] += weight * c
        return tuple(result)

    def ad_matrix(self, x: Sequence[Scalar]) -> Mat:
        """Matrix of ad x; column j holds the coordinates of [x, X_j]"""
        columns = [self.bracket(x, self.basis_vector(j)) for j in range(self.dim)]
        return Mat.from_columns(columns, self.dim)

    def form_matrix(self, xi: Sequence[Scalar], domain: Domain = QQ) -> Mat:
        """B_ij = ξ([X_i, X_j]) over the field of ξ"""
        m = self.dim
        if len(xi) != m:
            raise DimensionMismatch("functional length differs from algebra dimension", dim=m, length=len(xi))
        rows = [[domain.zero] * m for _ in range(m)]
        for i, j, coefficients in self.brackets:
            value = domain.zero
            for k, c in enumerate(coefficients):
                if c != QQ.zero:
                    value += lift(c, domain) * xi[k]
            rows[i][j] = value
            rows[j][i] = -value
        return Mat.from_rows(rows, domain, ncols=m)

    def bracket_sets(self, left: Iterable[Vector], right: Iterable[Vector]) -> List[Vector]:
        right = list(right)
        return [self.bracket(x, y) for x in left for y in right]

    def describe(self, vector: Sequence[Scalar]) -> str:
        terms = [
            f"{format_scalar(c)}*{label}"
            for c, label in zip(vector, self.labels)
            if c != QQ.zero
        ]
        return " + ".join(terms) if terms else "0"


@dataclass(frozen=True)
class Subspace:
    """Span of independent coordinate vectors"""
    ambient: int
    vectors: Tuple[Vector, ...]
    domain: Domain = QQ

    def __post_init__(self):
        for vector in self.vectors:
            if len(vector) != self.ambient:
                raise DimensionMismatch("vector length differs from ambient dimension", ambient=self.ambient)
        if self.vectors and self.matrix().rank() != len(self.vectors):
            raise DependentSpanningSet("spanning vectors are linearly dependent", count=len(self.vectors))

    @classmethod
    def span(cls, ambient: int, vectors: Iterable[Sequence[Scalar]], domain: Domain = QQ) -> "Subspace":
        """Subspace spanned by possibly dependent vectors; keeps an independent subset"""
        vectors = [tuple(v) for v in vectors]
        if not vectors:
            return cls(ambient, (), domain)
        columns = Mat.from_columns(vectors, ambient, domain)
        chosen = tuple(vectors[p] for p in columns.pivots())
        return cls(ambient, chosen, domain)

    @classmethod
    def zero(cls, ambient: int, domain: Domain = QQ) -> "Subspace":
        return cls(ambient, (), domain)

    @classmethod
    def whole(cls, ambient: int, domain: Domain = QQ) -> "Subspace":
        return cls(ambient, tuple(standard_basis(ambient, domain)), domain)

    @classmethod
    def coordinate(cls, ambient: int, positions: Iterable[int], domain: Domain = QQ) -> "Subspace":
        """Span of the standard basis vectors at 0-based ``positions``"""
        basis = standard_basis(ambient, domain)
        return cls(ambient, tuple(basis[p] for p in sorted(positions)), domain)

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def matrix(self) -> Mat:
        """Basis vectors as columns"""
        return Mat.from_columns(self.vectors, self.ambient, self.domain)

    def contains(self, vector: Sequence[Scalar]) -> bool:
        if all(x == self.domain.zero for x in vector):
            return True
        return solve_in_basis(self.vectors, vector, self.domain) is not None

    def contains_all(self, vectors: Iterable[Sequence[Scalar]]) -> bool:
        return all(self.contains(v) for v in vectors)

    def includes(self, other: "Subspace") -> bool:
        return self.contains_all(other.vectors)

    def equals(self, other: "Subspace") -> bool:
        return self.dim == other.dim and self.includes(other)

    def join(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.ambient, self.vectors + other.vectors, self.domain)

    def coordinates(self, vector: Sequence[Scalar]) -> Optional[Vector]:
        return solve_in_basis(self.vectors, vector, self.domain)

    def annihilator(self) -> "Subspace":
        """Functionals (as coordinate vectors) vanishing on the subspace"""
        if not self.vectors:
            return Subspace.whole(self.ambient, self.domain)
        rows = Mat.from_rows([list(v) for v in self.vectors], self.domain)
        _, kernel = rank_and_kernel(rows)
        return Subspace(self.ambient, tuple(kernel), self.domain)

    def truncated(self, size: int) -> "Subspace":
        """Drop coordinates beyond ``size``; the caller guarantees they vanish"""
        return Subspace(size, tuple(v[:size] for v in self.vectors), self.domain)

    def positions(self) -> Tuple[int, ...]:
        """0-based indices of standard basis vectors lying in the subspace"""
        basis = standard_basis(self.ambient, self.domain)
        return tuple(i for i in range(self.ambient) if self.contains(basis[i]))

    def is_coordinate(self) -> bool:
        return len(self.positions()) == self.dim


def validate_structure(algebra: LieAlgebra) -> StructureReport:
    m = algebra.dim
    basis = [algebra.basis_vector(i) for i in range(m)]
    violations = []
    for i, j, k in combinations(range(m), 3):
        x, y, z = basis[i], basis[j], basis[k]
        total = [
            a + b + c
            for a, b, c in zip(
                algebra.bracket(x, algebra.bracket(y, z)),
                algebra.bracket(y, algebra.bracket(z, x)),
                algebra.bracket(z, algebra.bracket(x, y)),
            )
        ]
        if any(value != QQ.zero for value in total):
            violations.append((algebra.labels[i], algebra.labels[j], algebra.labels[k]))
    series = lower_central_series(algebra)
    nilpotency_class = len(series) - 1 if series[-1].dim == 0 else None
    if violations or nilpotency_class is None:
        logger.info(
            "Structure constants rejected",
            algebra=algebra.name,
            jacobi_violations=len(violations),
            nilpotent=nilpotency_class is not None,
        )
    return StructureReport(
        jacobi_ok=not violations,
        nilpotency_class=nilpotency_class,
        violations=tuple(violations),
    )


def lower_central_series(algebra: LieAlgebra) -> List[Subspace]:
    """C^1 = n, C^(k+1) = [n, C^k]; stops at {0} or when the chain stabilizes"""
    m = algebra.dim
    basis = [algebra.basis_vector(i) for i in range(m)]
    series = [Subspace.whole(m)]
    while series[-1].dim:
        following = Subspace.span(m, algebra.bracket_sets(basis, series[-1].vectors))
        if following.dim == series[-1].dim:
            break
        series.append(following)
    return series


@lru_cache(maxsize=256)
def center(algebra: LieAlgebra) -> Subspace:
    m = algebra.dim
    if m == 0:
        return Subspace.zero(0)
    # x is central iff c^k_ij x_i summed over i vanishes for every (j, k)
    rows = []
    for j in range(m):
        for k in range(m):
            rows.append([algebra.constant(i, j)[k] for i in range(m)])
    _, kernel = rank_and_kernel(Mat.from_rows(rows, QQ, ncols=m))
    return Subspace(m, tuple(kernel))


def series_and_center(algebra: LieAlgebra) -> Tuple[Subspace, List[Subspace]]:
    return center(algebra), lower_central_series(algebra)


def is_subalgebra(algebra: LieAlgebra, subspace: Subspace) -> bool:
    return subspace.contains_all(algebra.bracket_sets(subspace.vectors, subspace.vectors))


def is_ideal(algebra: LieAlgebra, subspace: Subspace) -> bool:
    basis = [algebra.basis_vector(i) for i in range(algebra.dim)]
    return subspace.contains_all(algebra.bracket_sets(basis, subspace.vectors))


def restrict(algebra: LieAlgebra, subspace: Subspace, name: str = None) -> LieAlgebra:
    """``subspace`` as a standalone algebra in the basis of its spanning vectors"""
    labels = []
    for a, vector in enumerate(subspace.vectors):
        nonzero = [i for i, c in enumerate(vector) if c != QQ.zero]
        if len(nonzero) == 1 and vector[nonzero[0]] == QQ.one:
            labels.append(algebra.labels[nonzero[0]])
        else:
            labels.append(f"v{a + 1}")
    table = {}
    for a, b in combinations(range(subspace.dim), 2):
        result = algebra.bracket(subspace.vectors[a], subspace.vectors[b])
        coordinates = subspace.coordinates(result)
        if coordinates is None:
            raise NotASubalgebra(
                "bracket leaves the subspace",
                left=labels[a],
                right=labels[b],
                value=algebra.describe(result),
            )
        table[(a, b)] = {k: c for k, c in enumerate(coordinates) if c != QQ.zero}
    return LieAlgebra.from_table(name or f"{algebra.name}|sub", labels, table)


def embed(subspace: Subspace, coordinates: Sequence[Scalar]) -> Vector:
    """Vector of the ambient algebra with the given coordinates in ``subspace``'s basis"""
    result = [subspace.domain.zero] * subspace.ambient
    for c, vector in zip(coordinates, subspace.vectors):
        for k, value in enumerate(vector):
            result[k] += c * value
    return tuple(result)
