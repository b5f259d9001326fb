"""Dense exact matrices over QQ or QQ(u1, ..., um).

``Mat`` is a thin immutable wrapper around sympy's ``DomainMatrix``; the
row reductions, products and determinants come from sympy, the wrapper adds
the empty-shape handling and the nilpotent exponential the rest of the
package needs.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ
from sympy.polys.domains.domain import Domain
from sympy.polys.matrices import DomainMatrix

from nilstrat.core.exceptions import DimensionMismatch, NotNilpotent
from nilstrat.linalg.scalars import FieldKind, Scalar, field_kind, lift

Vector = Tuple[Scalar, ...]


@dataclass(frozen=True, eq=False)
class Mat:
    rep: DomainMatrix

    __hash__ = None

    @classmethod
    def from_rows(
        cls, rows: Sequence[Sequence[Scalar]], domain: Domain = QQ, ncols: Optional[int] = None
    ) -> "Mat":
        rows = [list(row) for row in rows]
        width = len(rows[0]) if rows else (ncols or 0)
        return cls(DomainMatrix(rows, (len(rows), width), domain))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Scalar]], nrows: int, domain: Domain = QQ) -> "Mat":
        if not columns:
            return cls.zeros(nrows, 0, domain)
        return cls.from_rows([list(row) for row in zip(*columns)], domain)

    @classmethod
    def zeros(cls, nrows: int, ncols: int, domain: Domain = QQ) -> "Mat":
        return cls(DomainMatrix.zeros((nrows, ncols), domain).to_dense())

    @classmethod
    def identity(cls, n: int, domain: Domain = QQ) -> "Mat":
        return cls(DomainMatrix.eye(n, domain).to_dense())

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rep.shape

    @property
    def domain(self) -> Domain:
        return self.rep.domain

    @property
    def field(self) -> FieldKind:
        return field_kind(self.domain)

    def rows(self) -> List[List[Scalar]]:
        nrows, ncols = self.shape
        if nrows == 0 or ncols == 0:
            return [[] for _ in range(nrows)]
        return self.rep.to_list()

    def columns(self) -> List[Vector]:
        return [tuple(column) for column in self.transpose().rows()]

    def entry(self, i: int, j: int) -> Scalar:
        return self.rep[i, j].element

    def transpose(self) -> "Mat":
        return Mat(self.rep.transpose())

    def convert_to(self, domain: Domain) -> "Mat":
        if domain == self.domain:
            return self
        return Mat(self.rep.convert_to(domain))

    def _aligned(self, other: "Mat") -> Tuple[DomainMatrix, DomainMatrix]:
        if self.domain == other.domain:
            return self.rep, other.rep
        unified = self.domain.unify(other.domain)
        return self.rep.convert_to(unified), other.rep.convert_to(unified)

    def matmul(self, other: "Mat") -> "Mat":
        if self.shape[1] != other.shape[0]:
            raise DimensionMismatch("inner dimensions differ", left=self.shape, right=other.shape)
        left, right = self._aligned(other)
        return Mat(left.matmul(right))

    def __add__(self, other: "Mat") -> "Mat":
        left, right = self._aligned(other)
        return Mat(left + right)

    def __sub__(self, other: "Mat") -> "Mat":
        left, right = self._aligned(other)
        return Mat(left - right)

    def __neg__(self) -> "Mat":
        return Mat(-self.rep)

    def scale(self, factor: Scalar) -> "Mat":
        return Mat(self.rep.scalarmul(factor))

    def is_zero(self) -> bool:
        nrows, ncols = self.shape
        return nrows == 0 or ncols == 0 or self.rep.is_zero_matrix

    def is_square(self) -> bool:
        return self.shape[0] == self.shape[1]

    def submatrix(self, row_indices: Sequence[int], column_indices: Sequence[int]) -> "Mat":
        if not row_indices or not column_indices:
            return Mat.zeros(len(row_indices), len(column_indices), self.domain)
        return Mat(self.rep.extract(list(row_indices), list(column_indices)))

    def rank(self) -> int:
        if self.is_zero():
            return 0
        return self.rep.to_field().rank()

    def pivots(self) -> Tuple[int, ...]:
        """Pivot columns of the reduced row echelon form"""
        if self.is_zero():
            return ()
        _, pivots = self.rep.to_field().rref()
        return tuple(pivots)

    def det(self) -> Scalar:
        if not self.is_square():
            raise DimensionMismatch("determinant of a non-square matrix", shape=self.shape)
        if self.shape[0] == 0:
            return self.domain.one
        return self.rep.det()

    def inverse(self) -> "Mat":
        return Mat(self.rep.to_field().inv())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        return self.shape == other.shape and self.domain == other.domain and self.rows() == other.rows()

    def __repr__(self) -> str:
        return f"Mat({self.shape[0]}x{self.shape[1]} over {self.domain}, {self.rows()})"


def standard_basis(m: int, domain: Domain = QQ) -> List[Vector]:
    return [
        tuple(domain.one if i == j else domain.zero for i in range(m))
        for j in range(m)
    ]


def rank_and_kernel(matrix: Mat) -> Tuple[int, List[Vector]]:
    """Rank of ``matrix`` and a basis of its right kernel"""
    nrows, ncols = matrix.shape
    if ncols == 0:
        return 0, []
    if matrix.is_zero():
        return 0, standard_basis(ncols, matrix.domain)
    reduced = matrix.rep.to_field()
    _, pivots = reduced.rref()
    kernel = reduced.nullspace()
    vectors = [tuple(row) for row in kernel.to_list()] if kernel.shape[0] else []
    return len(pivots), vectors


def apply(matrix: Mat, vector: Sequence[Scalar]) -> Vector:
    """M·v for a coordinate vector v"""
    column = Mat.from_rows([[x] for x in vector], matrix.domain, ncols=1)
    return tuple(row[0] for row in matrix.matmul(column).rows())


def row_times(vector: Sequence[Scalar], matrix: Mat) -> Vector:
    """v·M for a row vector v"""
    domain = matrix.domain
    row = Mat.from_rows([list(vector)], domain, ncols=len(vector))
    product = row.matmul(matrix)
    return tuple(product.rows()[0]) if product.shape[0] else ()


def solve_in_basis(basis: Sequence[Vector], vector: Sequence[Scalar], domain: Domain = QQ) -> Optional[Vector]:
    """Coefficients of ``vector`` in the independent ``basis``, or None if outside the span"""
    if not basis:
        return () if all(x == domain.zero for x in vector) else None
    size = len(vector)
    augmented = Mat.from_rows(
        [[b[i] for b in basis] + [vector[i]] for i in range(size)], domain
    )
    reduced, pivots = augmented.rep.to_field().rref()
    if len(basis) in pivots:
        return None
    rows = reduced.to_list()
    return tuple(rows[i][len(basis)] for i in range(len(basis)))


def nilpotent_exponential(matrix: Mat) -> Mat:
    """exp(M) as the finite sum of M^k/k!; raises NotNilpotent unless M^dim = 0"""
    n, ncols = matrix.shape
    if n != ncols:
        raise DimensionMismatch("exponential of a non-square matrix", shape=matrix.shape)
    domain = matrix.domain
    result = Mat.identity(n, domain)
    term = Mat.identity(n, domain)
    for k in range(1, n + 1):
        term = term.matmul(matrix).scale(lift(QQ(1, k), domain))
        if term.is_zero():
            return result
        result = result + term
    if n == 0:
        return result
    raise NotNilpotent("matrix power M^dim does not vanish", dim=n)
