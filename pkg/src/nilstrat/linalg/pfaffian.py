"""Exact Pfaffians of skew-symmetric matrices.

Small matrices use the first-row expansion; larger ones an exact
Parlett-Reid reduction (the LTL^T scheme used by pfapack, run over the
matrix's own field so no pivoting for stability is needed).
"""

from typing import List, Sequence

from sympy.polys.domains.domain import Domain

from nilstrat.core.exceptions import NonSkew
from nilstrat.linalg.matrix import Mat
from nilstrat.linalg.scalars import Scalar

EXPANSION_LIMIT = 8


def check_skew(matrix: Mat) -> List[List[Scalar]]:
    nrows, ncols = matrix.shape
    if nrows != ncols:
        raise NonSkew("Pfaffian needs a square matrix", shape=matrix.shape)
    entries = matrix.rows()
    zero = matrix.domain.zero
    for i in range(nrows):
        if entries[i][i] != zero:
            raise NonSkew("nonzero diagonal entry", row=i + 1)
        for j in range(i + 1, nrows):
            if entries[i][j] != -entries[j][i]:
                raise NonSkew("matrix is not skew-symmetric", row=i + 1, column=j + 1)
    return entries


def pfaffian(matrix: Mat) -> Scalar:
    entries = check_skew(matrix)
    n = len(entries)
    domain = matrix.domain
    if n % 2:
        return domain.zero
    if n <= EXPANSION_LIMIT:
        return _expand(entries, list(range(n)), domain)
    return _parlett_reid(entries, domain)


def pfaffian_expansion(matrix: Mat) -> Scalar:
    entries = check_skew(matrix)
    if len(entries) % 2:
        return matrix.domain.zero
    return _expand(entries, list(range(len(entries))), matrix.domain)


def pfaffian_parlett_reid(matrix: Mat) -> Scalar:
    entries = check_skew(matrix)
    if len(entries) % 2:
        return matrix.domain.zero
    return _parlett_reid(entries, matrix.domain)


def _expand(entries: Sequence[Sequence[Scalar]], indices: List[int], domain: Domain) -> Scalar:
    if not indices:
        return domain.one
    first, rest = indices[0], indices[1:]
    total = domain.zero
    for position, j in enumerate(rest):
        head = entries[first][j]
        if head == domain.zero:
            continue
        term = head * _expand(entries, rest[:position] + rest[position + 1:], domain)
        total = total + term if position % 2 == 0 else total - term
    return total


def _parlett_reid(entries: Sequence[Sequence[Scalar]], domain: Domain) -> Scalar:
    a = [list(row) for row in entries]
    n = len(a)
    value = domain.one
    for k in range(0, n - 1, 2):
        pivot = next((p for p in range(k + 1, n) if a[p][k] != domain.zero), None)
        if pivot is None:
            return domain.zero
        if pivot != k + 1:
            a[k + 1], a[pivot] = a[pivot], a[k + 1]
            for row in a:
                row[k + 1], row[pivot] = row[pivot], row[k + 1]
            value = -value
        head = a[k][k + 1]
        value = value * head
        tail = range(k + 2, n)
        tau = [a[k][i] / head for i in tail]
        column = [a[i][k + 1] for i in tail]
        for r, i in enumerate(tail):
            for s, j in enumerate(tail):
                a[i][j] = a[i][j] + tau[r] * column[s] - column[r] * tau[s]
    return value
