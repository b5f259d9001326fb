"""Builders for the shipped algebra families."""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Tuple

from sympy.polys.domains import QQ

from nilstrat.core.exceptions import UnsupportedSize, ValidationError
from nilstrat.lie.algebra import LieAlgebra, Subspace
from nilstrat.lie.flags import Flag
from nilstrat.stepwise.data import Layer, StepwiseData


class FixtureName(Enum):
    HEISENBERG = "heisenberg"
    UPPER_TRIANGULAR = "upper_triangular"
    FILIFORM4 = "filiform4"


@dataclass(frozen=True)
class AlgebraBundle:
    algebra: LieAlgebra
    flag: Flag
    stepwise: Optional[StepwiseData] = None
    provenance: str = ""


def _labelled_subspace(algebra: LieAlgebra, labels: List[str]) -> Subspace:
    index = {label: i for i, label in enumerate(algebra.labels)}
    return Subspace(algebra.dim, tuple(algebra.basis_vector(index[label]) for label in labels))


def _layer(algebra: LieAlgebra, m: List[str], z: List[str], v: List[str]) -> Layer:
    return Layer(
        _labelled_subspace(algebra, m),
        _labelled_subspace(algebra, z),
        _labelled_subspace(algebra, v),
    )


def heisenberg(n: int) -> AlgebraBundle:
    """h_(2n+1) with [X_2i, X_(2i+1)] = X_1"""
    if n < 1:
        raise UnsupportedSize("heisenberg needs n >= 1", size=n)
    dim = 2 * n + 1
    labels = [f"X{i}" for i in range(1, dim + 1)]
    table = {(2 * i - 1, 2 * i): {0: QQ.one} for i in range(1, n + 1)}
    algebra = LieAlgebra.from_table(f"heisenberg{n}", labels, table)
    layer = _layer(algebra, labels, labels[:1], labels[1:])
    return AlgebraBundle(
        algebra=algebra,
        flag=Flag.standard(algebra),
        stepwise=StepwiseData((dim,), (layer,)),
        provenance=f"Heisenberg algebra of dimension {dim}, one flat layer",
    )


def _matrix_label(i: int, j: int, n: int) -> str:
    return f"E{i}{j}" if n < 10 else f"E{i}_{j}"


def hook_order(r: int, n: int) -> List[Tuple[int, int]]:
    """Corner E_(r, n+1-r) first, then pairs moving away from the corner"""
    last = n + 1 - r
    order = [(r, last)]
    for d in range(1, n - 2 * r + 1):
        order.extend([(r, last - d), (r + d, last)])
    return order


def upper_triangular(n: int) -> AlgebraBundle:
    """Strictly upper triangular n×n matrices with the hook decomposition"""
    if n < 2:
        raise UnsupportedSize("upper_triangular needs n >= 2", size=n)
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    position = {pair: a for a, pair in enumerate(pairs)}
    table: Dict[Tuple[int, int], Dict[int, object]] = {}
    for a, (i, j) in enumerate(pairs):
        for b in range(a + 1, len(pairs)):
            k, l = pairs[b]
            result = {}
            if j == k:
                result[position[(i, l)]] = QQ.one
            if l == i:
                result[position[(k, j)]] = -QQ.one
            if result:
                table[(a, b)] = result
    labels = [_matrix_label(i, j, n) for i, j in pairs]
    algebra = LieAlgebra.from_table(f"upper_triangular{n}", labels, table)

    hooks = [hook_order(r, n) for r in range(1, n // 2 + 1)]
    flag_labels = [_matrix_label(i, j, n) for hook in hooks for i, j in hook]
    if len(flag_labels) != algebra.dim:
        raise ValidationError("hooks do not cover the algebra", size=n)
    chain, layers, total = [], [], 0
    for hook in hooks:
        names = [_matrix_label(i, j, n) for i, j in hook]
        total += len(names)
        chain.append(total)
        layers.append(_layer(algebra, names, names[:1], names[1:]))
    return AlgebraBundle(
        algebra=algebra,
        flag=Flag.from_labels(algebra, flag_labels),
        stepwise=StepwiseData(tuple(chain), tuple(layers)),
        provenance=f"nilradical of the minimal Borel subalgebra of gl({n}), hook layers",
    )


def filiform4() -> AlgebraBundle:
    """3-step algebra [X4,X3]=X2, [X4,X2]=X1 with a one-dimensional center"""
    labels = ["X1", "X2", "X3", "X4"]
    table = {(3, 2): {1: QQ.one}, (3, 1): {0: QQ.one}}
    algebra = LieAlgebra.from_table("filiform4", labels, table)
    return AlgebraBundle(
        algebra=algebra,
        flag=Flag.from_labels(algebra, ["X1", "X2", "X4", "X3"]),
        stepwise=StepwiseData(
            (3, 4),
            (
                _layer(algebra, ["X1", "X2", "X4"], ["X1"], ["X2", "X4"]),
                _layer(algebra, ["X3"], ["X3"], []),
            ),
        ),
        provenance="filiform algebra of dimension 4, Heisenberg layer plus abelian top",
    )


def build_fixture(name: str, size: Optional[int] = None) -> AlgebraBundle:
    try:
        fixture = FixtureName(name)
    except ValueError:
        raise ValidationError(f"unknown fixture {name!r}", known=[f.value for f in FixtureName])
    if fixture is FixtureName.HEISENBERG:
        return heisenberg(1 if size is None else size)
    if fixture is FixtureName.UPPER_TRIANGULAR:
        return upper_triangular(4 if size is None else size)
    if size not in (None, 4):
        raise UnsupportedSize("filiform4 has fixed dimension 4", size=size)
    return filiform4()
