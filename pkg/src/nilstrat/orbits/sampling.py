"""Seeded integer sampling of functionals and group elements.

Every draw comes from ``np.random.default_rng([seed, stream, index])`` so a
trial can be replayed on its own and trials can run in any order.
"""

import numpy as np

from nilstrat.lie.algebra import Subspace
from nilstrat.linalg.matrix import Vector
from nilstrat.linalg.scalars import rational
from nilstrat.orbits.functionals import Functional, GroupElement

DEFAULT_BOUND = 1000
DEFAULT_GROUP_BOUND = 3
DEFAULT_GROUP_FACTORS = 3


def trial_rng(seed: int, index: int, stream: int = 0) -> np.random.Generator:
    """Independent generator for trial ``index`` of ``stream``"""
    return np.random.default_rng([seed, stream, index])


class IntegerSampler:
    """Uniform integers in [-bound, bound].

    Functionals get nonzero coordinates, so a draw never lands on a
    coordinate hyperplane; subspace weights and group factors may be zero
    but are never all zero.
    """

    def __init__(self, bound: int = DEFAULT_BOUND):
        if bound < 1:
            raise ValueError("sample bound must be positive")
        self.bound = bound

    def integers(self, rng: np.random.Generator, size: int, bound: int = None) -> Vector:
        bound = bound or self.bound
        if size == 0:
            return ()
        while True:
            draw = rng.integers(-bound, bound, size=size, endpoint=True)
            if draw.any():
                return tuple(rational(int(value)) for value in draw)

    def nonzero_integers(self, rng: np.random.Generator, size: int) -> Vector:
        magnitudes = rng.integers(1, self.bound, size=size, endpoint=True)
        signs = rng.choice((-1, 1), size=size)
        return tuple(rational(int(value)) for value in magnitudes * signs)

    def functional(self, rng: np.random.Generator, m: int) -> Functional:
        return Functional(self.nonzero_integers(rng, m))

    def combination(self, rng: np.random.Generator, subspace: Subspace) -> Vector:
        """Random nonzero vector of ``subspace``"""
        if subspace.dim == 0:
            return tuple(rational(0) for _ in range(subspace.ambient))
        weights = self.integers(rng, subspace.dim)
        result = [rational(0)] * subspace.ambient
        for weight, vector in zip(weights, subspace.vectors):
            for k, value in enumerate(vector):
                result[k] += weight * value
        return tuple(result)

    def functional_in(self, rng: np.random.Generator, functionals: Subspace) -> Functional:
        return Functional(self.combination(rng, functionals))

    def group_element(
        self,
        rng: np.random.Generator,
        m: int,
        factors: int = DEFAULT_GROUP_FACTORS,
        bound: int = DEFAULT_GROUP_BOUND,
    ) -> GroupElement:
        """Product of one to ``factors`` exponentials with entries in [-bound, bound]"""
        count = int(rng.integers(1, factors, endpoint=True))
        return GroupElement(tuple(self.integers(rng, m, bound) for _ in range(count)))
