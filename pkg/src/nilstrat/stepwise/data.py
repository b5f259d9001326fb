from dataclasses import dataclass
from typing import Optional, Tuple

from nilstrat.core.exceptions import ChainNotInFlag, ValidationError
from nilstrat.lie.algebra import Subspace
from nilstrat.lie.flags import Flag


@dataclass(frozen=True)
class Layer:
    """One step n_j = m_j ⋉ n_(j-1) with m_j = z_j ∔ V_j"""
    m: Subspace
    z: Subspace
    v: Subspace

    def to_flag(self, flag: Flag) -> "Layer":
        return Layer(flag.subspace_to_flag(self.m), flag.subspace_to_flag(self.z), flag.subspace_to_flag(self.v))


@dataclass(frozen=True)
class StepwiseData:
    """Chain positions k_1 < ... < k_q = m inside the flag plus one layer per position"""
    chain: Tuple[int, ...]
    layers: Tuple[Layer, ...]

    def __post_init__(self):
        if len(self.chain) != len(self.layers):
            raise ValidationError(
                "stepwise chain and layers differ in length",
                chain=len(self.chain),
                layers=len(self.layers),
            )

    @property
    def q(self) -> int:
        return len(self.chain)

    def check_chain(self, dim: int) -> None:
        """Raises ChainNotInFlag unless 0 < k_1 < ... < k_q = dim"""
        previous = 0
        for k in self.chain:
            if k <= previous or k > dim:
                raise ChainNotInFlag("chain positions must increase within the flag", position=k, dim=dim)
            previous = k
        if not self.chain or self.chain[-1] != dim:
            raise ChainNotInFlag("last chain position must be the full algebra", dim=dim)

    def previous(self, index: int) -> int:
        """k_(j-1) for the 0-based layer ``index``"""
        return self.chain[index - 1] if index > 0 else 0

    def in_flag(self, flag: Optional[Flag]) -> "StepwiseData":
        if flag is None or flag.is_standard():
            return self
        return StepwiseData(self.chain, tuple(layer.to_flag(flag) for layer in self.layers))

    def center_sum(self, dim: int) -> Subspace:
        """s = z_1 + ... + z_q"""
        total = Subspace.zero(dim)
        for layer in self.layers:
            total = total.join(layer.z)
        return total

    def v_sum(self, dim: int) -> Subspace:
        """V_1 + ... + V_q, the coordinates of n_e"""
        total = Subspace.zero(dim)
        for layer in self.layers:
            total = total.join(layer.v)
        return total
