import json
from dataclasses import dataclass, field
from enum import Enum
from functools import total_ordering
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from nilstrat.core.exceptions import DimensionMismatch, ValidationError
from nilstrat.linalg.scalars import format_scalar


class Comparison(Enum):
    """Outcome of comparing two jump sets under the ≺ order"""
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"


class StratumKind(Enum):
    COARSE = "coarse"
    FINE = "fine"


class GenericMode(Enum):
    """How the generic jump set e(n) is obtained"""
    SYMBOLIC = "symbolic"
    SAMPLED = "sampled"
    AUTO = "auto"


class Status(Enum):
    OK = "ok"
    CHECK_FAILED = "check-failed"
    INPUT_ERROR = "input-error"


class TrialOutcome(Enum):
    """Result of one property-suite trial"""
    CONFIRMED = "confirmed"
    VACUOUS = "vacuous"
    FAILED = "failed"


@total_ordering
@dataclass(frozen=True)
class JumpSet:
    """Strictly increasing subset of {1, ..., size}"""
    indices: Tuple[int, ...]
    size: int

    def __post_init__(self):
        previous = 0
        for index in self.indices:
            if index <= previous or index > self.size:
                raise ValidationError(
                    "jump set indices must be strictly increasing within range",
                    indices=list(self.indices),
                    size=self.size,
                )
            previous = index

    @classmethod
    def of(cls, indices: Iterable[int], size: int) -> "JumpSet":
        return cls(tuple(sorted(set(indices))), size)

    @classmethod
    def empty(cls, size: int) -> "JumpSet":
        return cls((), size)

    def compare(self, other: "JumpSet") -> Comparison:
        """Order e1 ≺ e2 iff min(e1∖e2) < min(e2∖e1), with min ∅ = ∞"""
        if self.size != other.size:
            raise DimensionMismatch(
                "jump sets live in different index ranges", left=self.size, right=other.size
            )
        mine = set(self.indices) - set(other.indices)
        theirs = set(other.indices) - set(self.indices)
        if not mine and not theirs:
            return Comparison.EQUAL
        mine_min = min(mine) if mine else float("inf")
        theirs_min = min(theirs) if theirs else float("inf")
        return Comparison.LESS if mine_min < theirs_min else Comparison.GREATER

    def __lt__(self, other: "JumpSet") -> bool:
        return self.compare(other) is Comparison.LESS

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices)

    def __contains__(self, index: object) -> bool:
        return index in self.indices

    def shifted(self, offset: int, size: int) -> "JumpSet":
        return JumpSet(tuple(index + offset for index in self.indices), size)

    def union(self, other: "JumpSet") -> "JumpSet":
        return JumpSet.of(self.indices + other.indices, max(self.size, other.size))

    def to_list(self) -> List[int]:
        return list(self.indices)


@dataclass(frozen=True)
class StructureReport:
    jacobi_ok: bool
    nilpotency_class: Optional[int]
    violations: Tuple[Tuple[str, str, str], ...] = ()

    @property
    def nilpotent(self) -> bool:
        return self.nilpotency_class is not None

    @property
    def passed(self) -> bool:
        return self.jacobi_ok and self.nilpotent

    def to_dict(self) -> Dict[str, Any]:
        return {
            "jacobi_ok": self.jacobi_ok,
            "nilpotency_class": self.nilpotency_class,
            "violations": [list(triple) for triple in self.violations],
        }


@dataclass(frozen=True)
class FlagReport:
    ok: bool
    first_violation: Optional[int] = None
    offending: Optional[Tuple[str, str]] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ok": self.ok,
            "first_violation": self.first_violation,
            "offending": list(self.offending) if self.offending else None,
        }


@dataclass(frozen=True)
class SubspaceClass:
    subalgebra: bool
    ideal: bool
    compatible: bool

    def to_dict(self) -> Dict[str, Any]:
        return {"subalgebra": self.subalgebra, "ideal": self.ideal, "compatible": self.compatible}


@dataclass(frozen=True)
class SplitReport:
    ideal: bool
    subalgebra: bool
    direct_sum: bool
    witnesses: Tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.ideal and self.subalgebra and self.direct_sum

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ok": self.ok,
            "ideal": self.ideal,
            "subalgebra": self.subalgebra,
            "direct_sum": self.direct_sum,
            "witnesses": list(self.witnesses),
        }


@dataclass(frozen=True)
class FlatnessReport:
    flat: bool
    generic_isotropy_dim: int
    center_dim: int
    witness: Optional[Tuple[Any, ...]] = None

    @property
    def obstruction(self) -> Optional[int]:
        return None if self.flat else self.generic_isotropy_dim

    def to_dict(self) -> Dict[str, Any]:
        return {
            "flat": self.flat,
            "generic_isotropy_dim": self.generic_isotropy_dim,
            "center_dim": self.center_dim,
            "witness": [format_scalar(c) for c in self.witness] if self.witness is not None else None,
            "obstruction": self.obstruction,
        }


@dataclass(frozen=True)
class SquareIntegrabilityData:
    """C_e = (2π)^(d/2) / |Pf_e(ξ)|, kept as the pair (d/2, |Pf_e(ξ)|)"""
    jump_set: JumpSet
    orbit_dim: int
    pfaffian_abs: Any

    @property
    def two_pi_power(self) -> int:
        return self.orbit_dim // 2

    @property
    def magnitude(self) -> Any:
        return 1 / self.pfaffian_abs

    def to_dict(self) -> Dict[str, Any]:
        return {
            "jump_set": self.jump_set.to_list(),
            "orbit_dim": self.orbit_dim,
            "two_pi_power": self.two_pi_power,
            "pfaffian_abs": format_scalar(self.pfaffian_abs),
            "magnitude": format_scalar(self.magnitude),
        }


@dataclass(frozen=True)
class LayerReport:
    index: int
    center_dim_1: bool
    direct_sum: bool
    flat: bool
    semidirect: bool
    bracket_into_lower_V: bool
    commutes_with_lower_z: bool
    compatible: bool
    witnesses: Tuple[str, ...] = ()

    CHECKS = (
        "center_dim_1",
        "direct_sum",
        "flat",
        "semidirect",
        "bracket_into_lower_V",
        "commutes_with_lower_z",
        "compatible",
    )

    @property
    def ok(self) -> bool:
        return all(getattr(self, name) for name in self.CHECKS)

    def to_dict(self) -> Dict[str, Any]:
        result: Dict[str, Any] = {"layer": self.index, "ok": self.ok}
        result.update({name: getattr(self, name) for name in self.CHECKS})
        result["witnesses"] = list(self.witnesses)
        return result


@dataclass(frozen=True)
class HypothesisReport:
    layers: Tuple[LayerReport, ...]

    @property
    def ok(self) -> bool:
        return all(layer.ok for layer in self.layers)

    def to_dict(self) -> Dict[str, Any]:
        return {"ok": self.ok, "layers": [layer.to_dict() for layer in self.layers]}


@dataclass(frozen=True)
class ImplicationResult:
    """Implication-shaped lemma check; vacuous when the premise fails"""
    applicable: bool
    holds: bool
    informative: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {"applicable": self.applicable, "holds": self.holds, "informative": self.informative}


@dataclass
class SuiteMetrics:
    """Counters for one property suite run"""
    suite_id: str
    trials: int = 0
    informative: int = 0
    vacuous: int = 0
    failures: int = 0
    error_count: int = 0
    applicable: bool = True
    reason: Optional[str] = None
    first_failure: Optional[Dict[str, Any]] = None
    extras: Dict[str, Any] = field(default_factory=dict)

    def record(self, index: int, outcome: TrialOutcome, detail: Optional[str] = None) -> None:
        self.trials += 1
        if outcome is TrialOutcome.CONFIRMED:
            self.informative += 1
        elif outcome is TrialOutcome.VACUOUS:
            self.vacuous += 1
        else:
            self.failures += 1
            self._note_failure(index, detail)

    def record_error(self, index: int, detail: str) -> None:
        self.trials += 1
        self.error_count += 1
        self._note_failure(index, detail)

    def _note_failure(self, index: int, detail: Optional[str]) -> None:
        if self.first_failure is None or index < self.first_failure["trial"]:
            self.first_failure = {"trial": index, "detail": detail}

    @property
    def passed(self) -> bool:
        return self.failures == 0 and self.error_count == 0

    def to_dict(self) -> Dict[str, Any]:
        if not self.applicable:
            return {"suite": self.suite_id, "applicable": False, "reason": self.reason}
        result = {
            "suite": self.suite_id,
            "applicable": True,
            "trials": self.trials,
            "informative": self.informative,
            "vacuous": self.vacuous,
            "failures": self.failures,
            "errors": self.error_count,
            "first_failure": self.first_failure,
        }
        result.update(self.extras)
        return result


@dataclass
class Report:
    """Single structured document written by every CLI command"""
    command: Sequence[str]
    status: Status
    result: Dict[str, Any] = field(default_factory=dict)
    input_digest: Optional[str] = None
    seed: Optional[int] = None

    @property
    def exit_code(self) -> int:
        return {Status.OK: 0, Status.CHECK_FAILED: 1, Status.INPUT_ERROR: 2}[self.status]

    def to_dict(self) -> Dict[str, Any]:
        document: Dict[str, Any] = {
            "command": list(self.command),
            "input_digest": self.input_digest,
            "status": self.status.value,
            "result": self.result,
        }
        if self.seed is not None:
            document["seed"] = self.seed
        return document

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)
