"""The .nilalg bundle document: YAML with rationals written as strings."""

from pathlib import Path
from typing import Any, Dict, List, Sequence, Union

import structlog
import yaml
from sympy.polys.domains import QQ

from nilstrat.core.exceptions import ParseError, ValidationError
from nilstrat.lie.algebra import LieAlgebra, Subspace, validate_structure
from nilstrat.lie.flags import Flag, validate_flag
from nilstrat.linalg.matrix import Vector
from nilstrat.linalg.scalars import format_scalar, parse_scalar
from nilstrat.catalog.fixtures import AlgebraBundle
from nilstrat.stepwise.data import Layer, StepwiseData

logger = structlog.get_logger()

EXTENSION = ".nilalg"


def _require(document: Dict[str, Any], key: str, field: str) -> Any:
    if not isinstance(document, dict) or key not in document:
        raise ParseError(f"missing field {field}", field=field)
    return document[key]


def _scalar(value: Any, field: str):
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise ParseError(f"rational expected, got {value!r}", field=field)
    return parse_scalar(str(value), field=field)


def _vector(labels: Sequence[str], entry: Any, field: str) -> Vector:
    index = {label: i for i, label in enumerate(labels)}
    coords = [QQ.zero] * len(labels)
    if isinstance(entry, str):
        entry = {entry: "1"}
    if not isinstance(entry, dict):
        raise ParseError("vector must be a label or a {label: rational} mapping", field=field)
    for label, value in entry.items():
        if label not in index:
            raise ParseError(f"unknown basis label {label!r}", field=field)
        coords[index[label]] = _scalar(value, f"{field}.{label}")
    return tuple(coords)


def _subspace(labels: Sequence[str], entries: Any, field: str) -> Subspace:
    if not isinstance(entries, list):
        raise ParseError("subspace must be a list of vectors", field=field)
    vectors = tuple(_vector(labels, entry, f"{field}[{n}]") for n, entry in enumerate(entries))
    return Subspace(len(labels), vectors)


def from_document(document: Dict[str, Any]) -> AlgebraBundle:
    name = str(_require(document, "name", "name"))
    labels = _require(document, "basis", "basis")
    if not isinstance(labels, list) or not all(isinstance(label, str) for label in labels):
        raise ParseError("basis must be a list of labels", field="basis")
    if len(set(labels)) != len(labels):
        raise ParseError("basis labels must be distinct", field="basis")
    dim = _require(document, "dim", "dim")
    if dim != len(labels):
        raise ParseError(f"dim {dim} differs from {len(labels)} basis labels", field="dim")
    index = {label: i for i, label in enumerate(labels)}

    table = {}
    for n, entry in enumerate(document.get("brackets") or []):
        field = f"brackets[{n}]"
        left = _require(entry, "left", f"{field}.left")
        right = _require(entry, "right", f"{field}.right")
        for side, label in (("left", left), ("right", right)):
            if label not in index:
                raise ParseError(f"unknown basis label {label!r}", field=f"{field}.{side}")
        result = _vector(labels, _require(entry, "result", f"{field}.result"), f"{field}.result")
        key = (index[left], index[right])
        if key in table or key[::-1] in table:
            raise ParseError(f"bracket [{left},{right}] given twice", field=field)
        table[key] = {k: c for k, c in enumerate(result) if c != QQ.zero}
    algebra = LieAlgebra.from_table(name, labels, table)

    report = validate_structure(algebra)
    if not report.passed:
        raise ValidationError(
            "structure constants fail validation",
            jacobi_ok=report.jacobi_ok,
            nilpotent=report.nilpotent,
        )

    flag_entries = document.get("flag")
    if flag_entries is None:
        flag = Flag.standard(algebra)
    else:
        if not isinstance(flag_entries, list):
            raise ParseError("flag must be a list of vectors", field="flag")
        flag = Flag.from_vectors(
            algebra, [_vector(labels, entry, f"flag[{n}]") for n, entry in enumerate(flag_entries)]
        )
    flag_report = validate_flag(algebra, flag)
    if not flag_report.ok:
        raise ValidationError(
            f"flag violates [n, n_j] ⊆ n_(j-1) at j={flag_report.first_violation}",
            first_violation=flag_report.first_violation,
            offending=flag_report.offending,
        )

    stepwise = None
    if document.get("stepwise") is not None:
        section = document["stepwise"]
        chain = _require(section, "chain", "stepwise.chain")
        if not isinstance(chain, list) or not all(isinstance(k, int) and not isinstance(k, bool) for k in chain):
            raise ParseError("chain must be a list of positions", field="stepwise.chain")
        layers = []
        for n, entry in enumerate(_require(section, "layers", "stepwise.layers") or []):
            field = f"stepwise.layers[{n}]"
            layers.append(
                Layer(
                    _subspace(labels, _require(entry, "m", f"{field}.m"), f"{field}.m"),
                    _subspace(labels, _require(entry, "z", f"{field}.z"), f"{field}.z"),
                    _subspace(labels, _require(entry, "v", f"{field}.v"), f"{field}.v"),
                )
            )
        stepwise = StepwiseData(tuple(chain), tuple(layers))
        stepwise.check_chain(algebra.dim)

    return AlgebraBundle(algebra, flag, stepwise, str(document.get("provenance") or ""))


def _vector_entry(labels: Sequence[str], vector: Vector) -> Union[str, Dict[str, str]]:
    nonzero = [(label, c) for label, c in zip(labels, vector) if c != QQ.zero]
    if len(nonzero) == 1 and nonzero[0][1] == QQ.one:
        return nonzero[0][0]
    return {label: format_scalar(c) for label, c in nonzero}


def to_document(bundle: AlgebraBundle) -> Dict[str, Any]:
    algebra = bundle.algebra
    labels = algebra.labels
    document: Dict[str, Any] = {
        "name": algebra.name,
        "dim": algebra.dim,
        "basis": list(labels),
        "brackets": [
            {
                "left": labels[i],
                "right": labels[j],
                "result": {labels[k]: format_scalar(c) for k, c in enumerate(coefficients) if c != QQ.zero},
            }
            for i, j, coefficients in algebra.brackets
        ],
        "flag": [_vector_entry(labels, vector) for vector in bundle.flag.vectors],
    }
    if bundle.stepwise is not None:
        document["stepwise"] = {
            "chain": list(bundle.stepwise.chain),
            "layers": [
                {
                    part: [_vector_entry(labels, v) for v in getattr(layer, part).vectors]
                    for part in ("m", "z", "v")
                }
                for layer in bundle.stepwise.layers
            ],
        }
    document["provenance"] = bundle.provenance
    return document


def loads(text: str) -> AlgebraBundle:
    try:
        document = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        raise ParseError(f"invalid YAML: {e}", line=mark.line + 1 if mark else None)
    if not isinstance(document, dict):
        raise ParseError("bundle document must be a mapping", line=1)
    return from_document(document)


def dumps(bundle: AlgebraBundle) -> str:
    return yaml.safe_dump(to_document(bundle), sort_keys=False, allow_unicode=True, default_flow_style=False)


def load(path: Union[str, Path]) -> AlgebraBundle:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}")
    bundle = loads(text)
    logger.info("Loaded algebra bundle", path=str(path), algebra=bundle.algebra.name, dim=bundle.algebra.dim)
    return bundle


def save(bundle: AlgebraBundle, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_text(dumps(bundle), encoding="utf-8")
    logger.info("Saved algebra bundle", path=str(path), algebra=bundle.algebra.name)
    return path
