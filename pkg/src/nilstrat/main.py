"""nilstrat command line: one JSON report on stdout per invocation."""

import argparse
import hashlib
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import structlog

from nilstrat.catalog import bundle as bundle_io
from nilstrat.catalog.fixtures import AlgebraBundle, FixtureName, build_fixture
from nilstrat.core.config import Settings, load_settings
from nilstrat.core.exceptions import DimensionMismatch, NilstratError, ParseError, ValidationError
from nilstrat.core.log import configure_logging
from nilstrat.core.models import GenericMode, JumpSet, Report, Status, StratumKind
from nilstrat.lie.algebra import center, lower_central_series, validate_structure
from nilstrat.lie.flags import in_flag_basis, subspace_classify, validate_flag
from nilstrat.linalg.scalars import format_scalar, symbolic_field
from nilstrat.orbits.functionals import Functional, isotropy
from nilstrat.orbits.invariants import (
    GenericPolicy,
    flat_orbit_test,
    generic_jump_set,
    jump_set,
    pfaffian_polynomial,
    square_integrability_constant,
    stratum_membership,
)
from nilstrat.orbits.sampling import IntegerSampler
from nilstrat.stepwise.canonical import canonical_representative, main3_constant
from nilstrat.stepwise.checks import (
    grad_check,
    interm_check,
    jump_concat_check,
    jump_concat_parts,
    layer_split,
    lemma_obv_check,
    main2_equivalence_check,
)
from nilstrat.stepwise.data import StepwiseData
from nilstrat.stepwise.hypotheses import check_hypotheses, layer_nesting_check, x_membership
from nilstrat.suites.base import SuiteContext
from nilstrat.suites.runner import run_selftest

logger = structlog.get_logger()

Outcome = Tuple[Status, Dict[str, Any]]


class _Parser(argparse.ArgumentParser):
    """Usage errors become exit code 2 through ``run`` instead of exiting the process"""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise ValidationError(f"usage: {message}")


def _status(ok: bool) -> Status:
    return Status.OK if ok else Status.CHECK_FAILED


def _jumps(e: JumpSet) -> List[int]:
    return e.to_list()


def _policy(settings: Settings, args: argparse.Namespace) -> GenericPolicy:
    mode = getattr(args, "mode", None) or settings.generic.mode
    samples = getattr(args, "samples", None)
    try:
        generic_mode = GenericMode(mode)
    except ValueError:
        raise ValidationError(f"unknown generic mode {mode!r}", known=[m.value for m in GenericMode])
    return GenericPolicy(
        mode=generic_mode,
        symbolic_max_dim=settings.generic.symbolic_max_dim,
        trials=samples if samples is not None else settings.selftest.trials,
        seed=args.seed,
        bound=settings.sampling.bound,
    )


def _require_stepwise(bundle: AlgebraBundle) -> StepwiseData:
    if bundle.stepwise is None:
        raise ValidationError("bundle has no stepwise section", algebra=bundle.algebra.name)
    return bundle.stepwise


def _xi(args: argparse.Namespace, dim: int) -> Functional:
    xi = Functional.parse(args.xi)
    if xi.dim != dim:
        raise DimensionMismatch("functional length differs from algebra dimension", dim=dim, length=xi.dim)
    return xi


def _layer(args: argparse.Namespace, data: StepwiseData) -> int:
    layer = args.layer if args.layer is not None else data.q
    if layer < 2:
        raise ValidationError("the split m_j ⋉ n_(j-1) needs a layer j >= 2", layer=layer)
    return layer


# Commands

def cmd_validate(bundle: AlgebraBundle, args, settings) -> Outcome:
    structure = validate_structure(bundle.algebra)
    flag = validate_flag(bundle.algebra, bundle.flag)
    result: Dict[str, Any] = {"structure": structure.to_dict(), "flag": flag.to_dict()}
    ok = structure.passed and flag.ok
    if bundle.stepwise is not None:
        result["layers"] = [
            {part: subspace_classify(bundle.algebra, getattr(layer, part), bundle.flag).to_dict() for part in ("m", "z", "v")}
            for layer in bundle.stepwise.layers
        ]
    return _status(ok), result


def cmd_info(bundle: AlgebraBundle, args, settings) -> Outcome:
    rebased = in_flag_basis(bundle.algebra, bundle.flag)
    series = lower_central_series(rebased)
    structure = validate_structure(rebased)
    return Status.OK, {
        "name": rebased.name,
        "dim": rebased.dim,
        "flag": list(rebased.labels),
        "nilpotency_class": structure.nilpotency_class,
        "lower_central_series": [subspace.dim for subspace in series],
        "center": [rebased.describe(v) for v in center(rebased).vectors],
        "center_dim": center(rebased).dim,
        "generic_jump_set": _jumps(generic_jump_set(rebased, None, _policy(settings, args))),
        "stepwise_layers": bundle.stepwise.q if bundle.stepwise is not None else 0,
        "provenance": bundle.provenance,
    }


def cmd_jumpset(bundle: AlgebraBundle, args, settings) -> Outcome:
    rebased = in_flag_basis(bundle.algebra, bundle.flag)
    xi = _xi(args, rebased.dim)
    e = jump_set(rebased, None, xi)
    generic = generic_jump_set(rebased, None, _policy(settings, args))
    return Status.OK, {
        "jump_set": _jumps(e),
        "isotropy_dim": isotropy(rebased, xi).isotropy.dim,
        "orbit_dim": len(e),
        "generic_jump_set": _jumps(generic),
        "compare_to_generic": e.compare(generic).value,
    }


def cmd_generic(bundle: AlgebraBundle, args, settings) -> Outcome:
    policy = _policy(settings, args)
    rebased = in_flag_basis(bundle.algebra, bundle.flag)
    e = generic_jump_set(rebased, None, policy)
    result: Dict[str, Any] = {"e": _jumps(e), "mode": policy.resolve(rebased.dim).value}
    if args.pfaffian and len(e):
        result["pfaffian"] = format_scalar(pfaffian_polynomial(rebased, None, e), symbolic_field(rebased.dim))
    return Status.OK, result


def cmd_flat(bundle: AlgebraBundle, args, settings) -> Outcome:
    report = flat_orbit_test(
        in_flag_basis(bundle.algebra, bundle.flag),
        attempts=settings.sampling.witness_attempts,
        seed=args.seed,
        bound=settings.sampling.bound,
    )
    return Status.OK, report.to_dict()


def cmd_stepwise(bundle: AlgebraBundle, args, settings) -> Outcome:
    report = check_hypotheses(bundle.algebra, bundle.flag, _require_stepwise(bundle))
    return _status(report.ok), report.to_dict()


def cmd_member(bundle: AlgebraBundle, args, settings) -> Outcome:
    data = _require_stepwise(bundle)
    policy = _policy(settings, args)
    rebased = in_flag_basis(bundle.algebra, bundle.flag)
    xi = _xi(args, rebased.dim)
    member = x_membership(bundle.algebra, bundle.flag, data, xi, policy)
    return _status(member), {
        "member": member,
        "jump_set": _jumps(jump_set(rebased, None, xi)),
        "generic_jump_set": _jumps(generic_jump_set(rebased, None, policy)),
        "coarse": stratum_membership(bundle.algebra, bundle.flag, xi, StratumKind.COARSE, policy),
        "fine": stratum_membership(bundle.algebra, bundle.flag, xi, StratumKind.FINE, policy),
        "nested": layer_nesting_check(bundle.algebra, bundle.flag, data, xi, policy),
    }


def cmd_canonical(bundle: AlgebraBundle, args, settings) -> Outcome:
    data = _require_stepwise(bundle)
    rebased = in_flag_basis(bundle.algebra, bundle.flag)
    xi = _xi(args, rebased.dim)
    rep = canonical_representative(bundle.algebra, bundle.flag, data, xi, _policy(settings, args))
    return Status.OK, rep.to_dict(rebased.labels)


def cmd_constant(bundle: AlgebraBundle, args, settings) -> Outcome:
    rebased = in_flag_basis(bundle.algebra, bundle.flag)
    xi = _xi(args, rebased.dim)
    if args.via_stepwise:
        data = main3_constant(bundle.algebra, bundle.flag, _require_stepwise(bundle), xi)
    else:
        if args.e:
            try:
                e = JumpSet.of((int(j) for j in args.e.split(",")), rebased.dim)
            except ValueError:
                raise ParseError(f"malformed jump set {args.e!r}", field="e")
        else:
            e = generic_jump_set(rebased, None, _policy(settings, args))
        data = square_integrability_constant(rebased, None, xi, e)
    return Status.OK, data.to_dict()


def cmd_grad(bundle: AlgebraBundle, args, settings) -> Outcome:
    data = _require_stepwise(bundle)
    layer = _layer(args, data)
    algebra, split = layer_split(bundle.algebra, bundle.flag, data, layer)
    xi = _xi(args, algebra.dim)
    holds = grad_check(algebra, split, xi)
    return _status(holds), {"layer": layer, "holds": holds}


def cmd_concat(bundle: AlgebraBundle, args, settings) -> Outcome:
    data = _require_stepwise(bundle)
    layer = _layer(args, data)
    algebra, split = layer_split(bundle.algebra, bundle.flag, data, layer)
    xi = _xi(args, algebra.dim)
    holds = jump_concat_check(algebra, None, split, xi)
    full, inner, outer = jump_concat_parts(algebra, None, split, xi)
    return _status(holds), {
        "layer": layer,
        "holds": holds,
        "jump_set": _jumps(full),
        "ideal_part": _jumps(inner),
        "quotient_part": _jumps(outer),
    }


def cmd_obv(bundle: AlgebraBundle, args, settings) -> Outcome:
    rebased = in_flag_basis(bundle.algebra, bundle.flag)
    result = lemma_obv_check(rebased, None, _xi(args, rebased.dim), _policy(settings, args))
    return _status(result.holds), result.to_dict()


def cmd_interm(bundle: AlgebraBundle, args, settings) -> Outcome:
    data = _require_stepwise(bundle)
    layer = _layer(args, data)
    algebra, split = layer_split(bundle.algebra, bundle.flag, data, layer)
    result = interm_check(algebra, None, split, _xi(args, algebra.dim), _policy(settings, args))
    return _status(result.holds), dict(result.to_dict(), layer=layer)


def cmd_main2(bundle: AlgebraBundle, args, settings) -> Outcome:
    data = _require_stepwise(bundle)
    rebased = in_flag_basis(bundle.algebra, bundle.flag)
    holds = main2_equivalence_check(
        bundle.algebra, bundle.flag, data, _xi(args, rebased.dim), _policy(settings, args)
    )
    return _status(holds), {"holds": holds}


def cmd_selftest(bundle: AlgebraBundle, args, settings) -> Outcome:
    trials = args.trials if args.trials is not None else settings.selftest.trials
    if trials < 1:
        raise ValidationError("selftest needs at least one trial", trials=trials)
    context = SuiteContext(
        sampler=IntegerSampler(settings.sampling.bound),
        policy=_policy(settings, args),
        group_bound=settings.sampling.group_bound,
        group_factors=settings.sampling.group_factors,
        workers=args.workers if args.workers is not None else settings.selftest.workers,
    )
    result = run_selftest(bundle, trials, args.seed, context)
    return _status(result.passed), result.to_dict()


COMMANDS = {
    "validate": cmd_validate,
    "info": cmd_info,
    "jumpset": cmd_jumpset,
    "generic": cmd_generic,
    "flat": cmd_flat,
    "stepwise": cmd_stepwise,
    "member": cmd_member,
    "canonical": cmd_canonical,
    "constant": cmd_constant,
    "grad": cmd_grad,
    "concat": cmd_concat,
    "obv": cmd_obv,
    "interm": cmd_interm,
    "main2": cmd_main2,
    "selftest": cmd_selftest,
}

SAMPLING_COMMANDS = {"selftest", "flat"}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nilstrat", description="Exact coadjoint-orbit invariants of nilpotent Lie algebras")
    parser.add_argument("--config", help="path to config.yaml (default: NILSTRAT_CONFIG or ./config.yaml)")
    parser.add_argument("--seed", type=int, help="sampling seed (default from config)")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def bundle_command(name: str, help_text: str, xi: bool = False, layer: bool = False, mode: bool = False):
        sub = commands.add_parser(name, help=help_text)
        sub.add_argument("bundle", help="path to a .nilalg bundle")
        if xi:
            sub.add_argument("--xi", required=True, help="comma-separated rationals in flag order")
        if layer:
            sub.add_argument("--layer", type=int, help="stepwise layer j >= 2 (default: the last)")
        if mode:
            sub.add_argument("--mode", choices=[m.value for m in GenericMode], help="how e(n) is computed")
            sub.add_argument("--samples", type=int, help="sample budget for sampled e(n)")
        return sub

    bundle_command("validate", "check structure constants, flag and stepwise subspaces")
    bundle_command("info", "dimension, series, center and e(n)", mode=True)
    bundle_command("jumpset", "jump set of one functional", xi=True, mode=True)
    generic = bundle_command("generic", "the generic jump set e(n)", mode=True)
    generic.add_argument("--pfaffian", action="store_true", help="also print Pf_e of the generic functional")
    bundle_command("flat", "flat-orbit test")
    bundle_command("stepwise", "check the stepwise decomposition hypotheses")
    bundle_command("member", "membership in X", xi=True, mode=True)
    bundle_command("canonical", "canonical point of the orbit", xi=True, mode=True)
    constant = bundle_command("constant", "square-integrability constant", xi=True, mode=True)
    constant.add_argument("--e", help="comma-separated jump set (default: e(n))")
    constant.add_argument("--via-stepwise", action="store_true", help="use e = V positions and check ξ on V and z")
    bundle_command("grad", "isotropy splitting along m_j ⋉ n_(j-1)", xi=True, layer=True)
    bundle_command("concat", "jump-set concatenation along m_j ⋉ n_(j-1)", xi=True, layer=True)
    bundle_command("obv", "generic ξ is nonzero on a one-dimensional center", xi=True, mode=True)
    bundle_command("interm", "generic on ñ and n forces generic on m", xi=True, layer=True, mode=True)
    bundle_command("main2", "X equals the coarse layer for two layers", xi=True, mode=True)
    selftest = bundle_command("selftest", "run every applicable property suite", mode=True)
    selftest.add_argument("--trials", type=int, help="trials per suite (default from config)")
    selftest.add_argument("--workers", type=int, help="thread pool size (default from config)")

    fixture = commands.add_parser("fixture", help="write a built fixture bundle")
    fixture.add_argument("name", choices=[f.value for f in FixtureName])
    fixture.add_argument("--size", type=int, help="family size (heisenberg n, upper_triangular n)")
    fixture.add_argument("--output", help="target path (default: <name><size>.nilalg)")
    return parser


def _digest(path: Path) -> str:
    return "sha256:" + hashlib.sha256(path.read_bytes()).hexdigest()


def _fixture(args: argparse.Namespace) -> Outcome:
    built = build_fixture(args.name, args.size)
    path = Path(args.output or f"{built.algebra.name}{bundle_io.EXTENSION}")
    bundle_io.save(built, path)
    return Status.OK, {"path": str(path), "name": built.algebra.name, "dim": built.algebra.dim}


def _reported_seed(bundle: AlgebraBundle, args: argparse.Namespace, settings: Settings) -> Optional[int]:
    """The seed belongs in the report whenever a result depends on sampling"""
    if args.command in SAMPLING_COMMANDS:
        return args.seed
    if not hasattr(args, "mode"):
        return None
    if _policy(settings, args).resolve(bundle.algebra.dim) is GenericMode.SAMPLED:
        return args.seed
    return None


def _execute(args: argparse.Namespace, settings: Settings) -> Tuple[Outcome, Optional[str], Optional[int]]:
    if args.command == "fixture":
        return _fixture(args), None, None
    path = Path(args.bundle)
    bundle = bundle_io.load(path)
    seed = _reported_seed(bundle, args, settings)
    return COMMANDS[args.command](bundle, args, settings), _digest(path), seed


def run(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    digest: Optional[str] = None
    seed: Optional[int] = None
    configure_logging()
    try:
        args = build_parser().parse_args(argv)
        settings = load_settings(args.config)
        configure_logging(settings.log_level)
        if args.seed is None:
            args.seed = settings.sampling.seed
        logger.info("Command started", command=args.command)
        (status, result), digest, seed = _execute(args, settings)
    except NilstratError as e:
        logger.warning("Command stopped", kind=e.kind, error=e.message)
        status = Status.INPUT_ERROR if e.exit_code == 2 else Status.CHECK_FAILED
        result = e.to_dict()
    except SystemExit as e:
        # --help and argparse exits
        return 0 if e.code in (0, None) else 2

    report = Report(command=argv, status=status, result=result, input_digest=digest, seed=seed)
    print(report.to_json())
    logger.info("Command finished", status=status.value, exit_code=report.exit_code)
    return report.exit_code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
