import pytest
from sympy.polys.domains import QQ

from nilstrat.core.exceptions import EliminationStuck
from nilstrat.core.models import SuiteMetrics, TrialOutcome
from nilstrat.suites.base import SuiteContext
from nilstrat.suites.orbits import GenericAgreementSuite, GenericitySuite, OrbitInvarianceSuite
from nilstrat.suites.propositions import GradSuite, IntermSuite, JumpConcatSuite, LemmaObvSuite, Main2Suite
from nilstrat.suites.runner import SUITES, run_selftest
from nilstrat.orbits.sampling import IntegerSampler
from nilstrat.orbits.functionals import Functional


class ZeroLeadSampler(IntegerSampler):
    """Functionals vanishing on the first flag vector"""

    def functional(self, rng, m):
        return Functional((QQ.zero,) + super().functional(rng, m).coords[1:])


class TestMetrics:
    def test_counts(self):
        metrics = SuiteMetrics(suite_id="demo")
        metrics.record(0, TrialOutcome.CONFIRMED)
        metrics.record(1, TrialOutcome.VACUOUS)
        metrics.record(3, TrialOutcome.FAILED, "late")
        metrics.record(2, TrialOutcome.FAILED, "early")
        assert (metrics.trials, metrics.informative, metrics.vacuous, metrics.failures) == (4, 1, 1, 2)
        assert metrics.first_failure == {"trial": 2, "detail": "early"}
        assert not metrics.passed

    def test_not_applicable_document(self):
        metrics = SuiteMetrics(suite_id="demo", applicable=False, reason="no layers")
        assert metrics.to_dict() == {"suite": "demo", "applicable": False, "reason": "no layers"}


class TestSuites:
    def test_streams_differ(self, suite_context):
        streams = {cls(suite_context).stream for cls in SUITES}
        assert len(streams) == len(SUITES)

    @pytest.mark.parametrize("suite_class", [GradSuite, JumpConcatSuite, IntermSuite])
    def test_layer_suites_on_upper_triangular(self, suite_context, ut4_bundle, suite_class):
        metrics = suite_class(suite_context).run(ut4_bundle, 12, 0)
        assert metrics.applicable
        assert metrics.passed, metrics.to_dict()
        assert metrics.trials == 12

    def test_jump_concat_is_informative(self, suite_context, ut4_bundle):
        metrics = JumpConcatSuite(suite_context).run(ut4_bundle, 20, 1)
        assert metrics.informative > 0
        assert metrics.failures == 0

    def test_grad_on_filiform(self, suite_context, filiform_bundle):
        metrics = GradSuite(suite_context).run(filiform_bundle, 20, 2)
        assert metrics.passed
        assert metrics.informative == 20

    def test_layer_suites_need_two_layers(self, suite_context, h3_bundle):
        metrics = GradSuite(suite_context).run(h3_bundle, 5, 0)
        assert not metrics.applicable
        assert metrics.trials == 0

    def test_lemma_obv(self, suite_context, filiform_bundle):
        metrics = LemmaObvSuite(suite_context).run(filiform_bundle, 24, 0)
        assert metrics.passed
        assert metrics.informative > 0
        assert metrics.vacuous >= 6

    def test_main2(self, suite_context, filiform_bundle, h3_bundle):
        assert Main2Suite(suite_context).run(filiform_bundle, 16, 0).passed
        assert not Main2Suite(suite_context).run(h3_bundle, 16, 0).applicable

    @pytest.mark.parametrize("bundle_name", ["h3_bundle", "filiform_bundle", "ut4_bundle"])
    def test_orbit_invariance(self, suite_context, bundle_name, request):
        bundle = request.getfixturevalue(bundle_name)
        metrics = OrbitInvarianceSuite(suite_context).run(bundle, 8, 5)
        assert metrics.passed, metrics.to_dict()
        assert metrics.informative == 8

    def test_genericity_reports_fraction(self, suite_context, filiform_bundle):
        metrics = GenericitySuite(suite_context).run(filiform_bundle, 10, 0)
        assert metrics.failures == 0
        assert metrics.to_dict()["fine_fraction"] == "10/10"

    @pytest.mark.parametrize("bundle_name", ["h3_bundle", "filiform_bundle", "ut4_bundle"])
    def test_genericity_on_fixtures(self, suite_context, bundle_name, request):
        metrics = GenericitySuite(suite_context).run(request.getfixturevalue(bundle_name), 25, 3)
        assert metrics.passed, metrics.to_dict()

    def test_genericity_fails_outside_fine_layer(self, h3_bundle):
        context = SuiteContext(sampler=ZeroLeadSampler(5))
        metrics = GenericitySuite(context).run(h3_bundle, 6, 0)
        assert not metrics.passed
        assert metrics.failures == 6
        assert metrics.to_dict()["fine_fraction"] == "0/6"
        assert "not in the fine layer" in metrics.first_failure["detail"]
        assert not run_selftest(h3_bundle, 6, 0, context).passed

    def test_stuck_elimination_is_a_failure(self, suite_context, filiform_bundle, monkeypatch):
        def stuck(*args, **kwargs):
            raise EliminationStuck("no rational elimination step", position=2)

        monkeypatch.setattr("nilstrat.suites.orbits.canonical_representative", stuck)
        metrics = OrbitInvarianceSuite(suite_context).run(filiform_bundle, 3, 0)
        assert metrics.failures == 3
        assert metrics.error_count == 0
        assert "canonical point stuck" in metrics.first_failure["detail"]
        assert "position=2" in metrics.first_failure["detail"]

    def test_generic_agreement(self, suite_context, ut4_bundle):
        metrics = GenericAgreementSuite(suite_context).run(ut4_bundle, 10, 0)
        assert metrics.failures == 0


class TestSelftest:
    def test_heisenberg_gating(self, suite_context, h3_bundle):
        result = run_selftest(h3_bundle, 6, 0, suite_context)
        assert result.passed
        assert not result.suite("main2").applicable
        assert not result.suite("grad").applicable
        assert result.suite("lemma_obv").applicable

    def test_filiform_all_pass(self, suite_context, filiform_bundle):
        result = run_selftest(filiform_bundle, 10, 7, suite_context)
        assert result.passed, result.to_dict()
        assert [m.suite_id for m in result.suites] == [
            "grad",
            "jump_concat",
            "lemma_obv",
            "interm",
            "main2",
            "orbit_invariance",
            "genericity",
            "generic_agreement",
        ]

    def test_workers_do_not_change_results(self, filiform_bundle):
        serial = SuiteContext(sampler=IntegerSampler(50), workers=1)
        threaded = SuiteContext(sampler=IntegerSampler(50), workers=3)
        first = run_selftest(filiform_bundle, 8, 11, serial).to_dict()
        second = run_selftest(filiform_bundle, 8, 11, threaded).to_dict()
        assert first == second


def test_integer_sampler_satisfies_protocol():
    from nilstrat.core.interfaces import FunctionalSampler

    assert isinstance(IntegerSampler(5), FunctionalSampler)
