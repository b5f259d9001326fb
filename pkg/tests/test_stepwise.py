import pytest
from sympy.polys.domains import QQ

from nilstrat.catalog.fixtures import heisenberg
from nilstrat.core.exceptions import ChainNotInFlag, HypothesisFailed, NotApplicable, NotInX, PreconditionFailed, ValidationError
from nilstrat.core.models import JumpSet
from nilstrat.lie.algebra import Subspace
from nilstrat.orbits.functionals import Functional, coadjoint_act
from nilstrat.orbits.sampling import IntegerSampler, trial_rng
from nilstrat.stepwise.canonical import canonical_representative, coordinate_polynomial, main3_constant, rational_roots
from nilstrat.stepwise.checks import (
    grad_check,
    interm_check,
    jump_concat_check,
    jump_concat_parts,
    layer_split,
    lemma_obv_check,
    main2_equivalence_check,
)
from nilstrat.stepwise.data import Layer, StepwiseData
from nilstrat.stepwise.hypotheses import check_hypotheses, layer_nesting_check, x_membership


def xi(*values):
    return Functional.rational(values)


def coordinate(m, *positions):
    return Subspace.coordinate(m, positions)


class TestHypotheses:
    @pytest.mark.parametrize("bundle_name", ["h3_bundle", "filiform_bundle", "ut4_bundle"])
    def test_shipped_decompositions_pass(self, bundle_name, request):
        bundle = request.getfixturevalue(bundle_name)
        report = check_hypotheses(bundle.algebra, bundle.flag, bundle.stepwise)
        assert report.ok, report.to_dict()
        assert len(report.layers) == bundle.stepwise.q

    def test_wrong_center_is_reported(self, h3):
        data = StepwiseData((3,), (Layer(coordinate(3, 0, 1, 2), coordinate(3, 1), coordinate(3, 0, 2)),))
        report = check_hypotheses(h3, None, data)
        assert not report.ok
        layer = report.layers[0]
        assert not layer.center_dim_1
        assert layer.direct_sum
        assert layer.witnesses

    def test_chain_must_end_at_dimension(self, h3):
        data = StepwiseData((2,), (Layer(coordinate(3, 0, 1), coordinate(3, 0), coordinate(3, 1)),))
        with pytest.raises(ChainNotInFlag):
            check_hypotheses(h3, None, data)

    def test_chain_and_layers_must_match(self):
        with pytest.raises(ValidationError):
            StepwiseData((3, 4), ())


class TestMembership:
    def test_filiform_generic_point(self, filiform_bundle):
        b = filiform_bundle
        assert x_membership(b.algebra, b.flag, b.stepwise, xi(1, 0, 0, 0))

    def test_filiform_degenerate_point(self, filiform_bundle):
        b = filiform_bundle
        assert not x_membership(b.algebra, b.flag, b.stepwise, xi(0, 1, 0, 0))

    @pytest.mark.parametrize("bundle_name", ["h3_bundle", "filiform_bundle", "ut4_bundle"])
    def test_zero_is_outside(self, bundle_name, request):
        b = request.getfixturevalue(bundle_name)
        assert not x_membership(b.algebra, b.flag, b.stepwise, Functional.zero(b.algebra.dim))

    def test_layers_nest(self, filiform_bundle):
        b = filiform_bundle
        for point in [xi(1, 0, 0, 0), xi(0, 1, 0, 0), xi(0, 0, 1, 1), xi(3, -2, 7, 1)]:
            assert layer_nesting_check(b.algebra, b.flag, b.stepwise, point)


class TestCanonical:
    def test_filiform_elimination(self, filiform_bundle):
        b = filiform_bundle
        rep = canonical_representative(b.algebra, b.flag, b.stepwise, xi(1, -1, 0, "1/2"))
        assert rep.xi0 == xi(1, 0, 0, 0)
        assert rep.to_dict(b.flag.labels) == {
            "xi0": ["1", "0", "0", "0"],
            "certificate": [{"X4": "-1"}],
        }

    def test_filiform_already_canonical(self, filiform_bundle):
        b = filiform_bundle
        rep = canonical_representative(b.algebra, b.flag, b.stepwise, xi(1, 0, 0, 5))
        assert rep.xi0 == xi(1, 0, 0, 5)
        assert len(rep.certificate) == 0

    def test_heisenberg(self, h3_bundle):
        b = h3_bundle
        rep = canonical_representative(b.algebra, b.flag, b.stepwise, xi(2, 3, -1))
        assert rep.xi0 == xi(2, 0, 0)
        assert coadjoint_act(b.algebra, rep.certificate, xi(2, 3, -1)) == rep.xi0

    def test_upper_triangular_orbit_point(self, ut4_bundle, ut4_flagged):
        b = ut4_bundle
        rep = canonical_representative(b.algebra, b.flag, b.stepwise, xi(1, 0, -1, 0, 0, 1))
        assert rep.xi0 == xi(1, 0, 0, 0, 0, 1)
        assert rep.to_dict(ut4_flagged.labels)["certificate"] == [{"E12": "-1"}]

    def test_outside_x(self, filiform_bundle):
        b = filiform_bundle
        with pytest.raises(NotInX):
            canonical_representative(b.algebra, b.flag, b.stepwise, xi(0, 1, 0, 0))

    def test_coordinate_polynomial(self, filiform_flagged):
        # t -> (Ad*(exp t F3) xi)(F4) = xi4 - t xi2 + t^2/2 xi1
        coefficients = coordinate_polynomial(filiform_flagged, xi(2, 3, 0, 5), 2, 3)
        assert coefficients == [QQ(5), QQ(-3), QQ(1)]

    def test_rational_roots(self):
        assert rational_roots([QQ(-2), QQ(4)]) == [QQ(1, 2)]
        assert rational_roots([QQ(-2), QQ(0), QQ(1)]) == []
        assert rational_roots([QQ(-4), QQ(0), QQ(1)]) == [QQ(-2), QQ(2)]
        assert rational_roots([QQ(3)]) == []


class TestConstant:
    def test_filiform(self, filiform_bundle):
        b = filiform_bundle
        data = main3_constant(b.algebra, b.flag, b.stepwise, xi(2, 0, 0, 5))
        assert data.to_dict()["pfaffian_abs"] == "2"
        assert data.two_pi_power == 1

    def test_upper_triangular(self, ut4_bundle):
        b = ut4_bundle
        data = main3_constant(b.algebra, b.flag, b.stepwise, xi(3, 0, 0, 0, 0, -2))
        assert data.jump_set == JumpSet.of([2, 3, 4, 5], 6)
        assert data.pfaffian_abs == QQ(9)
        assert data.two_pi_power == 2

    def test_vanishing_on_center(self, filiform_bundle):
        b = filiform_bundle
        with pytest.raises(PreconditionFailed) as excinfo:
            main3_constant(b.algebra, b.flag, b.stepwise, xi(0, 0, 0, 5))
        assert excinfo.value.clause == "nonzero on z_1"

    def test_nonzero_on_v(self, filiform_bundle):
        b = filiform_bundle
        with pytest.raises(PreconditionFailed) as excinfo:
            main3_constant(b.algebra, b.flag, b.stepwise, xi(2, 1, 0, 5))
        assert excinfo.value.clause == "vanishes on V"


class TestSplitChecks:
    def test_layer_split(self, filiform_bundle):
        b = filiform_bundle
        algebra, split = layer_split(b.algebra, b.flag, b.stepwise, 2)
        assert algebra.dim == 4
        assert split.m_part.equals(coordinate(4, 3))
        assert split.n_part.equals(coordinate(4, 0, 1, 2))

    def test_layer_split_range(self, filiform_bundle):
        b = filiform_bundle
        with pytest.raises(ValidationError):
            layer_split(b.algebra, b.flag, b.stepwise, 3)

    def test_grad(self, filiform_bundle):
        algebra, split = layer_split(filiform_bundle.algebra, filiform_bundle.flag, filiform_bundle.stepwise, 2)
        assert grad_check(algebra, split, xi(2, 0, 3, 5))
        assert grad_check(algebra, split, Functional.zero(4))

    def test_grad_requires_kernel(self, filiform_bundle):
        algebra, split = layer_split(filiform_bundle.algebra, filiform_bundle.flag, filiform_bundle.stepwise, 2)
        with pytest.raises(HypothesisFailed):
            grad_check(algebra, split, xi(2, 1, 3, 5))

    def test_jump_concatenation(self, filiform_bundle):
        algebra, split = layer_split(filiform_bundle.algebra, filiform_bundle.flag, filiform_bundle.stepwise, 2)
        full, inner, outer = jump_concat_parts(algebra, None, split, xi(1, 0, 0, 0))
        assert full == JumpSet.of([2, 3], 4)
        assert inner == JumpSet.of([2, 3], 3)
        assert outer == JumpSet.empty(1)
        assert jump_concat_check(algebra, None, split, xi(1, 0, 0, 0))
        assert jump_concat_check(algebra, None, split, Functional.zero(4))

    def test_jump_concatenation_upper_triangular(self, ut4_bundle):
        algebra, split = layer_split(ut4_bundle.algebra, ut4_bundle.flag, ut4_bundle.stepwise, 2)
        assert jump_concat_check(algebra, None, split, xi(1, 0, 0, 0, 0, 1))

    def test_obv(self, filiform_flagged):
        informative = lemma_obv_check(filiform_flagged, None, xi(1, 0, 0, 0))
        assert informative.applicable and informative.informative and informative.holds
        vacuous = lemma_obv_check(filiform_flagged, None, xi(0, 1, 0, 0))
        assert vacuous.holds and not vacuous.informative

    def test_obv_needs_one_dimensional_center(self, abelian3):
        result = lemma_obv_check(abelian3, None, xi(1, 1, 1))
        assert not result.applicable

    def test_interm(self, filiform_bundle):
        algebra, split = layer_split(filiform_bundle.algebra, filiform_bundle.flag, filiform_bundle.stepwise, 2)
        result = interm_check(algebra, None, split, xi(1, 0, 0, 0))
        assert result.informative and result.holds
        vacuous = interm_check(algebra, None, split, xi(0, 1, 0, 0))
        assert vacuous.holds and not vacuous.informative

    @pytest.mark.parametrize("values", [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 0, 0), (0, 0, 2, 1), (5, -1, 2, 3)])
    def test_main2(self, filiform_bundle, values):
        b = filiform_bundle
        assert main2_equivalence_check(b.algebra, b.flag, b.stepwise, xi(*values))

    def test_main2_needs_two_layers(self, h3_bundle):
        b = h3_bundle
        with pytest.raises(NotApplicable):
            main2_equivalence_check(b.algebra, b.flag, b.stepwise, xi(1, 0, 0))

    def test_larger_heisenberg_single_layer(self):
        b = heisenberg(2)
        report = check_hypotheses(b.algebra, b.flag, b.stepwise)
        assert report.ok
        rep = canonical_representative(b.algebra, b.flag, b.stepwise, xi(3, 1, 2, -1, 4))
        assert rep.xi0 == xi(3, 0, 0, 0, 0)


@pytest.mark.parametrize(
    "bundle_name, point, expected",
    [
        ("filiform_bundle", (1, -1, 0, "1/2"), ["1", "0", "0", "0"]),
        ("ut4_bundle", (1, 0, -1, 0, 0, 1), ["1", "0", "0", "0", "0", "1"]),
    ],
)
def test_canonical_point_is_constant_along_the_orbit(request, bundle_name, point, expected):
    b = request.getfixturevalue(bundle_name)
    sampler = IntegerSampler(5)
    start = xi(*point)
    for index in range(100):
        g = sampler.group_element(trial_rng(0, index), b.algebra.dim)
        moved = coadjoint_act(b.algebra, g, start, b.flag)
        assert x_membership(b.algebra, b.flag, b.stepwise, moved)
        rep = canonical_representative(b.algebra, b.flag, b.stepwise, moved)
        assert rep.xi0.to_strings() == expected
        assert coadjoint_act(b.algebra, rep.certificate, moved, b.flag) == rep.xi0
