import pytest

from nilstrat.catalog import bundle as bundle_io
from nilstrat.catalog.fixtures import FixtureName, build_fixture, filiform4, heisenberg, hook_order, upper_triangular
from nilstrat.core.exceptions import ParseError, UnsupportedSize, ValidationError
from nilstrat.lie.algebra import center, validate_structure
from nilstrat.stepwise.hypotheses import check_hypotheses

H3_DOCUMENT = """
name: h3
dim: 3
basis: [X1, X2, X3]
brackets:
- left: X2
  right: X3
  result: {X1: '1'}
"""


class TestShippedFiles:
    @pytest.mark.parametrize(
        "filename, builder",
        [
            ("heisenberg1.nilalg", lambda: heisenberg(1)),
            ("filiform4.nilalg", filiform4),
            ("upper_triangular4.nilalg", lambda: upper_triangular(4)),
        ],
    )
    def test_files_match_builders(self, fixture_dir, filename, builder):
        assert bundle_io.load(fixture_dir / filename) == builder()


class TestBuilders:
    def test_hook_order(self):
        assert hook_order(1, 4) == [(1, 4), (1, 3), (2, 4), (1, 2), (3, 4)]
        assert hook_order(2, 4) == [(2, 3)]

    @pytest.mark.parametrize("n", [3, 5])
    def test_upper_triangular_family(self, n):
        b = upper_triangular(n)
        assert b.algebra.dim == n * (n - 1) // 2
        assert validate_structure(b.algebra).nilpotency_class == n - 1
        assert check_hypotheses(b.algebra, b.flag, b.stepwise).ok

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_upper_triangular_center_and_layers(self, n):
        b = upper_triangular(n)
        assert center(b.algebra).dim == 1
        assert b.stepwise.q == n // 2

    def test_heisenberg_family(self):
        b = heisenberg(3)
        assert b.algebra.dim == 7
        assert check_hypotheses(b.algebra, b.flag, b.stepwise).ok

    def test_build_fixture_defaults(self):
        assert build_fixture(FixtureName.HEISENBERG.value).algebra.dim == 3
        assert build_fixture("upper_triangular").algebra.dim == 6
        assert build_fixture("filiform4").algebra.name == "filiform4"

    def test_build_fixture_rejects_unknown_names_and_sizes(self):
        with pytest.raises(ValidationError):
            build_fixture("so3")
        with pytest.raises(UnsupportedSize):
            build_fixture("filiform4", 5)
        with pytest.raises(UnsupportedSize):
            build_fixture("heisenberg", 0)

    def test_large_labels_stay_distinct(self):
        b = upper_triangular(10)
        assert "E1_10" in b.algebra.labels
        assert len(set(b.algebra.labels)) == b.algebra.dim


class TestDocuments:
    def test_minimal_document_uses_standard_flag(self):
        b = bundle_io.loads(H3_DOCUMENT)
        assert b.flag.labels == ("X1", "X2", "X3")
        assert b.stepwise is None
        assert b.provenance == ""

    def test_round_trip(self):
        b = upper_triangular(4)
        assert bundle_io.loads(bundle_io.dumps(b)) == b

    def test_save_and_load(self, tmp_path):
        path = bundle_io.save(filiform4(), tmp_path / f"f{bundle_io.EXTENSION}")
        assert bundle_io.load(path) == filiform4()

    def test_bad_rational_names_the_field(self):
        with pytest.raises(ParseError) as excinfo:
            bundle_io.loads(H3_DOCUMENT.replace("'1'", "'1/0'"))
        assert excinfo.value.field == "brackets[0].result.X1"

    def test_unknown_label(self):
        with pytest.raises(ParseError) as excinfo:
            bundle_io.loads(H3_DOCUMENT.replace("right: X3", "right: X9"))
        assert excinfo.value.field == "brackets[0].right"

    def test_dim_mismatch(self):
        with pytest.raises(ParseError) as excinfo:
            bundle_io.loads(H3_DOCUMENT.replace("dim: 3", "dim: 4"))
        assert excinfo.value.field == "dim"

    def test_missing_field(self):
        with pytest.raises(ParseError) as excinfo:
            bundle_io.loads("name: x\ndim: 1\n")
        assert excinfo.value.field == "basis"

    def test_yaml_syntax_error_reports_line(self):
        with pytest.raises(ParseError) as excinfo:
            bundle_io.loads("name: x\ndim: 1\nbasis: [X1\n")
        assert excinfo.value.line is not None

    def test_float_is_not_a_rational(self):
        with pytest.raises(ParseError):
            bundle_io.loads(H3_DOCUMENT.replace("'1'", "0.5"))

    def test_duplicate_bracket(self):
        text = H3_DOCUMENT + "- left: X3\n  right: X2\n  result: {X1: '-1'}\n"
        with pytest.raises(ParseError):
            bundle_io.loads(text)

    def test_non_nilpotent_constants(self):
        text = """
name: sl2like
dim: 3
basis: [X1, X2, X3]
brackets:
- {left: X1, right: X2, result: {X3: '1'}}
- {left: X1, right: X3, result: {X2: '1'}}
- {left: X2, right: X3, result: {X1: '1'}}
"""
        with pytest.raises(ValidationError):
            bundle_io.loads(text)

    def test_flag_violation(self):
        with pytest.raises(ValidationError) as excinfo:
            bundle_io.loads(H3_DOCUMENT + "flag: [X2, X3, X1]\n")
        assert excinfo.value.details["first_violation"] == 2
