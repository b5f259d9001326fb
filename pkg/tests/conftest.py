import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from nilstrat.catalog.fixtures import filiform4, heisenberg, upper_triangular  # noqa: E402
from nilstrat.lie.algebra import LieAlgebra  # noqa: E402
from nilstrat.lie.flags import in_flag_basis  # noqa: E402
from nilstrat.orbits.sampling import IntegerSampler  # noqa: E402
from nilstrat.suites.base import SuiteContext  # noqa: E402

FIXTURE_DIR = Path(__file__).parent.parent / "fixtures"


@pytest.fixture
def fixture_dir() -> Path:
    return FIXTURE_DIR


@pytest.fixture
def h3_bundle():
    return heisenberg(1)


@pytest.fixture
def h3(h3_bundle) -> LieAlgebra:
    return h3_bundle.algebra


@pytest.fixture
def filiform_bundle():
    return filiform4()


@pytest.fixture
def filiform_flagged(filiform_bundle) -> LieAlgebra:
    """filiform4 rebased on the flag (X1, X2, X4, X3)"""
    return in_flag_basis(filiform_bundle.algebra, filiform_bundle.flag)


@pytest.fixture
def ut4_bundle():
    return upper_triangular(4)


@pytest.fixture
def ut4_flagged(ut4_bundle) -> LieAlgebra:
    return in_flag_basis(ut4_bundle.algebra, ut4_bundle.flag)


@pytest.fixture
def abelian3() -> LieAlgebra:
    return LieAlgebra.abelian(3)


@pytest.fixture
def suite_context() -> SuiteContext:
    return SuiteContext(sampler=IntegerSampler(50))
