import pytest

from tightstorage.cases import run_case
from tightstorage.cli import load_params


@pytest.fixture(scope="session")
def example1():
    return load_params("example1")[0]


@pytest.fixture(scope="session")
def case_reports():
    """Approximated-data reports for the short cases, solved once per session."""
    return {c: run_case(c) for c in ("uc", "uc-reserves", "tep")}


@pytest.fixture(scope="session")
def multiperiod_report():
    return run_case("multiperiod")
