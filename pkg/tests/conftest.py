import hypothesis
import pytest

from qattractor.bnet import parse_network
from qattractor.dynamics import build_transition_table
from qattractor.library import load_bundled

hypothesis.settings.register_profile("default", max_examples=100, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.load_profile("default")

IDENTITY = "A, A\n"
TOGGLE = "A, !A\n"


@pytest.fixture(scope="session")
def giaco():
    spec = load_bundled("giacomantonio")
    return spec, build_transition_table(spec)


@pytest.fixture
def identity():
    spec = parse_network(IDENTITY)
    return spec, build_transition_table(spec)


@pytest.fixture
def toggle():
    spec = parse_network(TOGGLE)
    return spec, build_transition_table(spec)
