import pytest

from rfcombiner import tracing
from rfcombiner.lib import output
from rfcombiner.lib.output import CaptureInterface
from rfcombiner.lib.rng import make_rng


@pytest.fixture(autouse=True)
def no_tracing():
    yield
    tracing.trace_deactivate()


@pytest.fixture
def rng():
    return make_rng(20250101)


@pytest.fixture
def capture():
    """Route all output into a CaptureInterface for the test."""
    intf = CaptureInterface()
    output.intf.append(intf)
    yield intf
    output.intf.remove(intf)
