from polariton_beats.basis import ModelParams
from polariton_beats.utils import TimeGrid
import pytest


@pytest.fixture
def reference():
    return ModelParams(omega_m=1.0, omega_c=1.0, g=0.07, n_tls=2)


@pytest.fixture
def long_grid():
    return TimeGrid.span(3000.0, 0.5)
