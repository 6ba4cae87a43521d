from polariton_beats.logger import Logger
from polariton_beats.spectral import ObservableTrace
from polariton_beats.utils import TimeGrid
import os
import numpy as np


def test_logger_writes_events(tmp_path):
    logging_dir = str(tmp_path / "logs")
    logger = Logger(logging_dir)
    logger.record("fit/alpha", 1.2e-3, 0)
    logger.record("trace/values", np.linspace(0.0, 1.0, 11), 0)
    logger.record("trace/values", np.linspace(0.0, 1.0, 11), 1,
                  percentile=True)
    grid = TimeGrid.span(5.0, 0.5)
    logger.record_trace("dm/n_mean", ObservableTrace(
        grid, np.sin(grid.times) ** 2), stride=2)
    assert any(name.startswith("events") for name in os.listdir(logging_dir))
