import numpy as np
import pytest

from ehrlich import generate_instance

# Worked example: normal draws and the shuffled, diagonal-forced mask.
GOLDEN_Z = np.array([
    [+1.41, +1.67, -1.52, +0.63],
    [-0.35, +0.45, +0.86, -0.49],
    [+1.42, -1.31, -0.31, +1.43],
    [-0.02, +1.55, -0.26, +1.13],
])
GOLDEN_BAND = np.array([[1, 1, 0, 1], [1, 1, 1, 0], [0, 1, 1, 1], [1, 0, 1, 1]], dtype=bool)
GOLDEN_SHUFFLED = np.array([[1, 0, 1, 1], [1, 1, 1, 0], [1, 1, 0, 1], [0, 1, 1, 1]], dtype=bool)
GOLDEN_MASK = np.array([[1, 0, 1, 1], [1, 1, 1, 0], [1, 1, 1, 1], [0, 1, 1, 1]], dtype=bool)
# Row i of the shuffled band is row GOLDEN_PERMUTATION[i] of the circulant band.
GOLDEN_PERMUTATION = (3, 1, 0, 2)
GOLDEN_A = np.array([
    [0.66, 0.00, 0.04, 0.30],
    [0.15, 0.34, 0.51, 0.00],
    [0.44, 0.03, 0.08, 0.45],
    [0.00, 0.55, 0.09, 0.36],
])
GOLDEN_STATIONARY = np.array([0.33, 0.23, 0.17, 0.27])


@pytest.fixture(scope="session")
def small_instance():
    return generate_instance(num_states=8, length=32, num_motifs=2, motif_length=4, quantization=4, seed=3)


@pytest.fixture(scope="session")
def default_instance():
    return generate_instance(seed=0)


_CRITERIA = []


def record_criterion(line: str) -> None:
    _CRITERIA.append(line)


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERIA:
            terminalreporter.write_line(line)
