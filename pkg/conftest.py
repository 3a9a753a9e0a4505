import numpy as np
import pytest

from xdiscord.state_core import XStateParams, physical_mask

EXAMPLE_C1 = float(np.sqrt(0.8))
EXAMPLE = XStateParams(0.3, 0.15, EXAMPLE_C1, -EXAMPLE_C1 / 2.0, 0.5)
WERNER = XStateParams.bell_diagonal(-0.5, -0.5, -0.5)
BELL_PHI_PLUS = XStateParams.bell_diagonal(1.0, -1.0, 1.0)
MIXED = XStateParams(0.0, 0.0, 0.0, 0.0, 0.0)


def random_physical_arrays(n, seed=7, bell_diagonal=False):
    """n physical parameter rows (r, s, c1, c2, c3) by rejection sampling."""
    rng = np.random.default_rng(seed)
    rows = []
    total = 0
    while total < n:
        batch = rng.uniform(-1.0, 1.0, size=(4 * n, 5))
        if bell_diagonal:
            batch[:, :2] = 0.0
        keep = batch[physical_mask(*batch.T)]
        rows.append(keep)
        total += len(keep)
    return np.concatenate(rows)[:n]


@pytest.fixture
def example_state():
    return EXAMPLE


@pytest.fixture
def werner_state():
    return WERNER


@pytest.fixture
def bell_state():
    return BELL_PHI_PLUS


@pytest.fixture
def mixed_state():
    return MIXED


@pytest.fixture
def random_states():
    return [XStateParams.from_sequence(row) for row in random_physical_arrays(200)]
