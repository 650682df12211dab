import math

import pytest

from qrpd.game import GamePayoffs

EPS_GRID = (0.0, 0.2, math.pi / 8, 0.5, math.pi / 4)
W_GRID = tuple(round(0.1 * k, 1) for k in range(1, 10))


@pytest.fixture
def pd_game() -> GamePayoffs:
    return GamePayoffs(3, 0, 5, 1)
