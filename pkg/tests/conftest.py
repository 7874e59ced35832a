from pathlib import Path

import pytest

from beliefs.choice_belief import ChoiceBelief
from beliefs.density import PiecewiseConstantDensity
from games import Blackbox, GameSpec, Mode, PlayerSpec, bertrand_game, cournot_game, split_density_family

SPECS_DIR = Path(__file__).resolve().parent.parent / "specs"
WORKED_BREAKPOINTS = (0.0, 0.3, 0.7, 1.0)


@pytest.fixture
def specs_dir():
    return SPECS_DIR


@pytest.fixture
def worked_first():
    """(β', f'): плотность и убеждение первой пары из разобранного примера"""
    return (
        ChoiceBelief.step(WORKED_BREAKPOINTS, (0.5, 0.3, 0.8)),
        PiecewiseConstantDensity(WORKED_BREAKPOINTS, (2 / 3, 1 / 4, 7 / 3)),
    )


@pytest.fixture
def worked_second():
    return (
        ChoiceBelief.step(WORKED_BREAKPOINTS, (0.8, 0.2, 0.5)),
        PiecewiseConstantDensity(WORKED_BREAKPOINTS, (1 / 3, 7 / 4, 2 / 3)),
    )


@pytest.fixture
def bertrand():
    return bertrand_game(1.0, 1.0, 3.0)


@pytest.fixture
def cournot():
    return cournot_game(10.0, 2.0, 1.0, 3.0, 8.0)


@pytest.fixture
def bertrand_blackbox():
    """Та же дуополия Бертрана, но полезность задана произвольной функцией"""
    players = []
    for j in (1, 0):
        def profit(theta, c, others, j=j):
            return (c - theta) * (1.0 - c + others[j])
        players.append(PlayerSpec(0.0, 3.0, 0.0, 1.0, {j: split_density_family(0.0, 1.0)}, Blackbox(profit)))
    return GameSpec(tuple(players), Mode.COMPLEMENTS, "bertrand-blackbox")
