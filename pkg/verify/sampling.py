"""Случайные упорядоченные объекты для проверок допущений.

Все функции принимают numpy Generator, чтобы каждая проверка воспроизводилась по seed.
"""
import numpy as np

from beliefs.choice_belief import ChoiceBelief, mix_choice_belief
from beliefs.density import PiecewiseConstantDensity, mix_density


def trial_generators(seed, n_trials):
    """Независимые генераторы для испытаний, выведенные из одного seed"""
    return [np.random.default_rng(child) for child in np.random.SeedSequence(seed).spawn(n_trials)]


def random_breakpoints(rng, lo, hi, n_pieces):
    inner = np.sort(rng.uniform(lo, hi, n_pieces - 1))
    points = np.concatenate(([lo], inner, [hi]))
    # слишком близкие точки разбиения заменяем равномерными
    if np.any(np.diff(points) <= 1e-9 * max(1.0, abs(hi - lo))):
        points = np.linspace(lo, hi, n_pieces + 1)
    return points


def random_density(rng, lo, hi, max_pieces=4):
    n_pieces = int(rng.integers(1, max_pieces + 1))
    breakpoints = random_breakpoints(rng, lo, hi, n_pieces)
    weights = rng.dirichlet(np.ones(n_pieces))
    return PiecewiseConstantDensity.from_weights(breakpoints, weights)


def top_piece_density(f):
    """Равномерная плотность на последнем куске f: доминирует f"""
    lo, hi = f.domain_lo, f.domain_hi
    start = f.breakpoints[-2]
    if start == lo:
        return PiecewiseConstantDensity.uniform(lo, hi)
    return PiecewiseConstantDensity.from_weights((lo, start, hi), (0.0, 1.0))


def dominating_density(rng, f):
    """f' = (1-λ)f + λ·(равномерная на верхнем куске), f' ≥ f"""
    return mix_density(f, top_piece_density(f), float(rng.uniform(0.0, 1.0)))


def random_choice_belief(rng, lo, hi, choice_lo, choice_hi, increasing=False, max_pieces=4):
    """Кусочно-линейное убеждение со значениями в [choice_lo, choice_hi]"""
    n_pieces = int(rng.integers(1, max_pieces + 1))
    grid = random_breakpoints(rng, lo, hi, n_pieces)
    values = rng.uniform(choice_lo, choice_hi, grid.size)
    if increasing:
        values = np.sort(values)
    return ChoiceBelief.from_samples(grid, values)


def raised_belief(rng, beta, ceiling):
    """β' = β + U·(ceiling - β), поточечно β' ≥ β"""
    top = ChoiceBelief.constant(beta.domain_lo, beta.domain_hi, ceiling)
    return mix_choice_belief(beta, top, float(rng.uniform(0.0, 1.0)))


def ordered_pair(rng, lo, hi, choice_lo, choice_hi):
    """
    Пара (β, f) ≤ (β', f') в порядке составных убеждений

    Либо β' ≥ β поточечно при общей f, либо возрастающие β ≤ β' и f' ≥ f.

    Returns:
        tuple: ((β, f), (β', f'))
    """
    if rng.uniform() < 0.5:
        beta = random_choice_belief(rng, lo, hi, choice_lo, choice_hi)
        f = random_density(rng, lo, hi)
        return (beta, f), (raised_belief(rng, beta, choice_hi), f)
    beta = random_choice_belief(rng, lo, hi, choice_lo, choice_hi, increasing=True)
    f = random_density(rng, lo, hi)
    return (beta, f), (raised_belief(rng, beta, choice_hi), dominating_density(rng, f))
