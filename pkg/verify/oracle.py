from dataclasses import dataclass
from itertools import product
from math import prod

import numpy as np

from beliefs.density import cdf_at
from config import Config
from games.base_game import QuadraticOwnChoice
from utils.errors import ArgumentError, ResourceLimitError
from utils.logger import logger


@dataclass(frozen=True)
class DiscretizedGame:
    """
    Конечная версия игры для прямого перебора

    Attributes:
        game: Исходная GameSpec
        choice_grids: Кортеж массивов выборов по игрокам
        param_grids: Кортеж массивов параметров по игрокам
        weights: dict (i, j) -> список массивов масс членов семейства M_i на сетке параметра соперника j
    """
    game: object
    choice_grids: tuple
    param_grids: tuple
    weights: dict


@dataclass
class OracleResult:
    """rounds[k][i][t] - отсортированные индексы выборов игрока i, выживших в раунде k при θ-индексе t"""
    discretized: DiscretizedGame
    rounds: list

    def extremes(self, k=None):
        """Наименьший и наибольший выживший выбор: список по игрокам пар массивов (min, max)"""
        survivors = self.rounds[-1 if k is None else k]
        result = []
        for i, per_theta in enumerate(survivors):
            grid = self.discretized.choice_grids[i]
            result.append((np.array([grid[s[0]] for s in per_theta]),
                           np.array([grid[s[-1]] for s in per_theta])))
        return result


def _cell_masses(density, grid):
    if grid.size == 1:
        return np.array([1.0])
    middles = (grid[:-1] + grid[1:]) / 2.0
    edges = np.concatenate(([density.domain_lo], middles, [density.domain_hi]))
    cdf = np.array([cdf_at(density, e) for e in edges])
    return np.diff(cdf)


def discretize_game(g, n_choices, n_params):
    """
    Сетки выборов и параметров; члены семейств превращаются в массы ячеек между серединами

    Args:
        g: GameSpec
        n_choices: Число точек сетки выбора (≥ 1)
        n_params: Число точек сетки параметра (≥ 1), совпадает с сеткой решателя

    Returns:
        DiscretizedGame
    """
    if n_choices < 1 or n_params < 1:
        raise ArgumentError(f"Сетки должны быть непустыми, получено {n_choices} и {n_params}")
    choice_grids = tuple(np.linspace(p.choice_lo, p.choice_hi, n_choices) for p in g.players)
    param_grids = tuple(np.linspace(p.param_lo, p.param_hi, n_params) for p in g.players)
    weights = {}
    for i, player in enumerate(g.players):
        for j, family in player.families.items():
            weights[(i, j)] = [_cell_masses(member, param_grids[j]) for member in family.members]
    return DiscretizedGame(g, choice_grids, param_grids, weights)


def _utility_table(g, i, theta, choices, others):
    utility = g.players[i].utility
    if isinstance(utility, QuadraticOwnChoice):
        return np.array([utility(theta, c, others) for c in choices], dtype=float)
    return np.array([utility.evaluate_many(theta, c, others) for c in choices], dtype=float)


def _expected_values(d, i, theta, choices, selection, member_weights):
    """Ожидаемые полезности выборов при точечном убеждении selection (соперник -> массив выборов)"""
    g = d.game
    opponents = sorted(selection)
    mesh = np.meshgrid(*(selection[j] for j in opponents), indexing="ij")
    weight = np.ones(mesh[0].shape)
    for axis, j in enumerate(opponents):
        shape = [1] * len(opponents)
        shape[axis] = -1
        weight = weight * member_weights[j].reshape(shape)
    table = _utility_table(g, i, theta, choices, dict(zip(opponents, mesh)))
    return np.array([float(np.sum(weight * np.broadcast_to(row, weight.shape))) for row in table])


def _selections(d, survivors, j, full):
    grid = d.choice_grids[j]
    per_theta = survivors[j]
    if full:
        return [np.array(values) for values in product(*([grid[k] for k in s] for s in per_theta))]
    return [np.array([grid[s[0]] for s in per_theta]), np.array([grid[s[-1]] for s in per_theta])]


def _search_size(d, survivors, i, full):
    opponents = d.game.opponents(i)
    members = prod(len(d.weights[(i, j)]) for j in opponents)
    if not full:
        return members * 2 ** len(opponents)
    return members * prod(prod(len(s) for s in survivors[j]) for j in opponents)


def oracle_rationalizable(d, max_rounds, full=False, budget=None):
    """
    Точечная рационализуемость перебором на конечных сетках

    Выбор выживает, если лежит между наименьшим и наибольшим максимизатором ожидаемой полезности
    по просмотренным убеждениям. Сокращенный перебор берет поточечно наименьший и наибольший
    выживший выбор соперников; полный перебор - все отображения параметр -> выживший выбор.

    Args:
        d: DiscretizedGame
        max_rounds: Наибольшее число раундов
        full: Полный перебор убеждений
        budget: Предел числа убеждений на одну точку (по умолчанию из Config)

    Returns:
        OracleResult

    Raises:
        ResourceLimitError: Если перебор превышает предел
    """
    budget = Config.ORACLE_ENUMERATION_BUDGET if budget is None else budget
    g = d.game
    survivors = [[list(range(d.choice_grids[i].size)) for _ in d.param_grids[i]] for i in range(g.n)]
    rounds = [survivors]

    for k in range(1, max_rounds + 1):
        new = []
        for i in range(g.n):
            size = _search_size(d, survivors, i, full)
            if size > budget:
                raise ResourceLimitError(
                    f"Перебор убеждений игрока {i + 1} в раунде {k}: {size} вариантов превышает предел {budget}",
                    witness={"player": i + 1, "round": k, "size": size, "budget": budget},
                )
            opponents = g.opponents(i)
            selection_sets = [_selections(d, survivors, j, full) for j in opponents]
            member_sets = [d.weights[(i, j)] for j in opponents]
            per_theta = []
            for t, theta in enumerate(d.param_grids[i]):
                current = survivors[i][t]
                choices = d.choice_grids[i][current]
                least, greatest = len(current), -1
                for selection in product(*selection_sets):
                    chosen = dict(zip(opponents, selection))
                    for members in product(*member_sets):
                        values = _expected_values(d, i, float(theta), choices, chosen, dict(zip(opponents, members)))
                        best = values.max()
                        ties = np.flatnonzero(values >= best - 1e-12 * max(1.0, abs(best)))
                        least = min(least, int(ties[0]))
                        greatest = max(greatest, int(ties[-1]))
                per_theta.append(current[least:greatest + 1])
            new.append(per_theta)
        rounds.append(new)
        logger.debug(f"🔄 Перебор, раунд {k}: выжившие {[[len(s) for s in p] for p in new]}")
        if new == survivors:
            break
        survivors = new

    return OracleResult(d, rounds)


def compare_oracle(trace, oracle_out, choice_step, k=None):
    """
    Наибольшее расхождение непрерывных границ и крайних выживших выборов перебора

    Args:
        trace: IterationTrace решателя
        oracle_out: OracleResult
        choice_step: Шаг сетки выбора
        k: Раунд сравнения (по умолчанию последний общий)

    Returns:
        float: Наибольшее расхождение
    """
    d = oracle_out.discretized
    for i, bounds in enumerate(trace.rounds[0].players):
        if bounds.grid.shape != d.param_grids[i].shape or not np.allclose(bounds.grid, d.param_grids[i]):
            raise ArgumentError(f"Сетки параметра игрока {i + 1} у решателя и перебора не совпадают")
    if k is None:
        k = min(len(trace.rounds), len(oracle_out.rounds)) - 1

    deviation = 0.0
    for bounds, (low, high) in zip(trace.rounds[k].players, oracle_out.extremes(k)):
        deviation = max(deviation, float(np.max(np.abs(low - bounds.lower))),
                        float(np.max(np.abs(high - bounds.upper))))
    if deviation > choice_step:
        logger.warning(f"⚠️ Расхождение с перебором {deviation} больше шага сетки {choice_step}")
    return deviation
