import numpy as np

from beliefs.choice_belief import ChoiceBelief
from config import Config
from solver.expected_utility import (
    belief_means,
    check_belief_inputs,
    expected_coefficients,
    expected_utility_value,
)
from utils.errors import AssumptionViolationError, DomainError
from utils.logger import logger

INV_PHI = (np.sqrt(5) - 1) / 2
INV_PHI_SQ = (3 - np.sqrt(5)) / 2


def golden_section_maximize(objective, lo, hi, tol=None):
    """
    Золотое сечение для унимодальной функции на [lo, hi]

    Args:
        objective: Функция одного аргумента
        lo: Левый конец отрезка
        hi: Правый конец отрезка
        tol: Точность по аргументу

    Returns:
        float: Точка максимума (сравнивается и с концами отрезка)
    """
    tol = Config.GOLDEN_SECTION_TOLERANCE if tol is None else tol
    a, b = lo, hi
    dist = b - a
    if dist <= tol:
        return (a + b) / 2.0

    n = int(np.ceil(np.log(tol / dist) / np.log(INV_PHI)))
    c = a + INV_PHI_SQ * dist
    d = a + INV_PHI * dist
    yc = objective(c)
    yd = objective(d)
    for _ in range(n - 1):
        if yc > yd:
            b = d
            d = c
            yd = yc
            dist = INV_PHI * dist
            c = a + INV_PHI_SQ * dist
            yc = objective(c)
        else:
            a = c
            c = d
            yc = yd
            dist = INV_PHI * dist
            d = a + INV_PHI * dist
            yd = objective(d)
    best = (a + d) / 2.0 if yc > yd else (c + b) / 2.0

    # на монотонных участках максимум лежит на конце отрезка
    candidates = [best, lo, hi]
    values = [objective(x) for x in candidates]
    return candidates[int(np.argmax(values))]


def unimodality_probe(objective, lo, hi, points=5):
    """
    Проверка на строгий внутренний локальный минимум по равномерной сетке точек

    Raises:
        AssumptionViolationError: Если найден внутренний строгий минимум
    """
    grid = np.linspace(lo, hi, points)
    values = np.array([objective(x) for x in grid])
    scale = 1e-12 * max(1.0, float(np.max(np.abs(values))))
    for k in range(1, points - 1):
        if values[k] < values[k - 1] - scale and values[k] < values[k + 1] - scale:
            raise AssumptionViolationError(
                f"Ожидаемая полезность не унимодальна: в точке c={grid[k]} значение ниже соседних",
                witness={"choices": grid.tolist(), "values": values.tolist()},
            )
    return values


def _concavity_violation(i, theta, ea):
    return AssumptionViolationError(
        f"Игрок {i + 1}: ожидаемый квадратичный коэффициент Ã={ea} ≥ 0 при θ={theta}, "
        f"единственность оптимума не гарантирована",
        witness={"player": i + 1, "theta": float(theta), "A": float(ea)},
    )


def unconstrained_best_response(g, i, theta, betas, densities):
    """Лучший ответ квадратичной полезности без ограничений: -B̃/(2Ã)"""
    ea, eb, _ = expected_coefficients(g, i, theta, betas, densities)
    if ea >= 0:
        raise _concavity_violation(i, theta, ea)
    return -eb / (2.0 * ea)


def best_response(g, i, theta, betas, densities, feasible):
    """
    Единственный оптимальный выбор игрока i на отрезке feasible

    Args:
        g: GameSpec
        i: Индекс игрока
        theta: Собственный параметр
        betas: dict соперник -> ChoiceBelief
        densities: dict соперник -> PiecewiseConstantDensity
        feasible: Interval допустимых выборов

    Returns:
        float: Лучший ответ
    """
    player = g.players[i]
    span = 1e-12 * max(1.0, abs(player.choice_lo), abs(player.choice_hi))
    if feasible.lo < player.choice_lo - span or feasible.hi > player.choice_hi + span:
        raise DomainError(
            f"Допустимый отрезок [{feasible.lo}, {feasible.hi}] выходит за отрезок выбора "
            f"[{player.choice_lo}, {player.choice_hi}]"
        )
    check_belief_inputs(g, i, betas, densities)
    return _best_response_within(g, i, theta, betas, densities, feasible.lo, feasible.hi)


def _best_response_within(g, i, theta, betas, densities, lo, hi):
    if g.is_quadratic(i):
        raw = unconstrained_best_response(g, i, theta, betas, densities)
        value = float(min(max(raw, lo), hi))
        if value != raw:
            logger.debug(f"⚠️ Лучший ответ {raw} игрока {i + 1} при θ={theta} ограничен отрезком [{lo}, {hi}]")
        return value

    def objective(c):
        return expected_utility_value(g, i, theta, c, betas, densities)

    unimodality_probe(objective, lo, hi)
    return float(golden_section_maximize(objective, lo, hi))


def best_response_function(g, i, betas, densities, grid, search_lo=None, search_hi=None):
    """
    Лучший ответ как функция собственного параметра

    Для квадратичных полезностей с представимыми ожидаемыми коэффициентами функция точная
    (аффинная по θ или по 1/θ). Иначе значения на сетке интерполируются кусочно-линейно.

    Args:
        g: GameSpec
        i: Индекс игрока
        betas: dict соперник -> ChoiceBelief
        densities: dict соперник -> PiecewiseConstantDensity
        grid: Сетка параметра игрока
        search_lo: Нижняя граница поиска для произвольной полезности
        search_hi: Верхняя граница поиска для произвольной полезности

    Returns:
        tuple: (ChoiceBelief без ограничений на выбор, exact: bool)
    """
    player = g.players[i]
    lo, hi = player.param_lo, player.param_hi
    grid = np.asarray(grid, dtype=float)

    if g.is_quadratic(i):
        ea, eb, _ = player.utility.expected_terms(belief_means(betas, densities))
        checkpoints = np.union1d(grid, [lo, hi])
        for theta in checkpoints:
            value = float(ea(theta))
            if value >= 0:
                raise _concavity_violation(i, theta, value)

        exact = _exact_ratio(ea, eb, lo, hi)
        if exact is not None:
            return exact, True
        values = [-float(eb(t)) / (2.0 * float(ea(t))) for t in grid]
        return ChoiceBelief.from_samples(grid, values), False

    search_lo = player.choice_lo if search_lo is None else search_lo
    search_hi = player.choice_hi if search_hi is None else search_hi
    values = [_best_response_within(g, i, t, betas, densities, search_lo, search_hi) for t in grid]
    return ChoiceBelief.from_samples(grid, values), False


def _exact_ratio(ea, eb, lo, hi):
    """-B̃(θ)/(2Ã(θ)) в форме c0 + c1·θ + cr/θ, если она представима"""
    if ea.linear == 0 and ea.reciprocal == 0:
        scale = -1.0 / (2.0 * ea.constant)
        return ChoiceBelief.reciprocal_affine(lo, hi, eb.constant * scale, eb.linear * scale, eb.reciprocal * scale)
    if ea.constant == 0 and ea.reciprocal == 0 and eb.reciprocal == 0:
        scale = -1.0 / (2.0 * ea.linear)
        return ChoiceBelief.reciprocal_affine(lo, hi, eb.linear * scale, 0.0, eb.constant * scale)
    if ea.constant == 0 and ea.linear == 0 and eb.linear == 0:
        scale = -1.0 / (2.0 * ea.reciprocal)
        return ChoiceBelief.reciprocal_affine(lo, hi, eb.reciprocal * scale, eb.constant * scale, 0.0)
    return None
