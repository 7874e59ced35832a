from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from beliefs.choice_belief import ChoiceBelief
from beliefs.composite import composite_compare, pushforward
from config import Config
from games.base_game import Mode
from solver.best_response import best_response_function
from utils.errors import ArgumentError, AssumptionViolationError, DomainError, InternalConsistencyError
from utils.logger import logger


class Bound(str, Enum):
    HIGH = "high"
    LOW = "low"


class ChoicePolicy(str, Enum):
    CONFINED = "confined"
    UNCONFINED = "unconfined"


class Termination(str, Enum):
    FIXED_POINT = "fixed_point"
    WIDTH_TOLERANCE = "width_tolerance"
    MAX_ROUNDS = "max_rounds"


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        span = 1e-12 * max(1.0, abs(self.lo), abs(self.hi))
        if self.lo > self.hi + span:
            raise DomainError(f"Пустой интервал [{self.lo}, {self.hi}]")

    @property
    def width(self):
        return self.hi - self.lo

    def contains(self, other, tol=0.0):
        return self.lo - tol <= other.lo and other.hi <= self.hi + tol


@dataclass(frozen=True)
class PlayerBounds:
    """
    Граничные функции l_i^k, u_i^k одного игрока и их значения на сетке параметра

    exact=True означает, что функции получены в замкнутой форме, а не интерполяцией.
    """
    grid: np.ndarray
    lower_fn: ChoiceBelief
    upper_fn: ChoiceBelief
    exact: bool = True

    @property
    def lower(self):
        return np.asarray(self.lower_fn(self.grid), dtype=float)

    @property
    def upper(self):
        return np.asarray(self.upper_fn(self.grid), dtype=float)

    def interval_at(self, k):
        return Interval(float(self.lower[k]), float(self.upper[k]))


@dataclass(frozen=True)
class BoundProfile:
    round: int
    players: tuple


@dataclass(frozen=True)
class BoundEvent:
    """Событие раунда: ограничение отрезком выбора или нарушение вложенности"""
    round: int
    player: int
    theta: float
    bound: str
    value: float
    limit: float


@dataclass
class IterationTrace:
    rounds: list = field(default_factory=list)
    convergence: list = field(default_factory=list)
    terminated_by: Termination = Termination.MAX_ROUNDS
    clipping_events: list = field(default_factory=list)
    nesting_events: list = field(default_factory=list)
    policy: ChoicePolicy = ChoicePolicy.CONFINED

    @property
    def final(self):
        return self.rounds[-1]


def initial_profile(g, grid_size):
    """P_i^0 = C_i при каждом значении параметра"""
    players = []
    for player in g.players:
        grid = np.linspace(player.param_lo, player.param_hi, grid_size)
        players.append(PlayerBounds(
            grid,
            ChoiceBelief.constant(player.param_lo, player.param_hi, player.choice_lo),
            ChoiceBelief.constant(player.param_lo, player.param_hi, player.choice_hi),
        ))
    return BoundProfile(0, tuple(players))


def extremal_composite_inputs(g, i, prev, which, tol=None):
    """
    Убеждения соперников, порождающие крайнюю границу игрока i

    В режиме дополнений верхняя граница отвечает на верхние граничные функции соперников
    в паре с членом семейства, чей составной образ доминирует остальные; в режиме
    заменителей верхней границе соответствует наименьшее составное убеждение.

    Args:
        g: GameSpec
        i: Индекс игрока
        prev: BoundProfile предыдущего раунда
        which: Bound.HIGH или Bound.LOW

    Returns:
        tuple: (dict соперник -> ChoiceBelief, dict соперник -> PiecewiseConstantDensity)
    """
    which = Bound(which)
    want_high = (which == Bound.HIGH) == (g.mode == Mode.COMPLEMENTS)
    betas = {}
    densities = {}
    for j, family in g.players[i].families.items():
        bounds = prev.players[j]
        beta = bounds.upper_fn if want_high else bounds.lower_fn
        betas[j] = beta
        designated = family.max_index if want_high else family.min_index
        low, high = beta.value_range()
        if low == high or len(family) == 1:
            densities[j] = family.members[designated]
            continue
        densities[j] = _extreme_member(family, beta, designated, want_high, i, j, tol)
    return betas, densities


def _extreme_member(family, beta, designated, want_high, i, j, tol):
    composites = [pushforward(beta, member) for member in family.members]
    order = [designated] + [k for k in range(len(family)) if k != designated]
    last_failure = None
    for k in order:
        for other in range(len(family)):
            if other == k:
                continue
            result = composite_compare(composites[k], composites[other], tol)
            if not (result.dominates if want_high else result.dominated_by):
                last_failure = (k, other, result)
                break
        else:
            return family.members[k]
    k, other, result = last_failure
    raise AssumptionViolationError(
        f"Игрок {i + 1}, соперник {j + 1}: ни один член семейства не дает "
        f"{'наибольшего' if want_high else 'наименьшего'} составного убеждения "
        f"({family.labels[k]} и {family.labels[other]} несравнимы)",
        witness={"player": i + 1, "opponent": j + 1, "members": [family.labels[k], family.labels[other]],
                 "first_above": result.first_above, "second_above": result.second_above},
    )


def _record_escapes(events, round_index, i, grid, values, limits, bound, above):
    for theta, value, limit in zip(grid, values, limits):
        if (value > limit) if above else (value < limit):
            events.append(BoundEvent(round_index, i, float(theta), bound, float(value), float(limit)))


def iterate_round(g, prev, policy=ChoicePolicy.CONFINED, trace=None, tol=None):
    """
    Один раунд рационализуемости: новые границы по экстремальным убеждениям

    Args:
        g: GameSpec
        prev: BoundProfile предыдущего раунда
        policy: CONFINED (ограничение отрезком выбора и пересечение с прошлым раундом)
                или UNCONFINED (без ограничений, нарушения вложенности только записываются)
        trace: IterationTrace для записи событий (необязательно)

    Returns:
        BoundProfile: Границы следующего раунда
    """
    policy = ChoicePolicy(policy)
    round_index = prev.round + 1
    clipping = trace.clipping_events if trace is not None else []
    nesting = trace.nesting_events if trace is not None else []
    players = []

    for i, player in enumerate(g.players):
        old = prev.players[i]
        grid = old.grid
        search = (player.choice_lo, player.choice_hi) if policy == ChoicePolicy.CONFINED else (None, None)

        new = {}
        exact = True
        for which in (Bound.HIGH, Bound.LOW):
            betas, densities = extremal_composite_inputs(g, i, prev, which, tol)
            fn, fn_exact = best_response_function(g, i, betas, densities, grid, *search)
            exact = exact and fn_exact
            new[which] = fn

        upper_fn, lower_fn = new[Bound.HIGH], new[Bound.LOW]
        if policy == ChoicePolicy.CONFINED:
            for fn, name in ((upper_fn, "upper"), (lower_fn, "lower")):
                values = fn(grid)
                _record_escapes(clipping, round_index, i, grid, values, np.full_like(grid, player.choice_hi), name, True)
                _record_escapes(clipping, round_index, i, grid, values, np.full_like(grid, player.choice_lo), name, False)
            upper_fn = upper_fn.clip(player.choice_lo, player.choice_hi)
            lower_fn = lower_fn.clip(player.choice_lo, player.choice_hi)

            escape_hi = np.max(upper_fn(grid) - old.upper)
            escape_lo = np.max(old.lower - lower_fn(grid))
            if max(escape_hi, escape_lo) > Config.NESTING_TOLERANCE:
                logger.error(f"❌ Раунд {round_index}: границы игрока {i + 1} вышли за прошлый раунд")
                raise InternalConsistencyError(
                    f"Раунд {round_index}, игрок {i + 1}: новые границы выходят за границы прошлого раунда "
                    f"на {max(escape_hi, escape_lo)}",
                    witness={"round": round_index, "player": i + 1,
                             "upper_escape": float(escape_hi), "lower_escape": float(escape_lo)},
                )
            upper_fn = upper_fn.pointwise_min(old.upper_fn)
            lower_fn = lower_fn.pointwise_max(old.lower_fn)
        elif prev.round > 0:
            upper_values = upper_fn(grid)
            lower_values = lower_fn(grid)
            _record_escapes(nesting, round_index, i, grid, upper_values,
                            old.upper + Config.NESTING_TOLERANCE, "upper", True)
            _record_escapes(nesting, round_index, i, grid, lower_values,
                            old.lower - Config.NESTING_TOLERANCE, "lower", False)

        _check_monotone(g, i, round_index, lower_fn, "lower")
        _check_monotone(g, i, round_index, upper_fn, "upper")
        gap = np.max(lower_fn(grid) - upper_fn(grid))
        if gap > Config.NESTING_TOLERANCE:
            raise InternalConsistencyError(
                f"Раунд {round_index}, игрок {i + 1}: нижняя граница выше верхней на {gap}",
                witness={"round": round_index, "player": i + 1, "gap": float(gap)},
            )
        players.append(PlayerBounds(grid, lower_fn, upper_fn, exact))

    return BoundProfile(round_index, tuple(players))


def _check_monotone(g, i, round_index, fn, name):
    increasing = g.mode == Mode.COMPLEMENTS
    if not fn.is_monotone(increasing, Config.MONOTONICITY_TOLERANCE):
        direction = "возрастать" if increasing else "убывать"
        raise AssumptionViolationError(
            f"Раунд {round_index}, игрок {i + 1}: граница {name} должна {direction} по θ "
            f"в объявленном режиме {g.mode.value}",
            witness={"round": round_index, "player": i + 1, "bound": name},
        )


def profile_change(old, new):
    """Наибольшее изменение любой из границ по всем игрокам и точкам сетки"""
    change = 0.0
    for before, after in zip(old.players, new.players):
        change = max(change,
                     float(np.max(np.abs(after.lower - before.lower))),
                     float(np.max(np.abs(after.upper - before.upper))))
    return change


def solve(g, max_rounds=None, width_tol=None, grid_size=None, policy=ChoicePolicy.CONFINED, tol=None):
    """
    Итерация точечной рационализуемости от P_i^0 = C_i

    Args:
        g: GameSpec
        max_rounds: Наибольшее число раундов (≥ 1)
        width_tol: Порог изменения границ для остановки (> 0)
        grid_size: Число точек сетки параметра (≥ 2)
        policy: ChoicePolicy

    Returns:
        IterationTrace: Все раунды, изменения и причина остановки
    """
    max_rounds = Config.MAX_ROUNDS if max_rounds is None else int(max_rounds)
    width_tol = Config.WIDTH_TOLERANCE if width_tol is None else float(width_tol)
    grid_size = Config.GRID_SIZE if grid_size is None else int(grid_size)
    if max_rounds < 1:
        raise ArgumentError(f"Число раундов должно быть ≥ 1, получено {max_rounds}")
    if width_tol <= 0:
        raise ArgumentError(f"Порог сходимости должен быть положительным, получено {width_tol}")
    if grid_size < 2:
        raise ArgumentError(f"Сетка параметра требует хотя бы двух точек, получено {grid_size}")

    policy = ChoicePolicy(policy)
    trace = IterationTrace(policy=policy)
    trace.rounds.append(initial_profile(g, grid_size))
    logger.info(f"🚀 Итерация для игры {g.name}: до {max_rounds} раундов, сетка {grid_size}, {policy.value}")

    for _ in range(max_rounds):
        current = iterate_round(g, trace.rounds[-1], policy, trace, tol)
        change = profile_change(trace.rounds[-1], current)
        trace.rounds.append(current)
        trace.convergence.append(change)
        logger.debug(f"🔄 Раунд {current.round}: изменение границ {change:.3e}")
        if change == 0.0:
            trace.terminated_by = Termination.FIXED_POINT
            break
        if change < width_tol:
            trace.terminated_by = Termination.WIDTH_TOLERANCE
            break
    else:
        trace.terminated_by = Termination.MAX_ROUNDS

    if trace.clipping_events:
        logger.warning(f"⚠️ Лучшие ответы выходили за отрезок выбора {len(trace.clipping_events)} раз")
    if trace.nesting_events:
        logger.warning(f"⚠️ Зафиксировано {len(trace.nesting_events)} нарушений вложенности раундов")
    logger.info(f"✅ Итерация завершена после {trace.final.round} раундов: {trace.terminated_by.value}")
    return trace
