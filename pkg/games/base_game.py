from dataclasses import dataclass, field, replace
from enum import Enum
from itertools import product
from math import prod
from types import MappingProxyType
from typing import Callable

import numpy as np

from beliefs.choice_belief import _stationary_points
from beliefs.density import PiecewiseConstantDensity
from beliefs.family import BeliefFamily, family_extremes
from utils.errors import AssumptionViolationError, DomainError


class Mode(str, Enum):
    COMPLEMENTS = "complements"
    SUBSTITUTES = "substitutes"


@dataclass(frozen=True)
class ThetaCoefficient:
    """Коэффициент вида constant + linear·θ + reciprocal/θ"""
    constant: float = 0.0
    linear: float = 0.0
    reciprocal: float = 0.0

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        value = self.constant + self.linear * theta
        if self.reciprocal != 0:
            if np.any(theta == 0):
                raise DomainError("Коэффициент с членом 1/θ не определен при θ=0")
            value = value + self.reciprocal / theta
        return value

    def __add__(self, other):
        return ThetaCoefficient(self.constant + other.constant,
                                self.linear + other.linear,
                                self.reciprocal + other.reciprocal)

    def scaled(self, factor):
        return ThetaCoefficient(self.constant * factor, self.linear * factor, self.reciprocal * factor)

    def is_zero(self):
        return self.constant == 0 and self.linear == 0 and self.reciprocal == 0


def _sum_coefficients(terms, means):
    total = ThetaCoefficient()
    for opponents, coefficient in terms.items():
        total = total + coefficient.scaled(prod(means[j] for j in opponents))
    return total


@dataclass(frozen=True)
class QuadraticOwnChoice:
    """
    u_i = A·c_i² + B·c_i + D, где A, B, D мультилинейны по выборам соперников

    Каждый коэффициент задан словарем: кортеж индексов соперников -> ThetaCoefficient,
    пустой кортеж означает член без выборов соперников.
    """
    A: dict
    B: dict
    D: dict = field(default_factory=dict)

    def opponents_used(self):
        return {j for terms in (self.A, self.B, self.D) for key in terms for j in key}

    def coefficient(self, terms, theta, others):
        total = 0.0
        for opponents, coefficient in terms.items():
            value = coefficient(theta)
            for j in opponents:
                value = value * others[j]
            total = total + value
        return total

    def __call__(self, theta, c, others):
        return (self.coefficient(self.A, theta, others) * c * c
                + self.coefficient(self.B, theta, others) * c
                + self.coefficient(self.D, theta, others))

    def expected_terms(self, means):
        """
        Коэффициенты ожидаемой полезности как функции θ

        Соперники независимы, поэтому E[Π c_j] = Π E[c_j].

        Args:
            means: dict соперник -> E[β_ij]

        Returns:
            tuple: (Ã, B̃, D̃) типа ThetaCoefficient
        """
        return tuple(_sum_coefficients(terms, means) for terms in (self.A, self.B, self.D))


def curvature_maximum(utility, opponent_bounds, param_lo, param_hi):
    """
    Наибольшее значение A(θ, c_{-i}) на отрезке параметра и коробке выборов соперников

    A мультилинейна по выборам соперников, поэтому достаточно вершин коробки;
    по θ проверяются концы и стационарные точки.

    Args:
        utility: QuadraticOwnChoice
        opponent_bounds: dict соперник -> (choice_lo, choice_hi)
        param_lo: Нижняя граница собственного параметра
        param_hi: Верхняя граница собственного параметра

    Returns:
        tuple: (значение, θ, dict соперник -> выбор)
    """
    opponents = list(opponent_bounds)
    best = None
    for corner in product(*(opponent_bounds[j] for j in opponents)):
        point = dict(zip(opponents, (float(c) for c in corner)))
        coefficient = utility.expected_terms(point)[0]
        thetas = [param_lo, param_hi] + _stationary_points(coefficient.linear, coefficient.reciprocal,
                                                           param_lo, param_hi)
        for theta in thetas:
            value = float(coefficient(theta))
            if best is None or value > best[0]:
                best = (value, float(theta), point)
    return best


@dataclass(frozen=True)
class Blackbox:
    """
    Произвольная функция полезности evaluator(θ_i, c_i, others), others - dict соперник -> выбор

    При vectorized=True evaluator принимает массивы выборов соперников.
    """
    evaluator: Callable
    vectorized: bool = False

    def __call__(self, theta, c, others):
        return self.evaluator(theta, c, others)

    def evaluate_many(self, theta, c, others):
        if self.vectorized:
            return np.asarray(self.evaluator(theta, c, others), dtype=float)
        keys = list(others)
        scalar = np.vectorize(lambda *values: float(self.evaluator(theta, c, dict(zip(keys, values)))))
        return scalar(*(others[j] for j in keys))


@dataclass(frozen=True)
class PlayerSpec:
    """
    Описание игрока: отрезок выбора, отрезок параметра, семейства убеждений по соперникам, полезность
    """
    choice_lo: float
    choice_hi: float
    param_lo: float
    param_hi: float
    families: dict
    utility: object

    def __post_init__(self):
        # только для чтения
        object.__setattr__(self, "families", MappingProxyType(dict(self.families)))


@dataclass(frozen=True)
class GameSpec:
    """
    Игра с неполной информацией

    Attributes:
        players: Кортеж PlayerSpec (индексы с нуля)
        mode: Mode.COMPLEMENTS или Mode.SUBSTITUTES
        name: Название модели для отчетов
        params: Параметры встроенной модели (для воспроизведения формул)
    """
    players: tuple
    mode: Mode = Mode.COMPLEMENTS
    name: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "players", tuple(self.players))
        object.__setattr__(self, "mode", Mode(self.mode))
        n = len(self.players)
        if n < 2:
            raise DomainError(f"В игре должно быть хотя бы два игрока, получено {n}")

        for i, player in enumerate(self.players):
            if not player.choice_lo <= player.choice_hi:
                raise DomainError(
                    f"Игрок {i + 1}: пустой отрезок выбора [{player.choice_lo}, {player.choice_hi}]"
                )
            if not player.param_lo < player.param_hi:
                raise DomainError(
                    f"Игрок {i + 1}: отрезок параметра [{player.param_lo}, {player.param_hi}] должен быть невырожденным"
                )

        for i, player in enumerate(self.players):
            opponents = set(self.opponents(i))
            if set(player.families) != opponents:
                raise DomainError(
                    f"Игрок {i + 1}: семейства убеждений заданы для {sorted(j + 1 for j in player.families)}, "
                    f"ожидались {sorted(j + 1 for j in opponents)}"
                )
            for j, family in player.families.items():
                if not isinstance(family, BeliefFamily):
                    raise DomainError(f"Игрок {i + 1}: семейство по сопернику {j + 1} имеет неверный тип")
                other = self.players[j]
                if (abs(family.domain_lo - other.param_lo) > 1e-12
                        or abs(family.domain_hi - other.param_hi) > 1e-12):
                    raise DomainError(
                        f"Игрок {i + 1}: семейство по сопернику {j + 1} задано на "
                        f"[{family.domain_lo}, {family.domain_hi}], а параметр соперника на "
                        f"[{other.param_lo}, {other.param_hi}]"
                    )
                family_extremes(family)
            if isinstance(player.utility, QuadraticOwnChoice):
                unknown = player.utility.opponents_used() - opponents
                if unknown:
                    raise DomainError(
                        f"Игрок {i + 1}: полезность ссылается на неизвестных соперников {sorted(j + 1 for j in unknown)}"
                    )
                bounds = {j: (self.players[j].choice_lo, self.players[j].choice_hi) for j in sorted(opponents)}
                value, theta, point = curvature_maximum(player.utility, bounds, player.param_lo, player.param_hi)
                if value >= 0:
                    raise AssumptionViolationError(
                        f"Игрок {i + 1}: коэффициент при c² равен {value} ≥ 0 при θ={theta}, "
                        f"выборах соперников {point}",
                        witness={"player": i + 1, "theta": theta,
                                 "choices": {j + 1: c for j, c in point.items()}, "A": value},
                    )
            elif not callable(player.utility):
                raise DomainError(f"Игрок {i + 1}: полезность должна быть QuadraticOwnChoice или Blackbox")

    @property
    def n(self):
        return len(self.players)

    def opponents(self, i):
        return [j for j in range(len(self.players)) if j != i]

    def is_quadratic(self, i):
        return isinstance(self.players[i].utility, QuadraticOwnChoice)


def _check_within(value, lo, hi, what):
    span = 1e-12 * max(1.0, abs(lo), abs(hi))
    if not lo - span <= value <= hi + span:
        raise DomainError(f"{what}={value} вне отрезка [{lo}, {hi}]")


def opponent_choices(g, i, c_minus_i):
    """Выборы соперников как dict: из словаря или из последовательности в порядке индексов"""
    opponents = g.opponents(i)
    if isinstance(c_minus_i, dict):
        if set(c_minus_i) != set(opponents):
            raise DomainError(f"Нужны выборы соперников {[j + 1 for j in opponents]}")
        return dict(c_minus_i)
    values = list(np.atleast_1d(c_minus_i))
    if len(values) != len(opponents):
        raise DomainError(f"Нужно {len(opponents)} выборов соперников, получено {len(values)}")
    return dict(zip(opponents, (float(v) for v in values)))


def utility_eval(g, i, theta, c, c_minus_i):
    """
    Значение полезности u_i(θ_i, c_i, c_{-i}) с проверкой областей

    Args:
        g: GameSpec
        i: Индекс игрока (с нуля)
        theta: Собственный параметр
        c: Собственный выбор
        c_minus_i: Выборы соперников (dict или последовательность)

    Returns:
        float: Полезность
    """
    if not 0 <= i < g.n:
        raise DomainError(f"Нет игрока с индексом {i}")
    player = g.players[i]
    _check_within(theta, player.param_lo, player.param_hi, "θ")
    _check_within(c, player.choice_lo, player.choice_hi, "c")
    others = opponent_choices(g, i, c_minus_i)
    for j, value in others.items():
        _check_within(value, g.players[j].choice_lo, g.players[j].choice_hi, f"c_{j + 1}")
    return float(player.utility(theta, c, others))


def quadratic_game(players, mode=Mode.COMPLEMENTS, name="quadratic", params=None):
    """Игра с пользовательскими квадратичными полезностями"""
    return GameSpec(tuple(players), Mode(mode), name, dict(params or {}))


def with_mode(g, mode):
    """Та же игра с другим объявленным режимом"""
    return replace(g, mode=Mode(mode))


def split_density_family(lo, hi):
    """
    Семейство f^α на [lo, hi]: α на нижней половине, 2/(hi-lo) - α на верхней

    Члены: α = 0 (максимальный), 1/(hi-lo) (равномерный), 2/(hi-lo) (минимальный).
    """
    width = hi - lo
    middle = (lo + hi) / 2.0
    members = []
    for alpha in (0.0, 1.0 / width, 2.0 / width):
        members.append(PiecewiseConstantDensity((lo, middle, hi), (alpha, 2.0 / width - alpha)))
    return BeliefFamily(tuple(members), max_index=0, min_index=2, labels=("f^0", "f^1/w", "f^2/w"))
