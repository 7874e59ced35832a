from dataclasses import dataclass
from enum import Enum
from functools import reduce

import numpy as np

from config import Config
from utils.errors import ArgumentError, DomainError


class ComparisonResult(str, Enum):
    DOMINATES = "dominates"
    DOMINATED_BY = "dominated_by"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class Comparison:
    """
    Результат сравнения двух распределений по FOSD

    Attributes:
        result: Классификация отношения
        first_above: Порог, где хвост первого больше хвоста второго сверх допуска
        second_above: Порог, где хвост второго больше хвоста первого сверх допуска
    """
    result: ComparisonResult
    first_above: float = None
    second_above: float = None

    @property
    def dominates(self):
        return self.result in (ComparisonResult.DOMINATES, ComparisonResult.EQUAL)

    @property
    def dominated_by(self):
        return self.result in (ComparisonResult.DOMINATED_BY, ComparisonResult.EQUAL)


def classify(differences, thresholds, tol):
    """
    Классификация по разностям хвостов S_first - S_second в контрольных точках

    Args:
        differences: Массив разностей верхних хвостов
        thresholds: Соответствующие пороги
        tol: Абсолютный допуск

    Returns:
        Comparison: Результат со свидетелями
    """
    differences = np.asarray(differences, dtype=float)
    first_above = None
    second_above = None
    if differences.size:
        k = int(np.argmax(differences))
        if differences[k] > tol:
            first_above = float(thresholds[k])
        k = int(np.argmin(differences))
        if differences[k] < -tol:
            second_above = float(thresholds[k])

    if first_above is None and second_above is None:
        result = ComparisonResult.EQUAL
    elif second_above is None:
        result = ComparisonResult.DOMINATES
    elif first_above is None:
        result = ComparisonResult.DOMINATED_BY
    else:
        result = ComparisonResult.INCOMPARABLE
    return Comparison(result, first_above, second_above)


@dataclass(frozen=True)
class PiecewiseConstantDensity:
    """
    Кусочно-постоянная плотность параметрического убеждения f_ij на [θ̲_j, θ̄_j]

    Кусок p занимает (breakpoints[p], breakpoints[p+1]], первый кусок замкнут слева.
    """
    breakpoints: tuple
    values: tuple

    def __post_init__(self):
        breakpoints = tuple(float(b) for b in self.breakpoints)
        values = tuple(float(v) for v in self.values)
        object.__setattr__(self, "breakpoints", breakpoints)
        object.__setattr__(self, "values", values)

        if len(breakpoints) < 2 or len(values) != len(breakpoints) - 1:
            raise DomainError(
                f"Плотность требует n+1 точек разбиения для n кусков, получено {len(breakpoints)} и {len(values)}"
            )
        if any(b >= a for a, b in zip(breakpoints[1:], breakpoints[:-1])):
            raise DomainError(f"Точки разбиения должны строго возрастать: {breakpoints}")
        if any(not np.isfinite(v) or v < 0 for v in values):
            raise DomainError(f"Высоты плотности должны быть неотрицательны: {values}")

        mass = float(np.dot(values, np.diff(breakpoints)))
        if abs(mass - 1.0) > Config.DENSITY_MASS_TOLERANCE:
            raise DomainError(f"Плотность не нормирована: масса {mass!r}")

    @classmethod
    def uniform(cls, lo, hi):
        return cls((lo, hi), (1.0 / (hi - lo),))

    @classmethod
    def from_weights(cls, breakpoints, weights):
        """
        Плотность с массами кусков, пропорциональными weights

        Args:
            breakpoints: Точки разбиения
            weights: Неотрицательные веса кусков (хотя бы один положительный)
        """
        breakpoints = np.asarray(breakpoints, dtype=float)
        weights = np.asarray(weights, dtype=float)
        widths = np.diff(breakpoints)
        if weights.sum() <= 0:
            raise ArgumentError("Хотя бы один вес куска должен быть положительным")
        heights = weights / weights.sum() / widths
        return cls(tuple(breakpoints), tuple(heights))

    @property
    def domain_lo(self):
        return self.breakpoints[0]

    @property
    def domain_hi(self):
        return self.breakpoints[-1]

    def piece_masses(self):
        return np.asarray(self.values) * np.diff(self.breakpoints)

    def height_at(self, theta):
        index = np.searchsorted(self.breakpoints, theta, side="left") - 1
        index = np.clip(index, 0, len(self.values) - 1)
        return np.asarray(self.values)[index]

    def same_domain(self, other, tol=1e-12):
        return (abs(self.domain_lo - other.domain_lo) <= tol
                and abs(self.domain_hi - other.domain_hi) <= tol)

    def mean(self):
        bp = np.asarray(self.breakpoints)
        return float(np.dot(self.values, (bp[1:] ** 2 - bp[:-1] ** 2) / 2.0))


def _check_in_domain(f, theta):
    if not (f.domain_lo - 1e-12 <= theta <= f.domain_hi + 1e-12):
        raise DomainError(f"θ={theta} вне области плотности [{f.domain_lo}, {f.domain_hi}]")


def cdf_at(f, theta):
    """
    Функция распределения ∫_{θ̲}^{θ} f, точная кусочная арифметика

    Args:
        f: PiecewiseConstantDensity
        theta: Точка внутри области плотности

    Returns:
        float: Значение CDF
    """
    _check_in_domain(f, theta)
    bp = np.asarray(f.breakpoints)
    right = np.minimum(bp[1:], theta)
    widths = np.clip(right - bp[:-1], 0.0, None)
    return float(min(1.0, np.dot(f.values, widths)))


def survival_at(f, theta):
    """Верхний хвост ∫_{θ}^{θ̄} f"""
    _check_in_domain(f, theta)
    bp = np.asarray(f.breakpoints)
    left = np.maximum(bp[:-1], theta)
    widths = np.clip(bp[1:] - left, 0.0, None)
    return float(min(1.0, np.dot(f.values, widths)))


def fosd_compare(f, g, tol=None):
    """
    Сравнение параметрических убеждений по стохастическому доминированию первого порядка

    Хвосты кусочно-линейны между точками разбиения, поэтому проверки
    на объединенном множестве точек достаточно.

    Args:
        f: Первая плотность
        g: Вторая плотность
        tol: Допуск (по умолчанию Config.COMPARISON_TOLERANCE)

    Returns:
        Comparison: DOMINATES если f ≥ g
    """
    if tol is None:
        tol = Config.COMPARISON_TOLERANCE
    if not f.same_domain(g):
        raise DomainError(
            f"Области плотностей не совпадают: [{f.domain_lo}, {f.domain_hi}] и [{g.domain_lo}, {g.domain_hi}]"
        )
    thresholds = np.union1d(f.breakpoints, g.breakpoints)
    differences = [survival_at(f, t) - survival_at(g, t) for t in thresholds]
    return classify(differences, thresholds, tol)


def merge_breakpoints(*sequences):
    """Объединение точек разбиения с удалением почти совпадающих"""
    merged = reduce(np.union1d, sequences, np.empty(0))
    keep = np.concatenate(([True], np.diff(merged) > 1e-14 * max(1.0, float(np.abs(merged).max()))))
    return merged[keep]


def mix_density(f, g, lam):
    """
    Выпуклая комбинация плотностей (1-λ)f + λg

    Args:
        f: Первая плотность
        g: Вторая плотность
        lam: Вес λ ∈ [0, 1]

    Returns:
        PiecewiseConstantDensity: Смесь; при λ=0 и λ=1 возвращается сам аргумент
    """
    if not 0.0 <= lam <= 1.0:
        raise ArgumentError(f"λ должна лежать в [0, 1], получено {lam}")
    if not f.same_domain(g):
        raise DomainError("Области смешиваемых плотностей не совпадают")
    if lam == 0.0:
        return f
    if lam == 1.0:
        return g

    breakpoints = merge_breakpoints(f.breakpoints, g.breakpoints)
    middles = (breakpoints[:-1] + breakpoints[1:]) / 2.0
    values = (1.0 - lam) * f.height_at(middles) + lam * g.height_at(middles)
    return PiecewiseConstantDensity(tuple(breakpoints), tuple(values))
