from dataclasses import dataclass

import numpy as np

from beliefs.density import classify, merge_breakpoints
from config import Config
from utils.errors import ArgumentError, DomainError


def _as_tuple(values, size):
    if values is None:
        return (0.0,) * size
    return tuple(float(v) for v in values)


def _piece_value(c0, c1, cr, theta):
    theta = np.asarray(theta, dtype=float)
    value = c0 + c1 * theta
    if np.any(cr != 0):
        with np.errstate(divide="ignore", invalid="ignore"):
            value = value + np.where(cr != 0, cr / np.where(theta == 0, 1.0, theta), 0.0)
    return value


def _piece_integral(a, b, c0, c1, cr):
    integral = c0 * (b - a) + c1 * (b * b - a * a) / 2.0
    if cr != 0:
        integral += cr * np.log(b / a)
    return integral


def _roots_in(c0, c1, cr, a, b):
    """Корни c0 + c1·θ + cr/θ = 0 строго внутри (a, b)"""
    coefficients = [c1, c0, cr] if cr != 0 else [c1, c0]
    if all(c == 0 for c in coefficients):
        return []
    coefficients = np.trim_zeros(np.asarray(coefficients, dtype=float), "f")
    if coefficients.size < 2:
        return []
    roots = np.roots(coefficients)
    real = roots[np.abs(roots.imag) <= 1e-12 * np.maximum(1.0, np.abs(roots.real))].real
    eps = 1e-13 * max(1.0, abs(a), abs(b))
    return sorted(float(r) for r in real if a + eps < r < b - eps and (cr == 0 or r != 0))


def _stationary_points(c1, cr, a, b):
    """Точки, где производная c1 - cr/θ² обращается в ноль, внутри (a, b)"""
    if cr == 0 or c1 == 0 or cr / c1 <= 0:
        return []
    root = float(np.sqrt(cr / c1))
    return [r for r in (root, -root) if a < r < b]


@dataclass(frozen=True)
class ChoiceBelief:
    """
    Точечное убеждение β_ij: θ_j -> c_j, задано по кускам

    На куске p значение равно intercepts[p] + slopes[p]·θ + reciprocals[p]/θ.
    Кусок p занимает (breakpoints[p], breakpoints[p+1]], первый кусок замкнут слева.
    Обратный член допустим только на кусках, не содержащих ноль.
    """
    breakpoints: tuple
    intercepts: tuple
    slopes: tuple = None
    reciprocals: tuple = None

    def __post_init__(self):
        breakpoints = tuple(float(b) for b in self.breakpoints)
        n = len(breakpoints) - 1
        intercepts = _as_tuple(self.intercepts, n)
        slopes = _as_tuple(self.slopes, n)
        reciprocals = _as_tuple(self.reciprocals, n)
        object.__setattr__(self, "breakpoints", breakpoints)
        object.__setattr__(self, "intercepts", intercepts)
        object.__setattr__(self, "slopes", slopes)
        object.__setattr__(self, "reciprocals", reciprocals)

        if n < 1 or not (len(intercepts) == len(slopes) == len(reciprocals) == n):
            raise DomainError("Убеждение о выборе требует n+1 точек разбиения и n коэффициентов на кусок")
        if any(b >= a for a, b in zip(breakpoints[1:], breakpoints[:-1])):
            raise DomainError(f"Точки разбиения должны строго возрастать: {breakpoints}")
        coefficients = np.array([intercepts, slopes, reciprocals])
        if not np.all(np.isfinite(coefficients)):
            raise DomainError("Коэффициенты убеждения должны быть конечными")
        for p, cr in enumerate(reciprocals):
            if cr != 0 and breakpoints[p] <= 0.0 <= breakpoints[p + 1]:
                raise DomainError(
                    f"Обратный член на куске [{breakpoints[p]}, {breakpoints[p + 1]}], содержащем ноль"
                )

    # --- конструкторы ---

    @classmethod
    def constant(cls, lo, hi, value):
        return cls((lo, hi), (value,))

    @classmethod
    def affine(cls, lo, hi, intercept, slope):
        return cls((lo, hi), (intercept,), (slope,))

    @classmethod
    def reciprocal_affine(cls, lo, hi, intercept, slope, reciprocal):
        return cls((lo, hi), (intercept,), (slope,), (reciprocal,))

    @classmethod
    def step(cls, breakpoints, values):
        """Кусочно-постоянное убеждение"""
        return cls(tuple(breakpoints), tuple(values))

    @classmethod
    def from_samples(cls, grid, values):
        """
        Кусочно-линейная интерполяция значений на сетке

        Args:
            grid: Строго возрастающая сетка параметра (не менее двух точек)
            values: Значения в узлах сетки

        Returns:
            ChoiceBelief: Непрерывная кусочно-линейная функция
        """
        grid = np.asarray(grid, dtype=float)
        values = np.asarray(values, dtype=float)
        if grid.size < 2 or grid.size != values.size:
            raise ArgumentError("Для интерполяции нужны хотя бы две точки сетки")
        slopes = np.diff(values) / np.diff(grid)
        intercepts = values[:-1] - slopes * grid[:-1]
        return cls(tuple(grid), tuple(intercepts), tuple(slopes)).simplify()

    # --- свойства ---

    @property
    def domain_lo(self):
        return self.breakpoints[0]

    @property
    def domain_hi(self):
        return self.breakpoints[-1]

    @property
    def n_pieces(self):
        return len(self.intercepts)

    def pieces(self):
        """Кортежи (a, b, c0, c1, cr) для каждого куска"""
        for p in range(self.n_pieces):
            yield (self.breakpoints[p], self.breakpoints[p + 1],
                   self.intercepts[p], self.slopes[p], self.reciprocals[p])

    def same_domain(self, other, tol=1e-12):
        return (abs(self.domain_lo - other.domain_lo) <= tol
                and abs(self.domain_hi - other.domain_hi) <= tol)

    def piece_index(self, theta):
        index = np.searchsorted(self.breakpoints, theta, side="left") - 1
        return np.clip(index, 0, self.n_pieces - 1)

    def evaluate(self, theta):
        """
        Значение β(θ) для скаляра или массива

        Raises:
            DomainError: Если θ вне области определения
        """
        theta_arr = np.asarray(theta, dtype=float)
        span = 1e-12 * max(1.0, abs(self.domain_lo), abs(self.domain_hi))
        if np.any(theta_arr < self.domain_lo - span) or np.any(theta_arr > self.domain_hi + span):
            raise DomainError(f"θ вне области убеждения [{self.domain_lo}, {self.domain_hi}]")
        index = self.piece_index(theta_arr)
        c0 = np.asarray(self.intercepts)[index]
        c1 = np.asarray(self.slopes)[index]
        cr = np.asarray(self.reciprocals)[index]
        value = _piece_value(c0, c1, cr, theta_arr)
        if np.ndim(theta) == 0:
            return float(value)
        return value

    def __call__(self, theta):
        return self.evaluate(theta)

    def value_range(self):
        """Точные минимум и максимум по всей области"""
        candidates = []
        for a, b, c0, c1, cr in self.pieces():
            points = [a, b] + _stationary_points(c1, cr, a, b)
            candidates.extend(float(_piece_value(c0, c1, cr, t)) for t in points)
        return min(candidates), max(candidates)

    def lies_within(self, lo, hi, tol=1e-12):
        low, high = self.value_range()
        return low >= lo - tol and high <= hi + tol

    def is_monotone(self, increasing=True, tol=1e-12):
        """
        Точная проверка слабой монотонности: знак производной на кусках и скачки в точках разбиения
        """
        sign = 1.0 if increasing else -1.0
        pieces = list(self.pieces())
        for a, b, c0, c1, cr in pieces:
            for t in (a, b):
                derivative = c1 - (cr / (t * t) if cr != 0 else 0.0)
                if sign * derivative < -tol:
                    return False
        for (a, b, c0, c1, cr), (a2, b2, d0, d1, dr) in zip(pieces, pieces[1:]):
            left = float(_piece_value(c0, c1, cr, b))
            right = float(_piece_value(d0, d1, dr, a2))
            if sign * (right - left) < -tol:
                return False
        return True

    # --- алгебра ---

    def refine(self, breakpoints):
        """То же убеждение на объединенном разбиении"""
        merged = merge_breakpoints(self.breakpoints, breakpoints)
        middles = (merged[:-1] + merged[1:]) / 2.0
        index = self.piece_index(middles)
        return ChoiceBelief(
            tuple(merged),
            tuple(np.asarray(self.intercepts)[index]),
            tuple(np.asarray(self.slopes)[index]),
            tuple(np.asarray(self.reciprocals)[index]),
        )

    def simplify(self):
        """Склейка соседних кусков с одинаковыми коэффициентами"""
        keep_bp = [self.breakpoints[0]]
        coeffs = []
        for a, b, c0, c1, cr in self.pieces():
            if coeffs and np.allclose(coeffs[-1], (c0, c1, cr), rtol=1e-14, atol=1e-15):
                keep_bp[-1] = b
                continue
            coeffs.append((c0, c1, cr))
            keep_bp.append(b)
        c0s, c1s, crs = zip(*coeffs)
        return ChoiceBelief(tuple(keep_bp), c0s, c1s, crs)

    def _combine(self, other, take_larger):
        if not self.same_domain(other):
            raise DomainError("Области убеждений не совпадают")
        left = self.refine(other.breakpoints)
        right = other.refine(left.breakpoints)
        out_bp = [left.breakpoints[0]]
        out = []
        for (a, b, c0, c1, cr), (_, _, d0, d1, dr) in zip(left.pieces(), right.pieces()):
            cuts = [a] + _roots_in(c0 - d0, c1 - d1, cr - dr, a, b) + [b]
            for lo, hi in zip(cuts[:-1], cuts[1:]):
                mid = (lo + hi) / 2.0
                first_larger = _piece_value(c0, c1, cr, mid) >= _piece_value(d0, d1, dr, mid)
                out.append((c0, c1, cr) if first_larger == take_larger else (d0, d1, dr))
                out_bp.append(hi)
        c0s, c1s, crs = zip(*out)
        return ChoiceBelief(tuple(out_bp), c0s, c1s, crs).simplify()

    def pointwise_max(self, other):
        return self._combine(other, take_larger=True)

    def pointwise_min(self, other):
        return self._combine(other, take_larger=False)

    def clip(self, lo=None, hi=None):
        """Ограничение значений отрезком [lo, hi] (точное, с новыми точками разбиения)"""
        result = self
        if lo is not None:
            result = result.pointwise_max(ChoiceBelief.constant(self.domain_lo, self.domain_hi, lo))
        if hi is not None:
            result = result.pointwise_min(ChoiceBelief.constant(self.domain_lo, self.domain_hi, hi))
        return result


def mix_choice_belief(beta, beta_prime, lam):
    """
    Поточечная выпуклая комбинация (1-λ)β + λβ'

    Args:
        beta: Первое убеждение
        beta_prime: Второе убеждение
        lam: Вес λ ∈ [0, 1]

    Returns:
        ChoiceBelief: Смесь; при λ=0 и λ=1 возвращается сам аргумент
    """
    if not 0.0 <= lam <= 1.0:
        raise ArgumentError(f"λ должна лежать в [0, 1], получено {lam}")
    if not beta.same_domain(beta_prime):
        raise DomainError("Области смешиваемых убеждений не совпадают")
    if lam == 0.0:
        return beta
    if lam == 1.0:
        return beta_prime

    left = beta.refine(beta_prime.breakpoints)
    right = beta_prime.refine(left.breakpoints)
    mix = lambda x, y: tuple((1.0 - lam) * np.asarray(x) + lam * np.asarray(y))
    return ChoiceBelief(
        left.breakpoints,
        mix(left.intercepts, right.intercepts),
        mix(left.slopes, right.slopes),
        mix(left.reciprocals, right.reciprocals),
    )


def expectation(beta, f):
    """
    Ожидаемое значение ∫ β(θ) f(θ) dθ, точное для поддерживаемых кусков

    Args:
        beta: ChoiceBelief
        f: PiecewiseConstantDensity на той же области

    Returns:
        float: Математическое ожидание выбора соперника
    """
    if not beta.same_domain(f):
        raise DomainError(
            f"Области убеждения [{beta.domain_lo}, {beta.domain_hi}] и плотности "
            f"[{f.domain_lo}, {f.domain_hi}] не совпадают"
        )
    refined = beta.refine(f.breakpoints)
    total = 0.0
    for a, b, c0, c1, cr in refined.pieces():
        height = float(f.height_at((a + b) / 2.0))
        if height:
            total += height * _piece_integral(a, b, c0, c1, cr)
    return float(total)


def choice_belief_compare(beta, beta_prime, tol=None):
    """
    Поточечный порядок убеждений о выборе: β ≥ β' если β(θ) ≥ β'(θ) для всех θ

    Returns:
        Comparison: DOMINATES если beta ≥ beta_prime всюду
    """
    if tol is None:
        tol = Config.COMPARISON_TOLERANCE
    if not beta.same_domain(beta_prime):
        raise DomainError("Области сравниваемых убеждений не совпадают")
    left = beta.refine(beta_prime.breakpoints)
    right = beta_prime.refine(left.breakpoints)
    points = []
    differences = []
    for (a, b, c0, c1, cr), (_, _, d0, d1, dr) in zip(left.pieces(), right.pieces()):
        e0, e1, er = c0 - d0, c1 - d1, cr - dr
        for t in [a, b] + _stationary_points(e1, er, a, b):
            points.append(t)
            differences.append(float(_piece_value(e0, e1, er, t)))
    return classify(differences, points, tol)
