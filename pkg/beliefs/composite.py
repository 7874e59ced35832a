from dataclasses import dataclass

import numpy as np

from beliefs.choice_belief import _piece_value, _roots_in, _stationary_points
from beliefs.density import Comparison, ComparisonResult, classify
from config import Config
from utils.errors import DomainError


@dataclass(frozen=True)
class CompositeBelief:
    """
    Составное убеждение (β_ij ∘ f_ij): распределение выбора соперника

    Постоянные куски β дают точечные массы (atoms), непостоянные куски дают
    непрерывные сегменты (a, b, c0, c1, cr, высота плотности).
    """
    choice_lo: float
    choice_hi: float
    atoms: tuple
    segments: tuple = ()

    def survival(self, threshold, strict=False):
        """
        S(c') = Pr[c_j ≥ c'] (или Pr[c_j > c'] при strict=True), точно

        Args:
            threshold: Порог c'
            strict: Строгое неравенство

        Returns:
            float: Вероятность верхнего хвоста
        """
        total = 0.0
        for value, mass in self.atoms:
            if value > threshold or (not strict and value == threshold):
                total += mass
        for a, b, c0, c1, cr, height in self.segments:
            cuts = [a] + _roots_in(c0 - threshold, c1, cr, a, b) + [b]
            for lo, hi in zip(cuts[:-1], cuts[1:]):
                if _piece_value(c0, c1, cr, (lo + hi) / 2.0) >= threshold:
                    total += height * (hi - lo)
        return float(min(1.0, max(0.0, total)))

    def total_mass(self):
        return float(sum(m for _, m in self.atoms)
                     + sum(h * (b - a) for a, b, _, _, _, h in self.segments))

    def is_atomic(self):
        return not self.segments

    def steps(self):
        """
        Таблица ступенек (порог, вероятность): S = вероятность на (предыдущий порог, порог]

        Только для чисто дискретных составных убеждений.
        """
        if not self.is_atomic():
            raise DomainError("Таблица ступенек определена только для дискретного составного убеждения")
        rows = []
        masses = [m for _, m in self.atoms]
        for k, (value, _) in enumerate(self.atoms):
            rows.append((value, float(min(1.0, sum(masses[k:])))))
        return rows

    def check_points(self, refine=8):
        """Пороги, на которых разность хвостов достигает экстремумов"""
        points = {self.choice_lo, self.choice_hi}
        points.update(v for v, _ in self.atoms)
        for a, b, c0, c1, cr, _ in self.segments:
            thetas = [a, b] + _stationary_points(c1, cr, a, b)
            if cr != 0:
                thetas.extend(np.linspace(a, b, refine + 2)[1:-1])
            points.update(float(_piece_value(c0, c1, cr, t)) for t in thetas)
        return sorted(points)

    def mean(self):
        total = sum(v * m for v, m in self.atoms)
        for a, b, c0, c1, cr, height in self.segments:
            integral = c0 * (b - a) + c1 * (b * b - a * a) / 2.0
            if cr != 0:
                integral += cr * np.log(b / a)
            total += height * integral
        return float(total)


def pushforward(beta, f, choice_lo=None, choice_hi=None):
    """
    Составное убеждение: распределение β(θ) при θ ~ f

    Args:
        beta: ChoiceBelief соперника
        f: PiecewiseConstantDensity над параметром соперника
        choice_lo: Нижняя граница отрезка выбора (по умолчанию минимум β)
        choice_hi: Верхняя граница отрезка выбора (по умолчанию максимум β)

    Returns:
        CompositeBelief: Точное составное убеждение
    """
    if not beta.same_domain(f):
        raise DomainError(
            f"Области убеждения [{beta.domain_lo}, {beta.domain_hi}] и плотности "
            f"[{f.domain_lo}, {f.domain_hi}] не совпадают"
        )
    low, high = beta.value_range()
    choice_lo = low if choice_lo is None else float(choice_lo)
    choice_hi = high if choice_hi is None else float(choice_hi)
    span = 1e-9 * max(1.0, abs(choice_lo), abs(choice_hi))
    if low < choice_lo - span or high > choice_hi + span:
        raise DomainError(
            f"Значения убеждения [{low}, {high}] выходят за отрезок выбора [{choice_lo}, {choice_hi}]"
        )

    atoms = {}
    segments = []
    for a, b, c0, c1, cr in beta.refine(f.breakpoints).pieces():
        height = float(f.height_at((a + b) / 2.0))
        mass = height * (b - a)
        if mass <= 0.0:
            continue
        if c1 == 0 and cr == 0:
            atoms[c0] = atoms.get(c0, 0.0) + mass
        else:
            segments.append((a, b, c0, c1, cr, height))
    return CompositeBelief(choice_lo, choice_hi, tuple(sorted(atoms.items())), tuple(segments))


def composite_compare(p, q, tol=None):
    """
    Сравнение составных убеждений: p ≥ q если вероятность высоких выборов больше при p

    Returns:
        Comparison: DOMINATES если p ≥ q
    """
    if tol is None:
        tol = Config.COMPARISON_TOLERANCE
    span = 1e-12 * max(1.0, abs(p.choice_lo), abs(p.choice_hi))
    if abs(p.choice_lo - q.choice_lo) > span or abs(p.choice_hi - q.choice_hi) > span:
        raise DomainError(
            f"Отрезки выбора не совпадают: [{p.choice_lo}, {p.choice_hi}] и [{q.choice_lo}, {q.choice_hi}]"
        )
    points = sorted(set(p.check_points()) | set(q.check_points()))
    thresholds = []
    differences = []
    for c in points:
        for strict in (False, True):
            thresholds.append(c)
            differences.append(p.survival(c, strict) - q.survival(c, strict))
    return classify(differences, thresholds, tol)


def composite_profile_compare(ps, qs, tol=None):
    """
    Сравнение составных убеждений по всем соперникам сразу

    Args:
        ps: dict соперник -> CompositeBelief
        qs: dict соперник -> CompositeBelief с теми же ключами

    Returns:
        Comparison: DOMINATES если каждое составное убеждение из ps доминирует соответствующее из qs
    """
    if set(ps) != set(qs):
        raise DomainError("Наборы соперников в сравниваемых профилях различаются")
    results = [composite_compare(ps[j], qs[j], tol) for j in sorted(ps)]
    dominates = all(r.dominates for r in results)
    dominated_by = all(r.dominated_by for r in results)
    first_above = next((r.first_above for r in results if r.first_above is not None), None)
    second_above = next((r.second_above for r in results if r.second_above is not None), None)
    if dominates and dominated_by:
        return Comparison(ComparisonResult.EQUAL)
    if dominates:
        return Comparison(ComparisonResult.DOMINATES, first_above=first_above)
    if dominated_by:
        return Comparison(ComparisonResult.DOMINATED_BY, second_above=second_above)
    return Comparison(ComparisonResult.INCOMPARABLE, first_above, second_above)


def triple_leq(first, second, tol=None):
    """
    Порядок троек (θ, β, f) ≤ (θ', β', f'): θ ≤ θ' и составные убеждения упорядочены

    Args:
        first: (theta, beliefs, densities), beliefs и densities - dict по соперникам
        second: Тройка той же формы

    Returns:
        bool: True если first ≤ second
    """
    theta, beliefs, densities = first
    theta_p, beliefs_p, densities_p = second
    if theta > theta_p:
        return False
    lower = {}
    upper = {}
    for j in beliefs:
        lo = min(beliefs[j].value_range()[0], beliefs_p[j].value_range()[0])
        hi = max(beliefs[j].value_range()[1], beliefs_p[j].value_range()[1])
        lower[j] = pushforward(beliefs[j], densities[j], lo, hi)
        upper[j] = pushforward(beliefs_p[j], densities_p[j], lo, hi)
    return composite_profile_compare(upper, lower, tol).dominates
