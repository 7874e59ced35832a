from itertools import product

import numpy as np
from scipy.integrate import simpson

from beliefs.choice_belief import _piece_value, expectation
from config import Config
from games.base_game import QuadraticOwnChoice
from utils.errors import DomainError, NumericError
from utils.logger import logger


def check_belief_inputs(g, i, betas, densities):
    """Убеждения и плотности заданы по каждому сопернику на его отрезке параметра"""
    opponents = set(g.opponents(i))
    if set(betas) != opponents or set(densities) != opponents:
        raise DomainError(
            f"Игрок {i + 1}: убеждения нужны для соперников {sorted(j + 1 for j in opponents)}"
        )
    for j in opponents:
        other = g.players[j]
        for item in (betas[j], densities[j]):
            if (abs(item.domain_lo - other.param_lo) > 1e-12
                    or abs(item.domain_hi - other.param_hi) > 1e-12):
                raise DomainError(
                    f"Убеждение о сопернике {j + 1} задано на [{item.domain_lo}, {item.domain_hi}], "
                    f"а его параметр на [{other.param_lo}, {other.param_hi}]"
                )
        span = 1e-12 * max(1.0, abs(other.choice_lo), abs(other.choice_hi))
        if not betas[j].lies_within(other.choice_lo, other.choice_hi, tol=span):
            low, high = betas[j].value_range()
            raise DomainError(
                f"Значения убеждения о сопернике {j + 1} [{low}, {high}] выходят за его отрезок выбора "
                f"[{other.choice_lo}, {other.choice_hi}]"
            )


def belief_means(betas, densities):
    """E[β_ij] для каждого соперника"""
    return {j: expectation(betas[j], densities[j]) for j in betas}


def expected_coefficients(g, i, theta, betas, densities):
    """
    Ожидаемые коэффициенты (Ã, B̃, D̃) квадратичной полезности при данном θ_i

    Returns:
        tuple: Три числа
    """
    terms = g.players[i].utility.expected_terms(belief_means(betas, densities))
    return tuple(float(term(theta)) for term in terms)


def _weighted_pieces(beta, f):
    pieces = []
    for a, b, c0, c1, cr in beta.refine(f.breakpoints).pieces():
        height = float(f.height_at((a + b) / 2.0))
        if height > 0.0:
            pieces.append((a, b, c0, c1, cr, height))
    return pieces


def _blackbox_level(utility, theta, c, opponents, piece_lists, level):
    nodes = 2 ** level + 1
    total = 0.0
    for combination in product(*piece_lists):
        axes = [np.linspace(a, b, nodes) for a, b, *_ in combination]
        choices = [_piece_value(c0, c1, cr, axis) for axis, (_, _, c0, c1, cr, _) in zip(axes, combination)]
        mesh = np.meshgrid(*choices, indexing="ij")
        values = utility.evaluate_many(theta, c, dict(zip(opponents, mesh)))
        for axis in reversed(axes):
            values = simpson(values, x=axis, axis=-1)
        total += float(values) * float(np.prod([piece[5] for piece in combination]))
    return total


def blackbox_expected_utility(g, i, theta, c, betas, densities, rel_tol=None, max_level=None):
    """
    Составная квадратура Симпсона по тензорной сетке кусков соперников

    Сетка удваивается, пока относительное изменение не станет меньше rel_tol.

    Raises:
        NumericError: Если точность не достигнута за max_level удвоений
    """
    rel_tol = Config.QUADRATURE_RELATIVE_TOLERANCE if rel_tol is None else rel_tol
    max_level = Config.QUADRATURE_MAX_LEVEL if max_level is None else max_level
    utility = g.players[i].utility
    opponents = sorted(betas)
    piece_lists = [_weighted_pieces(betas[j], densities[j]) for j in opponents]

    previous = _blackbox_level(utility, theta, c, opponents, piece_lists, 1)
    for level in range(2, max_level + 1):
        current = _blackbox_level(utility, theta, c, opponents, piece_lists, level)
        if abs(current - previous) <= rel_tol * max(1.0, abs(current)):
            return current
        previous = current
    logger.error(f"❌ Квадратура не сошлась: θ={theta}, c={c}")
    raise NumericError(
        f"Квадратура ожидаемой полезности не сошлась за {max_level} удвоений сетки (θ={theta}, c={c})",
        witness={"theta": theta, "choice": c, "level": max_level},
    )


def expected_utility_value(g, i, theta, c, betas, densities):
    """Ожидаемая полезность без проверки областей (для внутренних вызовов)"""
    utility = g.players[i].utility
    if isinstance(utility, QuadraticOwnChoice):
        ea, eb, ed = expected_coefficients(g, i, theta, betas, densities)
        return ea * c * c + eb * c + ed
    return blackbox_expected_utility(g, i, theta, c, betas, densities)


def expected_utility(g, i, theta, c, betas, densities):
    """
    Ожидаемая полезность игрока i при собственном параметре θ и выборе c

    Для квадратичных полезностей интеграл точный, для произвольных - квадратура.

    Args:
        g: GameSpec
        i: Индекс игрока
        theta: Собственный параметр
        c: Собственный выбор
        betas: dict соперник -> ChoiceBelief
        densities: dict соперник -> PiecewiseConstantDensity

    Returns:
        float: ∫ Π_j f_ij(θ_j) u_i(θ_i, c_i, (β_ij(θ_j))_j) dθ_{-i}
    """
    player = g.players[i]
    span = 1e-12 * max(1.0, abs(player.param_lo), abs(player.param_hi))
    if not player.param_lo - span <= theta <= player.param_hi + span:
        raise DomainError(f"θ={theta} вне отрезка параметра [{player.param_lo}, {player.param_hi}]")
    span = 1e-12 * max(1.0, abs(player.choice_lo), abs(player.choice_hi))
    if not player.choice_lo - span <= c <= player.choice_hi + span:
        raise DomainError(f"c={c} вне отрезка выбора [{player.choice_lo}, {player.choice_hi}]")
    check_belief_inputs(g, i, betas, densities)
    return float(expected_utility_value(g, i, theta, c, betas, densities))
