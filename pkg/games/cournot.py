from games.base_game import GameSpec, Mode, PlayerSpec, QuadraticOwnChoice, ThetaCoefficient, split_density_family
from utils.errors import ArgumentError
from utils.logger import logger


def cournot_utility(a, c, j):
    """Прибыль (a - θ_i(q_i + q_j) - c)·q_i: A = -θ, B = a - c - θ·q_j"""
    return QuadraticOwnChoice(
        A={(): ThetaCoefficient(0.0, -1.0)},
        B={(): ThetaCoefficient(a - c), (j,): ThetaCoefficient(0.0, -1.0)},
    )


def cournot_game(a, c, phi_lo, phi_hi, q_bar):
    """
    Дуополия Курно с неизвестным наклоном обратного спроса θ_i ∈ [φ̲, φ̄]

    Args:
        a: Параметр спроса
        c: Предельные издержки (a > c ≥ 0)
        phi_lo: Нижняя граница параметра (> 0)
        phi_hi: Верхняя граница параметра (> phi_lo)
        q_bar: Максимальный выпуск (q̄ ≥ (a-c)/(2φ̲))

    Returns:
        GameSpec: Игра двух фирм в режиме стратегических заменителей
    """
    a, c, phi_lo, phi_hi, q_bar = (float(v) for v in (a, c, phi_lo, phi_hi, q_bar))
    if not a > c >= 0:
        raise ArgumentError(f"Параметры Курно требуют a > c ≥ 0, получено a={a}, c={c}")
    if not 0 < phi_lo < phi_hi:
        raise ArgumentError(f"Параметры Курно требуют 0 < φ̲ < φ̄, получено [{phi_lo}, {phi_hi}]")
    if q_bar < (a - c) / (2.0 * phi_lo):
        raise ArgumentError(f"Максимальный выпуск q̄={q_bar} меньше (a-c)/(2φ̲) = {(a - c) / (2.0 * phi_lo)}")

    players = []
    for i, j in ((0, 1), (1, 0)):
        players.append(PlayerSpec(
            choice_lo=0.0,
            choice_hi=q_bar,
            param_lo=phi_lo,
            param_hi=phi_hi,
            families={j: split_density_family(phi_lo, phi_hi)},
            utility=cournot_utility(a, c, j),
        ))
    logger.debug(f"✅ Построена игра Курно: a={a}, c={c}, φ ∈ [{phi_lo}, {phi_hi}], q̄={q_bar}")
    return GameSpec(
        tuple(players), Mode.SUBSTITUTES, "cournot",
        {"a": a, "c": c, "phi_lo": phi_lo, "phi_hi": phi_hi, "q_bar": q_bar},
    )
