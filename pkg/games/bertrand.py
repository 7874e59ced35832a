from games.base_game import GameSpec, Mode, PlayerSpec, QuadraticOwnChoice, ThetaCoefficient, split_density_family
from utils.errors import ArgumentError
from utils.logger import logger


def bertrand_utility(a, j):
    """
    Прибыль фирмы (p_i - θ_i)(a - p_i + p_j) в квадратичной форме

    Args:
        a: Параметр спроса
        j: Индекс соперника
    """
    return QuadraticOwnChoice(
        A={(): ThetaCoefficient(-1.0)},
        B={(): ThetaCoefficient(a, 1.0), (j,): ThetaCoefficient(1.0)},
        D={(): ThetaCoefficient(0.0, -a), (j,): ThetaCoefficient(0.0, -1.0)},
    )


def bertrand_game(a, phi, p_bar):
    """
    Дуополия Бертрана с дифференцированным продуктом и неизвестными издержками θ_i ∈ [0, φ]

    Args:
        a: Параметр спроса (a > 0)
        phi: Верхняя граница издержек (φ > 0)
        p_bar: Максимальная цена (p̄ ≥ a + φ, чтобы лучшие ответы были внутренними)

    Returns:
        GameSpec: Игра двух фирм в режиме стратегических дополнений
    """
    a, phi, p_bar = float(a), float(phi), float(p_bar)
    if a <= 0 or phi <= 0:
        raise ArgumentError(f"Параметры Бертрана требуют a > 0 и φ > 0, получено a={a}, φ={phi}")
    if p_bar < a + phi:
        raise ArgumentError(f"Максимальная цена p̄={p_bar} меньше a + φ = {a + phi}")

    players = []
    for i, j in ((0, 1), (1, 0)):
        players.append(PlayerSpec(
            choice_lo=0.0,
            choice_hi=p_bar,
            param_lo=0.0,
            param_hi=phi,
            families={j: split_density_family(0.0, phi)},
            utility=bertrand_utility(a, j),
        ))
    logger.debug(f"✅ Построена игра Бертрана: a={a}, φ={phi}, p̄={p_bar}")
    return GameSpec(tuple(players), Mode.COMPLEMENTS, "bertrand", {"a": a, "phi": phi, "p_bar": p_bar})
