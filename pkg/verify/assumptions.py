from itertools import product

import numpy as np

from beliefs.choice_belief import expectation, mix_choice_belief
from beliefs.density import mix_density
from beliefs.family import family_extremes
from config import Config
from games.base_game import Mode, QuadraticOwnChoice, curvature_maximum
from solver.best_response import _best_response_within, unconstrained_best_response, unimodality_probe
from solver.expected_utility import expected_utility_value
from utils.errors import ArgumentError, AssumptionViolationError, RationalizabilityError
from utils.logger import logger
from verify.report import AssumptionReport, CheckResult, CheckStatus
from verify.sampling import (
    dominating_density,
    ordered_pair,
    random_choice_belief,
    random_density,
    trial_generators,
)


def _interior(lo, hi, grid_size, step):
    if hi - lo <= 2 * step:
        return np.array([(lo + hi) / 2.0])
    return np.linspace(lo + step, hi - step, grid_size)


def cross_partial_samples(g, i, grid_size=None, h_rel=None):
    """
    Центральные конечные разности смешанных производных полезности игрока i

    Args:
        g: GameSpec
        i: Индекс игрока
        grid_size: Число точек по каждой координате
        h_rel: Шаг относительно ширины отрезка

    Returns:
        dict: "points" (список точек (θ, c, others)), "theta" (∂²u/∂c∂θ),
              "opponents" (соперник -> ∂²u/∂c∂c_j), "third" ((j, l) -> ∂³u/∂c∂c_j∂c_l)
    """
    grid_size = Config.GRID_SIZE if grid_size is None else grid_size
    h_rel = Config.FD_RELATIVE_STEP if h_rel is None else h_rel
    player = g.players[i]
    utility = player.utility
    opponents = g.opponents(i)

    h_theta = h_rel * (player.param_hi - player.param_lo)
    h_c = h_rel * max(player.choice_hi - player.choice_lo, 1e-12)
    h_others = {j: h_rel * max(g.players[j].choice_hi - g.players[j].choice_lo, 1e-12) for j in opponents}
    # для третьей производной шаг больше, иначе погрешность округления доминирует
    big = 1e-2 / h_rel

    thetas = _interior(player.param_lo, player.param_hi, grid_size, h_theta * big)
    choices = _interior(player.choice_lo, player.choice_hi, grid_size, h_c * big)
    others_axes = [_interior(g.players[j].choice_lo, g.players[j].choice_hi, grid_size, h_others[j] * big)
                   for j in opponents]

    def u(theta, c, others):
        return float(utility(theta, c, others))

    def shifted(others, j, delta):
        moved = dict(others)
        moved[j] = moved[j] + delta
        return moved

    samples = {"points": [], "theta": [], "opponents": {j: [] for j in opponents}, "third": {}}
    pairs = [(j, l) for a, j in enumerate(opponents) for l in opponents[a + 1:]]
    for pair in pairs:
        samples["third"][pair] = []

    for theta, c, values in product(thetas, choices, product(*others_axes)):
        others = dict(zip(opponents, values))
        samples["points"].append((float(theta), float(c), {j + 1: float(v) for j, v in others.items()}))
        cross = (u(theta + h_theta, c + h_c, others) - u(theta + h_theta, c - h_c, others)
                 - u(theta - h_theta, c + h_c, others) + u(theta - h_theta, c - h_c, others))
        samples["theta"].append(cross / (4.0 * h_theta * h_c))
        for j in opponents:
            hj = h_others[j]
            cross = (u(theta, c + h_c, shifted(others, j, hj)) - u(theta, c - h_c, shifted(others, j, hj))
                     - u(theta, c + h_c, shifted(others, j, -hj)) + u(theta, c - h_c, shifted(others, j, -hj)))
            samples["opponents"][j].append(cross / (4.0 * h_c * hj))
        for j, l in pairs:
            hc, hj, hl = h_c * big, h_others[j] * big, h_others[l] * big
            total = 0.0
            for sc, sj, sl in product((1, -1), repeat=3):
                moved = shifted(shifted(others, j, sj * hj), l, sl * hl)
                total += sc * sj * sl * u(theta, c + sc * hc, moved)
            samples["third"][(j, l)].append(total / (8.0 * hc * hj * hl))

    samples["theta"] = np.array(samples["theta"])
    samples["opponents"] = {j: np.array(v) for j, v in samples["opponents"].items()}
    samples["third"] = {pair: np.array(v) for pair, v in samples["third"].items()}
    return samples


def check_cross_partials(g, grid_size=None, h_rel=None, tol=None):
    """
    Знаки смешанных производных: ≥ 0 для дополнений, ≤ 0 для заменителей; третья производная равна нулю

    Returns:
        CheckResult: PASS или FAIL с худшей точкой
    """
    tol = Config.FD_SIGN_TOLERANCE if tol is None else tol
    sign = 1.0 if g.mode == Mode.COMPLEMENTS else -1.0
    worst = None
    details = {}

    def consider(value, player, kind, point):
        nonlocal worst
        if worst is None or value < worst[0]:
            worst = (value, {"player": player + 1, "derivative": kind,
                             "theta": point[0], "choice": point[1], "others": point[2]})

    for i in range(g.n):
        samples = cross_partial_samples(g, i, grid_size, h_rel)
        points = samples["points"]
        series = [("c_theta", samples["theta"])]
        series += [(f"c_c{j + 1}", values) for j, values in samples["opponents"].items()]
        for kind, values in series:
            details[f"player{i + 1}_{kind}_min"] = float(values.min())
            details[f"player{i + 1}_{kind}_max"] = float(values.max())
            k = int(np.argmin(sign * values))
            consider(float(sign * values[k]), i, kind, points[k])
        for (j, l), values in samples["third"].items():
            k = int(np.argmax(np.abs(values)))
            # нарушение третьего порядка приводим к той же шкале: отрицательное значение = нарушение
            consider(-float(abs(values[k])) if abs(values[k]) > tol else 0.0, i, f"c_c{j + 1}_c{l + 1}", points[k])

    status = CheckStatus.PASS if worst[0] >= -tol else CheckStatus.FAIL
    witness = dict(worst[1], signed_value=worst[0])
    if status == CheckStatus.FAIL:
        logger.warning(f"⚠️ Смешанные производные противоречат режиму {g.mode.value}: {witness}")
    return CheckResult("cross_partials", status, witness, tol, details)


def differences_gap(g, i, theta, theta_p, c, c_p, low_inputs, high_inputs):
    """
    Разность приращений ожидаемой полезности, ориентированная по режиму игры

    Returns:
        float: Неотрицательна, если неравенство допущения выполнено
    """
    betas, densities = low_inputs
    betas_p, densities_p = high_inputs
    high = (expected_utility_value(g, i, theta_p, c_p, betas_p, densities_p)
            - expected_utility_value(g, i, theta_p, c, betas_p, densities_p))
    low = (expected_utility_value(g, i, theta, c_p, betas, densities)
           - expected_utility_value(g, i, theta, c, betas, densities))
    gap = high - low
    return gap if g.mode == Mode.COMPLEMENTS else -gap


def check_increasing_differences(g, n_samples=500, seed=None, tol=None):
    """
    Возрастающие (убывающие для заменителей) приращения ожидаемой полезности на упорядоченных четверках

    Returns:
        CheckResult: PASS или FAIL с воспроизводимым контрпримером
    """
    seed = Config.DEFAULT_SEED if seed is None else seed
    tol = 1e-9 if tol is None else tol
    worst = None
    for trial, rng in enumerate(trial_generators(seed, n_samples)):
        i = trial % g.n
        player = g.players[i]
        theta, theta_p = np.sort(rng.uniform(player.param_lo, player.param_hi, 2))
        c, c_p = np.sort(rng.uniform(player.choice_lo, player.choice_hi, 2))
        low_betas, low_densities, high_betas, high_densities = {}, {}, {}, {}
        for j in g.opponents(i):
            other = g.players[j]
            (beta, f), (beta_p, f_p) = ordered_pair(rng, other.param_lo, other.param_hi,
                                                    other.choice_lo, other.choice_hi)
            low_betas[j], low_densities[j] = beta, f
            high_betas[j], high_densities[j] = beta_p, f_p
        gap = differences_gap(g, i, float(theta), float(theta_p), float(c), float(c_p),
                              (low_betas, low_densities), (high_betas, high_densities))
        scale = max(1.0, abs(player.choice_lo), abs(player.choice_hi)) ** 2
        relative = gap / scale
        if worst is None or relative < worst[0]:
            worst = (relative, {"trial": trial, "seed": seed, "player": i + 1, "theta": float(theta),
                                "theta_p": float(theta_p), "c": float(c), "c_p": float(c_p), "gap": float(gap)})

    status = CheckStatus.PASS if worst[0] >= -tol else CheckStatus.FAIL
    if status == CheckStatus.FAIL:
        logger.warning(f"⚠️ Нарушение возрастающих приращений: {worst[1]}")
    return CheckResult("increasing_differences", status, worst[1], tol, {"samples": n_samples})


def mixture_sweep(g, i, theta, betas, densities, betas_p, densities_p, lambda_grid=11):
    """
    Лучшие ответы вдоль смесей β″ = (1-λ)β + λβ', f″ = (1-λ)f + λf'

    Returns:
        tuple: (массив λ, массив лучших ответов)
    """
    player = g.players[i]
    lambdas = np.linspace(0.0, 1.0, lambda_grid)
    responses = []
    for lam in lambdas:
        mixed_betas = {j: mix_choice_belief(betas[j], betas_p[j], float(lam)) for j in betas}
        mixed_densities = {j: mix_density(densities[j], densities_p[j], float(lam)) for j in densities}
        responses.append(_best_response_within(g, i, theta, mixed_betas, mixed_densities,
                                               player.choice_lo, player.choice_hi))
    return lambdas, np.array(responses)


def _corner_response(g, i, theta, betas, densities):
    # квадратичный ответ берется без ограничения отрезком выбора
    if g.is_quadratic(i):
        return unconstrained_best_response(g, i, theta, betas, densities)
    player = g.players[i]
    return _best_response_within(g, i, theta, betas, densities, player.choice_lo, player.choice_hi)


def check_mixture_continuity(g, n_samples=20, lambda_grid=11, seed=None):
    """
    Непрерывность лучшего ответа вдоль смесей убеждений

    Выборочная проверка может только опровергнуть свойство, поэтому без нарушений
    результат INCONCLUSIVE.
    """
    seed = Config.DEFAULT_SEED if seed is None else seed
    if lambda_grid < 3:
        raise ArgumentError(f"Сетка λ должна содержать не менее трех точек, получено {lambda_grid}")
    step = 1.0 / (lambda_grid - 1)
    worst_ratio = 0.0
    witness = {}
    for trial, rng in enumerate(trial_generators(seed, n_samples)):
        i = trial % g.n
        player = g.players[i]
        theta = float(rng.uniform(player.param_lo, player.param_hi))
        ends = ({}, {}, {}, {})
        for j in g.opponents(i):
            other = g.players[j]
            ends[0][j] = random_choice_belief(rng, other.param_lo, other.param_hi, other.choice_lo, other.choice_hi)
            ends[1][j] = random_density(rng, other.param_lo, other.param_hi)
            ends[2][j] = random_choice_belief(rng, other.param_lo, other.param_hi, other.choice_lo, other.choice_hi)
            ends[3][j] = random_density(rng, other.param_lo, other.param_hi)
        betas, densities, betas_p, densities_p = ends
        lambdas, responses = mixture_sweep(g, i, theta, betas, densities, betas_p, densities_p, lambda_grid)

        corners = [_corner_response(g, i, theta, b, f) for b in (betas, betas_p) for f in (densities, densities_p)]
        spread = max(corners) - min(corners)
        modulus = 2.0 * spread * step * (1.0 + 1e-6) + 1e-9
        jumps = np.abs(np.diff(responses))
        k = int(np.argmax(jumps))
        ratio = float(jumps[k] / modulus)
        if ratio > worst_ratio:
            worst_ratio = ratio
            witness = {"trial": trial, "seed": seed, "player": i + 1, "theta": theta,
                       "lambda": float(lambdas[k]), "jump": float(jumps[k]), "modulus": modulus}

    status = CheckStatus.FAIL if worst_ratio > 1.0 else CheckStatus.INCONCLUSIVE
    if status == CheckStatus.FAIL:
        logger.warning(f"⚠️ Скачок лучшего ответа вдоль смеси убеждений: {witness}")
    return CheckResult("mixture_continuity", status, witness, None,
                       {"samples": n_samples, "lambda_grid": lambda_grid, "worst_ratio": worst_ratio})


def check_expectation_dominance(n_trials=200, n_vars=None, seed=None):
    """
    E_F[u] ≥ E_G[u] для сепарабельных возрастающих u и покоординатно доминирующих F ≥ G

    Ожидания считаются точно по кускам.
    """
    seed = Config.DEFAULT_SEED if seed is None else seed
    worst = None
    for trial, rng in enumerate(trial_generators(seed, n_trials)):
        dims = int(n_vars) if n_vars is not None else int(rng.integers(1, 4))
        high = 0.0
        low = 0.0
        for _ in range(dims):
            lo = float(rng.uniform(-1.0, 1.0))
            hi = lo + float(rng.uniform(0.5, 2.0))
            component = random_choice_belief(rng, lo, hi, -1.0, 1.0, increasing=True)
            g_density = random_density(rng, lo, hi)
            f_density = dominating_density(rng, g_density)
            high += expectation(component, f_density)
            low += expectation(component, g_density)
        gap = high - low
        if worst is None or gap < worst[0]:
            worst = (gap, {"trial": trial, "seed": seed, "dims": dims, "high": high, "low": low})

    status = CheckStatus.PASS if worst[0] >= -1e-12 else CheckStatus.FAIL
    return CheckResult("expectation_dominance", status, worst[1], 1e-12, {"trials": n_trials})


def check_unique_optimum(g, n_samples=50, seed=None):
    """
    Единственность оптимума: строгая вогнутость ожидаемого квадратичного коэффициента
    или проба унимодальности для произвольной полезности
    """
    seed = Config.DEFAULT_SEED if seed is None else seed
    details = {}
    for i, player in enumerate(g.players):
        utility = player.utility
        if isinstance(utility, QuadraticOwnChoice):
            bounds = {j: (g.players[j].choice_lo, g.players[j].choice_hi) for j in g.opponents(i)}
            value, theta, point = curvature_maximum(utility, bounds, player.param_lo, player.param_hi)
            details[f"player{i + 1}_max_A"] = value
            if value >= 0:
                witness = {"player": i + 1, "theta": theta, "choices": {j + 1: c for j, c in point.items()}, "A": value}
                return CheckResult("unique_optimum", CheckStatus.FAIL, witness, 0.0, details)
            continue

        for trial, rng in enumerate(trial_generators(seed, n_samples)):
            theta = float(rng.uniform(player.param_lo, player.param_hi))
            betas, densities = {}, {}
            for j in g.opponents(i):
                other = g.players[j]
                betas[j] = random_choice_belief(rng, other.param_lo, other.param_hi, other.choice_lo, other.choice_hi)
                densities[j] = random_density(rng, other.param_lo, other.param_hi)
            try:
                unimodality_probe(lambda c: expected_utility_value(g, i, theta, c, betas, densities),
                                  player.choice_lo, player.choice_hi)
            except AssumptionViolationError as e:
                witness = dict(e.witness, player=i + 1, theta=theta, trial=trial, seed=seed)
                return CheckResult("unique_optimum", CheckStatus.FAIL, witness, None)

    quadratic = all(g.is_quadratic(i) for i in range(g.n))
    return CheckResult("unique_optimum", CheckStatus.PASS if quadratic else CheckStatus.INCONCLUSIVE, {}, 0.0, details)


def check_belief_families(g):
    """Каждое семейство содержит доминирующий и доминируемый члены"""
    for i, player in enumerate(g.players):
        for j, family in player.families.items():
            try:
                family_extremes(family)
            except AssumptionViolationError as e:
                witness = dict(e.witness or {}, player=i + 1, opponent=j + 1)
                return CheckResult("belief_families", CheckStatus.FAIL, witness, Config.COMPARISON_TOLERANCE)
    return CheckResult("belief_families", CheckStatus.PASS, {}, Config.COMPARISON_TOLERANCE)


def run_all_checks(g, grid_size=None, n_samples=500, lambda_grid=11, seed=None, tol=None):
    """
    Все проверки допущений для игры

    Returns:
        AssumptionReport: По одной записи на проверку
    """
    seed = Config.DEFAULT_SEED if seed is None else seed
    report = AssumptionReport(game=g.name)
    checks = [
        ("cross_partials", lambda: check_cross_partials(g, grid_size, tol=tol)),
        ("increasing_differences", lambda: check_increasing_differences(g, n_samples, seed)),
        ("unique_optimum", lambda: check_unique_optimum(g, seed=seed)),
        ("mixture_continuity", lambda: check_mixture_continuity(g, lambda_grid=lambda_grid, seed=seed)),
        ("belief_families", lambda: check_belief_families(g)),
        ("expectation_dominance", lambda: check_expectation_dominance(seed=seed)),
    ]
    for name, check in checks:
        try:
            result = report.add(check())
        except RationalizabilityError as e:
            result = report.add(CheckResult(name, CheckStatus.FAIL,
                                            dict(e.witness or {}, error=e.one_line())))
        logger.info(f"{'✅' if result.status != CheckStatus.FAIL else '❌'} Проверка {result.name}: {result.status.value}")
    return report
