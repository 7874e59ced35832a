import numpy as np
import pandas as pd

from solver.iteration import Interval
from utils.errors import ArgumentError


def _check_round(k):
    if int(k) != k or k < 1:
        raise ArgumentError(f"Номер раунда должен быть целым ≥ 1, получено {k}")
    return int(k)


def bertrand_round_interval(k, a, phi, p_bar, theta):
    """
    Границы раунда k в дуополии Бертрана

    Returns:
        Interval: [(1 - 2^-k)a + (1/8 - 2^-(k+2))φ + θ/2, (1 - 2^-k)a + (3/8 - 3·2^-(k+2))φ + 2^-k·p̄ + θ/2]
    """
    k = _check_round(k)
    if a <= 0 or phi <= 0:
        raise ArgumentError(f"Параметры Бертрана требуют a > 0 и φ > 0, получено a={a}, φ={phi}")
    half = 0.5 ** k
    quarter = 0.5 ** (k + 2)
    base = (1.0 - half) * a + theta / 2.0
    lower = base + (1.0 / 8.0 - quarter) * phi
    upper = base + (3.0 / 8.0 - 3.0 * quarter) * phi + half * p_bar
    return Interval(lower, upper)


def limit_bertrand_interval(a, phi, theta):
    """Предел раундов Бертрана: [a + φ/8 + θ/2, a + 3φ/8 + θ/2]"""
    return Interval(a + phi / 8.0 + theta / 2.0, a + 3.0 * phi / 8.0 + theta / 2.0)


def _cournot_constants(a, c, phi_lo, phi_hi):
    if not a > c >= 0:
        raise ArgumentError(f"Параметры Курно требуют a > c ≥ 0, получено a={a}, c={c}")
    if not 0 < phi_lo < phi_hi:
        raise ArgumentError(f"Параметры Курно требуют 0 < φ̲ < φ̄, получено [{phi_lo}, {phi_hi}]")
    spread = a - c
    width = phi_hi - phi_lo
    low_log = np.log((phi_hi + phi_lo) / (2.0 * phi_lo))
    high_log = np.log(2.0 * phi_hi / (phi_hi + phi_lo))
    return spread, width, low_log, high_log


def cournot_round_interval(k, a, c, phi_lo, phi_hi, q_bar, theta):
    """
    Границы раунда k в дуополии Курно (отдельные формулы для четных и нечетных k)

    Returns:
        Interval: [нижняя граница, верхняя граница] при собственном параметре θ
    """
    k = _check_round(k)
    spread, width, low_log, high_log = _cournot_constants(a, c, phi_lo, phi_hi)
    base = spread / (2.0 * theta)
    scale = spread / (3.0 * width)
    if k % 2 == 0:
        current = 1.0 - 4.0 ** (-(k // 2))
        previous = 1.0 - 4.0 ** (-(k // 2 - 1))
        lower = base - scale * (2.0 * low_log * current - high_log * previous)
        upper = base - scale * (2.0 * high_log * current - low_log * previous) + q_bar / 2.0 ** k
    else:
        factor = 1.0 - 4.0 ** (-((k - 1) // 2))
        lower = base - scale * (2.0 * low_log - high_log) * factor - q_bar / 2.0 ** k
        upper = base - scale * (2.0 * high_log - low_log) * factor
    return Interval(float(lower), float(upper))


def limit_cournot_interval(a, c, phi_lo, phi_hi, theta):
    """Предел раундов Курно"""
    spread, width, low_log, high_log = _cournot_constants(a, c, phi_lo, phi_hi)
    base = spread / (2.0 * theta)
    scale = spread / (3.0 * width)
    return Interval(float(base - scale * (2.0 * low_log - high_log)),
                    float(base - scale * (2.0 * high_log - low_log)))


def round_interval(model, k, params, theta):
    """Границы раунда k встроенной модели по словарю параметров"""
    if model == "bertrand":
        return bertrand_round_interval(k, params["a"], params["phi"], params["p_bar"], theta)
    if model == "cournot":
        return cournot_round_interval(k, params["a"], params["c"], params["phi_lo"],
                                      params["phi_hi"], params["q_bar"], theta)
    raise ArgumentError(f"Нет замкнутой формы для модели {model!r}")


def limit_interval(model, params, theta):
    """Предельные границы встроенной модели"""
    if model == "bertrand":
        return limit_bertrand_interval(params["a"], params["phi"], theta)
    if model == "cournot":
        return limit_cournot_interval(params["a"], params["c"], params["phi_lo"], params["phi_hi"], theta)
    raise ArgumentError(f"Нет замкнутой формы для модели {model!r}")


def comparative_statics(model, parameter, values, params, thetas):
    """
    Предельные границы при изменении одного параметра модели

    Args:
        model: "bertrand" или "cournot"
        parameter: Имя изменяемого параметра (в том числе "theta")
        values: Значения параметра
        params: Остальные параметры модели
        thetas: Значения собственного параметра для таблицы

    Returns:
        pd.DataFrame: Столбцы parameter, value, theta, lower, upper, width
    """
    rows = []
    for value in values:
        current = dict(params)
        current_thetas = thetas
        if parameter == "theta":
            current_thetas = [value]
        elif parameter in current:
            current[parameter] = float(value)
        else:
            raise ArgumentError(f"Модель {model} не имеет параметра {parameter!r}")
        for theta in current_thetas:
            interval = limit_interval(model, current, float(theta))
            rows.append({
                "parameter": parameter,
                "value": float(value),
                "theta": float(theta),
                "lower": interval.lo,
                "upper": interval.hi,
                "width": interval.width,
            })
    return pd.DataFrame(rows, columns=["parameter", "value", "theta", "lower", "upper", "width"])
