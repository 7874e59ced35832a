import re
try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib
from dataclasses import dataclass
from fractions import Fraction

from beliefs.choice_belief import ChoiceBelief
from beliefs.density import PiecewiseConstantDensity
from beliefs.family import BeliefFamily, find_extreme_index
from games import build_model
from games.base_game import Mode, PlayerSpec, QuadraticOwnChoice, ThetaCoefficient, quadratic_game, with_mode
from utils.errors import RationalizabilityError, SpecParseError
from utils.logger import logger


@dataclass(frozen=True)
class SolverSettings:
    max_rounds: int = None
    width_tol: float = None
    grid_size: int = None
    confine_choices: bool = True


@dataclass(frozen=True)
class DominanceInputs:
    first: tuple
    second: tuple
    choice_lo: float = None
    choice_hi: float = None


def _read_toml(path):
    try:
        with open(path, "rb") as f:
            return tomllib.load(f)
    except tomllib.TOMLDecodeError as e:
        match = re.search(r"line (\d+)", str(e))
        raise SpecParseError(f"Некорректный файл {path}: {e}", line=int(match.group(1)) if match else None) from e


def _number(value, field):
    if isinstance(value, bool):
        raise SpecParseError("Ожидалось число", field=field)
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(Fraction(value.strip()))
        except (ValueError, ZeroDivisionError):
            pass
    raise SpecParseError(f"Ожидалось число или дробь, получено {value!r}", field=field)


def _numbers(values, field, length=None):
    if not isinstance(values, list):
        raise SpecParseError("Ожидался список чисел", field=field)
    numbers = [_number(v, f"{field}[{k}]") for k, v in enumerate(values)]
    if length is not None and len(numbers) != length:
        raise SpecParseError(f"Ожидалось {length} чисел, получено {len(numbers)}", field=field)
    return numbers


def _interval(table, key, field):
    if key not in table:
        raise SpecParseError("Отсутствует отрезок", field=f"{field}.{key}")
    lo, hi = _numbers(table[key], f"{field}.{key}", 2)
    if lo > hi:
        raise SpecParseError(f"Нижняя граница {lo} больше верхней {hi}", field=f"{field}.{key}")
    return lo, hi


def _player_index(label, n, field):
    try:
        index = int(label) - 1
    except ValueError:
        raise SpecParseError(f"Номер игрока должен быть целым, получено {label!r}", field=field) from None
    if not 0 <= index < n:
        raise SpecParseError(f"Нет игрока с номером {label}", field=field)
    return index


def _coefficient_terms(table, n, field):
    terms = {}
    for key, value in table.items():
        labels = [part.strip() for part in key.split(",") if part.strip()]
        opponents = tuple(sorted(_player_index(label, n, f"{field}.{key}") for label in labels))
        terms[opponents] = ThetaCoefficient(*_numbers(value, f"{field}.{key}", 3))
    return terms


def _family(table, field):
    try:
        breakpoints = _numbers(table["breakpoints"], f"{field}.breakpoints")
        members = table["members"]
    except KeyError as e:
        raise SpecParseError(f"Отсутствует ключ {e.args[0]}", field=field) from None
    if not isinstance(members, list) or not members:
        raise SpecParseError("Семейство должно содержать хотя бы один член", field=f"{field}.members")
    densities = tuple(
        PiecewiseConstantDensity(tuple(breakpoints), tuple(_numbers(m, f"{field}.members[{k}]")))
        for k, m in enumerate(members)
    )
    labels = tuple(table["labels"]) if table.get("labels") else None
    max_index, min_index = table.get("max_index"), table.get("min_index")
    if max_index is None or min_index is None:
        # без явного назначения ищем крайние члены сравнением
        found_max, found_min = find_extreme_index(BeliefFamily(densities, labels=labels))
        max_index = found_max if max_index is None else max_index
        min_index = found_min if min_index is None else min_index
        if max_index is None or min_index is None:
            raise SpecParseError("В семействе нет доминирующего или доминируемого члена, "
                                 "укажите max_index и min_index", field=field)
    return BeliefFamily(densities, int(max_index), int(min_index), labels)


def _quadratic_players(data):
    players_table = data.get("players")
    if not isinstance(players_table, dict) or len(players_table) < 2:
        raise SpecParseError("Квадратичная игра требует хотя бы двух игроков", field="players")
    n = len(players_table)
    beliefs = data.get("beliefs", {})
    players = []
    for label in sorted(players_table, key=lambda s: _player_index(s, n, f"players.{s}")):
        i = _player_index(label, n, f"players.{label}")
        table = players_table[label]
        field = f"players.{label}"
        choice_lo, choice_hi = _interval(table, "choice", field)
        param_lo, param_hi = _interval(table, "parameter", field)
        utility = table.get("utility", {})
        if "A" not in utility or "B" not in utility:
            raise SpecParseError("Квадратичная полезность требует коэффициентов A и B", field=f"{field}.utility")
        quadratic = QuadraticOwnChoice(
            A=_coefficient_terms(utility["A"], n, f"{field}.utility.A"),
            B=_coefficient_terms(utility["B"], n, f"{field}.utility.B"),
            D=_coefficient_terms(utility.get("D", {}), n, f"{field}.utility.D"),
        )
        families = {}
        for other, family_table in beliefs.get(label, {}).items():
            j = _player_index(other, n, f"beliefs.{label}.{other}")
            families[j] = _family(family_table, f"beliefs.{label}.{other}")
        players.append((i, PlayerSpec(choice_lo, choice_hi, param_lo, param_hi, families, quadratic)))
    return tuple(player for _, player in sorted(players, key=lambda item: item[0]))


def _solver_settings(data):
    table = data.get("solver", {})
    try:
        return SolverSettings(
            max_rounds=int(table["max_rounds"]) if "max_rounds" in table else None,
            width_tol=_number(table["width_tol"], "solver.width_tol") if "width_tol" in table else None,
            grid_size=int(table["grid_size"]) if "grid_size" in table else None,
            confine_choices=bool(table.get("confine_choices", True)),
        )
    except (TypeError, ValueError) as e:
        raise SpecParseError(f"Некорректные настройки решателя: {e}", field="solver") from None


def load_game(path):
    """
    Чтение игры из TOML-файла

    Args:
        path: Путь к файлу спецификации

    Returns:
        tuple: (GameSpec, SolverSettings)
    """
    data = _read_toml(path)
    game = data.get("game")
    if not isinstance(game, dict) or "model" not in game:
        raise SpecParseError("Отсутствует раздел [game] с ключом model", field="game.model")
    model = game["model"]
    mode = game.get("mode")
    if mode is not None and mode not in {m.value for m in Mode}:
        raise SpecParseError(f"Неизвестный режим {mode!r}", field="game.mode")

    try:
        if model == "quadratic":
            if mode is None:
                raise SpecParseError("Квадратичная игра требует явного режима", field="game.mode")
            g = quadratic_game(_quadratic_players(data), mode, game.get("name", "quadratic"))
        else:
            params = {key: _number(value, f"game.params.{key}") for key, value in game.get("params", {}).items()}
            g = build_model(model, params)
            if mode is not None:
                g = with_mode(g, mode)
    except SpecParseError:
        raise
    except RationalizabilityError as e:
        if e.exit_code != SpecParseError.exit_code:
            raise
        raise SpecParseError(str(e), field="game") from e

    logger.info(f"✅ Загружена игра {g.name} из {path}: {g.n} игрока, режим {g.mode.value}")
    return g, _solver_settings(data)


def _dominance_pair(table, field):
    try:
        density = PiecewiseConstantDensity(
            tuple(_numbers(table["density_breakpoints"], f"{field}.density_breakpoints")),
            tuple(_numbers(table["density_values"], f"{field}.density_values")),
        )
        breakpoints = tuple(_numbers(table["belief_breakpoints"], f"{field}.belief_breakpoints"))
        values = tuple(_numbers(table["belief_values"], f"{field}.belief_values"))
    except KeyError as e:
        raise SpecParseError(f"Отсутствует ключ {e.args[0]}", field=field) from None
    slopes = tuple(_numbers(table["belief_slopes"], f"{field}.belief_slopes")) if "belief_slopes" in table else None
    return ChoiceBelief(breakpoints, values, slopes), density


def load_dominance(path):
    """Две пары (убеждение о выборе, плотность) для сравнения"""
    data = _read_toml(path)
    table = data.get("dominance")
    if not isinstance(table, dict) or "first" not in table or "second" not in table:
        raise SpecParseError("Нужны разделы [dominance.first] и [dominance.second]", field="dominance")
    choice_lo = _number(table["choice_lo"], "dominance.choice_lo") if "choice_lo" in table else None
    choice_hi = _number(table["choice_hi"], "dominance.choice_hi") if "choice_hi" in table else None
    return DominanceInputs(
        _dominance_pair(table["first"], "dominance.first"),
        _dominance_pair(table["second"], "dominance.second"),
        choice_lo,
        choice_hi,
    )
