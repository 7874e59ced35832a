import argparse
import asyncio
import sys
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from beliefs.composite import composite_compare, pushforward
from beliefs.density import fosd_compare
from config import Config
from games import build_model
from solver.closed_forms import comparative_statics, round_interval
from solver.iteration import ChoicePolicy, solve
from storage.spec_loader import load_dominance, load_game
from storage.trace_writer import TraceWriter, final_frame
from utils.errors import ArgumentError, RationalizabilityError
from utils.logger import logger
from verify.assumptions import run_all_checks
from verify.report import CheckStatus

GOLDEN_PARAMS = {
    "bertrand": {"a": 1.0, "phi": 1.0, "p_bar": 3.0},
    "cournot": {"a": 10.0, "c": 2.0, "phi_lo": 1.0, "phi_hi": 3.0, "q_bar": 8.0},
}
REPRODUCE_TOLERANCE = {"bertrand": 1e-9, "cournot": 1e-7}


@dataclass
class RunConfig:
    """Настройки одного запуска командной строки"""
    command: str
    spec_path: str = None
    output_path: str = None
    format: str = Config.OUTPUT_FORMAT
    max_rounds: int = None
    width_tol: float = None
    grid_size: int = None
    seed: int = None
    comparison_tol: float = None
    sign_tol: float = None
    gap_tol: float = None
    samples: int = 500
    unconfined: bool = False
    model: str = None
    params: dict = field(default_factory=dict)
    parameter: str = None
    values: list = field(default_factory=list)

    def __post_init__(self):
        for name in ("max_rounds", "grid_size", "samples"):
            value = getattr(self, name)
            if value is not None and value < 0:
                raise ArgumentError(f"Параметр {name} должен быть неотрицательным, получено {value}")
        for name in ("width_tol", "comparison_tol", "sign_tol", "gap_tol"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise ArgumentError(f"Параметр {name} должен быть положительным, получено {value}")


class RationalizabilityRunner:
    def __init__(self, cfg):
        self.cfg = cfg
        self.writer = TraceWriter(cfg.format)

    def _require_spec(self):
        if not self.cfg.spec_path:
            raise ArgumentError("Нужен путь к файлу спецификации (--spec)")
        return self.cfg.spec_path

    async def solve(self):
        """Итерация по игре из файла спецификации и запись таблиц"""
        g, settings = load_game(self._require_spec())
        cfg = self.cfg
        policy = ChoicePolicy.UNCONFINED if cfg.unconfined or not settings.confine_choices else ChoicePolicy.CONFINED
        trace = solve(
            g,
            max_rounds=cfg.max_rounds if cfg.max_rounds is not None else settings.max_rounds,
            width_tol=cfg.width_tol if cfg.width_tol is not None else settings.width_tol,
            grid_size=cfg.grid_size if cfg.grid_size is not None else settings.grid_size,
            policy=policy,
            tol=cfg.comparison_tol,
        )
        if cfg.output_path:
            await self.writer.save_trace(trace, g, cfg.output_path)
        else:
            print(final_frame(trace).to_string(index=False))
        if trace.terminated_by.value == "max_rounds":
            logger.warning(f"⚠️ Итерация остановлена по числу раундов ({trace.final.round})")
        logger.info(f"📊 Итог: {trace.terminated_by.value}, раундов {trace.final.round}")
        return 0

    async def check(self):
        """Все проверки допущений; ненулевой код при любом FAIL"""
        g, _ = load_game(self._require_spec())
        cfg = self.cfg
        report = run_all_checks(g, grid_size=cfg.grid_size, n_samples=cfg.samples, seed=cfg.seed, tol=cfg.sign_tol)
        if cfg.output_path:
            await self.writer.save_records(report.to_records(), cfg.output_path)
        for check in report.checks:
            print(f"{check.name}: {check.status.value}")
        if not report.passed:
            logger.error(f"❌ Проверки не пройдены: {[c.name for c in report.failed]}")
            return 3
        logger.info("✅ Нарушений допущений не найдено")
        return 0

    async def dominance(self):
        """Сравнение плотностей и составных убеждений двух пар"""
        inputs = load_dominance(self._require_spec())
        (beta_1, f_1), (beta_2, f_2) = inputs.first, inputs.second
        tol = self.cfg.comparison_tol
        densities = fosd_compare(f_1, f_2, tol)
        lows = [inputs.choice_lo] if inputs.choice_lo is not None else []
        highs = [inputs.choice_hi] if inputs.choice_hi is not None else []
        choice_lo = min(lows + [beta_1.value_range()[0], beta_2.value_range()[0]])
        choice_hi = max(highs + [beta_1.value_range()[1], beta_2.value_range()[1]])
        first = pushforward(beta_1, f_1, choice_lo, choice_hi)
        second = pushforward(beta_2, f_2, choice_lo, choice_hi)
        composites = composite_compare(first, second, tol)

        thresholds = sorted(set(first.check_points()) | set(second.check_points()))
        frame = pd.DataFrame({
            "threshold": thresholds,
            "first": [first.survival(c) for c in thresholds],
            "second": [second.survival(c) for c in thresholds],
        })
        print(frame.to_string(index=False))
        print(f"densities: {densities.result.value}")
        print(f"composites: {composites.result.value}")
        if self.cfg.output_path:
            await self.writer.save_table(frame, self.cfg.output_path)
        return 0

    async def reproduce(self):
        """Сравнение итерации с замкнутыми формулами по раундам"""
        cfg = self.cfg
        model = cfg.model
        if model not in GOLDEN_PARAMS:
            raise ArgumentError(f"Воспроизведение доступно для моделей {sorted(GOLDEN_PARAMS)}, получено {model!r}")
        rounds = 20 if cfg.max_rounds is None else cfg.max_rounds
        if rounds < 1:
            raise ArgumentError(f"Число раундов должно быть ≥ 1, получено {rounds}")
        params = dict(GOLDEN_PARAMS[model], **cfg.params)
        g = build_model(model, params)
        policy = ChoicePolicy.UNCONFINED if model == "cournot" else ChoicePolicy.CONFINED
        trace = solve(g, max_rounds=rounds, width_tol=cfg.width_tol, grid_size=cfg.grid_size,
                      policy=policy, tol=cfg.comparison_tol)

        rows = []
        for profile in trace.rounds[1:]:
            for i, bounds in enumerate(profile.players):
                for theta, lower, upper in zip(bounds.grid, bounds.lower, bounds.upper):
                    closed = round_interval(model, profile.round, g.params, float(theta))
                    rows.append({
                        "round": profile.round, "player": i + 1, "theta": float(theta),
                        "lower": float(lower), "upper": float(upper),
                        "closed_lower": closed.lo, "closed_upper": closed.hi,
                        "gap_lower": abs(float(lower) - closed.lo), "gap_upper": abs(float(upper) - closed.hi),
                    })
        frame = pd.DataFrame(rows)
        if cfg.output_path:
            await self.writer.save_table(frame, cfg.output_path)

        tolerance = cfg.gap_tol if cfg.gap_tol is not None else REPRODUCE_TOLERANCE[model]
        max_gap = float(np.max(frame[["gap_lower", "gap_upper"]].to_numpy()))
        print(f"{model}: rounds={trace.final.round} max_gap={max_gap:.3e} tolerance={tolerance:.1e}")
        if max_gap > tolerance:
            logger.error(f"❌ Расхождение с замкнутой формой {max_gap} больше допуска {tolerance}")
            return 4
        logger.info(f"✅ Замкнутые формы воспроизведены: {model}, расхождение {max_gap:.3e}")
        return 0

    async def sweep(self):
        """Таблица сравнительной статики предельных границ"""
        cfg = self.cfg
        if cfg.model not in GOLDEN_PARAMS:
            raise ArgumentError(f"Сравнительная статика доступна для моделей {sorted(GOLDEN_PARAMS)}")
        if not cfg.parameter or not cfg.values:
            raise ArgumentError("Нужны --vary и --values")
        params = dict(GOLDEN_PARAMS[cfg.model], **cfg.params)
        g = build_model(cfg.model, params)
        player = g.players[0]
        grid_size = cfg.grid_size if cfg.grid_size is not None else Config.GRID_SIZE
        thetas = np.linspace(player.param_lo, player.param_hi, grid_size)
        frame = comparative_statics(cfg.model, cfg.parameter, cfg.values, g.params, thetas)
        if cfg.output_path:
            await self.writer.save_table(frame, cfg.output_path)
        else:
            print(frame.to_string(index=False))
        return 0


async def cmd_solve(cfg):
    return await RationalizabilityRunner(cfg).solve()


async def cmd_check(cfg):
    return await RationalizabilityRunner(cfg).check()


async def cmd_dominance(cfg):
    return await RationalizabilityRunner(cfg).dominance()


async def cmd_reproduce(cfg):
    return await RationalizabilityRunner(cfg).reproduce()


async def cmd_sweep(cfg):
    return await RationalizabilityRunner(cfg).sweep()


COMMANDS = {
    "solve": cmd_solve,
    "check": cmd_check,
    "dominance": cmd_dominance,
    "reproduce": cmd_reproduce,
    "sweep": cmd_sweep,
}


async def run_command(cfg):
    """
    Выполнение команды с переводом исключений в код выхода

    Returns:
        int: 0 при успехе, иначе код причины ошибки
    """
    try:
        return await COMMANDS[cfg.command](cfg)
    except RationalizabilityError as e:
        logger.error(f"❌ {e}")
        print(e.one_line(), file=sys.stderr)
        return e.exit_code
    except OSError as e:
        logger.error(f"❌ Ошибка ввода-вывода: {e}")
        print(f"error[io]: {' '.join(str(e).split())}", file=sys.stderr)
        return 1


def _key_value(text):
    key, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"ожидалось имя=значение, получено {text!r}")
    try:
        return key.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"значение параметра {key} должно быть числом") from None


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"ожидался список чисел через запятую, получено {text!r}") from None


def build_parser():
    parser = argparse.ArgumentParser(description="Point rationalizability solver CLI")
    commands = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", dest="output_path", help="Путь для таблицы результатов")
    common.add_argument("--format", choices=["csv", "jsonl"], default=Config.OUTPUT_FORMAT, help="Формат таблиц")
    common.add_argument("--rounds", dest="max_rounds", type=int, help="Наибольшее число раундов")
    common.add_argument("--tol", dest="width_tol", type=float, help="Порог изменения границ для остановки")
    common.add_argument("--grid", dest="grid_size", type=int, help="Число точек сетки параметра")
    common.add_argument("--seed", type=int, help="Seed для выборочных проверок")
    common.add_argument("--comparison-tol", type=float, help="Допуск сравнения распределений")

    spec = argparse.ArgumentParser(add_help=False)
    spec.add_argument("--spec", dest="spec_path", required=True, help="Файл спецификации TOML")

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("--model", required=True, choices=sorted(GOLDEN_PARAMS), help="Встроенная модель")
    model.add_argument("--param", dest="params", type=_key_value, action="append", default=[],
                       help="Параметр модели имя=значение (можно повторять)")

    solve_parser = commands.add_parser("solve", parents=[common, spec], help="Итерация рационализуемости")
    solve_parser.add_argument("--unconfined", action="store_true", help="Не ограничивать границы отрезком выбора")

    check_parser = commands.add_parser("check", parents=[common, spec], help="Проверка допущений")
    check_parser.add_argument("--sign-tol", type=float, help="Допуск знака конечных разностей")
    check_parser.add_argument("--samples", type=int, default=500, help="Число случайных испытаний")

    commands.add_parser("dominance", parents=[common, spec], help="Сравнение составных убеждений")

    reproduce_parser = commands.add_parser("reproduce", parents=[common, model], help="Сверка с замкнутыми формами")
    reproduce_parser.add_argument("--gap-tol", type=float, help="Допуск расхождения")

    sweep_parser = commands.add_parser("sweep", parents=[common, model], help="Сравнительная статика")
    sweep_parser.add_argument("--vary", dest="parameter", required=True, help="Изменяемый параметр")
    sweep_parser.add_argument("--values", type=_float_list, required=True, help="Значения через запятую")
    return parser


def config_from_args(args):
    values = vars(args).copy()
    values["params"] = dict(values.get("params") or [])
    known = RunConfig.__dataclass_fields__
    return RunConfig(**{key: value for key, value in values.items() if key in known and value is not None})


async def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
    except RationalizabilityError as e:
        print(e.one_line(), file=sys.stderr)
        return e.exit_code
    return await run_command(cfg)


if __name__ == "__main__":
    sys.exit(asyncio.run(main()))
