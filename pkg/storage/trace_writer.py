import json
import os

import aiofiles
import pandas as pd

from utils.errors import ArgumentError
from utils.logger import logger

TRACE_COLUMNS = ["round", "player", "theta", "lower", "upper", "width"]
FINAL_COLUMNS = ["player", "theta", "lower", "upper", "width"]


def trace_frame(trace):
    """Таблица всех раундов: строка на (раунд, игрок, точка сетки)"""
    rows = []
    for profile in trace.rounds:
        for i, bounds in enumerate(profile.players):
            for theta, lower, upper in zip(bounds.grid, bounds.lower, bounds.upper):
                rows.append((profile.round, i + 1, float(theta), float(lower), float(upper), float(upper - lower)))
    return pd.DataFrame(rows, columns=TRACE_COLUMNS)


def final_frame(trace):
    """Итоговые границы (θ, l_i(θ), u_i(θ)) по игрокам"""
    frame = trace_frame(trace)
    final = frame[frame["round"] == trace.final.round]
    return final[FINAL_COLUMNS].reset_index(drop=True)


def summary_record(trace, g):
    """Сводка итерации без меток времени, чтобы повторный запуск давал тот же файл"""
    return {
        "game": g.name,
        "mode": g.mode.value,
        "params": g.params,
        "policy": trace.policy.value,
        "terminated_by": trace.terminated_by.value,
        "rounds": trace.final.round,
        "convergence": trace.convergence,
        "exact": all(bounds.exact for bounds in trace.final.players),
        "clipping_events": [vars(event) for event in trace.clipping_events],
        "nesting_events": [vars(event) for event in trace.nesting_events],
    }


def sibling_path(path, suffix, extension=None):
    """<stem><suffix><ext> рядом с исходным путем"""
    stem, ext = os.path.splitext(path)
    return f"{stem}{suffix}{ext if extension is None else extension}"


def render_table(frame, fmt):
    if fmt == "csv":
        return frame.to_csv(index=False)
    if fmt == "jsonl":
        return frame.to_json(orient="records", lines=True)
    raise ArgumentError(f"Неизвестный формат вывода {fmt!r}, доступны csv и jsonl")


class TraceWriter:
    """Асинхронная запись таблиц и сводок на диск"""

    def __init__(self, fmt="csv"):
        render_table(pd.DataFrame(), fmt)
        self.fmt = fmt

    async def _write(self, path, content):
        directory = os.path.dirname(path)
        if directory and not os.path.exists(directory):
            os.makedirs(directory)
        async with aiofiles.open(path, "w", encoding="utf-8", newline="") as f:
            await f.write(content)
        logger.debug(f"✅ Записан файл {path}")

    async def save_table(self, frame, path):
        await self._write(path, render_table(frame, self.fmt))

    async def save_json(self, record, path):
        await self._write(path, json.dumps(record, indent=2, sort_keys=True, ensure_ascii=False, default=float) + "\n")

    async def save_records(self, records, path):
        """Список словарей: json-lines или csv (вложенные поля сериализуются в JSON)"""
        if self.fmt == "jsonl":
            content = "".join(json.dumps(r, sort_keys=True, ensure_ascii=False, default=float) + "\n" for r in records)
        else:
            flat = [{k: json.dumps(v, sort_keys=True, ensure_ascii=False, default=float) if isinstance(v, (dict, list)) else v
                     for k, v in r.items()} for r in records]
            content = pd.DataFrame(flat).to_csv(index=False)
        await self._write(path, content)

    async def save_trace(self, trace, g, path):
        """
        Запись итерации: таблица раундов в path, итог в <stem>.final<ext>, сводка в <stem>.summary.json

        Returns:
            dict: Пути записанных файлов
        """
        paths = {
            "rounds": path,
            "final": sibling_path(path, ".final"),
            "summary": sibling_path(path, ".summary", ".json"),
        }
        await self.save_table(trace_frame(trace), paths["rounds"])
        await self.save_table(final_frame(trace), paths["final"])
        await self.save_json(summary_record(trace, g), paths["summary"])
        logger.info(f"✅ Результаты итерации записаны в {paths['rounds']}")
        return paths
