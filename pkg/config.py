import os
from dotenv import load_dotenv

# Загружаем переменные окружения из .env файла
load_dotenv()

class Config:
    # Настройки логирования
    LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
    LOG_FILE = os.getenv("LOG_FILE", "logs/rationalizability.log")

    # Допуски для сравнения убеждений
    COMPARISON_TOLERANCE = float(os.getenv("COMPARISON_TOLERANCE", "1e-9"))
    DENSITY_MASS_TOLERANCE = float(os.getenv("DENSITY_MASS_TOLERANCE", "1e-12"))

    # Настройки итерационной процедуры
    MAX_ROUNDS = int(os.getenv("MAX_ROUNDS", "200"))
    WIDTH_TOLERANCE = float(os.getenv("WIDTH_TOLERANCE", "1e-12"))
    GRID_SIZE = int(os.getenv("GRID_SIZE", "11"))
    NESTING_TOLERANCE = float(os.getenv("NESTING_TOLERANCE", "1e-6"))
    MONOTONICITY_TOLERANCE = float(os.getenv("MONOTONICITY_TOLERANCE", "1e-7"))

    # Численные методы
    QUADRATURE_RELATIVE_TOLERANCE = float(os.getenv("QUADRATURE_RELATIVE_TOLERANCE", "1e-8"))
    QUADRATURE_MAX_LEVEL = int(os.getenv("QUADRATURE_MAX_LEVEL", "14"))
    GOLDEN_SECTION_TOLERANCE = float(os.getenv("GOLDEN_SECTION_TOLERANCE", "1e-10"))

    # Проверка допущений
    FD_RELATIVE_STEP = float(os.getenv("FD_RELATIVE_STEP", "1e-4"))
    FD_SIGN_TOLERANCE = float(os.getenv("FD_SIGN_TOLERANCE", "1e-6"))
    ORACLE_ENUMERATION_BUDGET = int(os.getenv("ORACLE_ENUMERATION_BUDGET", "200000"))
    DEFAULT_SEED = int(os.getenv("DEFAULT_SEED", "0"))

    # Формат вывода таблиц: csv или jsonl
    OUTPUT_FORMAT = os.getenv("OUTPUT_FORMAT", "csv")
