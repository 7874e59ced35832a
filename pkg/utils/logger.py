import logging
import os
from config import Config

def setup_logging():
    """Настройка логирования: консоль и (опционально) файл в папке logs"""
    log_level = getattr(logging, Config.LOG_LEVEL)

    handlers = [logging.StreamHandler()]

    if Config.LOG_FILE:
        # Проверяем наличие папки для лог-файла
        log_dir = os.path.dirname(Config.LOG_FILE)
        if log_dir and not os.path.exists(log_dir):
            os.makedirs(log_dir)
        handlers.append(logging.FileHandler(Config.LOG_FILE, mode="a"))

    logging.basicConfig(
        level=log_level,
        format="%(asctime)s - %(levelname)s - [%(filename)s:%(lineno)d] - %(message)s",
        handlers=handlers,
    )

    return logging.getLogger("rationalizability")

# Создаем глобальный объект логгера
logger = setup_logging()
