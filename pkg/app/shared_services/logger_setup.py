import os
import logging
from logging.handlers import TimedRotatingFileHandler
from datetime import datetime

from .config import get_settings


def setup_logger(log_level=None):
    settings = get_settings()
    logger = logging.getLogger("lpcut")
    if not logger.handlers:
        logger.setLevel(log_level or settings.log_level)
        formatter = logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s')
        console_handler = logging.StreamHandler()
        console_handler.setFormatter(formatter)
        logger.addHandler(console_handler)
        if settings.log_to_file:
            if not os.path.exists(settings.log_dir):
                os.makedirs(settings.log_dir)
            log_file_path = os.path.join(settings.log_dir, f"lpcut_{datetime.now().strftime('%Y-%m-%d')}.log")
            file_handler = TimedRotatingFileHandler(log_file_path, when="midnight", interval=1, backupCount=30)
            file_handler.setFormatter(formatter)
            logger.addHandler(file_handler)
        logger.propagate = False
    return logger
