import logging
import os
from typing import Optional

from src.constants import Constants


class Logger:
    _instance: Optional['Logger'] = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(Logger, cls).__new__(cls)
            cls._instance._initialize_logger()
        return cls._instance

    def _initialize_logger(self):
        """
        Initialize logger from the `logging` section of configs/config.yaml
        """
        # imported here: config_parser logs through the stdlib logger
        from src.utilities.config_parser import load_config

        try:
            config = load_config()
        except OSError:
            config = {}
        log_cfg = config.get('logging') or {}
        level = str(config.get('log_level', Constants.DEFAULT_LOG_LEVEL)).upper()

        self.logger = logging.getLogger(log_cfg.get('name', Constants.LOGGER_NAME))
        self.logger.setLevel(level)
        if self.logger.handlers:
            return

        formatter = logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s')

        console_handler = logging.StreamHandler()
        console_handler.setLevel(level)
        console_handler.setFormatter(formatter)
        self.logger.addHandler(console_handler)

        if log_cfg.get('to_file', True):
            log_dir = log_cfg.get('dir', Constants.LOG_DIR)
            os.makedirs(log_dir, exist_ok=True)
            file_handler = logging.FileHandler(
                os.path.join(log_dir, log_cfg.get('file', Constants.LOG_FILE))
            )
            file_handler.setLevel(level)
            file_handler.setFormatter(formatter)
            self.logger.addHandler(file_handler)

        # module-level loggers (logging.getLogger(__name__)) share the handlers
        for package in ('src', 'mains'):
            package_logger = logging.getLogger(package)
            package_logger.setLevel(level)
            for handler in self.logger.handlers:
                package_logger.addHandler(handler)

    def info(self, message: str):
        """
        Log info message
        """
        self.logger.info(message)

    def error(self, message: str):
        """
        Log error message
        """
        self.logger.error(message)

    def warning(self, message: str):
        """
        Log warning message
        """
        self.logger.warning(message)

    def debug(self, message: str):
        """
        Log debug message
        """
        self.logger.debug(message)
