"""
Console and file logging for the bound pipelines and the simulator
"""
import logging
import sys
from datetime import datetime
from pathlib import Path
from typing import Optional, Union

try:
    from colorama import init, Fore, Back, Style
    COLORAMA_AVAILABLE = True
    init(autoreset=True)
except ImportError:
    COLORAMA_AVAILABLE = False

    # plain ANSI codes for terminals without colorama
    class Fore:
        RED = '\033[31m'
        GREEN = '\033[32m'
        YELLOW = '\033[33m'
        CYAN = '\033[36m'
        RESET = '\033[39m'

    class Back:
        WHITE = '\033[47m'

    class Style:
        BRIGHT = '\033[1m'
        DIM = '\033[2m'
        RESET_ALL = '\033[0m'


CONSOLE_FORMAT = '%(asctime)s | %(levelname)s | %(name)s | %(message)s'
FILE_FORMAT = '%(asctime)s | %(levelname)-8s | %(name)s | %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'


class ColoredFormatter(logging.Formatter):
    """Colour the level name, and the message body for warnings and errors"""

    COLORS = {
        'DEBUG': Fore.CYAN + Style.DIM,
        'INFO': Fore.GREEN,
        'WARNING': Fore.YELLOW + Style.BRIGHT,
        'ERROR': Fore.RED + Style.BRIGHT,
        'CRITICAL': Fore.RED + Back.WHITE + Style.BRIGHT,
    }
    MESSAGE_COLORS = {
        'WARNING': Fore.YELLOW,
        'ERROR': Fore.RED,
        'CRITICAL': Fore.RED,
    }
    RESET = Fore.RESET + Style.RESET_ALL

    def __init__(self, fmt: str = CONSOLE_FORMAT, datefmt: str = DATE_FORMAT, use_color: Optional[bool] = None):
        super().__init__(fmt=fmt, datefmt=datefmt)
        if use_color is None:
            use_color = COLORAMA_AVAILABLE or sys.stdout.isatty()
        self.use_color = use_color

    def format(self, record: logging.LogRecord) -> str:
        original_levelname = record.levelname
        if not self.use_color:
            record.levelname = f"{original_levelname:8s}"
            try:
                return super().format(record)
            finally:
                record.levelname = original_levelname

        record.levelname = f"{self.COLORS.get(original_levelname, '')}{original_levelname:8s}{self.RESET}"
        try:
            result = super().format(record)
        finally:
            # file handlers share the record
            record.levelname = original_levelname

        message_color = self.MESSAGE_COLORS.get(original_levelname)
        if message_color:
            parts = result.split(' | ', 3)
            if len(parts) == 4:
                result = f"{parts[0]} | {parts[1]} | {parts[2]} | {message_color}{parts[3]}{self.RESET}"
        return result


def setup_logging(log_dir: Optional[Union[str, Path]] = "logs", level: str = "INFO") -> logging.Logger:
    """
    Configure the root logger with a coloured console handler and an optional file handler

    Args:
        log_dir: Directory for the timestamped log file; None disables file logging
        level: Log level name (DEBUG, INFO, WARNING, ERROR, CRITICAL)

    Returns:
        The root logger
    """
    log_level = getattr(logging, str(level).upper(), logging.INFO)

    root_logger = logging.getLogger()
    root_logger.setLevel(log_level)
    root_logger.handlers.clear()

    console_handler = logging.StreamHandler(sys.stdout)
    console_handler.setLevel(log_level)
    console_handler.setFormatter(ColoredFormatter())
    root_logger.addHandler(console_handler)

    if log_dir is not None:
        log_path = Path(log_dir)
        log_path.mkdir(parents=True, exist_ok=True)
        log_file = log_path / f"{datetime.now().strftime('%Y%m%d_%H%M%S')}.log"
        file_handler = logging.FileHandler(log_file, encoding='utf-8')
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(logging.Formatter(fmt=FILE_FORMAT, datefmt=DATE_FORMAT))
        root_logger.addHandler(file_handler)
        root_logger.info(f"Log file: {log_file}")

    return root_logger


def log_banner(logger: logging.Logger, title: str, char: str = "=", width: int = 60) -> None:
    """Log a title framed by separator lines"""
    logger.info(char * width)
    logger.info(title)
    logger.info(char * width)
