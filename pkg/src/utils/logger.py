"""
Logging utility for the NCG toolkit
"""
import logging
import sys
from pathlib import Path
from typing import Optional
from src.config.settings import settings

# NCG_LOG accepts these names only
LEVELS = {
    'error': logging.ERROR,
    'info': logging.INFO,
    'debug': logging.DEBUG,
}

def setup_logger(
    name: str = "ncg",
    level: Optional[str] = None,
    log_file: Optional[Path] = None
) -> logging.Logger:
    """
    Set up a logger with both file and console handlers

    Args:
        name: Logger name
        level: Logging level (error, info or debug)
        log_file: Path to log file

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger(name)

    # Avoid adding handlers multiple times
    if logger.handlers:
        return logger

    log_level = (level or settings.LOG_LEVEL).lower()
    logger.setLevel(LEVELS.get(log_level, logging.INFO))

    detailed_formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(funcName)s:%(lineno)d - %(message)s'
    )
    simple_formatter = logging.Formatter(
        '%(asctime)s - %(levelname)s - %(message)s'
    )

    # Console goes to stderr so stdout stays clean for piped reports
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(logging.DEBUG)
    console_handler.setFormatter(simple_formatter)
    logger.addHandler(console_handler)

    file_handler = logging.FileHandler(log_file or settings.LOG_FILE)
    file_handler.setLevel(logging.DEBUG)
    file_handler.setFormatter(detailed_formatter)
    logger.addHandler(file_handler)

    return logger

def set_level(level: str) -> None:
    """Change the level of the global logger by NCG_LOG name"""
    logger.setLevel(LEVELS.get(level.lower(), logging.INFO))

# Global logger instance
logger = setup_logger()
