import logging
import colorlog


def setup_logger(name: str = "fermiswap", level: int = logging.INFO) -> logging.Logger:
    """Setup colorful logger for the package"""

    logger = colorlog.getLogger(name)
    if not logger.handlers:
        handler = colorlog.StreamHandler()
        handler.setFormatter(colorlog.ColoredFormatter(
            '%(log_color)s%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S',
            log_colors={
                'DEBUG': 'cyan',
                'INFO': 'green',
                'WARNING': 'yellow',
                'ERROR': 'red',
                'CRITICAL': 'red,bg_white',
            }
        ))
        logger.addHandler(handler)

    logger.setLevel(level)
    logger.propagate = False

    return logger


def set_level(level: str) -> None:
    """Change the package log level (e.g. from config or --verbose)"""
    logger.setLevel(getattr(logging, level.upper(), logging.INFO))


logger = setup_logger()
