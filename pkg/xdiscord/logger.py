"""Logging utilities for the discord toolkit."""
import logging
import sys

PACKAGE_LOGGER = "xdiscord"

def setup_logger(name: str = PACKAGE_LOGGER, level: str = "INFO", stream=None) -> logging.Logger:
    """Setup a logger with consistent formatting.

    The CLI passes ``sys.stderr`` so that standard output stays reserved for
    JSON / CSV / OBJ payloads.
    """
    logger = logging.getLogger(name)
    logger.setLevel(getattr(logging, level.upper()))

    if not logger.handlers:
        handler = logging.StreamHandler(stream or sys.stdout)
        handler.setLevel(getattr(logging, level.upper()))

        formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        )
        handler.setFormatter(formatter)
        logger.addHandler(handler)
    else:
        for handler in logger.handlers:
            handler.setLevel(getattr(logging, level.upper()))
            if stream is not None and isinstance(handler, logging.StreamHandler):
                handler.stream = stream

    return logger

def _format(message: str, fields: dict) -> str:
    if not fields:
        return message
    extras = " ".join(f"{key}={value}" for key, value in fields.items())
    return f"{message} | {extras}"

def log_info(message: str, **fields):
    """Log info message."""
    logging.getLogger(PACKAGE_LOGGER).info(_format(message, fields))

def log_error(message: str, exc_info=False, **fields):
    """Log error message."""
    logging.getLogger(PACKAGE_LOGGER).error(_format(message, fields), exc_info=exc_info)

def log_warning(message: str, **fields):
    """Log warning message."""
    logging.getLogger(PACKAGE_LOGGER).warning(_format(message, fields))

def log_debug(message: str, **fields):
    """Log debug message."""
    logging.getLogger(PACKAGE_LOGGER).debug(_format(message, fields))
