"""
日志配置
"""
import logging
import sys

LOG_FORMAT = "%(levelname)s: %(message)s"
LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR')


def setup_logging(level: str = "INFO"):
    """配置根日志，输出到标准错误"""
    name = str(level).upper()
    if name not in LOG_LEVELS:
        raise ValueError(f"Unknown log level: {level!r}")
    logging.basicConfig(format=LOG_FORMAT, level=name, stream=sys.stderr, force=True)
