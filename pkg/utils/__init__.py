"""工具函数模块"""
from utils.log import LOG_FORMAT, setup_logging
from utils.synthetic import SyntheticCorpus, generate_synthetic

__all__ = ['LOG_FORMAT', 'setup_logging', 'SyntheticCorpus', 'generate_synthetic']
