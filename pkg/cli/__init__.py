"""命令行模块"""
from cli.parser import UsageError, build_parser
from cli.commands import EXIT_OK, EXIT_RUNTIME, EXIT_VALIDATION, main

__all__ = ['UsageError', 'build_parser', 'EXIT_OK', 'EXIT_RUNTIME', 'EXIT_VALIDATION', 'main']
