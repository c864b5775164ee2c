"""评估模块 - 可废止性、COPA 与分布偏移"""
from evaluation.handles import (
    MetricHandle, cesar_handle, ceq_handle, rock_handle, ctcw_handle, parallel_map
)
from evaluation.defeasibility import (
    DefeasibilityReport, InstanceScores, evaluate_defeasibility, format_percent,
    geometric_mean, score_instances
)
from evaluation.copa import CopaReport, evaluate_copa, score_copa
from evaluation.shift import ShiftReport, shift_report

__all__ = [
    'MetricHandle', 'cesar_handle', 'ceq_handle', 'rock_handle', 'ctcw_handle', 'parallel_map',
    'DefeasibilityReport', 'InstanceScores', 'evaluate_defeasibility', 'format_percent',
    'geometric_mean', 'score_instances',
    'CopaReport', 'evaluate_copa', 'score_copa',
    'ShiftReport', 'shift_report'
]
