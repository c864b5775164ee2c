"""
分布偏移报告

对 s(C,E)、s(C⊕A,E)、s(C⊕D,E) 三组得分分别做 KDE，输出
scores.csv、kde.csv、summary.txt、shift.svg。
"""
import logging
import os
from dataclasses import dataclass, field
from decimal import Decimal
from pathlib import Path
from typing import Dict, List, Sequence, Union
import numpy as np

from core.errors import ConfigError, EvaluationError
from core.numerics import DensityCurve, kde_density, kde_grid, silverman_bandwidth
from evaluation.defeasibility import score_instances
from evaluation.handles import MetricHandle
from exporters.report_exporter import ReportExporter
from model.records import DefeasibleInstance

logger = logging.getLogger(__name__)

SCORES_FILE = "scores.csv"
KDE_FILE = "kde.csv"
SUMMARY_FILE = "summary.txt"
PLOT_FILE = "shift.svg"

GRID_POINTS = 512
GRID_SPAN = 8.0

SERIES = ('base', 'supporter', 'defeater')


def decimal_mean(values: Sequence[float]) -> Decimal:
    """按十进制求平均，0.7 − 0.5 的差为精确的 0.2"""
    return sum((Decimal(repr(float(v))) for v in values), Decimal(0)) / len(values)


@dataclass
class ShiftReport:
    """分布偏移结果"""
    ids: List[str]
    scores: Dict[str, np.ndarray]
    curves: Dict[str, DensityCurve]
    mean_supporter_delta: float
    mean_defeater_delta: float
    excluded: List[str] = field(default_factory=list)
    files: Dict[str, str] = field(default_factory=dict)

    def summary_lines(self, metric: str = "") -> List[str]:
        """摘要文本"""
        lines = [f"metric: {metric}", f"instances: {len(self.ids)}", f"excluded: {len(self.excluded)}"]
        for key in SERIES:
            lines.append(f"mean_{key}: {float(np.mean(self.scores[key]))!r}")
            lines.append(f"bandwidth_{key}: {self.curves[key].bandwidth!r}")
        lines.append(f"mean_delta_supporter: {self.mean_supporter_delta!r}")
        lines.append(f"mean_delta_defeater: {self.mean_defeater_delta!r}")
        return lines

    def to_dict(self) -> Dict:
        """转换为字典"""
        return {
            'instances': len(self.ids),
            'excluded': list(self.excluded),
            'mean_supporter_delta': self.mean_supporter_delta,
            'mean_defeater_delta': self.mean_defeater_delta,
            'files': dict(self.files)
        }


def _prepare_out_dir(out_dir: Union[str, Path]) -> Path:
    path = Path(out_dir)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise ConfigError(f"Cannot create output directory {path}: {e}") from e
    if not os.access(path, os.W_OK):
        raise ConfigError(f"Output directory is not writable: {path}")
    return path


def shift_report(metric: MetricHandle, data: Sequence[DefeasibleInstance], out_dir: Union[str, Path],
                 jobs: int = 1, plot: bool = True) -> ShiftReport:
    """
    生成分布偏移报告

    Parameters:
    -----------
    metric : MetricHandle
        打分函数
    data : Sequence[DefeasibleInstance]
        实例，不能为空
    out_dir : str or Path
        输出目录，打分前检查是否可写
    jobs : int
        并行线程数
    plot : bool
        是否输出 SVG

    Returns:
    --------
    ShiftReport
        得分、密度曲线与均值差
    """
    path = _prepare_out_dir(out_dir)
    if not data:
        raise EvaluationError("No instances for the shift report")
    scored, excluded = score_instances(metric, data, jobs)
    if not scored:
        raise EvaluationError(f"All {len(data)} instances failed to score")

    ids = [s.id for s in scored]
    scores = {
        'base': np.array([s.base for s in scored]),
        'supporter': np.array([s.supporter for s in scored]),
        'defeater': np.array([s.defeater for s in scored])
    }
    bandwidths = {k: silverman_bandwidth(v) for k, v in scores.items()}
    grid, widths = kde_grid([scores[k] for k in SERIES], [bandwidths[k] for k in SERIES],
                            num_points=GRID_POINTS, span=GRID_SPAN)
    curves = {k: kde_density(scores[k], grid, h) for k, h in zip(SERIES, widths)}

    base_mean = decimal_mean(scores['base'])
    report = ShiftReport(
        ids=ids,
        scores=scores,
        curves=curves,
        mean_supporter_delta=float(decimal_mean(scores['supporter']) - base_mean),
        mean_defeater_delta=float(decimal_mean(scores['defeater']) - base_mean),
        excluded=excluded
    )

    files = {
        'scores': path / SCORES_FILE,
        'kde': path / KDE_FILE,
        'summary': path / SUMMARY_FILE
    }
    ReportExporter.export_scores(ids, scores['base'], scores['supporter'], scores['defeater'], files['scores'])
    ReportExporter.export_kde(curves, files['kde'])
    ReportExporter.export_summary(report.summary_lines(metric.name), files['summary'])
    if plot:
        files['plot'] = path / PLOT_FILE
        ReportExporter.export_shift_plot(curves, files['plot'], title=metric.name)
    report.files = {k: str(v) for k, v in files.items()}
    logger.info("Mean delta: supporter %+.4f, defeater %+.4f",
                report.mean_supporter_delta, report.mean_defeater_delta)
    return report
