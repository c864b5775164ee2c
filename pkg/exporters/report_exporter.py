"""
报告导出器 - 得分 CSV、KDE CSV、摘要文本与 SVG 图
"""
import csv
import logging
from collections import Counter
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union
import numpy as np

from core.numerics import DensityCurve
from model.records import DOMAINS, TIME_INTERVALS, DefeasibleInstance

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

SCORES_HEADER = ["id", "base", "supporter", "defeater"]
KDE_HEADER = ["grid", "density_base", "density_supporter", "density_defeater"]
STATS_HEADER = ["category", "value", "count"]

# 固定的 SVG 元数据，保证多次导出字节一致
_SVG_SALT = "causal-strength"


def _pyplot():
    """延迟导入 matplotlib（无界面后端）"""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    plt.rcParams['svg.hashsalt'] = _SVG_SALT
    return plt


class ReportExporter:
    """评估报告导出器"""

    @staticmethod
    def export_scores(ids: Sequence[str], base: Sequence[float], supporter: Sequence[float],
                      defeater: Sequence[float], filename: PathLike):
        """
        导出逐实例得分

        Parameters:
        -----------
        ids : Sequence[str]
            实例 id
        base, supporter, defeater : Sequence[float]
            s(C,E)、s(C⊕A,E)、s(C⊕D,E)
        filename : str or Path
            输出 CSV
        """
        with open(filename, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(SCORES_HEADER)
            for row in zip(ids, base, supporter, defeater):
                writer.writerow([row[0]] + [repr(float(v)) for v in row[1:]])
        logger.info("Scores written to %s", filename)

    @staticmethod
    def export_kde(curves: Dict[str, DensityCurve], filename: PathLike):
        """导出共享网格上的三条密度曲线"""
        grid = curves['base'].grid
        with open(filename, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(KDE_HEADER)
            for i, x in enumerate(grid):
                writer.writerow([repr(float(x))] + [repr(float(curves[k].density[i]))
                                                    for k in ('base', 'supporter', 'defeater')])
        logger.info("KDE curves written to %s", filename)

    @staticmethod
    def export_summary(lines: Sequence[str], filename: PathLike):
        """导出摘要文本"""
        Path(filename).write_text("\n".join(lines) + "\n", encoding="utf-8")
        logger.info("Summary written to %s", filename)

    @staticmethod
    def export_shift_plot(curves: Dict[str, DensityCurve], filename: PathLike, title: str = ""):
        """三条密度曲线叠加的 SVG 图"""
        plt = _pyplot()
        fig, ax = plt.subplots(figsize=(6, 4))
        styles = {'base': ('C0', 's(C,E)'), 'supporter': ('C2', 's(C⊕A,E)'), 'defeater': ('C3', 's(C⊕D,E)')}
        for key, (color, label) in styles.items():
            curve = curves[key]
            ax.plot(curve.grid, curve.density, color=color, label=label)
            ax.fill_between(curve.grid, curve.density, color=color, alpha=0.15)
        ax.set_xlabel("causal strength")
        ax.set_ylabel("density")
        if title:
            ax.set_title(title)
        ax.legend()
        fig.tight_layout()
        fig.savefig(filename, format="svg", metadata={'Date': None})
        plt.close(fig)
        logger.info("Shift plot written to %s", filename)

    @staticmethod
    def export_heatmap(matrices: Dict[str, np.ndarray], cause_tokens: Sequence[str],
                       effect_tokens: Sequence[str], filename: PathLike, title: str = ""):
        """
        M / A / S 三个矩阵并排的热图

        Parameters:
        -----------
        matrices : dict
            {'M': ..., 'A': ..., 'S': ...}，均为 n×m
        cause_tokens, effect_tokens : Sequence[str]
            行、列标签
        """
        plt = _pyplot()
        names = [k for k in ('M', 'A', 'S') if k in matrices]
        n, m = matrices[names[0]].shape
        fig, axes = plt.subplots(1, len(names), figsize=(3 + 0.5 * m * len(names), 2 + 0.4 * n))
        axes = np.atleast_1d(axes)
        for ax, name in zip(axes, names):
            data = matrices[name]
            image = ax.imshow(data, cmap="viridis", aspect="auto")
            ax.set_title(name)
            ax.set_xticks(range(m))
            ax.set_xticklabels(effect_tokens, rotation=90, fontsize=7)
            ax.set_yticks(range(n))
            ax.set_yticklabels(cause_tokens, fontsize=7)
            fig.colorbar(image, ax=ax, fraction=0.046, pad=0.04)
        if title:
            fig.suptitle(title)
        fig.tight_layout()
        fig.savefig(filename, format="svg", metadata={'Date': None})
        plt.close(fig)
        logger.info("Heatmap written to %s", filename)


def dataset_statistics(instances: Sequence[DefeasibleInstance]) -> List[List]:
    """按领域、时间间隔统计实例数（含零计数的类别）"""
    domains = Counter(inst.domain for inst in instances)
    intervals = Counter(inst.time_interval for inst in instances)
    rows = [["total", "all", len(instances)]]
    rows += [["domain", d, domains.get(d, 0)] for d in DOMAINS]
    rows += [["time_interval", t, intervals.get(t, 0)] for t in TIME_INTERVALS]
    return rows


def export_dataset_statistics(instances: Sequence[DefeasibleInstance], filename: PathLike) -> List[List]:
    """写出数据集统计 CSV（category,value,count）"""
    rows = dataset_statistics(instances)
    with open(filename, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(STATS_HEADER)
        writer.writerows(rows)
    logger.info("Dataset statistics written to %s", filename)
    return rows


def format_matrix(matrix: np.ndarray, row_labels: Sequence[str], col_labels: Sequence[str],
                  precision: int = 3) -> str:
    """矩阵的文本表格"""
    width = max(precision + 3, *(len(c) for c in col_labels))
    label_width = max(len(r) for r in row_labels)
    lines = [" " * label_width + " " + " ".join(c.rjust(width) for c in col_labels)]
    for label, row in zip(row_labels, matrix):
        lines.append(label.ljust(label_width) + " " + " ".join(f"{v:.{precision}f}".rjust(width) for v in row))
    return "\n".join(lines)
