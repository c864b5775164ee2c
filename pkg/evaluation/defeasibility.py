"""
支持者 / 反驳者准确率

支持者正确：s(C⊕A, E) > s(C, E)；反驳者正确：s(C⊕D, E) < s(C, E)。
lenient 策略下相等也算正确。
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from core.config import TIE_POLICIES
from core.errors import CausalMetricError, EvaluationError
from evaluation.handles import MetricHandle, parallel_map
from model.records import DefeasibleInstance

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class InstanceScores:
    """一个实例的三个得分"""
    id: str
    base: float
    supporter: float
    defeater: float

    @property
    def supporter_delta(self) -> float:
        return self.supporter - self.base

    @property
    def defeater_delta(self) -> float:
        return self.defeater - self.base


def geometric_mean(supporter_accuracy: float, defeater_accuracy: float) -> float:
    """两类准确率的几何平均"""
    return math.sqrt(supporter_accuracy * defeater_accuracy)


def format_percent(value: float) -> str:
    """一位小数的百分数"""
    return f"{100.0 * value:.1f}"


@dataclass
class DefeasibilityReport:
    """支持者 / 反驳者评估结果"""
    supporter_accuracy: float
    defeater_accuracy: float
    tie_count: int = 0
    deltas: List[Tuple[str, float, float]] = field(default_factory=list)
    excluded: List[str] = field(default_factory=list)
    tie_policy: str = 'strict'
    metric: str = ''

    @property
    def geometric_mean(self) -> float:
        return geometric_mean(self.supporter_accuracy, self.defeater_accuracy)

    @property
    def scored(self) -> int:
        """参与计分的实例数"""
        return len(self.deltas)

    @classmethod
    def from_accuracies(cls, supporter_accuracy: float, defeater_accuracy: float, **kwargs) -> 'DefeasibilityReport':
        """由两类准确率直接构造（用于汇总已发表的结果）"""
        for value in (supporter_accuracy, defeater_accuracy):
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"Accuracy must lie in [0, 1], got {value}")
        return cls(supporter_accuracy, defeater_accuracy, **kwargs)

    def table_row(self) -> str:
        """supporter / defeater / geometric mean 表格行"""
        return " | ".join([
            self.metric or "-",
            format_percent(self.supporter_accuracy),
            format_percent(self.defeater_accuracy),
            format_percent(self.geometric_mean)
        ])

    def to_dict(self) -> Dict:
        """转换为字典"""
        return {
            'metric': self.metric,
            'tie_policy': self.tie_policy,
            'supporter_accuracy': self.supporter_accuracy,
            'defeater_accuracy': self.defeater_accuracy,
            'geometric_mean': self.geometric_mean,
            'tie_count': self.tie_count,
            'scored': self.scored,
            'excluded': list(self.excluded)
        }


def score_instances(metric: MetricHandle, data: Sequence[DefeasibleInstance],
                    jobs: int = 1) -> Tuple[List[InstanceScores], List[str]]:
    """
    逐实例计算 s(C,E)、s(C⊕A,E)、s(C⊕D,E)

    单个实例失败时记录日志并排除。

    Returns:
    --------
    scores : List[InstanceScores]
        成功的实例，顺序与输入一致
    excluded : List[str]
        失败实例的 id
    """
    def one(instance: DefeasibleInstance) -> Optional[InstanceScores]:
        try:
            return InstanceScores(
                id=instance.id,
                base=metric(instance.cause, None, instance.effect),
                supporter=metric(instance.cause, instance.supporter, instance.effect, role='supporter'),
                defeater=metric(instance.cause, instance.defeater, instance.effect, role='defeater')
            )
        except (CausalMetricError, ValueError) as e:
            logger.warning("Instance %s excluded: %s", instance.id, e)
            return None

    results = parallel_map(one, data, jobs)
    scores = [r for r in results if r is not None]
    excluded = [inst.id for inst, r in zip(data, results) if r is None]
    return scores, excluded


def evaluate_defeasibility(metric: MetricHandle, data: Sequence[DefeasibleInstance],
                           tie_policy: str = 'strict', jobs: int = 1) -> DefeasibilityReport:
    """
    计算支持者、反驳者准确率及几何平均

    Parameters:
    -----------
    metric : MetricHandle
        打分函数
    data : Sequence[DefeasibleInstance]
        实例，不能为空
    tie_policy : str
        'strict'：相等算错误；'lenient'：相等算正确
    jobs : int
        并行线程数

    Returns:
    --------
    DefeasibilityReport
        评估结果
    """
    if tie_policy not in TIE_POLICIES:
        raise ValueError(f"Unknown tie_policy: {tie_policy!r}")
    if not data:
        raise EvaluationError("No instances to evaluate")
    scores, excluded = score_instances(metric, data, jobs)
    if not scores:
        raise EvaluationError(f"All {len(data)} instances failed to score")

    lenient = tie_policy == 'lenient'
    supporter_correct = defeater_correct = ties = 0
    deltas = []
    for item in scores:
        d_sup, d_def = item.supporter_delta, item.defeater_delta
        deltas.append((item.id, d_sup, d_def))
        ties += int(d_sup == 0) + int(d_def == 0)
        supporter_correct += int(d_sup > 0 or (lenient and d_sup == 0))
        defeater_correct += int(d_def < 0 or (lenient and d_def == 0))

    report = DefeasibilityReport(
        supporter_accuracy=supporter_correct / len(scores),
        defeater_accuracy=defeater_correct / len(scores),
        tie_count=ties,
        deltas=deltas,
        excluded=excluded,
        tie_policy=tie_policy,
        metric=metric.name
    )
    logger.info("%s: supporter %s, defeater %s, geometric mean %s (%d scored, %d excluded, %d ties)",
                metric.name, format_percent(report.supporter_accuracy),
                format_percent(report.defeater_accuracy), format_percent(report.geometric_mean),
                len(scores), len(excluded), ties)
    return report
