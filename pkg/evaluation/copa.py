"""
COPA 二选一准确率
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from core.errors import CausalMetricError, EvaluationError
from evaluation.handles import MetricHandle, parallel_map
from model.records import CopaInstance

logger = logging.getLogger(__name__)


@dataclass
class CopaReport:
    """COPA 评估结果"""
    correct: int
    total: int
    excluded: List[str] = field(default_factory=list)
    metric: str = ''

    @property
    def accuracy(self) -> float:
        return self.correct / self.total if self.total else 0.0

    def to_dict(self) -> Dict:
        """转换为字典"""
        return {
            'metric': self.metric,
            'accuracy': self.accuracy,
            'correct': self.correct,
            'total': self.total,
            'excluded': list(self.excluded)
        }


def score_copa(metric: MetricHandle, data: Sequence[CopaInstance], jobs: int = 1) -> CopaReport:
    """
    逐实例比较两个选项的有向得分

    正确当且仅当标注选项的得分严格大于另一选项。
    """
    if not data:
        raise EvaluationError("No COPA instances to evaluate")

    def one(instance: CopaInstance) -> Optional[Tuple[float, float]]:
        try:
            (c1, e1), (c2, e2) = instance.directed_pairs()
            return metric(c1, None, e1), metric(c2, None, e2)
        except (CausalMetricError, ValueError) as e:
            logger.warning("COPA instance %s excluded: %s", instance.id, e)
            return None

    results = parallel_map(one, data, jobs)
    correct = total = 0
    excluded = []
    for instance, result in zip(data, results):
        if result is None:
            excluded.append(str(instance.id))
            continue
        chosen, other = (result[0], result[1]) if instance.label == 1 else (result[1], result[0])
        correct += int(chosen > other)
        total += 1
    if total == 0:
        raise EvaluationError(f"All {len(data)} COPA instances failed to score")
    report = CopaReport(correct=correct, total=total, excluded=excluded, metric=metric.name)
    logger.info("%s COPA accuracy: %.1f (%d/%d)", metric.name, 100 * report.accuracy, correct, total)
    return report


def evaluate_copa(metric: MetricHandle, data: Sequence[CopaInstance], jobs: int = 1) -> float:
    """COPA 准确率"""
    return score_copa(metric, data, jobs).accuracy
