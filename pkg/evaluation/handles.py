"""
指标统一接口

所有指标都包装成 (cause, addition, effect) -> float 的可调用对象。
role_aware 的指标另外接收补充语句的角色（'supporter' / 'defeater'）。
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, TypeVar

from core.config import METRIC_NAMES
from metrics.ceq import CeqMetric
from metrics.ctcw import TEMPLATE_AND_LATER, TEMPLATE_FACT, CtcwMetric

logger = logging.getLogger(__name__)

ScoreFn = Callable[[str, Optional[str], str], float]
T = TypeVar('T')
R = TypeVar('R')


@dataclass(frozen=True)
class MetricHandle:
    """带名称的打分函数"""
    name: str
    fn: ScoreFn
    role_aware: bool = False

    def __post_init__(self):
        if self.name not in METRIC_NAMES:
            raise ValueError(f"Unknown metric name: {self.name!r}")

    def __call__(self, cause: str, addition: Optional[str], effect: str, role: Optional[str] = None) -> float:
        if self.role_aware:
            return float(self.fn(cause, addition, effect, role=role))
        return float(self.fn(cause, addition, effect))


def cesar_handle(model) -> MetricHandle:
    """CESAR 模型"""
    return MetricHandle('cesar', model.score_value)


def ceq_handle(stats, config=None) -> MetricHandle:
    """CEQ 共现统计"""
    return MetricHandle('ceq', CeqMetric(stats, config))


def rock_handle(oracle) -> MetricHandle:
    """ROCK 表驱动组件"""
    return MetricHandle('rock', oracle)


def ctcw_handle(provider, template: Optional[str] = None, clamp: bool = True,
                supporter_template: str = TEMPLATE_FACT, defeater_template: str = TEMPLATE_AND_LATER) -> MetricHandle:
    """CTCW 聊天模型，支持者与反驳者按各自的模板拼接"""
    metric = CtcwMetric(provider, template=template, clamp=clamp,
                        supporter_template=supporter_template, defeater_template=defeater_template)
    return MetricHandle('ctcw', metric, role_aware=True)


def parallel_map(fn: Callable[[T], R], items: Iterable[T], jobs: int = 1) -> List[R]:
    """按输入顺序返回结果；jobs > 1 时用线程池"""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))
