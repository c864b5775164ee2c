"""
ROCK - 基于干预的因果强度

s(C→E) ≈ f(C, E) − mean_{A∈𝒜′} f(A, E)
𝒜′ = {A ∈ 𝒜 : (1/|𝒳|) ‖q(·; A) − q(·; C)‖₂ ≤ ε}

先后关系打分器 f、干预集合 𝒜 与倾向度 q 都是注入的接口；
TableOracle 提供由 JSON 表驱动的确定性实现。
"""
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union
import numpy as np

from core.errors import DataError, EmptyInterventionSetError, NumericError

logger = logging.getLogger(__name__)

PrecedenceScorer = Callable[[str, str], float]
Propensity = Callable[[str, str], float]


@dataclass
class RockInputs:
    """一次 ROCK 打分的注入组件"""
    precedence: PrecedenceScorer
    interventions: Sequence[str]
    propensity: Optional[Propensity] = None
    confounders: Sequence[str] = field(default_factory=list)
    epsilon: float = 0.1

    def __post_init__(self):
        if not self.epsilon >= 0:
            raise ValueError(f"epsilon must be >= 0, got {self.epsilon}")
        if self.confounders and self.propensity is None:
            raise ValueError("A propensity function is required when confounders are given")


def _checked(value: float, what: str) -> float:
    value = float(value)
    if not np.isfinite(value) or not 0.0 <= value <= 1.0:
        raise NumericError(f"{what} must lie in [0, 1], got {value}")
    return value


def filter_interventions(inputs: RockInputs, cause: str) -> List[str]:
    """
    按倾向度 L2 距离筛选干预

    没有混杂因子时不做筛选。
    """
    if not inputs.confounders:
        return list(inputs.interventions)
    q_cause = np.array([inputs.propensity(x, cause) for x in inputs.confounders], dtype=np.float64)
    kept = []
    for candidate in inputs.interventions:
        q_candidate = np.array([inputs.propensity(x, candidate) for x in inputs.confounders], dtype=np.float64)
        distance = np.linalg.norm(q_candidate - q_cause) / len(inputs.confounders)
        if distance <= inputs.epsilon:
            kept.append(candidate)
    return kept


def rock_score(inputs: RockInputs, cause: str, effect: str) -> float:
    """
    计算 ROCK 得分

    Returns:
    --------
    float
        [−1, 1] 内的得分

    Raises:
    -------
    EmptyInterventionSetError
        筛选后没有干预
    """
    if not inputs.interventions:
        raise EmptyInterventionSetError(f"No interventions supplied for cause {cause!r}")
    kept = filter_interventions(inputs, cause)
    if not kept:
        raise EmptyInterventionSetError(
            f"All {len(inputs.interventions)} interventions were filtered out at epsilon={inputs.epsilon}")
    base = _checked(inputs.precedence(cause, effect), "Precedence f(C, E)")
    contrast = [_checked(inputs.precedence(a, effect), "Precedence f(A, E)") for a in kept]
    return base - float(np.mean(contrast))


def _key(text: str) -> str:
    return " ".join(text.lower().split())


class TableOracle:
    """
    表驱动的 ROCK 组件

    JSON 结构：
        default_precedence    f 的默认值
        precedence            [{cause, effect, value}, ...]
        interventions         {原因文本: [干预, ...]}
        default_interventions 未列出的原因使用的干预
        confounders           [x, ...]
        propensity            [{confounder, event, value}, ...]
        default_propensity    q 的默认值
        epsilon               筛选阈值
    """

    def __init__(self, precedence: Dict[Tuple[str, str], float], default_precedence: float = 0.5,
                 interventions: Optional[Dict[str, List[str]]] = None,
                 default_interventions: Sequence[str] = (),
                 confounders: Sequence[str] = (),
                 propensity: Optional[Dict[Tuple[str, str], float]] = None,
                 default_propensity: float = 0.5, epsilon: float = 0.1):
        self._precedence = {(_key(c), _key(e)): _checked(v, "Precedence") for (c, e), v in precedence.items()}
        self.default_precedence = _checked(default_precedence, "default_precedence")
        self._interventions = {_key(c): list(v) for c, v in (interventions or {}).items()}
        self.default_interventions = list(default_interventions)
        self.confounders = list(confounders)
        self._propensity = {(_key(x), _key(e)): _checked(v, "Propensity")
                            for (x, e), v in (propensity or {}).items()}
        self.default_propensity = _checked(default_propensity, "default_propensity")
        self.epsilon = float(epsilon)

    def precedence(self, first: str, second: str) -> float:
        """f(first, second)"""
        return self._precedence.get((_key(first), _key(second)), self.default_precedence)

    def propensity(self, confounder: str, event: str) -> float:
        """q(confounder; event)"""
        return self._propensity.get((_key(confounder), _key(event)), self.default_propensity)

    def interventions_for(self, cause: str) -> List[str]:
        """原因对应的干预集合"""
        return self._interventions.get(_key(cause), self.default_interventions)

    def inputs_for(self, cause: str) -> RockInputs:
        """组装一次打分的输入"""
        return RockInputs(precedence=self.precedence,
                          interventions=self.interventions_for(cause),
                          propensity=self.propensity,
                          confounders=self.confounders,
                          epsilon=self.epsilon)

    def __call__(self, cause: str, addition: Optional[str], effect: str) -> float:
        text = cause if addition is None else f"{cause} {addition}"
        inputs = self.inputs_for(cause)
        return rock_score(inputs, text, effect)

    @classmethod
    def from_dict(cls, data: Dict) -> 'TableOracle':
        """从字典创建"""
        try:
            return cls(
                precedence={(row['cause'], row['effect']): row['value'] for row in data.get('precedence', [])},
                default_precedence=data.get('default_precedence', 0.5),
                interventions=data.get('interventions', {}),
                default_interventions=data.get('default_interventions', []),
                confounders=data.get('confounders', []),
                propensity={(row['confounder'], row['event']): row['value'] for row in data.get('propensity', [])},
                default_propensity=data.get('default_propensity', 0.5),
                epsilon=data.get('epsilon', 0.1)
            )
        except KeyError as e:
            raise DataError(f"ROCK table row is missing {e}", field=str(e).strip("'")) from e
        except (NumericError, TypeError, ValueError) as e:
            raise DataError(f"Invalid ROCK table: {e}") from e

    @classmethod
    def from_json(cls, path: Union[str, Path]) -> 'TableOracle':
        """从 JSON 文件加载"""
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise DataError(f"Cannot read ROCK table: {e}", path=str(path)) from e
        return cls.from_dict(data)
