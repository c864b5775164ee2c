"""
数据记录类 - 可废止实例、训练样本、COPA 实例、增强源记录
"""
from dataclasses import dataclass
from typing import Dict, Optional

DOMAINS = (
    'environment', 'business', 'science_technology', 'health', 'work',
    'politics', 'education', 'sports', 'entertainment', 'travel'
)

# 数据文件中常见的写法
DOMAIN_ALIASES = {
    'science/technology': 'science_technology',
    'science': 'science_technology',
    'technology': 'science_technology',
    'science & technology': 'science_technology',
}

TIME_INTERVALS = ('months', 'years', 'decades', 'centuries')


def normalize_domain(value: str) -> Optional[str]:
    """领域标签规范化，无法识别时返回 None"""
    key = value.strip().lower()
    key = DOMAIN_ALIASES.get(key, key)
    return key if key in DOMAINS else None


def normalize_time_interval(value: str) -> Optional[str]:
    """时间间隔规范化（允许 "years later" 写法）"""
    key = value.strip().lower()
    if key.endswith(" later"):
        key = key[:-len(" later")].strip()
    return key if key in TIME_INTERVALS else None


def _require_text(name: str, value) -> str:
    if not isinstance(value, str) or not value.strip():
        raise ValueError(f"{name} must be a non-empty string")
    return value


@dataclass(frozen=True)
class DefeasibleInstance:
    """可废止因果实例：原因、结果、时间间隔、支持者、反驳者"""
    id: str
    domain: str
    cause: str
    effect: str
    time_interval: str
    supporter: str
    defeater: str

    def __post_init__(self):
        for name in ('id', 'cause', 'effect', 'supporter', 'defeater'):
            _require_text(name, getattr(self, name))
        if self.domain not in DOMAINS:
            raise ValueError(f"Unknown domain: {self.domain!r}")
        if self.time_interval not in TIME_INTERVALS:
            raise ValueError(f"Unknown time_interval: {self.time_interval!r}")

    def to_dict(self) -> Dict:
        """转换为字典"""
        return {
            'id': self.id,
            'domain': self.domain,
            'cause': self.cause,
            'effect': self.effect,
            'time_interval': self.time_interval,
            'supporter': self.supporter,
            'defeater': self.defeater
        }


@dataclass(frozen=True)
class TrainingExample:
    """训练样本 (C [⊕ addition], E) -> target"""
    cause: str
    effect: str
    target: float
    addition: Optional[str] = None

    def __post_init__(self):
        _require_text('cause', self.cause)
        _require_text('effect', self.effect)
        if self.addition is not None:
            _require_text('addition', self.addition)
        if not 0.0 <= float(self.target) <= 1.0:
            raise ValueError(f"target must lie in [0, 1], got {self.target}")

    def to_dict(self) -> Dict:
        """转换为字典"""
        return {
            'cause': self.cause,
            'addition': self.addition,
            'effect': self.effect,
            'target': self.target
        }


@dataclass(frozen=True)
class AugmentationRecord:
    """增强源记录：原因、结果、解释 H、相反解释 ¬H、是否因果"""
    cause: str
    effect: str
    is_causal: bool
    explanation: Optional[str] = None
    opposite: Optional[str] = None

    def __post_init__(self):
        _require_text('cause', self.cause)
        _require_text('effect', self.effect)
        if self.explanation is not None:
            _require_text('explanation', self.explanation)
        if self.opposite is not None:
            _require_text('opposite', self.opposite)

    def to_dict(self) -> Dict:
        """转换为字典"""
        return {
            'cause': self.cause,
            'effect': self.effect,
            'explanation': self.explanation,
            'opposite': self.opposite,
            'is_causal': self.is_causal
        }


@dataclass(frozen=True)
class CopaInstance:
    """COPA 二选一实例"""
    premise: str
    ask_for: str
    choice1: str
    choice2: str
    label: int
    id: Optional[str] = None

    def __post_init__(self):
        for name in ('premise', 'choice1', 'choice2'):
            _require_text(name, getattr(self, name))
        if self.ask_for not in ('cause', 'effect'):
            raise ValueError(f"ask_for must be 'cause' or 'effect', got {self.ask_for!r}")
        if self.label not in (1, 2):
            raise ValueError(f"label must be 1 or 2, got {self.label!r}")

    def directed_pairs(self):
        """
        两个选项对应的 (原因, 结果) 有向对

        ask_for=cause 时评估 (choice → premise)，ask_for=effect 时评估 (premise → choice)。
        """
        if self.ask_for == 'cause':
            return (self.choice1, self.premise), (self.choice2, self.premise)
        return (self.premise, self.choice1), (self.premise, self.choice2)

    def to_dict(self) -> Dict:
        """转换为字典"""
        return {
            'premise': self.premise,
            'ask_for': self.ask_for,
            'choice1': self.choice1,
            'choice2': self.choice2,
            'label': self.label
        }
