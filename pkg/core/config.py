"""
运行配置 - JSON 配置文件与命令行覆盖
"""
import json
from dataclasses import asdict, dataclass, field, fields, is_dataclass
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Tuple, Union

from core.errors import ConfigError

DEFAULT_SEED = 42

ATTENTION_MODES = ('learned', 'uniform')
EMBEDDER_KINDS = ('lookup', 'mixer', 'fixed')
METRIC_NAMES = ('cesar', 'ceq', 'rock', 'ctcw')
TIE_POLICIES = ('strict', 'lenient')
PROVIDERS = ('mock', 'http')
CTCW_TEMPLATES = ('and', 'fact', 'and_later')
AUGMENT_MODES = ('full', 'imbalanced', 'plain')


@dataclass
class ModelConfig:
    """CESAR 模型超参数"""
    dim: int = 64
    embedder: str = 'lookup'             # lookup / mixer / fixed
    attention_mode: str = 'learned'      # learned / uniform
    include_specials: bool = True        # 计分时保留 [CLS] [SEP]
    max_length: int = 512
    vocab_max_size: Optional[int] = None
    embeddings_path: Optional[str] = None  # fixed 嵌入文件

    def validate(self):
        if self.dim < 1:
            raise ConfigError(f"model.dim must be positive, got {self.dim}")
        if self.embedder not in EMBEDDER_KINDS:
            raise ConfigError(f"model.embedder must be one of {EMBEDDER_KINDS}, got {self.embedder!r}")
        if self.attention_mode not in ATTENTION_MODES:
            raise ConfigError(f"model.attention_mode must be one of {ATTENTION_MODES}, got {self.attention_mode!r}")
        if self.max_length < 5:
            raise ConfigError(f"model.max_length must be at least 5, got {self.max_length}")
        if self.embedder == 'fixed' and not self.embeddings_path:
            raise ConfigError("model.embeddings_path is required for the fixed embedder")


@dataclass
class TrainConfig:
    """训练配置（AdamW + 线性衰减 + MSE）"""
    epochs: int = 4
    learning_rate: float = 1e-5
    lr_scale: float = 1.0                # 实际学习率 = learning_rate * lr_scale
    warmup_steps: int = 0
    weight_decay: float = 0.01
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    batch_size: int = 16
    seed: Optional[int] = None           # None 时沿用顶层 seed

    @property
    def effective_learning_rate(self) -> float:
        return self.learning_rate * self.lr_scale

    def validate(self):
        if self.epochs < 1:
            raise ConfigError(f"train.epochs must be >= 1, got {self.epochs}")
        if not self.learning_rate > 0 or not self.lr_scale > 0:
            raise ConfigError("train.learning_rate and train.lr_scale must be positive")
        if self.batch_size < 1:
            raise ConfigError(f"train.batch_size must be >= 1, got {self.batch_size}")
        if self.warmup_steps < 0:
            raise ConfigError("train.warmup_steps must be >= 0")
        if not (0.0 <= self.beta1 < 1.0 and 0.0 <= self.beta2 < 1.0):
            raise ConfigError("train.beta1 and train.beta2 must lie in [0, 1)")
        if self.weight_decay < 0 or not self.eps > 0:
            raise ConfigError("train.weight_decay must be >= 0 and train.eps > 0")


@dataclass
class TargetLevels:
    """增强训练集的目标强度"""
    explained: float = 1.0     # (C ⊕ H, E)
    plain: float = 0.7         # (C, E)
    opposite: float = 0.2      # (C ⊕ ¬H, E)
    non_causal: float = 0.0    # 非因果对

    def values(self) -> Tuple[float, ...]:
        return (self.explained, self.plain, self.opposite, self.non_causal)

    def contains(self, target: float, tol: float = 1e-12) -> bool:
        """目标值是否属于配置集合"""
        return any(abs(target - v) <= tol for v in self.values())

    def validate(self):
        for value in self.values():
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"Target levels must lie in [0, 1], got {value}")


@dataclass
class PathsConfig:
    """数据与输出路径"""
    data: Optional[str] = None
    model: Optional[str] = None
    corpus: Optional[str] = None
    fixtures: Optional[str] = None
    rock_table: Optional[str] = None
    vocab: Optional[str] = None
    input: Optional[str] = None
    output: Optional[str] = None
    out_dir: Optional[str] = None


@dataclass
class RunConfig:
    """一次命令行运行的完整配置"""
    model: ModelConfig = field(default_factory=ModelConfig)
    train: TrainConfig = field(default_factory=TrainConfig)
    targets: TargetLevels = field(default_factory=TargetLevels)
    paths: PathsConfig = field(default_factory=PathsConfig)
    metric: str = 'cesar'
    tie_policy: str = 'strict'
    provider: str = 'mock'
    template: Optional[str] = None         # 给定时支持者与反驳者共用
    supporter_template: str = 'fact'
    defeater_template: str = 'and_later'
    clamp: bool = True
    ceq_alpha: float = 0.66
    augment_mode: str = 'full'
    jobs: int = 1
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.train.seed is None:
            self.train.seed = self.seed

    def to_dict(self) -> Dict:
        """转换为字典"""
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict) -> 'RunConfig':
        """从字典创建，未知键报错"""
        return _build(cls, data, "")

    @classmethod
    def from_json(cls, path: Union[str, Path]) -> 'RunConfig':
        """从 JSON 文件加载"""
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except FileNotFoundError as e:
            raise ConfigError(f"Config file not found: {path}") from e
        except json.JSONDecodeError as e:
            raise ConfigError(f"Config file {path} is not valid JSON: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError(f"Config file {path} must contain a JSON object")
        return cls.from_dict(data)

    def with_overrides(self, overrides: Dict[str, Any]) -> 'RunConfig':
        """
        应用点号路径的覆盖值，None 表示不覆盖

        Parameters:
        -----------
        overrides : dict
            例如 {'train.epochs': 2, 'metric': 'ceq'}
        """
        data = self.to_dict()
        for dotted, value in overrides.items():
            if value is None:
                continue
            node = data
            keys = dotted.split(".")
            for key in keys[:-1]:
                if key not in node or not isinstance(node[key], dict):
                    raise ConfigError(f"Unknown config section: {dotted}")
                node = node[key]
            if keys[-1] not in node:
                raise ConfigError(f"Unknown config key: {dotted}")
            node[keys[-1]] = value
        return RunConfig.from_dict(data)

    def validate(self, required_paths: Iterable[str] = ()):
        """
        校验取值范围与必需路径

        Parameters:
        -----------
        required_paths : Iterable[str]
            必须存在的 paths 字段名
        """
        self.model.validate()
        self.train.validate()
        self.targets.validate()
        _check_choice('metric', self.metric, METRIC_NAMES)
        _check_choice('tie_policy', self.tie_policy, TIE_POLICIES)
        _check_choice('provider', self.provider, PROVIDERS)
        if self.template is not None:
            _check_choice('template', self.template, CTCW_TEMPLATES)
        _check_choice('supporter_template', self.supporter_template, CTCW_TEMPLATES)
        _check_choice('defeater_template', self.defeater_template, CTCW_TEMPLATES)
        _check_choice('augment_mode', self.augment_mode, AUGMENT_MODES)
        if not self.ceq_alpha > 0:
            raise ConfigError(f"ceq_alpha must be positive, got {self.ceq_alpha}")
        if self.jobs < 1:
            raise ConfigError(f"jobs must be >= 1, got {self.jobs}")
        for name in required_paths:
            value = getattr(self.paths, name)
            if value is None:
                raise ConfigError(f"Missing required path: --{name.replace('_', '-')}")
            if not Path(value).exists():
                raise ConfigError(f"Path does not exist: {value} ({name})")


def _check_choice(name: str, value: str, choices: Tuple[str, ...]):
    if value not in choices:
        raise ConfigError(f"{name} must be one of {choices}, got {value!r}")


def _build(cls, data: Dict, prefix: str):
    """递归构建嵌套 dataclass"""
    if not isinstance(data, dict):
        raise ConfigError(f"Config section {prefix or 'root'} must be an object")
    known = {f.name: f for f in fields(cls)}
    kwargs = {}
    for key, value in data.items():
        if key not in known:
            raise ConfigError(f"Unknown config key: {prefix}{key}")
        default = known[key].default_factory() if callable(known[key].default_factory) else None
        if default is not None and is_dataclass(default):
            kwargs[key] = _build(type(default), value, f"{prefix}{key}.")
        else:
            kwargs[key] = value
    return cls(**kwargs)
