"""
异常类型定义

校验类错误（配置、数据文件）与运行期错误分开，命令行据此选择退出码。
"""
from typing import Optional


class CausalMetricError(Exception):
    """所有异常的基类"""


# ========== 校验类错误（退出码 1） ==========

class ValidationError(CausalMetricError):
    """输入或配置不合法"""


class ConfigError(ValidationError):
    """配置错误"""


class DataError(ValidationError):
    """数据文件错误，携带行号与字段名"""

    def __init__(self, message: str, line: Optional[int] = None, field: Optional[str] = None,
                 path: Optional[str] = None):
        self.line = line
        self.field = field
        self.path = path
        location = []
        if path is not None:
            location.append(str(path))
        if line is not None:
            location.append(f"line {line}")
        if field is not None:
            location.append(f"field '{field}'")
        prefix = ", ".join(location)
        super().__init__(f"{prefix}: {message}" if prefix else message)


# ========== 运行期错误（退出码 2） ==========

class DimensionError(CausalMetricError, ValueError):
    """矩阵或向量维度不匹配"""


class NumericError(CausalMetricError):
    """出现非有限数值"""

    def __init__(self, message: str, coordinate: Optional[int] = None):
        self.coordinate = coordinate
        super().__init__(message)


class TokenizationError(CausalMetricError, ValueError):
    """分词失败（空文本、片段被截断为空）"""


class CheckpointError(CausalMetricError):
    """检查点文件损坏、版本或词表不匹配"""


class TrainingError(CausalMetricError):
    """训练过程中出现非有限损失"""

    def __init__(self, message: str, step: Optional[int] = None, example_index: Optional[int] = None):
        self.step = step
        self.example_index = example_index
        super().__init__(message)


class CtcwParseError(CausalMetricError):
    """CTCW 回复解析失败，携带出错的行"""

    def __init__(self, message: str, line: Optional[str] = None):
        self.line = line
        super().__init__(message if line is None else f"{message}: {line!r}")


class EmptyInterventionSetError(CausalMetricError):
    """ROCK 干预集合经过倾向性过滤后为空"""


class ProviderError(CausalMetricError):
    """语言模型服务调用失败"""


class EvaluationError(CausalMetricError):
    """评估无法完成"""
