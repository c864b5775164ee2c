"""核心模块"""
from core.errors import (
    CausalMetricError, ValidationError, ConfigError, DataError, DimensionError,
    NumericError, TokenizationError, CheckpointError, TrainingError,
    CtcwParseError, EmptyInterventionSetError, ProviderError, EvaluationError
)
from core.numerics import (
    DensityCurve, global_softmax, abs_cosine, abs_cosine_matrix,
    finite_diff_gradient, max_relative_error, kde_density, silverman_bandwidth
)
from core.text import (
    EventText, Vocabulary, TokenSequence, Tokenizer, WordTokenizer,
    tokenize, concatenate, pack_pair
)
from core.config import RunConfig, ModelConfig, TrainConfig, TargetLevels, PathsConfig

__all__ = [
    'CausalMetricError', 'ValidationError', 'ConfigError', 'DataError', 'DimensionError',
    'NumericError', 'TokenizationError', 'CheckpointError', 'TrainingError',
    'CtcwParseError', 'EmptyInterventionSetError', 'ProviderError', 'EvaluationError',
    'DensityCurve', 'global_softmax', 'abs_cosine', 'abs_cosine_matrix',
    'finite_diff_gradient', 'max_relative_error', 'kde_density', 'silverman_bandwidth',
    'EventText', 'Vocabulary', 'TokenSequence', 'Tokenizer', 'WordTokenizer',
    'tokenize', 'concatenate', 'pack_pair',
    'RunConfig', 'ModelConfig', 'TrainConfig', 'TargetLevels', 'PathsConfig'
]
