"""
CEQ - 基于语料共现统计的因果强度

cs(w_i, w_j) = Count(w_i, w_j) / (Count(w_i) · Count(w_j)^α)
s(C→E) = Σ cs(w_i, w_j) / (N_C + N_E)
"""
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple
import math

from core.errors import DataError, TokenizationError
from core.text import DEFAULT_TOKENIZER, Tokenizer

logger = logging.getLogger(__name__)


@dataclass
class CeqConfig:
    """CEQ 参数"""
    alpha: float = 0.66

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise ValueError(f"CEQ alpha must be finite and positive, got {self.alpha}")


@dataclass
class CooccurrenceStats:
    """
    词频与原因词-结果词共现频次

    word_count 统计词在所有语句两侧的出现次数；
    pair_count 统计原因侧含 w_i 且结果侧含 w_j 的语句数。
    """
    word_count: Counter = field(default_factory=Counter)
    pair_count: Counter = field(default_factory=Counter)
    source: str = ""
    statements: int = 0

    def cs(self, cause_word: str, effect_word: str, alpha: float) -> float:
        """单个词对的因果强度，任一词频为 0 时为 0"""
        pair = self.pair_count.get((cause_word, effect_word), 0)
        if pair == 0:
            return 0.0
        count_i = self.word_count.get(cause_word, 0)
        count_j = self.word_count.get(effect_word, 0)
        if count_i == 0 or count_j == 0:
            return 0.0
        return pair / (count_i * count_j ** alpha)

    def to_dict(self) -> Dict:
        """转换为字典"""
        return {
            'source': self.source,
            'statements': self.statements,
            'words': len(self.word_count),
            'pairs': len(self.pair_count)
        }


def content_words(text: str, tokenizer: Tokenizer = DEFAULT_TOKENIZER) -> List[str]:
    """分词并去掉标点"""
    return [w for w in tokenizer.split(text) if any(ch.isalnum() for ch in w)]


def build_stats(corpus: Iterable[Tuple[str, str]], source: str = "",
                tokenizer: Tokenizer = DEFAULT_TOKENIZER) -> CooccurrenceStats:
    """
    从因果语句语料统计词频与共现

    Parameters:
    -----------
    corpus : Iterable[Tuple[str, str]]
        (原因, 结果) 语句
    source : str
        语料标识
    """
    stats = CooccurrenceStats(source=source)
    for cause, effect in corpus:
        cause_words = content_words(cause, tokenizer)
        effect_words = content_words(effect, tokenizer)
        stats.word_count.update(cause_words)
        stats.word_count.update(effect_words)
        # 每条语句每个词对只计一次
        for pair in {(wi, wj) for wi in cause_words for wj in effect_words}:
            stats.pair_count[pair] += 1
        stats.statements += 1
    if stats.statements == 0:
        raise DataError("CEQ corpus is empty", path=source or None)
    logger.info("CEQ statistics: %d statements, %d words, %d pairs",
                stats.statements, len(stats.word_count), len(stats.pair_count))
    return stats


def ceq_score(corpus, cause: str, effect: str, config: Optional[CeqConfig] = None,
              tokenizer: Tokenizer = DEFAULT_TOKENIZER) -> float:
    """
    计算 CEQ 得分

    Parameters:
    -----------
    corpus : CooccurrenceStats or Iterable[Tuple[str, str]]
        已统计的语料，或原始 (原因, 结果) 语句
    cause, effect : str
        原因与结果文本
    config : CeqConfig, optional
        α 参数，默认 0.66

    Returns:
    --------
    float
        非负得分
    """
    config = config or CeqConfig()
    stats = corpus if isinstance(corpus, CooccurrenceStats) else build_stats(corpus, tokenizer=tokenizer)
    cause_words = content_words(str(cause), tokenizer)
    effect_words = content_words(str(effect), tokenizer)
    if not cause_words or not effect_words:
        raise TokenizationError("CEQ needs at least one word on each side")
    total = sum(stats.cs(wi, wj, config.alpha) for wi in cause_words for wj in effect_words)
    return total / (len(cause_words) + len(effect_words))


class CeqMetric:
    """CEQ 打分器，补充语句直接拼接到原因文本之后"""

    def __init__(self, stats: CooccurrenceStats, config: Optional[CeqConfig] = None,
                 tokenizer: Tokenizer = DEFAULT_TOKENIZER):
        self.stats = stats
        self.config = config or CeqConfig()
        self.tokenizer = tokenizer

    def __call__(self, cause: str, addition: Optional[str], effect: str) -> float:
        text = cause if addition is None else f"{cause} {addition}"
        return ceq_score(self.stats, text, effect, self.config, self.tokenizer)
