"""
文本处理 - 分词、词表、特殊符号与拼接运算 ⊕
"""
import hashlib
import re
from abc import ABC, abstractmethod
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Union

from core.errors import DataError, TokenizationError

PAD, UNK, CLS, SEP = "[PAD]", "[UNK]", "[CLS]", "[SEP]"
SPECIAL_TOKENS = (PAD, UNK, CLS, SEP)
PAD_ID, UNK_ID, CLS_ID, SEP_ID = 0, 1, 2, 3

# 含特殊符号的最大序列长度
MAX_SEQUENCE_LENGTH = 512

_WORD_PATTERN = re.compile(r"\w+|[^\w\s]")


@dataclass(frozen=True)
class EventText:
    """事件文本（原因、结果、支持者或反驳者）"""
    raw: str

    def __post_init__(self):
        if not isinstance(self.raw, str) or not self.raw.strip():
            raise TokenizationError("Event text must be a non-empty string")

    @classmethod
    def of(cls, value: Union[str, 'EventText']) -> 'EventText':
        """str 与 EventText 统一转换"""
        if isinstance(value, EventText):
            return value
        return cls(value)

    def __str__(self) -> str:
        return self.raw


class Tokenizer(ABC):
    """分词器接口"""

    @abstractmethod
    def split(self, text: str) -> List[str]:
        """把文本切分为词串"""
        pass


class WordTokenizer(Tokenizer):
    """默认分词器：小写化，空白切分，标点单独成词"""

    def split(self, text: str) -> List[str]:
        return _WORD_PATTERN.findall(text.lower())


DEFAULT_TOKENIZER = WordTokenizer()


class Vocabulary:
    """词表 - 词与编号一一对应，0..3 固定为特殊符号"""

    def __init__(self, tokens: Sequence[str]):
        """
        初始化词表

        Parameters:
        -----------
        tokens : Sequence[str]
            按编号排列的词，前四个必须是 [PAD] [UNK] [CLS] [SEP]
        """
        tokens = list(tokens)
        if tuple(tokens[:4]) != SPECIAL_TOKENS:
            raise ValueError(f"Vocabulary must start with {SPECIAL_TOKENS}")
        self._tokens = tokens
        self._index: Dict[str, int] = {}
        for i, token in enumerate(tokens):
            if not token or any(ch.isspace() for ch in token):
                raise ValueError(f"Invalid vocabulary token at id {i}: {token!r}")
            if token in self._index:
                raise ValueError(f"Duplicate vocabulary token: {token!r}")
            self._index[token] = i

    def __len__(self) -> int:
        return len(self._tokens)

    def __contains__(self, token: str) -> bool:
        return token in self._index

    @property
    def tokens(self) -> List[str]:
        """按编号排列的词"""
        return list(self._tokens)

    def id_of(self, token: str) -> int:
        """词 -> 编号，未登录词返回 [UNK]"""
        return self._index.get(token, UNK_ID)

    def token_of(self, token_id: int) -> str:
        """编号 -> 词"""
        return self._tokens[token_id]

    def content_hash(self) -> str:
        """词表内容的 sha256"""
        return hashlib.sha256("\n".join(self._tokens).encode("utf-8")).hexdigest()

    @classmethod
    def build(cls, texts: Iterable[str], max_size: Optional[int] = None,
              tokenizer: Tokenizer = DEFAULT_TOKENIZER) -> 'Vocabulary':
        """
        从语料构建词表

        出现至少一次的词都收录；超过 max_size 时按频次截断，
        同频次按首次出现的先后排序。
        """
        counts: Counter = Counter()
        first_seen: Dict[str, int] = {}
        for text in texts:
            for token in tokenizer.split(text):
                if token in SPECIAL_TOKENS:
                    continue
                counts[token] += 1
                first_seen.setdefault(token, len(first_seen))
        ordered = sorted(counts, key=lambda t: (-counts[t], first_seen[t]))
        if max_size is not None:
            if max_size < len(SPECIAL_TOKENS):
                raise ValueError(f"max_size must be at least {len(SPECIAL_TOKENS)}")
            ordered = ordered[:max_size - len(SPECIAL_TOKENS)]
        return cls(list(SPECIAL_TOKENS) + ordered)

    def save(self, path: Union[str, Path]):
        """保存为 UTF-8 文本，每行一个词，行号即编号"""
        Path(path).write_text("\n".join(self._tokens) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: Union[str, Path]) -> 'Vocabulary':
        """从文本文件加载"""
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        try:
            return cls([line for line in lines if line != ""])
        except ValueError as e:
            raise DataError(str(e), path=str(path)) from e


def tokenize(vocab: Vocabulary, text: Union[str, EventText],
             tokenizer: Tokenizer = DEFAULT_TOKENIZER) -> List[int]:
    """
    分词并映射为编号（不含特殊符号）

    Returns:
    --------
    List[int]
        词编号，未登录词为 [UNK]
    """
    event = EventText.of(text)
    words = tokenizer.split(event.raw)
    if not words:
        raise TokenizationError(f"Text has no tokens: {event.raw!r}")
    return [vocab.id_of(w) for w in words]


def concatenate(cause_ids: Sequence[int], addition_ids: Sequence[int]) -> List[int]:
    """C ⊕ A/D = C [SEP] A/D"""
    if len(cause_ids) == 0 or len(addition_ids) == 0:
        raise TokenizationError("Both operands of concatenation must be non-empty")
    return list(cause_ids) + [SEP_ID] + list(addition_ids)


@dataclass
class TokenSequence:
    """打包后的输入序列"""
    ids: List[int]
    type_ids: List[int]
    attention_mask: List[int] = field(default=None)

    def __post_init__(self):
        if self.attention_mask is None:
            self.attention_mask = [0 if i == PAD_ID else 1 for i in self.ids]
        if not (len(self.ids) == len(self.type_ids) == len(self.attention_mask)):
            raise ValueError("ids, type_ids and attention_mask must have the same length")
        if not self.ids or self.ids[0] != CLS_ID:
            raise ValueError("Sequence must start with [CLS]")
        real = [i for i, m in zip(self.ids, self.attention_mask) if m == 1]
        if real[-1] != SEP_ID:
            raise ValueError("Last non-pad token must be [SEP]")
        for token_id, mask in zip(self.ids, self.attention_mask):
            if (token_id == PAD_ID) != (mask == 0):
                raise ValueError("attention_mask must be 0 exactly on [PAD] positions")

    @property
    def cause_length(self) -> int:
        """原因侧（type 0）非填充长度"""
        return sum(1 for t, m in zip(self.type_ids, self.attention_mask) if m == 1 and t == 0)

    @property
    def effect_length(self) -> int:
        """结果侧（type 1）非填充长度"""
        return sum(1 for t, m in zip(self.type_ids, self.attention_mask) if m == 1 and t == 1)


def pack_pair(cause_ids: Sequence[int], effect_ids: Sequence[int],
              max_length: int = MAX_SEQUENCE_LENGTH, pad_to: Optional[int] = None) -> TokenSequence:
    """
    打包为 [CLS] C [SEP] E [SEP]

    超长时从较长的片段末尾逐个截断（等长时截断结果侧）。

    Parameters:
    -----------
    cause_ids : Sequence[int]
        原因侧编号（可已包含 ⊕ 拼接）
    effect_ids : Sequence[int]
        结果侧编号
    max_length : int
        含特殊符号的最大长度
    pad_to : int, optional
        用 [PAD] 填充到该长度
    """
    cause = list(cause_ids)
    effect = list(effect_ids)
    while len(cause) + len(effect) + 3 > max_length:
        if len(cause) > len(effect):
            cause.pop()
        else:
            effect.pop()
        if not cause or not effect:
            raise TokenizationError(f"A segment became empty after truncation to {max_length} tokens")
    if not cause or not effect:
        raise TokenizationError("Cause and effect segments must be non-empty")
    ids = [CLS_ID] + cause + [SEP_ID] + effect + [SEP_ID]
    type_ids = [0] * (len(cause) + 2) + [1] * (len(effect) + 1)
    if pad_to is not None and pad_to > len(ids):
        extra = pad_to - len(ids)
        ids += [PAD_ID] * extra
        type_ids += [0] * extra
    return TokenSequence(ids=ids, type_ids=type_ids)
