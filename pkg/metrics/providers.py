"""
CTCW 聊天模型提供者 - 离线 mock 与 HTTP chat-completion 接口
"""
import hashlib
import json
import logging
import os
import threading
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Callable, Dict, Optional, Union

from core.errors import ConfigError, DataError, ProviderError
from metrics.ctcw import (
    CONTRASTIVE_WORDS, OPPOSITE_PROMPT, OPPOSITE_TEMPERATURE, ProbabilityTable, opposite_prompt
)

logger = logging.getLogger(__name__)

API_URL_ENV = "CTCW_API_URL"
API_KEY_ENV = "CTCW_API_KEY"
DEFAULT_MODEL = "gpt-3.5-turbo"
DEFAULT_TEMPERATURE = 0.9


def prompt_digest(prompt: str) -> str:
    """提示文本的 sha256（UTF-8）"""
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()


def format_table(table: ProbabilityTable) -> str:
    """把概率表写成 "- word: value" 列表"""
    return "\n".join(f"- {w}: {getattr(table, w)!r}" for w in CONTRASTIVE_WORDS)


class ChatProvider(ABC):
    """聊天模型接口"""

    @abstractmethod
    def complete(self, prompt: str, temperature: float = DEFAULT_TEMPERATURE) -> str:
        """
        返回模型对单条用户消息的回复

        Parameters:
        -----------
        prompt : str
            用户消息
        temperature : float
            采样温度
        """
        pass


# mock 相反解释使用的反义替换
_ANTONYMS = {
    'increases': 'decreases', 'decreases': 'increases',
    'increase': 'decrease', 'decrease': 'increase',
    'causes': 'prevents', 'prevents': 'causes',
    'cause': 'prevent', 'prevent': 'cause',
    'more': 'less', 'less': 'more',
    'helps': 'hinders', 'hinders': 'helps',
    'brings': 'halts', 'halts': 'brings',
    'leads': 'fails', 'raises': 'lowers', 'lowers': 'raises',
    'join': 'avoid', 'dense': 'sparse', 'sparse': 'dense',
}


def mock_opposite(sentence: str) -> str:
    """确定性的相反改写：替换第一个已知反义词，否则加否定前缀"""
    words = sentence.strip().strip('"').split()
    for i, word in enumerate(words):
        core = word.rstrip(".,;:!?")
        replacement = _ANTONYMS.get(core.lower())
        if replacement:
            if core[:1].isupper():
                replacement = replacement.capitalize()
            words[i] = replacement + word[len(core):]
            return " ".join(words)
    text = " ".join(words)
    return f"It is not true that {text[:1].lower()}{text[1:]}"


class MockProvider(ChatProvider):
    """
    离线提供者，回复只由提示文本决定

    按提示的 sha256 在夹具中查找概率表；找不到时由摘要派生一张
    概率和不超过 1 的表（strict 模式下报错）。相反解释提示返回
    确定性的反义改写。
    """

    def __init__(self, fixtures: Optional[Dict[str, ProbabilityTable]] = None, strict: bool = False,
                 fallback: Optional[Callable[[str], str]] = None):
        self.fixtures = dict(fixtures or {})
        self.strict = strict
        self.fallback = fallback
        self.call_count = 0

    @classmethod
    def from_jsonl(cls, path: Union[str, Path], strict: bool = False) -> 'MockProvider':
        """
        加载夹具文件

        每行 {prompt_sha256, after, before, therefore, because}。
        """
        fixtures: Dict[str, ProbabilityTable] = {}
        with open(path, encoding="utf-8") as source:
            for linenum, line in enumerate(source, 1):
                if not line.strip():
                    continue
                try:
                    record = json.loads(line)
                except json.JSONDecodeError as e:
                    raise DataError(f"Invalid JSON: {e}", line=linenum, path=str(path)) from e
                for name in ('prompt_sha256',) + CONTRASTIVE_WORDS:
                    if name not in record:
                        raise DataError("Missing field", line=linenum, field=name, path=str(path))
                try:
                    table = ProbabilityTable(**{w: float(record[w]) for w in CONTRASTIVE_WORDS})
                except (TypeError, ValueError) as e:
                    raise DataError(str(e), line=linenum, path=str(path)) from e
                fixtures[record['prompt_sha256']] = table
        logger.info("Loaded %d CTCW fixtures from %s", len(fixtures), path)
        return cls(fixtures, strict=strict)

    def table_for(self, prompt: str) -> ProbabilityTable:
        """提示对应的概率表"""
        digest = prompt_digest(prompt)
        if digest in self.fixtures:
            return self.fixtures[digest]
        if self.strict:
            raise ProviderError(f"No fixture for prompt sha256 {digest}")
        if self.fixtures:
            logger.warning("No fixture for prompt sha256 %s, using a derived table", digest)
        # 每个值取 0.00..0.25，四项之和不超过 1
        raw = bytes.fromhex(digest[:8])
        values = {w: (b % 26) / 100 for w, b in zip(CONTRASTIVE_WORDS, raw)}
        return ProbabilityTable(**values)

    def complete(self, prompt: str, temperature: float = DEFAULT_TEMPERATURE) -> str:
        self.call_count += 1
        if prompt.startswith(OPPOSITE_PROMPT):
            if self.fallback is not None:
                return self.fallback(prompt)
            return mock_opposite(prompt[len(OPPOSITE_PROMPT):].strip())
        return format_table(self.table_for(prompt))


class HttpProvider(ChatProvider):
    """OpenAI 兼容的 chat-completion 接口，同一实例上的请求串行执行"""

    def __init__(self, base_url: Optional[str] = None, api_key: Optional[str] = None,
                 model: str = DEFAULT_MODEL, timeout: float = 60.0):
        self.base_url = base_url or os.environ.get(API_URL_ENV)
        self.api_key = api_key or os.environ.get(API_KEY_ENV)
        if not self.base_url:
            raise ConfigError(f"{API_URL_ENV} is not set")
        if not self.api_key:
            raise ConfigError(f"{API_KEY_ENV} is not set")
        self.model = model
        self.timeout = timeout
        self._client = None
        self._lock = threading.Lock()

    def _get_client(self):
        if self._client is None:
            try:
                from openai import OpenAI
            except ImportError as e:
                raise ProviderError("The openai package is required for the http provider") from e
            self._client = OpenAI(api_key=self.api_key, base_url=self.base_url, timeout=self.timeout)
        return self._client

    def complete(self, prompt: str, temperature: float = DEFAULT_TEMPERATURE) -> str:
        messages = [{"role": "user", "content": prompt}]
        with self._lock:
            logger.debug("CTCW request: %s", json.dumps(
                {"model": self.model, "temperature": temperature, "messages": messages}))
            try:
                response = self._get_client().chat.completions.create(
                    model=self.model,
                    messages=messages,
                    temperature=temperature,
                )
            except ProviderError:
                raise
            except Exception as e:
                raise ProviderError(f"Chat completion request failed: {e}") from e
            content = response.choices[0].message.content or ""
            logger.debug("CTCW response: %s", content)
        return content


def generate_opposite(provider: ChatProvider, explanation: str) -> str:
    """用提供者生成一句解释的相反解释"""
    text = provider.complete(opposite_prompt(explanation), temperature=OPPOSITE_TEMPERATURE).strip()
    text = text.strip('"').strip()
    if not text:
        raise ProviderError(f"Empty opposite generated for {explanation!r}")
    return text


def create_provider(name: str, fixtures: Optional[Union[str, Path]] = None, strict: bool = False) -> ChatProvider:
    """按名称创建提供者（mock / http）"""
    if name == 'mock':
        if fixtures:
            return MockProvider.from_jsonl(fixtures, strict=strict)
        return MockProvider(strict=strict)
    if name == 'http':
        return HttpProvider()
    raise ConfigError(f"Unknown provider: {name!r}")
