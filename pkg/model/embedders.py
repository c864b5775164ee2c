"""
词嵌入后端 - 可训练查表、查表+自注意力混合层、文件加载的固定嵌入

所有后端都把整条（去掉填充的）序列映射为 (L, d) 的嵌入矩阵，
并提供与 forward 配对的解析反向传播。
"""
import logging
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Dict, Tuple, Union
import numpy as np

from core.errors import DataError, DimensionError
from core.text import Vocabulary

logger = logging.getLogger(__name__)


def glorot_uniform(rng: np.random.Generator, fan_in: int, fan_out: int) -> np.ndarray:
    """Glorot 均匀初始化，范围 ±√(6/(fan_in+fan_out))"""
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out))


class Embedder(ABC):
    """嵌入后端接口"""

    kind = 'base'

    def __init__(self, table: np.ndarray):
        table = np.asarray(table, dtype=np.float64)
        if table.ndim != 2:
            raise DimensionError(f"Embedding table must be 2-dimensional, got shape {table.shape}")
        self.table = table

    @property
    def dim(self) -> int:
        """嵌入维度 d"""
        return self.table.shape[1]

    @property
    def vocab_size(self) -> int:
        """词表大小"""
        return self.table.shape[0]

    def _lookup(self, ids: np.ndarray) -> np.ndarray:
        ids = np.asarray(ids, dtype=np.int64)
        if ids.size and (ids.min() < 0 or ids.max() >= self.vocab_size):
            raise DimensionError(
                f"Token id out of embedder range [0, {self.vocab_size}): {ids.min()}..{ids.max()}")
        return self.table[ids]

    @abstractmethod
    def forward(self, ids: np.ndarray, type_ids: np.ndarray) -> Tuple[np.ndarray, Dict]:
        """
        计算嵌入

        Parameters:
        -----------
        ids : np.ndarray
            非填充位置的词编号 (L,)
        type_ids : np.ndarray
            对应的片段标记 (L,)

        Returns:
        --------
        embeddings : np.ndarray
            (L, d)
        cache : dict
            反向传播所需的中间量
        """
        pass

    @abstractmethod
    def backward(self, cache: Dict, grad_output: np.ndarray) -> Dict[str, np.ndarray]:
        """由 dL/d(embeddings) 计算各可训练参数的梯度"""
        pass

    @abstractmethod
    def trainable(self) -> Dict[str, np.ndarray]:
        """可训练参数（就地更新）"""
        pass

    def state(self) -> Dict[str, np.ndarray]:
        """全部参数，用于保存检查点"""
        return {'table': self.table}


class LookupEmbedder(Embedder):
    """可训练查表嵌入"""

    kind = 'lookup'

    @classmethod
    def create(cls, vocab_size: int, dim: int, rng: np.random.Generator) -> 'LookupEmbedder':
        """按 N(0, 1/d) 随机初始化，行向量范数约为 1"""
        return cls(rng.normal(0.0, 1.0 / np.sqrt(dim), size=(vocab_size, dim)))

    def forward(self, ids, type_ids):
        ids = np.asarray(ids, dtype=np.int64)
        return self._lookup(ids), {'ids': ids}

    def backward(self, cache, grad_output):
        grad_table = np.zeros_like(self.table)
        np.add.at(grad_table, cache['ids'], grad_output)
        return {'table': grad_table}

    def trainable(self):
        return {'table': self.table}


class MixerEmbedder(Embedder):
    """
    查表 + 片段嵌入 + 一层残差单头自注意力

    X = T[ids] + S[type_ids]
    H = X + rowsoftmax((X W_a)(X W_b)ᵀ / √d) (X W_v)

    原因与结果在同一序列中混合，使原因侧词向量能感知结果侧上下文。
    """

    kind = 'mixer'

    def __init__(self, table: np.ndarray, segment: np.ndarray,
                 w_a: np.ndarray, w_b: np.ndarray, w_v: np.ndarray):
        super().__init__(table)
        d = self.dim
        self.segment = np.asarray(segment, dtype=np.float64)
        self.w_a = np.asarray(w_a, dtype=np.float64)
        self.w_b = np.asarray(w_b, dtype=np.float64)
        self.w_v = np.asarray(w_v, dtype=np.float64)
        if self.segment.shape != (2, d):
            raise DimensionError(f"Segment table must be 2x{d}, got {self.segment.shape}")
        for name in ('w_a', 'w_b', 'w_v'):
            if getattr(self, name).shape != (d, d):
                raise DimensionError(f"{name} must be {d}x{d}, got {getattr(self, name).shape}")

    @classmethod
    def create(cls, vocab_size: int, dim: int, rng: np.random.Generator) -> 'MixerEmbedder':
        table = rng.normal(0.0, 1.0 / np.sqrt(dim), size=(vocab_size, dim))
        segment = rng.normal(0.0, 0.1 / np.sqrt(dim), size=(2, dim))
        return cls(table, segment,
                   glorot_uniform(rng, dim, dim),
                   glorot_uniform(rng, dim, dim),
                   glorot_uniform(rng, dim, dim))

    def forward(self, ids, type_ids):
        ids = np.asarray(ids, dtype=np.int64)
        type_ids = np.asarray(type_ids, dtype=np.int64)
        x = self._lookup(ids) + self.segment[type_ids]
        scale = 1.0 / np.sqrt(self.dim)
        p = x @ self.w_a
        r = x @ self.w_b
        z = (p @ r.T) * scale
        z = np.exp(z - z.max(axis=1, keepdims=True))
        g = z / z.sum(axis=1, keepdims=True)
        v = x @ self.w_v
        h = x + g @ v
        cache = {'ids': ids, 'type_ids': type_ids, 'x': x, 'p': p, 'r': r, 'g': g, 'v': v,
                 'scale': scale}
        return h, cache

    def backward(self, cache, grad_output):
        x, p, r, g, v = cache['x'], cache['p'], cache['r'], cache['g'], cache['v']
        dh = grad_output
        dx = dh.copy()
        # H = X + G V
        dg = dh @ v.T
        dv = g.T @ dh
        grad_w_v = x.T @ dv
        dx += dv @ self.w_v.T
        # 行 softmax
        dz = g * (dg - np.sum(dg * g, axis=1, keepdims=True))
        ds = dz * cache['scale']
        dp = ds @ r
        dr = ds.T @ p
        grad_w_a = x.T @ dp
        grad_w_b = x.T @ dr
        dx += dp @ self.w_a.T + dr @ self.w_b.T
        grad_table = np.zeros_like(self.table)
        np.add.at(grad_table, cache['ids'], dx)
        grad_segment = np.zeros_like(self.segment)
        np.add.at(grad_segment, cache['type_ids'], dx)
        return {'table': grad_table, 'segment': grad_segment,
                'w_a': grad_w_a, 'w_b': grad_w_b, 'w_v': grad_w_v}

    def trainable(self):
        return {'table': self.table, 'segment': self.segment,
                'w_a': self.w_a, 'w_b': self.w_b, 'w_v': self.w_v}

    def state(self):
        return self.trainable()


class FixedEmbedder(Embedder):
    """文件加载的固定嵌入，不参与训练"""

    kind = 'fixed'

    def forward(self, ids, type_ids):
        ids = np.asarray(ids, dtype=np.int64)
        return self._lookup(ids), {'ids': ids}

    def backward(self, cache, grad_output):
        return {}

    def trainable(self):
        return {}

    @classmethod
    def from_file(cls, path: Union[str, Path], vocab: Vocabulary) -> 'FixedEmbedder':
        """
        加载文本格式的嵌入文件

        每行 "token v1 v2 ... vd"。词表中没有对应向量的词使用零向量
        （其绝对余弦恒为 0）。

        Parameters:
        -----------
        path : str or Path
            嵌入文件
        vocab : Vocabulary
            模型词表
        """
        vectors: Dict[str, np.ndarray] = {}
        dim = None
        with open(path, encoding="utf-8") as source:
            for linenum, line in enumerate(source, 1):
                parts = line.split()
                if not parts:
                    continue
                try:
                    values = np.array([float(v) for v in parts[1:]], dtype=np.float64)
                except ValueError as e:
                    raise DataError(f"Invalid number: {e}", line=linenum, path=str(path)) from e
                if dim is None:
                    dim = values.size
                if values.size != dim or dim == 0:
                    raise DataError(f"Expected {dim} values, got {values.size}", line=linenum, path=str(path))
                if not np.all(np.isfinite(values)):
                    raise DataError("Non-finite embedding value", line=linenum, path=str(path))
                vectors[parts[0]] = values
        if dim is None:
            raise DataError("Embedding file is empty", path=str(path))
        table = np.zeros((len(vocab), dim), dtype=np.float64)
        missing = 0
        for i, token in enumerate(vocab.tokens):
            if token in vectors:
                table[i] = vectors[token]
            else:
                missing += 1
        if missing:
            logger.warning("%d of %d vocabulary tokens have no vector in %s; using zero vectors",
                           missing, len(vocab), path)
        return cls(table)


EMBEDDERS = {cls.kind: cls for cls in (LookupEmbedder, MixerEmbedder, FixedEmbedder)}


def create_embedder(kind: str, vocab_size: int, dim: int, rng: np.random.Generator) -> Embedder:
    """按类型随机初始化可训练后端"""
    if kind == 'lookup':
        return LookupEmbedder.create(vocab_size, dim, rng)
    if kind == 'mixer':
        return MixerEmbedder.create(vocab_size, dim, rng)
    raise ValueError(f"Embedder kind {kind!r} cannot be randomly initialized")


def embedder_from_state(kind: str, state: Dict[str, np.ndarray]) -> Embedder:
    """由检查点中的参数重建后端"""
    if kind not in EMBEDDERS:
        raise ValueError(f"Unknown embedder kind: {kind!r}")
    return EMBEDDERS[kind](**state)
