"""
CESAR 因果强度模型

s(C→E) = Σ_ij a_ij · |c_iᵀ e_j| / (‖c_i‖‖e_j‖)

其中 A = softmax(C W_q (E W_k)ᵀ)，softmax 在整个矩阵上计算。
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union
import numpy as np

from core.errors import DimensionError, NumericError
from core.numerics import (
    ZERO_NORM, as_matrix, global_softmax, global_softmax_backward, normalize_rows
)
from core.text import (
    CLS_ID, SEP_ID, MAX_SEQUENCE_LENGTH, EventText, TokenSequence, Tokenizer,
    DEFAULT_TOKENIZER, Vocabulary, concatenate, pack_pair, tokenize
)
from model.embedders import Embedder, create_embedder, glorot_uniform
from model.records import TrainingExample

logger = logging.getLogger(__name__)

ATTENTION_LEARNED = 'learned'
ATTENTION_UNIFORM = 'uniform'


@dataclass
class ScoreBreakdown:
    """计分分解：关联矩阵 M、注意力矩阵 A、强度矩阵 S = M∘A 与总分"""
    M: np.ndarray
    A: np.ndarray
    S: np.ndarray
    score: float
    cause_tokens: List[str] = field(default_factory=list)
    effect_tokens: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict:
        """转换为字典"""
        return {
            'score': self.score,
            'M': self.M.tolist(),
            'A': self.A.tolist(),
            'S': self.S.tolist(),
            'cause_tokens': list(self.cause_tokens),
            'effect_tokens': list(self.effect_tokens)
        }


@dataclass
class _Forward:
    """一次前向计算的中间量"""
    sequence: TokenSequence
    embeddings: np.ndarray
    embed_cache: Dict
    cause_rows: np.ndarray
    effect_rows: np.ndarray
    C: np.ndarray
    E: np.ndarray
    Q: Optional[np.ndarray]
    K: Optional[np.ndarray]
    A: np.ndarray
    cos: np.ndarray
    M: np.ndarray
    score: float


class CesarModel:
    """CESAR 模型：嵌入后端 + 因果感知注意力"""

    def __init__(self, vocab: Vocabulary, embedder: Embedder, w_q: np.ndarray, w_k: np.ndarray,
                 attention_mode: str = ATTENTION_LEARNED, include_specials: bool = True,
                 max_length: int = MAX_SEQUENCE_LENGTH, seed: Optional[int] = None,
                 tokenizer: Tokenizer = DEFAULT_TOKENIZER):
        """
        初始化模型

        Parameters:
        -----------
        vocab : Vocabulary
            词表，大小须与嵌入表一致
        embedder : Embedder
            嵌入后端
        w_q, w_k : np.ndarray
            d×d 注意力投影矩阵
        attention_mode : str
            'learned' 或 'uniform'（去掉注意力的消融）
        include_specials : bool
            计分时是否保留 [CLS] / [SEP]
        """
        if attention_mode not in (ATTENTION_LEARNED, ATTENTION_UNIFORM):
            raise ValueError(f"Unknown attention_mode: {attention_mode!r}")
        if embedder.vocab_size != len(vocab):
            raise DimensionError(
                f"Embedder has {embedder.vocab_size} rows but vocabulary has {len(vocab)} tokens")
        d = embedder.dim
        self.w_q = np.asarray(w_q, dtype=np.float64)
        self.w_k = np.asarray(w_k, dtype=np.float64)
        if self.w_q.shape != (d, d) or self.w_k.shape != (d, d):
            raise DimensionError(f"W_q and W_k must be {d}x{d}")
        self.vocab = vocab
        self.embedder = embedder
        self.attention_mode = attention_mode
        self.include_specials = include_specials
        self.max_length = max_length
        self.seed = seed
        self.tokenizer = tokenizer

    @classmethod
    def create(cls, vocab: Vocabulary, dim: int = 64, embedder: str = 'lookup',
               attention_mode: str = ATTENTION_LEARNED, include_specials: bool = True,
               max_length: int = MAX_SEQUENCE_LENGTH, seed: int = 42,
               fixed_embedder: Optional[Embedder] = None) -> 'CesarModel':
        """
        按种子随机初始化

        W_q、W_k 使用 Glorot 均匀分布 ±√(6/(2d))。
        """
        rng = np.random.default_rng(seed)
        if embedder == 'fixed':
            if fixed_embedder is None:
                raise ValueError("A loaded FixedEmbedder is required for embedder='fixed'")
            backend = fixed_embedder
            dim = backend.dim
        else:
            backend = create_embedder(embedder, len(vocab), dim, rng)
        w_q = glorot_uniform(rng, dim, dim)
        w_k = glorot_uniform(rng, dim, dim)
        return cls(vocab, backend, w_q, w_k, attention_mode=attention_mode,
                   include_specials=include_specials, max_length=max_length, seed=seed)

    @property
    def dim(self) -> int:
        """嵌入维度 d"""
        return self.embedder.dim

    # ========== 参数 ==========

    def trainable(self) -> Dict[str, np.ndarray]:
        """全部可训练参数（就地引用）"""
        params = {f"embedder.{k}": v for k, v in self.embedder.trainable().items()}
        params['w_q'] = self.w_q
        params['w_k'] = self.w_k
        return params

    def state(self) -> Dict[str, np.ndarray]:
        """全部参数，用于检查点"""
        params = {f"embedder.{k}": v for k, v in self.embedder.state().items()}
        params['w_q'] = self.w_q
        params['w_k'] = self.w_k
        return params

    def get_flat_params(self) -> np.ndarray:
        """可训练参数展平为一个向量（按名称排序）"""
        params = self.trainable()
        return np.concatenate([params[k].ravel() for k in sorted(params)])

    def set_flat_params(self, flat: np.ndarray):
        """把展平向量写回参数（就地）"""
        params = self.trainable()
        offset = 0
        for name in sorted(params):
            target = params[name]
            size = target.size
            target[...] = np.asarray(flat[offset:offset + size]).reshape(target.shape)
            offset += size
        if offset != len(flat):
            raise DimensionError(f"Expected {offset} parameters, got {len(flat)}")

    @staticmethod
    def flatten_grads(grads: Dict[str, np.ndarray]) -> np.ndarray:
        """梯度字典按名称排序展平"""
        return np.concatenate([grads[k].ravel() for k in sorted(grads)])

    # ========== 输入 ==========

    def encode(self, cause: Union[str, EventText], effect: Union[str, EventText],
               addition: Optional[Union[str, EventText]] = None) -> TokenSequence:
        """分词、⊕ 拼接并打包为模型输入"""
        cause_ids = tokenize(self.vocab, cause, self.tokenizer)
        if addition is not None:
            cause_ids = concatenate(cause_ids, tokenize(self.vocab, addition, self.tokenizer))
        effect_ids = tokenize(self.vocab, effect, self.tokenizer)
        return pack_pair(cause_ids, effect_ids, max_length=self.max_length)

    def _partition(self, sequence: TokenSequence) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """
        按 type_ids 与 attention_mask 划分行

        Returns:
        --------
        real_ids, real_types : np.ndarray
            非填充位置的编号与片段标记
        cause_rows, effect_rows : np.ndarray
            在非填充序列中原因侧、结果侧的行下标
        """
        ids = np.asarray(sequence.ids, dtype=np.int64)
        types = np.asarray(sequence.type_ids, dtype=np.int64)
        mask = np.asarray(sequence.attention_mask, dtype=bool)
        real_ids = ids[mask]
        real_types = types[mask]
        keep = np.ones(real_ids.size, dtype=bool)
        if not self.include_specials:
            keep = (real_ids != CLS_ID) & (real_ids != SEP_ID)
        cause_rows = np.flatnonzero(keep & (real_types == 0))
        effect_rows = np.flatnonzero(keep & (real_types == 1))
        if cause_rows.size == 0 or effect_rows.size == 0:
            raise DimensionError("Cause and effect must each keep at least one token")
        return real_ids, real_types, cause_rows, effect_rows

    # ========== 前向 ==========

    def embed(self, sequence: TokenSequence) -> Tuple[np.ndarray, np.ndarray]:
        """
        提取原因矩阵 C (n×d) 与结果矩阵 E (m×d)

        填充位置不参与；include_specials 为 False 时去掉 [CLS]/[SEP] 行。
        """
        real_ids, real_types, cause_rows, effect_rows = self._partition(sequence)
        embeddings, _ = self.embedder.forward(real_ids, real_types)
        return embeddings[cause_rows], embeddings[effect_rows]

    def attention(self, C: np.ndarray, E: np.ndarray) -> np.ndarray:
        """
        因果感知注意力 A (n×m)

        learned: global_softmax(C W_q (E W_k)ᵀ)；uniform: 每个元素 1/(n·m)。
        """
        C = as_matrix(C, "C")
        E = as_matrix(E, "E")
        if C.shape[1] != self.dim or E.shape[1] != self.dim:
            raise DimensionError(f"C and E must have {self.dim} columns, got {C.shape[1]} and {E.shape[1]}")
        return self._attend(C, E)[0]

    def _attend(self, C: np.ndarray, E: np.ndarray) -> Tuple[np.ndarray, Optional[np.ndarray], Optional[np.ndarray]]:
        """返回 (A, Q, K)；uniform 模式下 Q、K 为 None"""
        if self.attention_mode == ATTENTION_UNIFORM:
            return np.full((C.shape[0], E.shape[0]), 1.0 / (C.shape[0] * E.shape[0])), None, None
        Q = C @ self.w_q
        K = E @ self.w_k
        return global_softmax(Q @ K.T), Q, K

    def _forward(self, sequence: TokenSequence) -> _Forward:
        real_ids, real_types, cause_rows, effect_rows = self._partition(sequence)
        embeddings, cache = self.embedder.forward(real_ids, real_types)
        C = embeddings[cause_rows]
        E = embeddings[effect_rows]
        A, Q, K = self._attend(C, E)
        c_unit, _ = normalize_rows(C)
        e_unit, _ = normalize_rows(E)
        cos = c_unit @ e_unit.T
        M = np.minimum(np.abs(cos), 1.0)
        score = float(np.sum(A * M))
        if not np.isfinite(score):
            raise NumericError("Non-finite CESAR score")
        return _Forward(sequence, embeddings, cache, cause_rows, effect_rows,
                        C, E, Q, K, A, cos, M, score)

    def score_sequence(self, sequence: TokenSequence) -> float:
        """已打包序列的得分"""
        return self._forward(sequence).score

    def score(self, cause: Union[str, EventText], effect: Union[str, EventText],
              addition: Optional[Union[str, EventText]] = None) -> ScoreBreakdown:
        """
        计算 s(C [⊕ addition] → E) 及其 M/A/S 分解

        Parameters:
        -----------
        cause : str or EventText
            原因
        effect : str or EventText
            结果
        addition : str or EventText, optional
            支持者/反驳者/解释，经 [SEP] 拼接到原因之后

        Returns:
        --------
        ScoreBreakdown
            分解矩阵与总分
        """
        fwd = self._forward(self.encode(cause, effect, addition))
        real_ids = np.asarray(fwd.sequence.ids)[np.asarray(fwd.sequence.attention_mask, dtype=bool)]
        return ScoreBreakdown(
            M=fwd.M, A=fwd.A, S=fwd.M * fwd.A, score=fwd.score,
            cause_tokens=[self.vocab.token_of(int(i)) for i in real_ids[fwd.cause_rows]],
            effect_tokens=[self.vocab.token_of(int(i)) for i in real_ids[fwd.effect_rows]]
        )

    def score_value(self, cause: str, addition: Optional[str], effect: str) -> float:
        """指标统一接口 (cause, addition, effect) -> 得分"""
        return self._forward(self.encode(cause, effect, addition)).score

    # ========== 反向 ==========

    def loss_and_grads(self, example: TrainingExample) -> Tuple[float, Dict[str, np.ndarray]]:
        """
        平方误差损失 (score − target)² 及全部可训练参数的解析梯度

        Returns:
        --------
        loss : float
            损失
        grads : Dict[str, np.ndarray]
            与 trainable() 同名的梯度；固定嵌入后端只有 w_q / w_k
        """
        sequence = self.encode(example.cause, example.effect, example.addition)
        return self.sequence_loss_and_grads(sequence, float(example.target))

    def sequence_loss_and_grads(self, sequence: TokenSequence, target: float) -> Tuple[float, Dict[str, np.ndarray]]:
        """已打包序列的损失与梯度"""
        fwd = self._forward(sequence)
        residual = fwd.score - target
        loss = residual * residual
        d_score = 2.0 * residual

        # s = Σ A∘M
        d_M = d_score * fwd.A
        d_A = d_score * fwd.M

        # M = |cos|，cos = ĉ ê ᵀ
        d_cos = d_M * np.sign(fwd.cos)
        d_C, d_E = _unit_cosine_backward(fwd.C, fwd.E, d_cos)

        grad_w_q = np.zeros_like(self.w_q)
        grad_w_k = np.zeros_like(self.w_k)
        if self.attention_mode == ATTENTION_LEARNED:
            d_logits = global_softmax_backward(fwd.A, d_A)
            d_Q = d_logits @ fwd.K
            d_K = d_logits.T @ fwd.Q
            grad_w_q = fwd.C.T @ d_Q
            grad_w_k = fwd.E.T @ d_K
            d_C = d_C + d_Q @ self.w_q.T
            d_E = d_E + d_K @ self.w_k.T

        d_embeddings = np.zeros_like(fwd.embeddings)
        d_embeddings[fwd.cause_rows] += d_C
        d_embeddings[fwd.effect_rows] += d_E

        grads = {f"embedder.{k}": v for k, v in self.embedder.backward(fwd.embed_cache, d_embeddings).items()}
        grads['w_q'] = grad_w_q
        grads['w_k'] = grad_w_k
        return loss, grads


def _unit_cosine_backward(C: np.ndarray, E: np.ndarray, d_cos: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    cos_ij = ĉ_i·ê_j 对原始 C、E 的反向传播

    d c = (dĉ − ĉ (ĉ·dĉ)) / ‖c‖，零向量行梯度为 0。
    """
    c_unit, c_norm = normalize_rows(C)
    e_unit, e_norm = normalize_rows(E)
    d_c_unit = d_cos @ e_unit
    d_e_unit = d_cos.T @ c_unit
    return _normalize_backward(c_unit, c_norm, d_c_unit), _normalize_backward(e_unit, e_norm, d_e_unit)


def _normalize_backward(unit: np.ndarray, norms: np.ndarray, d_unit: np.ndarray) -> np.ndarray:
    safe = np.where(norms < ZERO_NORM, 1.0, norms)
    grad = (d_unit - unit * np.sum(unit * d_unit, axis=1, keepdims=True)) / safe[:, None]
    grad[norms < ZERO_NORM] = 0.0
    return grad
