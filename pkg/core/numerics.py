"""
数值核心 - 各指标共用的确定性数值函数

矩阵统一使用 float64 的 numpy 二维数组表示。
"""
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, Union
import numpy as np
from scipy import stats
from scipy.integrate import trapezoid

from core.errors import DimensionError, NumericError

# 范数小于该值的向量视为零向量
ZERO_NORM = 1e-12

# Silverman 规则无法使用（单样本或方差为零）时的带宽
FALLBACK_BANDWIDTH = 0.1

# 公共网格上带宽的下限（网格间距的倍数）
MIN_BANDWIDTH_STEPS = 2.0

ArrayLike = Union[Sequence[float], np.ndarray]


def as_matrix(values, name: str = "matrix") -> np.ndarray:
    """
    转换并校验矩阵

    Parameters:
    -----------
    values : array-like
        二维数据
    name : str
        用于错误信息的名称

    Returns:
    --------
    np.ndarray
        形状 (rows, cols) 的 float64 数组
    """
    matrix = np.asarray(values, dtype=np.float64)
    if matrix.ndim != 2:
        raise DimensionError(f"{name} must be 2-dimensional, got shape {matrix.shape}")
    if matrix.shape[0] == 0 or matrix.shape[1] == 0:
        raise DimensionError(f"{name} must be non-empty, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise NumericError(f"{name} contains non-finite values")
    return matrix


def global_softmax(logits) -> np.ndarray:
    """
    对整个矩阵的所有元素做 softmax（不是按行）

    先减去全局最大值再取指数，保证数值稳定。
    """
    z = as_matrix(logits, "logits")
    shifted = np.exp(z - z.max())
    return shifted / shifted.sum()


def global_softmax_backward(probs: np.ndarray, grad_output: np.ndarray) -> np.ndarray:
    """全局 softmax 的反向传播：dZ = P ∘ (dP − Σ P∘dP)"""
    return probs * (grad_output - np.sum(probs * grad_output))


def abs_cosine(u: ArrayLike, v: ArrayLike) -> float:
    """
    计算绝对余弦相似度 |uᵀv| / (‖u‖‖v‖)

    任一向量范数小于 ZERO_NORM 时返回 0。

    Returns:
    --------
    float
        [0, 1] 内的值
    """
    u = np.asarray(u, dtype=np.float64).ravel()
    v = np.asarray(v, dtype=np.float64).ravel()
    if u.shape != v.shape:
        raise DimensionError(f"Vector dimensions differ: {u.shape[0]} vs {v.shape[0]}")
    norm_u = np.linalg.norm(u)
    norm_v = np.linalg.norm(v)
    if norm_u < ZERO_NORM or norm_v < ZERO_NORM:
        return 0.0
    value = abs(float(np.dot(u, v))) / (norm_u * norm_v)
    # 舍入误差可能略超过 1
    return min(value, 1.0)


def normalize_rows(matrix: np.ndarray):
    """
    按行单位化，零向量行保持为零

    Returns:
    --------
    unit : np.ndarray
        单位化后的矩阵
    norms : np.ndarray
        各行范数 (rows,)
    """
    norms = np.linalg.norm(matrix, axis=1)
    safe = np.where(norms < ZERO_NORM, 1.0, norms)
    unit = matrix / safe[:, None]
    unit[norms < ZERO_NORM] = 0.0
    return unit, norms


def abs_cosine_matrix(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """成对绝对余弦矩阵 M_ij = |cos(left_i, right_j)|"""
    left = as_matrix(left, "left")
    right = as_matrix(right, "right")
    if left.shape[1] != right.shape[1]:
        raise DimensionError(f"Column counts differ: {left.shape[1]} vs {right.shape[1]}")
    left_unit, _ = normalize_rows(left)
    right_unit, _ = normalize_rows(right)
    return np.minimum(np.abs(left_unit @ right_unit.T), 1.0)


def finite_diff_gradient(f: Callable[[np.ndarray], float], x: ArrayLike, h: float = 1e-5) -> np.ndarray:
    """
    中心差分梯度 (f(x+h·e_k) − f(x−h·e_k)) / (2h)

    Parameters:
    -----------
    f : callable
        参数向量 -> 标量
    x : array-like
        求值点
    h : float
        步长，必须为正

    Returns:
    --------
    np.ndarray
        与 x 同形状的梯度估计
    """
    if not h > 0:
        raise ValueError(f"Step h must be positive, got {h}")
    point = np.array(x, dtype=np.float64)
    flat = point.reshape(-1)
    grad = np.zeros_like(flat)
    for k in range(flat.size):
        original = flat[k]
        flat[k] = original + h
        f_plus = float(f(point))
        flat[k] = original - h
        f_minus = float(f(point))
        flat[k] = original
        if not (np.isfinite(f_plus) and np.isfinite(f_minus)):
            raise NumericError(f"Non-finite function value at coordinate {k}", coordinate=k)
        grad[k] = (f_plus - f_minus) / (2.0 * h)
    return grad.reshape(point.shape)


def max_relative_error(analytic: ArrayLike, numeric: ArrayLike) -> float:
    """以两者最大幅值为尺度的最大相对误差"""
    a = np.asarray(analytic, dtype=np.float64)
    b = np.asarray(numeric, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionError(f"Shapes differ: {a.shape} vs {b.shape}")
    if a.size == 0:
        return 0.0
    scale = max(float(np.max(np.abs(a))), float(np.max(np.abs(b))), 1e-12)
    return float(np.max(np.abs(a - b))) / scale


# ========== 核密度估计 ==========

@dataclass
class DensityCurve:
    """密度曲线：横轴网格与对应密度"""
    grid: np.ndarray
    density: np.ndarray
    bandwidth: float

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=np.float64)
        self.density = np.asarray(self.density, dtype=np.float64)
        if self.grid.shape != self.density.shape:
            raise DimensionError("grid and density must have the same length")

    def integral(self) -> float:
        """梯形积分"""
        return float(trapezoid(self.density, self.grid))

    def to_dict(self) -> dict:
        """转换为字典"""
        return {
            'grid': self.grid.tolist(),
            'density': self.density.tolist(),
            'bandwidth': self.bandwidth
        }


def silverman_bandwidth(samples: ArrayLike) -> float:
    """Silverman 规则 1.06·σ·N^(-1/5)；无法估计时使用 FALLBACK_BANDWIDTH"""
    data = np.asarray(samples, dtype=np.float64).ravel()
    if data.size < 2:
        return FALLBACK_BANDWIDTH
    sigma = float(np.std(data, ddof=1))
    if sigma < ZERO_NORM:
        return FALLBACK_BANDWIDTH
    return 1.06 * sigma * data.size ** (-0.2)


def kde_density(samples: ArrayLike, grid: ArrayLike, bandwidth: Optional[float] = None) -> DensityCurve:
    """
    高斯核密度估计

    density(x) = (1/(N·h·√(2π))) Σ exp(−(x−s_i)²/(2h²))

    Parameters:
    -----------
    samples : array-like
        样本，不能为空
    grid : array-like
        严格递增的求值网格
    bandwidth : float, optional
        带宽，None 时使用 Silverman 规则

    Returns:
    --------
    DensityCurve
        网格上的密度
    """
    data = np.asarray(samples, dtype=np.float64).ravel()
    if data.size == 0:
        raise ValueError("KDE requires at least one sample")
    if not np.all(np.isfinite(data)):
        raise NumericError("KDE samples contain non-finite values")
    points = np.asarray(grid, dtype=np.float64).ravel()
    if points.size == 0:
        raise ValueError("KDE grid must be non-empty")
    if points.size > 1 and not np.all(np.diff(points) > 0):
        raise ValueError("KDE grid must be strictly ascending")
    h = silverman_bandwidth(data) if bandwidth is None else float(bandwidth)
    if not h > 0:
        raise ValueError(f"Bandwidth must be positive, got {h}")
    # (len(grid), N) 的核矩阵按样本取平均
    kernel = stats.norm.pdf(points[:, None], loc=data[None, :], scale=h)
    return DensityCurve(grid=points, density=kernel.mean(axis=1), bandwidth=h)


def kde_grid(sample_sets: Sequence[ArrayLike], bandwidths: Sequence[float], num_points: int = 512,
             span: float = 8.0, min_steps: float = MIN_BANDWIDTH_STEPS) -> Tuple[np.ndarray, List[float]]:
    """
    多个样本集共用的网格与各自的有效带宽

    网格覆盖全部样本外加 ±span 个最大带宽。小于 min_steps 个网格间距的
    带宽提升到该下限，否则窄峰落在网格点之间，积分不再为 1。下限超过
    最大带宽时网格按下限加宽。

    Parameters:
    -----------
    sample_sets : Sequence[array-like]
        各组样本
    bandwidths : Sequence[float]
        各组带宽，须为正
    num_points : int
        网格点数
    span : float
        网格两端超出样本范围的带宽倍数
    min_steps : float
        带宽下限对应的网格间距数

    Returns:
    --------
    grid : np.ndarray
        递增网格
    widths : List[float]
        各组的有效带宽
    """
    if len(sample_sets) != len(bandwidths):
        raise DimensionError("sample_sets and bandwidths must have the same length")
    if num_points - 1 <= 2 * min_steps * span:
        raise ValueError(f"num_points too small for span {span} and min_steps {min_steps}")
    if not all(h > 0 for h in bandwidths):
        raise ValueError("Bandwidths must be positive")
    values = np.concatenate([np.asarray(s, dtype=np.float64).ravel() for s in sample_sets])
    low, high = float(values.min()), float(values.max())
    widest = max(bandwidths)
    step = (high - low + 2 * span * widest) / (num_points - 1)
    if min_steps * step > widest:
        # 解 widest = min_steps · (range + 2·span·widest) / (num_points − 1)
        widest = min_steps * (high - low) / (num_points - 1 - 2 * min_steps * span)
    reach = span * widest
    grid = np.linspace(low - reach, high + reach, num_points)
    floor = min_steps * float(grid[1] - grid[0])
    return grid, [max(float(h), floor) for h in bandwidths]
