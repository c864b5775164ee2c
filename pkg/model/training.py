"""
训练 - AdamW 优化器、线性学习率调度与 MSE 训练循环
"""
import csv
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union
import numpy as np

from core.config import DEFAULT_SEED, TrainConfig
from core.errors import ConfigError, TrainingError
from model.cesar import CesarModel
from model.records import TrainingExample

logger = logging.getLogger(__name__)


class AdamW:
    """解耦权重衰减的 Adam，按参数名保存一阶、二阶矩"""

    def __init__(self, params: Dict[str, np.ndarray], beta1: float = 0.9, beta2: float = 0.999,
                 eps: float = 1e-8, weight_decay: float = 0.01):
        self.params = params
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.weight_decay = weight_decay
        self.m = {name: np.zeros_like(p) for name, p in params.items()}
        self.v = {name: np.zeros_like(p) for name, p in params.items()}
        self.step_count = 0

    def step(self, grads: Dict[str, np.ndarray], learning_rate: float):
        """
        就地更新参数

        Parameters:
        -----------
        grads : Dict[str, np.ndarray]
            与 params 同名的梯度
        learning_rate : float
            本步学习率
        """
        self.step_count += 1
        t = self.step_count
        correction1 = 1.0 - self.beta1 ** t
        correction2 = 1.0 - self.beta2 ** t
        for name, param in self.params.items():
            g = grads[name]
            self.m[name] = self.beta1 * self.m[name] + (1.0 - self.beta1) * g
            self.v[name] = self.beta2 * self.v[name] + (1.0 - self.beta2) * g * g
            m_hat = self.m[name] / correction1
            v_hat = self.v[name] / correction2
            param -= learning_rate * (m_hat / (np.sqrt(v_hat) + self.eps) + self.weight_decay * param)


@dataclass
class LinearSchedule:
    """线性预热后线性衰减到 0"""
    base_rate: float
    total_steps: int
    warmup_steps: int = 0

    def rate(self, step: int) -> float:
        """第 step 步（从 0 开始）的学习率"""
        if step < self.warmup_steps:
            return self.base_rate * step / max(1, self.warmup_steps)
        remaining = self.total_steps - step
        span = max(1, self.total_steps - self.warmup_steps)
        return self.base_rate * max(0.0, remaining / span)


def train(model: CesarModel, dataset: Sequence[TrainingExample], config: TrainConfig,
          on_epoch: Optional[Callable[[int, float], None]] = None) -> Tuple[CesarModel, List[float]]:
    """
    用 MSE 损失训练模型（就地修改）

    每个 epoch 用种子打乱样本顺序，批梯度为样本梯度的平均值。

    Parameters:
    -----------
    model : CesarModel
        待训练模型
    dataset : Sequence[TrainingExample]
        训练样本，不能为空
    config : TrainConfig
        训练配置
    on_epoch : callable, optional
        每个 epoch 结束时回调 (epoch, mean_loss)

    Returns:
    --------
    model : CesarModel
        训练后的模型（同一对象）
    history : List[float]
        每个 epoch 的平均损失
    """
    config.validate()
    if not dataset:
        raise ConfigError("Training dataset is empty")

    # 预先分词打包
    sequences = [model.encode(ex.cause, ex.effect, ex.addition) for ex in dataset]
    targets = [float(ex.target) for ex in dataset]

    params = model.trainable()
    optimizer = AdamW(params, beta1=config.beta1, beta2=config.beta2,
                      eps=config.eps, weight_decay=config.weight_decay)
    batches_per_epoch = -(-len(dataset) // config.batch_size)
    schedule = LinearSchedule(config.effective_learning_rate,
                              config.epochs * batches_per_epoch, config.warmup_steps)
    rng = np.random.default_rng(DEFAULT_SEED if config.seed is None else config.seed)

    logger.info("Training on %d examples: %d epochs, %d steps, lr %.3g",
                len(dataset), config.epochs, schedule.total_steps, schedule.base_rate)
    history: List[float] = []
    step = 0
    for epoch in range(1, config.epochs + 1):
        order = rng.permutation(len(dataset))
        epoch_loss = 0.0
        for start in range(0, len(order), config.batch_size):
            batch = order[start:start + config.batch_size]
            total = {name: np.zeros_like(p) for name, p in params.items()}
            for index in batch:
                index = int(index)
                loss, grads = model.sequence_loss_and_grads(sequences[index], targets[index])
                if not np.isfinite(loss):
                    raise TrainingError(f"Non-finite loss at step {step} on example {index}",
                                        step=step, example_index=index)
                epoch_loss += loss
                for name, g in grads.items():
                    total[name] += g
            mean_grads = {name: g / len(batch) for name, g in total.items()}
            optimizer.step(mean_grads, schedule.rate(step))
            step += 1
        mean_loss = epoch_loss / len(dataset)
        history.append(mean_loss)
        logger.info("Epoch %d/%d: loss %.6f", epoch, config.epochs, mean_loss)
        if on_epoch is not None:
            on_epoch(epoch, mean_loss)
    return model, history


def write_curve(history: Sequence[float], path: Union[str, Path]):
    """写出训练曲线 CSV（epoch,loss）"""
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["epoch", "loss"])
        for epoch, loss in enumerate(history, 1):
            writer.writerow([epoch, repr(float(loss))])
    logger.info("Training curve written to %s", path)
