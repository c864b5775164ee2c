"""
增强训练集构造

因果记录：
    (C, E)        -> plain      (0.7)
    (C ⊕ H, E)    -> explained  (1.0)
    (C ⊕ ¬H, E)   -> opposite   (0.2)，仅当记录带 ¬H
非因果记录：
    (C, E)        -> non_causal (0.0)
"""
import logging
from typing import Callable, List, Optional, Sequence

from core.config import AUGMENT_MODES, TargetLevels
from core.errors import DataError
from model.records import AugmentationRecord, TrainingExample

logger = logging.getLogger(__name__)

MODE_FULL = 'full'              # a, b, c, d 四类样本
MODE_IMBALANCED = 'imbalanced'  # 不使用 ¬H
MODE_PLAIN = 'plain'            # 只用 (C, E) 与非因果样本


def build_augmented_set(records: Sequence[AugmentationRecord], targets: Optional[TargetLevels] = None,
                        mode: str = MODE_FULL) -> List[TrainingExample]:
    """
    由增强源记录构造训练样本

    Parameters:
    -----------
    records : Sequence[AugmentationRecord]
        增强源记录
    targets : TargetLevels, optional
        目标强度，默认 1.0 / 0.7 / 0.2 / 0.0
    mode : str
        'full'、'imbalanced' 或 'plain'

    Returns:
    --------
    List[TrainingExample]
        按输入顺序排列的样本
    """
    if mode not in AUGMENT_MODES:
        raise ValueError(f"Unknown augmentation mode: {mode!r}")
    targets = targets or TargetLevels()
    examples: List[TrainingExample] = []
    skipped_opposites = 0
    for index, record in enumerate(records):
        if not record.is_causal:
            examples.append(TrainingExample(record.cause, record.effect, targets.non_causal))
            continue
        if record.explanation is None and mode != MODE_PLAIN:
            raise DataError(f"Causal record {index} has no explanation", line=index + 1, field='explanation')
        examples.append(TrainingExample(record.cause, record.effect, targets.plain))
        if mode == MODE_PLAIN:
            continue
        examples.append(TrainingExample(record.cause, record.effect, targets.explained,
                                        addition=record.explanation))
        if record.opposite is None:
            continue
        if mode == MODE_IMBALANCED:
            skipped_opposites += 1
            continue
        examples.append(TrainingExample(record.cause, record.effect, targets.opposite,
                                        addition=record.opposite))
    logger.info("Built %d training examples from %d records (mode %s)", len(examples), len(records), mode)
    if skipped_opposites:
        logger.info("Dropped %d opposite explanations (imbalanced mode)", skipped_opposites)
    return examples


def fill_opposites(records: Sequence[AugmentationRecord],
                   generate: Callable[[str], str]) -> List[AugmentationRecord]:
    """为缺少 ¬H 的因果记录生成相反解释"""
    filled = []
    generated = 0
    for record in records:
        if record.is_causal and record.explanation is not None and record.opposite is None:
            record = AugmentationRecord(record.cause, record.effect, record.is_causal,
                                        explanation=record.explanation,
                                        opposite=generate(record.explanation))
            generated += 1
        filled.append(record)
    logger.info("Generated %d opposite explanations", generated)
    return filled
