"""
按种子划分 train / dev / test
"""
from typing import List, Sequence, Tuple, TypeVar
import numpy as np

T = TypeVar('T')

# 基准数据集的 Train/Dev/Test 规模
DEFAULT_PROPORTIONS = (7000, 2276, 1969)


def split_sizes(total: int, proportions: Sequence[float] = DEFAULT_PROPORTIONS) -> Tuple[int, int, int]:
    """按比例计算 dev、test 规模（向下取整），其余归入 train"""
    if len(proportions) != 3 or min(proportions) < 0 or sum(proportions) <= 0:
        raise ValueError(f"Expected three non-negative proportions, got {proportions}")
    weight = float(sum(proportions))
    dev = int(total * proportions[1] / weight)
    test = int(total * proportions[2] / weight)
    return total - dev - test, dev, test


def split_dataset(items: Sequence[T], seed: int = 42,
                  proportions: Sequence[float] = DEFAULT_PROPORTIONS) -> Tuple[List[T], List[T], List[T]]:
    """
    种子置换后切分

    三个划分互不相交且覆盖全部输入，同一种子结果相同。

    Returns:
    --------
    train, dev, test : List
    """
    train_size, dev_size, _ = split_sizes(len(items), proportions)
    order = np.random.default_rng(seed).permutation(len(items))
    shuffled = [items[int(i)] for i in order]
    return (shuffled[:train_size],
            shuffled[train_size:train_size + dev_size],
            shuffled[train_size + dev_size:])
