"""
合成语料生成器

每条"植入链接" k 由一个原因词 ca<k> 和一个结果词 ef<k> 组成：
    原因      "The ca3 starts."
    结果      "The ef3 spreads."
    解释 H    "Usually ca3 brings ef3."
    相反 ¬H   "Rarely halts ca3."
非因果对把链接 k 的原因与链接 j≠k 的结果配对。
可废止实例使用同样的句式，支持者带 "brings"，反驳者带 "halts"。
"""
from dataclasses import dataclass, field
from typing import List, Tuple
import numpy as np

from model.records import (
    DOMAINS, TIME_INTERVALS, AugmentationRecord, CopaInstance, DefeasibleInstance
)

CAUSE_VERBS = ('starts', 'rises', 'appears')
EFFECT_VERBS = ('follows', 'spreads', 'grows')
SUPPORT_LEADS = ('usually', 'often', 'surely', 'clearly', 'always')
DEFEAT_LEADS = ('rarely', 'barely', 'never', 'seldom', 'hardly')
FILLERS = ('the', 'a', 'this', 'that')


@dataclass
class SyntheticCorpus:
    """生成结果"""
    records: List[AugmentationRecord] = field(default_factory=list)
    instances: List[DefeasibleInstance] = field(default_factory=list)
    copa: List[CopaInstance] = field(default_factory=list)

    @property
    def statements(self) -> List[Tuple[str, str]]:
        """因果语句 (原因, 结果)，用于 CEQ"""
        return [(r.cause, r.effect) for r in self.records if r.is_causal]

    def texts(self) -> List[str]:
        """全部文本，用于构建词表"""
        out = []
        for r in self.records:
            out += [r.cause, r.effect] + [t for t in (r.explanation, r.opposite) if t]
        for inst in self.instances:
            out += [inst.cause, inst.effect, inst.supporter, inst.defeater]
        for c in self.copa:
            out += [c.premise, c.choice1, c.choice2]
        return out


def _cause(rng, k: int) -> str:
    return f"{rng.choice(FILLERS).capitalize()} ca{k} {rng.choice(CAUSE_VERBS)}."


def _effect(rng, k: int) -> str:
    return f"{rng.choice(FILLERS).capitalize()} ef{k} {rng.choice(EFFECT_VERBS)}."


def _supporter(rng, k: int) -> str:
    return f"{rng.choice(SUPPORT_LEADS).capitalize()} ca{k} brings ef{k}."


def _defeater(rng, k: int) -> str:
    return f"{rng.choice(DEFEAT_LEADS).capitalize()} halts ca{k}."


def generate_synthetic(num_links: int = 30, records_per_link: int = 3, non_causal_per_link: int = 2,
                       instances_per_link: int = 2, seed: int = 42) -> SyntheticCorpus:
    """
    生成合成语料

    Parameters:
    -----------
    num_links : int
        植入链接数
    records_per_link : int
        每条链接的因果增强记录数（带 H 与 ¬H）
    non_causal_per_link : int
        每条链接的非因果记录数
    instances_per_link : int
        每条链接的可废止实例数
    seed : int
        随机种子

    Returns:
    --------
    SyntheticCorpus
        增强源记录、可废止实例与 COPA 实例
    """
    if num_links < 2:
        raise ValueError("At least two links are needed to build non-causal pairs")
    rng = np.random.default_rng(seed)
    corpus = SyntheticCorpus()
    for k in range(num_links):
        for _ in range(records_per_link):
            corpus.records.append(AugmentationRecord(
                cause=_cause(rng, k), effect=_effect(rng, k), is_causal=True,
                explanation=_supporter(rng, k), opposite=_defeater(rng, k)))
        for _ in range(non_causal_per_link):
            j = (k + 1 + int(rng.integers(num_links - 1))) % num_links
            corpus.records.append(AugmentationRecord(
                cause=_cause(rng, k), effect=_effect(rng, j), is_causal=False))
        for n in range(instances_per_link):
            corpus.instances.append(DefeasibleInstance(
                id=f"syn-{k}-{n}",
                domain=DOMAINS[(k + n) % len(DOMAINS)],
                cause=_cause(rng, k),
                effect=_effect(rng, k),
                time_interval=TIME_INTERVALS[(k + n) % len(TIME_INTERVALS)],
                supporter=_supporter(rng, k),
                defeater=_defeater(rng, k)))
        j = (k + 1 + int(rng.integers(num_links - 1))) % num_links
        label = int(rng.integers(1, 3))
        right, wrong = _effect(rng, k), _effect(rng, j)
        corpus.copa.append(CopaInstance(
            premise=_cause(rng, k), ask_for='effect',
            choice1=right if label == 1 else wrong,
            choice2=wrong if label == 1 else right,
            label=label, id=f"copa-{k}"))
    return corpus
