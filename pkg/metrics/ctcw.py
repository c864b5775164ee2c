"""
CTCW - 对比性时间/因果词概率

s = Σ_{w∈M⁺} p(w) − Σ_{w∈M⁻} p(w)，M⁺ = {before, therefore}，M⁻ = {after, because}

提示由 "C [MASK] E" 句子与固定的说明文字组成，概率由聊天模型给出。
"""
import logging
import re
from dataclasses import dataclass
from decimal import Decimal
from typing import Dict, Optional

from core.errors import CtcwParseError

logger = logging.getLogger(__name__)

CONTRASTIVE_WORDS = ('after', 'before', 'therefore', 'because')
SUPPORTING_WORDS = ('before', 'therefore')
OPPOSING_WORDS = ('after', 'because')

TEMPLATE_AND = 'and'
TEMPLATE_FACT = 'fact'
TEMPLATE_AND_LATER = 'and_later'
TEMPLATES = (TEMPLATE_AND, TEMPLATE_FACT, TEMPLATE_AND_LATER)

# 补充语句的角色
ROLE_SUPPORTER = 'supporter'
ROLE_DEFEATER = 'defeater'
ROLES = (ROLE_SUPPORTER, ROLE_DEFEATER)

MASK = "[MASK]"

INSTRUCTION = (
    "Give the probabilities for each of the listed words to replace the [MASK]:\n"
    "- after\n"
    "- before\n"
    "- therefore\n"
    "- because\n"
    "such that,\n"
    "- \"after\" implies that A happened later than B\n"
    "- \"before\" implies that A happened earlier than B\n"
    "- \"therefore\" implies that A causes B, i.e., A is the cause of B, and B is the effect of A\n"
    "- \"because\" implies that B causes A, i.e., A is the effect of B, and B is the cause.\n"
    "Keep in mind that \"therefore\" and \"because\" have opposite meanings in this context.\n"
    "The sum of probabilities should not exceed 1.0, but if words don't fit well enough, "
    "the sum can be less than 1.0. The probabilities should be based on the descriptions above. "
    "If a word does not fit well, it should have zero probability. The cause should always precede "
    "the effect. Try to list only probabilities without further explanations."
)

# 生成相反解释 ¬H 的指令，后接空行与带引号的原句
OPPOSITE_PROMPT = (
    "You are a helpful assistant that helps to find the opposite of the given sentence. "
    "The real truth is not important just the resulting sentence must be of the opposite meaning, "
    "negating the information that the given sentence tries to convey. Try to not give a simple negation. "
    "Output ONLY the resulting sentence, nothing else. "
    "For example for the prompt: \"Friends join communities.\", the output should be: \"Friends avoid communities.\" "
    "Also for the prompt: \"Sulfonamides cause hemolysis less commonly.\", the output should be "
    "\"Sulfonamides cause hemolysis more commonly.\". "
    "Another example would be that for the prompt: \"Homelessness greatly increases the likelihood of a suicide attempt.\", "
    "the output is: \"Homelessness greatly decreases the likelihood of a suicide attempt.\" "
    "The last example is that for the prompt: \"Production occurs in dense regions.\", "
    "the output must be: \"Production occurs only in sparse regions.\""
)

# 生成相反解释时的采样温度
OPPOSITE_TEMPERATURE = 0.9

_LINE_PATTERN = re.compile(
    r"^[\s\-\*•]*[\"']?(after|before|therefore|because)[\"']?\s*[:=\-]?\s*([-+]?\d*\.?\d+(?:[eE][-+]?\d+)?)\s*(%?)",
    re.IGNORECASE)


def opposite_prompt(sentence: str) -> str:
    """为一句解释构造相反解释的提示"""
    return f"{OPPOSITE_PROMPT}\n\n\"{sentence.strip()}\""


def _strip_period(text: str) -> str:
    text = text.strip()
    while text.endswith("."):
        text = text[:-1].rstrip()
    return text


def _lower_first(text: str) -> str:
    """句首字母小写，首词为全大写缩写（如 NASA）时保持不变"""
    text = text.strip()
    if not text:
        return text
    first_word = text.split()[0]
    letters = [ch for ch in first_word if ch.isalpha()]
    if len(letters) > 1 and all(ch.isupper() for ch in letters):
        return text
    return text[0].lower() + text[1:]


def ctcw_build_prompt(template: Optional[str], cause: str, effect: str,
                      addition: Optional[str] = None) -> str:
    """
    构造 CTCW 提示

    Parameters:
    -----------
    template : str or None
        'and'、'fact' 或 'and_later'；没有补充语句时被忽略
    cause, effect : str
        原因与结果
    addition : str, optional
        支持者或反驳者

    Returns:
    --------
    str
        "<句子>\\n\\n<说明>"
    """
    cause_part = _strip_period(cause)
    effect_part = _lower_first(effect.strip())
    if addition is None:
        if template == TEMPLATE_FACT:
            raise ValueError("The 'fact' template requires a supporter or defeater")
        sentence = f"{cause_part} {MASK} {effect_part}"
    else:
        addition_part = _lower_first(_strip_period(addition))
        if template == TEMPLATE_AND:
            sentence = f"{cause_part} and {addition_part} {MASK} {effect_part}"
        elif template == TEMPLATE_FACT:
            sentence = f"It is a fact that {addition_part}. So, {_lower_first(cause_part)} {MASK} {effect_part}"
        elif template == TEMPLATE_AND_LATER:
            sentence = f"{cause_part}, and later {addition_part} {MASK} {effect_part}"
        else:
            raise ValueError(f"Unknown CTCW template: {template!r}")
    return f"{sentence}\n\n{INSTRUCTION}"


@dataclass(frozen=True)
class ProbabilityTable:
    """四个对比词的概率"""
    after: float
    before: float
    therefore: float
    because: float

    def __post_init__(self):
        for word in CONTRASTIVE_WORDS:
            value = getattr(self, word)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"Probability of {word!r} must lie in [0, 1], got {value}")

    @property
    def raw_sum(self) -> float:
        """四个概率之和（可能超过 1）"""
        return float(sum(Decimal(repr(getattr(self, w))) for w in CONTRASTIVE_WORDS))

    def to_dict(self) -> Dict:
        """转换为字典"""
        return {
            'after': self.after,
            'before': self.before,
            'therefore': self.therefore,
            'because': self.because,
            'raw_sum': self.raw_sum
        }


@dataclass(frozen=True)
class CtcwScore:
    """CTCW 得分：原始值与（可能）归一化后的值"""
    score: float
    raw_score: float
    raw_sum: float
    clamped: bool

    def to_dict(self) -> Dict:
        """转换为字典"""
        return {
            'score': self.score,
            'raw_score': self.raw_score,
            'raw_sum': self.raw_sum,
            'clamped': self.clamped
        }


def ctcw_parse(response: str) -> ProbabilityTable:
    """
    从回复文本中解析四个概率

    逐行匹配 "<词>: <数值>"，允许列表符号、引号与百分号。

    Raises:
    -------
    CtcwParseError
        缺少某个词，或数值不在 [0, 1]
    """
    if not response or not response.strip():
        raise CtcwParseError("Empty CTCW response")
    values: Dict[str, float] = {}
    for line in response.splitlines():
        match = _LINE_PATTERN.match(line)
        if not match:
            continue
        word = match.group(1).lower()
        if word in values:
            continue
        value = Decimal(match.group(2))
        if match.group(3):
            value = value / 100
        if not Decimal(0) <= value <= Decimal(1):
            raise CtcwParseError(f"Probability of {word!r} out of range", line=line)
        values[word] = float(value)
    missing = [w for w in CONTRASTIVE_WORDS if w not in values]
    if missing:
        raise CtcwParseError(f"CTCW response is missing {', '.join(missing)}", line=response.strip())
    return ProbabilityTable(**values)


def ctcw_score_detail(table: ProbabilityTable, clamp: bool = True) -> CtcwScore:
    """
    计算 CTCW 得分

    clamp 为 True 且概率和超过 1 时，先把所有概率除以概率和。
    按十进制求和，0.10 + 0.70 − 0.20 得到精确的 0.60。
    """
    probs = {w: Decimal(repr(getattr(table, w))) for w in CONTRASTIVE_WORDS}
    raw_sum = sum(probs.values())
    raw = sum(probs[w] for w in SUPPORTING_WORDS) - sum(probs[w] for w in OPPOSING_WORDS)
    score = raw
    clamped = False
    if clamp and raw_sum > 1:
        score = raw / raw_sum
        clamped = True
        logger.warning("CTCW probabilities sum to %s; rescaled before scoring", raw_sum)
    return CtcwScore(score=float(score), raw_score=float(raw), raw_sum=float(raw_sum), clamped=clamped)


def ctcw_score(table: ProbabilityTable, clamp: bool = True) -> float:
    """CTCW 得分"""
    return ctcw_score_detail(table, clamp).score


class CtcwMetric:
    """
    CTCW 打分器：构造提示、调用提供者、解析并计分

    支持者与反驳者可以使用不同的拼接模板（默认 fact / and_later）；
    template 给定时两者共用同一模板。无补充语句时使用裸句式。
    """

    def __init__(self, provider, template: Optional[str] = None, clamp: bool = True,
                 supporter_template: str = TEMPLATE_FACT, defeater_template: str = TEMPLATE_AND_LATER):
        if template is not None:
            supporter_template = defeater_template = template
        for name in (supporter_template, defeater_template):
            if name not in TEMPLATES:
                raise ValueError(f"Unknown CTCW template: {name!r}")
        self.provider = provider
        self.supporter_template = supporter_template
        self.defeater_template = defeater_template
        self.clamp = clamp

    def template_for(self, addition: Optional[str], role: Optional[str] = None) -> Optional[str]:
        """补充语句角色对应的模板，未给角色时按支持者处理"""
        if addition is None:
            return None
        if role not in (None,) + ROLES:
            raise ValueError(f"Unknown addition role: {role!r}")
        return self.defeater_template if role == ROLE_DEFEATER else self.supporter_template

    def table(self, cause: str, addition: Optional[str], effect: str,
              role: Optional[str] = None) -> ProbabilityTable:
        """一个输入的概率表"""
        prompt = ctcw_build_prompt(self.template_for(addition, role), cause, effect, addition)
        return ctcw_parse(self.provider.complete(prompt))

    def __call__(self, cause: str, addition: Optional[str], effect: str, role: Optional[str] = None) -> float:
        return ctcw_score(self.table(cause, addition, effect, role), self.clamp)
