"""对照指标模块 - CEQ、ROCK、CTCW"""
from metrics.ceq import CeqConfig, CooccurrenceStats, CeqMetric, build_stats, ceq_score
from metrics.rock import RockInputs, TableOracle, filter_interventions, rock_score
from metrics.ctcw import (
    CONTRASTIVE_WORDS, TEMPLATES, INSTRUCTION, OPPOSITE_PROMPT, ProbabilityTable, CtcwScore,
    CtcwMetric, ctcw_build_prompt, ctcw_parse, ctcw_score, ctcw_score_detail, opposite_prompt
)
from metrics.providers import (
    ChatProvider, MockProvider, HttpProvider, create_provider, generate_opposite, prompt_digest
)

__all__ = [
    'CeqConfig', 'CooccurrenceStats', 'CeqMetric', 'build_stats', 'ceq_score',
    'RockInputs', 'TableOracle', 'filter_interventions', 'rock_score',
    'CONTRASTIVE_WORDS', 'TEMPLATES', 'INSTRUCTION', 'OPPOSITE_PROMPT', 'ProbabilityTable',
    'CtcwScore', 'CtcwMetric', 'ctcw_build_prompt', 'ctcw_parse', 'ctcw_score',
    'ctcw_score_detail', 'opposite_prompt',
    'ChatProvider', 'MockProvider', 'HttpProvider', 'create_provider', 'generate_opposite',
    'prompt_digest'
]
