"""CTCW 提示、解析、计分与离线提供者测试"""
import json
from pathlib import Path

import pytest

from core.errors import CtcwParseError, DataError, ProviderError
from evaluation import ctcw_handle, evaluate_defeasibility
from importers import load_defeasibility
from metrics.ctcw import (
    INSTRUCTION, OPPOSITE_PROMPT, CtcwMetric, ProbabilityTable, ctcw_build_prompt, ctcw_parse,
    ctcw_score, ctcw_score_detail, opposite_prompt
)
from metrics.providers import MockProvider, format_table, generate_opposite, mock_opposite, prompt_digest

ROOT = Path(__file__).resolve().parent.parent
CAUSE = "The earthquake hit a city."
EFFECT = "Mental health issues arose."
SUPPORTER = "A disaster usually leads to suffering and loss of people."
DEFEATER = "Lots of mental health assistance was provided."


def sentence_of(prompt):
    sentence, instruction = prompt.split("\n\n", 1)
    assert instruction == INSTRUCTION
    return sentence


class TestBuildPrompt:

    def test_bare_pair(self):
        prompt = ctcw_build_prompt(None, CAUSE, EFFECT)
        assert sentence_of(prompt) == "The earthquake hit a city [MASK] mental health issues arose."

    def test_fact_with_supporter(self):
        prompt = ctcw_build_prompt('fact', CAUSE, EFFECT, SUPPORTER)
        assert sentence_of(prompt) == ("It is a fact that a disaster usually leads to suffering and loss of people. "
                                       "So, the earthquake hit a city [MASK] mental health issues arose.")

    def test_and_later_with_defeater(self):
        prompt = ctcw_build_prompt('and_later', CAUSE, EFFECT, DEFEATER)
        assert sentence_of(prompt) == ("The earthquake hit a city, and later lots of mental health "
                                       "assistance was provided [MASK] mental health issues arose.")

    def test_and_template(self):
        prompt = ctcw_build_prompt('and', "Fire starts.", "Smoke rises.", "Wind blows.")
        assert sentence_of(prompt) == "Fire starts and wind blows [MASK] smoke rises."

    def test_acronym_kept(self):
        prompt = ctcw_build_prompt(None, "A rocket failed.", "NASA cancelled the launch.")
        assert sentence_of(prompt) == "A rocket failed [MASK] NASA cancelled the launch."

    def test_fact_requires_addition(self):
        with pytest.raises(ValueError, match="fact"):
            ctcw_build_prompt('fact', CAUSE, EFFECT)

    def test_unknown_template(self):
        with pytest.raises(ValueError, match="template"):
            ctcw_build_prompt('or', CAUSE, EFFECT, SUPPORTER)


class TestParse:

    def test_case_study_table(self):
        table = ctcw_parse("- after: 0.30\n- before: 0.50\n- therefore: 0.20\n- because: 0.00")
        assert (table.after, table.before, table.therefore, table.because) == (0.3, 0.5, 0.2, 0.0)
        assert table.raw_sum == 1.0

    def test_loose_formats(self):
        table = ctcw_parse('Sure!\n* "After" = 10%\nbefore 0.2\n- therefore: .5\nBecause: 0\nthanks')
        assert (table.after, table.before, table.therefore, table.because) == (0.1, 0.2, 0.5, 0.0)

    def test_missing_word(self):
        with pytest.raises(CtcwParseError, match="because"):
            ctcw_parse("- after: 0.30\n- before: 0.50\n- therefore: 0.20")

    def test_out_of_range(self):
        with pytest.raises(CtcwParseError, match="out of range") as info:
            ctcw_parse("after 1.3\nbefore 0.1\ntherefore 0.1\nbecause 0.1")
        assert info.value.line == "after 1.3"

    def test_empty_response(self):
        with pytest.raises(CtcwParseError):
            ctcw_parse("  ")


class TestScore:

    @pytest.mark.parametrize("probs, expected", [
        ((0.30, 0.50, 0.20, 0.00), 0.40),
        ((0.20, 0.10, 0.70, 0.00), 0.60),
        ((0.30, 0.10, 0.40, 0.00), 0.20),
    ])
    def test_case_study_values(self, probs, expected):
        assert ctcw_score(ProbabilityTable(*probs)) == expected

    def test_clamp(self):
        detail = ctcw_score_detail(ProbabilityTable(0.5, 0.5, 0.5, 0.5), clamp=True)
        assert detail.clamped
        assert detail.raw_sum == 2.0
        assert detail.score == 0.0
        detail = ctcw_score_detail(ProbabilityTable(0.0, 0.9, 0.9, 0.0), clamp=True)
        assert detail.score == 1.0
        assert detail.raw_score == 1.8

    def test_no_clamp(self):
        detail = ctcw_score_detail(ProbabilityTable(0.0, 0.9, 0.9, 0.0), clamp=False)
        assert not detail.clamped
        assert detail.score == 1.8

    def test_table_range_checked(self):
        with pytest.raises(ValueError):
            ProbabilityTable(0.1, 0.2, 1.1, 0.0)


class TestCaseStudy:

    def test_shipped_fixtures(self):
        provider = MockProvider.from_jsonl(ROOT / "fixtures" / "case_study.jsonl", strict=True)
        metric = CtcwMetric(provider, template='fact')
        base = metric(CAUSE, None, EFFECT)
        supported = metric(CAUSE, SUPPORTER, EFFECT)
        defeated = CtcwMetric(provider, template='and_later')(CAUSE, DEFEATER, EFFECT)
        assert (base, supported, defeated) == (0.40, 0.60, 0.20)
        assert supported > base > defeated

    def test_role_templates(self):
        provider = MockProvider.from_jsonl(ROOT / "fixtures" / "case_study.jsonl", strict=True)
        metric = CtcwMetric(provider)
        assert (metric.supporter_template, metric.defeater_template) == ('fact', 'and_later')
        assert metric(CAUSE, None, EFFECT) == 0.40
        assert metric(CAUSE, SUPPORTER, EFFECT, role='supporter') == 0.60
        assert metric(CAUSE, DEFEATER, EFFECT, role='defeater') == 0.20

    def test_shared_template_misses_defeater_fixture(self):
        provider = MockProvider.from_jsonl(ROOT / "fixtures" / "case_study.jsonl", strict=True)
        with pytest.raises(ProviderError, match="No fixture"):
            CtcwMetric(provider, template='fact')(CAUSE, DEFEATER, EFFECT, role='defeater')

    def test_unknown_role(self):
        with pytest.raises(ValueError, match="role"):
            CtcwMetric(MockProvider())(CAUSE, SUPPORTER, EFFECT, role='witness')

    def test_evaluation_uses_roles(self):
        provider = MockProvider.from_jsonl(ROOT / "fixtures" / "case_study.jsonl", strict=True)
        data = load_defeasibility(ROOT / "fixtures" / "case_study_instance.jsonl")
        report = evaluate_defeasibility(ctcw_handle(provider), data)
        assert (report.supporter_accuracy, report.defeater_accuracy) == (1.0, 1.0)
        assert report.excluded == []
        assert report.deltas[0][1:] == pytest.approx((0.2, -0.2))

    def test_fixtures_built_from_prompts(self, tmp_path):
        rows = [
            (ctcw_build_prompt(None, CAUSE, EFFECT), (0.3, 0.5, 0.2, 0.0)),
            (ctcw_build_prompt('fact', CAUSE, EFFECT, SUPPORTER), (0.2, 0.1, 0.7, 0.0)),
        ]
        path = tmp_path / "fixtures.jsonl"
        with open(path, "w", encoding="utf-8") as f:
            for prompt, (a, b, t, c) in rows:
                f.write(json.dumps({'prompt_sha256': prompt_digest(prompt),
                                    'after': a, 'before': b, 'therefore': t, 'because': c}) + "\n")
        provider = MockProvider.from_jsonl(path, strict=True)
        assert ctcw_parse(provider.complete(rows[0][0])) == ProbabilityTable(0.3, 0.5, 0.2, 0.0)
        assert CtcwMetric(provider)(CAUSE, SUPPORTER, EFFECT) == 0.60


class TestMockProvider:

    def test_deterministic(self):
        first = MockProvider().complete("Some unknown prompt")
        second = MockProvider().complete("Some unknown prompt")
        assert first == second
        table = ctcw_parse(first)
        assert table.raw_sum <= 1.0

    def test_strict_unknown_prompt(self):
        with pytest.raises(ProviderError, match="No fixture"):
            MockProvider(strict=True).complete("Some unknown prompt")

    def test_format_parses_back(self):
        table = ProbabilityTable(0.25, 0.125, 0.5, 0.0)
        assert ctcw_parse(format_table(table)) == table

    def test_missing_fixture_field(self, tmp_path):
        path = tmp_path / "f.jsonl"
        path.write_text(json.dumps({'prompt_sha256': 'x', 'after': 0.1}) + "\n", encoding="utf-8")
        with pytest.raises(DataError, match="before"):
            MockProvider.from_jsonl(path)

    def test_opposite_generation(self):
        provider = MockProvider()
        assert opposite_prompt("Friends join communities.").startswith(OPPOSITE_PROMPT)
        assert generate_opposite(provider, "Usually fire brings smoke.") == "Usually fire halts smoke."
        assert mock_opposite("The sky is blue.") == "It is not true that the sky is blue."
