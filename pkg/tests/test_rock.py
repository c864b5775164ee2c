"""ROCK 干预式因果强度测试"""
import json
from pathlib import Path

import pytest

from core.errors import DataError, EmptyInterventionSetError, NumericError
from metrics.rock import RockInputs, TableOracle, filter_interventions, rock_score

ROOT = Path(__file__).resolve().parent.parent
CAUSE = "The earthquake hit a city."
EFFECT = "Mental health issues arose."


def constant_inputs(base=0.8, other=0.5, epsilon=1e9, confounders=(), propensity=None):
    def precedence(first, second):
        return base if first == "C" else other

    return RockInputs(precedence=precedence, interventions=["A1", "A2", "A3"],
                      propensity=propensity, confounders=list(confounders), epsilon=epsilon)


class TestRockScore:

    def test_constant_oracles(self):
        assert rock_score(constant_inputs(), "C", "E") == pytest.approx(0.3, abs=1e-15)

    def test_large_epsilon_keeps_all(self):
        inputs = constant_inputs(confounders=["x", "y"], propensity=lambda x, e: 0.1 if e == "C" else 0.9)
        assert filter_interventions(inputs, "C") == ["A1", "A2", "A3"]

    def test_zero_epsilon_filters_all(self):
        inputs = constant_inputs(epsilon=0.0, confounders=["x"],
                                 propensity=lambda x, e: 0.2 if e == "C" else 0.6)
        assert filter_interventions(inputs, "C") == []
        with pytest.raises(EmptyInterventionSetError, match="filtered out"):
            rock_score(inputs, "C", "E")

    def test_filter_keeps_close_interventions(self):
        q = {"C": 0.5, "A1": 0.52, "A2": 0.9, "A3": 0.48}
        inputs = constant_inputs(epsilon=0.05, confounders=["x"], propensity=lambda x, e: q[e])
        assert filter_interventions(inputs, "C") == ["A1", "A3"]

    def test_no_interventions(self):
        inputs = RockInputs(precedence=lambda a, b: 0.5, interventions=[])
        with pytest.raises(EmptyInterventionSetError):
            rock_score(inputs, "C", "E")

    def test_range(self):
        assert rock_score(constant_inputs(base=1.0, other=0.0), "C", "E") == 1.0
        assert rock_score(constant_inputs(base=0.0, other=1.0), "C", "E") == -1.0

    def test_precedence_out_of_range(self):
        with pytest.raises(NumericError):
            rock_score(constant_inputs(base=1.2), "C", "E")

    def test_propensity_required_with_confounders(self):
        with pytest.raises(ValueError, match="propensity"):
            RockInputs(precedence=lambda a, b: 0.5, interventions=["A"], confounders=["x"])


class TestTableOracle:

    def test_shipped_table(self):
        oracle = TableOracle.from_json(ROOT / "fixtures" / "rock_table.json")
        base = oracle(CAUSE, None, EFFECT)
        supported = oracle(CAUSE, "A disaster usually leads to suffering and loss of people.", EFFECT)
        defeated = oracle(CAUSE, "Lots of mental health assistance was provided.", EFFECT)
        assert base == pytest.approx(0.3)
        assert supported > base > defeated

    def test_text_normalized(self):
        oracle = TableOracle({("Fire starts.", "Smoke rises."): 0.9}, default_interventions=["x"])
        assert oracle.precedence("fire   STARTS.", "smoke rises.") == 0.9
        assert oracle.precedence("other", "smoke rises.") == 0.5

    def test_missing_row_key(self):
        with pytest.raises(DataError, match="missing"):
            TableOracle.from_dict({'precedence': [{'cause': 'a', 'value': 0.5}]})

    def test_invalid_value(self):
        with pytest.raises(DataError):
            TableOracle.from_dict({'default_precedence': 2.0})

    def test_unreadable_file(self, tmp_path):
        path = tmp_path / "table.json"
        path.write_text("[", encoding="utf-8")
        with pytest.raises(DataError):
            TableOracle.from_json(path)

    def test_round_trip_dict(self, tmp_path):
        data = {
            'precedence': [{'cause': 'c', 'effect': 'e', 'value': 0.6}],
            'interventions': {'c': ['a']},
            'confounders': ['x'],
            'propensity': [{'confounder': 'x', 'event': 'a', 'value': 0.5}],
            'epsilon': 0.5
        }
        path = tmp_path / "table.json"
        path.write_text(json.dumps(data), encoding="utf-8")
        oracle = TableOracle.from_json(path)
        assert oracle("c", None, "e") == pytest.approx(0.1)
