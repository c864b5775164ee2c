"""可废止性与 COPA 评估测试"""
import math

import pytest

from core.errors import EvaluationError
from evaluation import (
    DefeasibilityReport, MetricHandle, ceq_handle, evaluate_copa, evaluate_defeasibility,
    geometric_mean, parallel_map, score_copa
)
from metrics.ceq import CeqConfig, build_stats
from model.records import CopaInstance, DefeasibleInstance


def make_instances(n):
    return [DefeasibleInstance(id=f"i{k}", domain='health', cause=f"Cause {k}.", effect=f"Effect {k}.",
                               time_interval='years', supporter=f"Support {k}.", defeater=f"Defeat {k}.")
            for k in range(n)]


def oracle(supporter_shift=0.1, defeater_shift=-0.1):
    def fn(cause, addition, effect):
        if addition is None:
            return 0.5
        return 0.5 + (supporter_shift if addition.startswith("Support") else defeater_shift)
    return MetricHandle('cesar', fn)


class TestGeometricMean:

    @pytest.mark.parametrize("supporter, defeater, expected", [
        (0.846, 0.758, 80.1),
        (0.831, 0.175, 38.1),
        (0.325, 0.686, 47.2),
    ])
    def test_reported_rows(self, supporter, defeater, expected):
        report = DefeasibilityReport.from_accuracies(supporter, defeater)
        assert abs(100 * report.geometric_mean - expected) <= 0.05
        assert report.table_row().endswith(f"{expected:.1f}")

    def test_value(self):
        assert abs(geometric_mean(0.846, 0.758) - 0.801) < 5e-4

    def test_accuracy_range(self):
        with pytest.raises(ValueError):
            DefeasibilityReport.from_accuracies(1.2, 0.5)


class TestEvaluateDefeasibility:

    def test_oracle_metric(self):
        report = evaluate_defeasibility(oracle(), make_instances(5))
        assert (report.supporter_accuracy, report.defeater_accuracy, report.geometric_mean) == (1.0, 1.0, 1.0)
        assert report.tie_count == 0
        assert report.table_row() == "cesar | 100.0 | 100.0 | 100.0"

    def test_reversed_oracle(self):
        report = evaluate_defeasibility(oracle(-0.1, 0.1), make_instances(3))
        assert report.geometric_mean == 0.0

    def test_ties(self):
        metric = MetricHandle('cesar', lambda c, a, e: 0.5)
        strict = evaluate_defeasibility(metric, make_instances(4), tie_policy='strict')
        lenient = evaluate_defeasibility(metric, make_instances(4), tie_policy='lenient')
        assert (strict.supporter_accuracy, strict.defeater_accuracy) == (0.0, 0.0)
        assert (lenient.supporter_accuracy, lenient.defeater_accuracy) == (1.0, 1.0)
        assert strict.tie_count == lenient.tie_count == 8

    def test_strict_never_above_lenient(self):
        shifts = {"i0": 0.0, "i1": 0.1, "i2": -0.1, "i3": 0.0}

        def fn(cause, addition, effect):
            key = "i" + cause.split()[1].rstrip(".")
            return 0.5 if addition is None else 0.5 + shifts[key]

        metric = MetricHandle('ceq', fn)
        data = make_instances(4)
        strict = evaluate_defeasibility(metric, data, 'strict')
        lenient = evaluate_defeasibility(metric, data, 'lenient')
        assert strict.supporter_accuracy <= lenient.supporter_accuracy
        assert strict.defeater_accuracy <= lenient.defeater_accuracy

    @pytest.mark.parametrize("transform", [lambda x: 2.0 * x + 1.0, lambda x: math.exp(3.0 * x), math.atan])
    @pytest.mark.parametrize("tie_policy", ['strict', 'lenient'])
    def test_invariant_to_increasing_transform(self, transform, tie_policy):
        base = {"i0": 0.5, "i1": 0.2, "i2": 0.8, "i3": 0.4, "i4": 0.6}
        sup = {"i0": 0.6, "i1": 0.2, "i2": 0.7, "i3": 0.9, "i4": 0.6}
        dfn = {"i0": 0.3, "i1": 0.1, "i2": 0.8, "i3": 0.5, "i4": 0.2}

        def fn(cause, addition, effect):
            key = "i" + cause.split()[1].rstrip(".")
            if addition is None:
                return base[key]
            return sup[key] if addition.startswith("Support") else dfn[key]

        data = make_instances(5)
        plain = evaluate_defeasibility(MetricHandle('cesar', fn), data, tie_policy)
        mapped = evaluate_defeasibility(MetricHandle('cesar', lambda c, a, e: transform(fn(c, a, e))), data,
                                        tie_policy)
        assert mapped.to_dict() == plain.to_dict()

    def test_failures_excluded(self):
        def fn(cause, addition, effect):
            if cause == "Cause 1.":
                raise ValueError("boom")
            return 0.5 if addition is None else (0.6 if addition.startswith("Support") else 0.4)

        report = evaluate_defeasibility(MetricHandle('rock', fn), make_instances(3))
        assert report.excluded == ["i1"]
        assert report.scored == 2
        assert report.to_dict()['excluded'] == ["i1"]

    def test_all_failures(self):
        def fn(cause, addition, effect):
            raise ValueError("boom")

        with pytest.raises(EvaluationError):
            evaluate_defeasibility(MetricHandle('rock', fn), make_instances(2))

    def test_parallel_matches_serial(self):
        data = make_instances(20)
        serial = evaluate_defeasibility(oracle(), data, jobs=1)
        threaded = evaluate_defeasibility(oracle(), data, jobs=4)
        assert serial.deltas == threaded.deltas

    def test_ceq_on_shared_words(self):
        stats = build_stats([("fire smoke", "burn"), ("fire", "ash")])
        data = [DefeasibleInstance("x", 'environment', "Fire.", "Burn.", 'months', "Smoke.", "Rain.")]
        report = evaluate_defeasibility(ceq_handle(stats, CeqConfig(alpha=1.0)), data, tie_policy='lenient')
        assert report.metric == 'ceq'
        assert report.supporter_accuracy == 1.0

    def test_unknown_tie_policy(self):
        with pytest.raises(ValueError):
            evaluate_defeasibility(oracle(), make_instances(1), tie_policy='loose')

    def test_unknown_metric_name(self):
        with pytest.raises(ValueError):
            MetricHandle('bleu', lambda c, a, e: 0.0)


class TestCopa:

    def copa(self, n):
        return [CopaInstance(f"P{k}.", 'effect', f"Right{k}.", f"Wrong{k}.", 1, id=f"c{k}") for k in range(n)]

    def test_three_of_four(self):
        def fn(cause, addition, effect):
            if effect == "Right3.":
                return 0.1
            return 0.9 if effect.startswith("Right") else 0.2

        assert evaluate_copa(MetricHandle('cesar', fn), self.copa(4)) == 0.75

    def test_all_ties(self):
        assert evaluate_copa(MetricHandle('cesar', lambda c, a, e: 0.5), self.copa(3)) == 0.0

    def test_single_correct(self):
        metric = MetricHandle('cesar', lambda c, a, e: 1.0 if e.startswith("Right") else 0.0)
        assert evaluate_copa(metric, self.copa(1)) == 1.0

    def test_label_two_and_cause_direction(self):
        data = [CopaInstance("The toe broke.", 'cause', "Sock tore.", "Hammer fell.", 2, id="c")]
        seen = []

        def fn(cause, addition, effect):
            seen.append((cause, effect))
            return 0.9 if cause == "Hammer fell." else 0.1

        report = score_copa(MetricHandle('cesar', fn), data)
        assert report.accuracy == 1.0
        assert ("Hammer fell.", "The toe broke.") in seen

    def test_empty(self):
        with pytest.raises(EvaluationError):
            evaluate_copa(MetricHandle('cesar', lambda c, a, e: 0.0), [])


class TestParallelMap:

    def test_order_preserved(self):
        assert parallel_map(lambda x: x * x, range(10), jobs=3) == [x * x for x in range(10)]
