"""合成语料上的端到端训练与评估"""
import pytest

from core.config import TrainConfig
from core.text import Vocabulary
from evaluation import cesar_handle, ceq_handle, evaluate_copa, evaluate_defeasibility
from importers import build_augmented_set, split_dataset
from metrics.ceq import build_stats
from model.cesar import CesarModel
from model.training import train
from utils.synthetic import generate_synthetic

# 从随机初始化训练时的学习率倍数（实际学习率 0.02）
LR_SCALE = 2000.0


@pytest.fixture(scope="module")
def corpus():
    return generate_synthetic(seed=42)


@pytest.fixture(scope="module")
def trained(corpus):
    examples = build_augmented_set(corpus.records)
    vocab = Vocabulary.build(corpus.texts())
    model = CesarModel.create(vocab, dim=32, seed=42)
    config = TrainConfig(lr_scale=LR_SCALE, batch_size=8)
    model, history = train(model, examples, config)
    return model, history, examples, vocab


class TestSyntheticCorpus:

    def test_sizes(self, corpus):
        assert len(corpus.records) == 30 * 5
        assert len(corpus.instances) == 60
        assert len(corpus.copa) == 30
        assert len(build_augmented_set(corpus.records)) == 330

    def test_deterministic(self, corpus):
        again = generate_synthetic(seed=42)
        assert again.records == corpus.records
        assert again.instances == corpus.instances

    def test_vocabulary_small(self, corpus):
        assert len(Vocabulary.build(corpus.texts())) <= 200

    def test_needs_two_links(self):
        with pytest.raises(ValueError):
            generate_synthetic(num_links=1)


class TestSyntheticTraining:

    def test_default_schedule(self, trained):
        _, history, examples, _ = trained
        assert len(history) == TrainConfig().epochs
        assert len(examples) <= 2000

    def test_loss_halves(self, trained):
        _, history, _, _ = trained
        assert history[-1] <= 0.5 * history[0]

    def test_defeasibility_accuracy(self, trained, corpus):
        model = trained[0]
        _, dev, test = split_dataset(corpus.instances, seed=42)
        held_out = dev + test
        assert len(held_out) == 22
        report = evaluate_defeasibility(cesar_handle(model), held_out)
        assert report.scored == len(held_out)
        assert report.supporter_accuracy >= 0.85
        assert report.defeater_accuracy >= 0.85

    def test_copa_above_chance(self, trained, corpus):
        assert evaluate_copa(cesar_handle(trained[0]), corpus.copa) > 0.5

    def test_ceq_baseline_runs(self, corpus):
        stats = build_stats(corpus.statements, source="synthetic")
        report = evaluate_defeasibility(ceq_handle(stats), corpus.instances, tie_policy='lenient')
        assert 0.0 <= report.geometric_mean <= 1.0
