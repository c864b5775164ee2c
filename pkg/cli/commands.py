"""
子命令实现与入口

退出码：0 成功；1 用法或校验错误；2 运行期错误。
"""
import json
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional

from cli.parser import UsageError, build_parser
from core.config import RunConfig
from core.errors import CausalMetricError, ValidationError
from core.text import Vocabulary
from evaluation import (
    MetricHandle, cesar_handle, ceq_handle, ctcw_handle, evaluate_defeasibility, rock_handle,
    score_copa, shift_report
)
from exporters.report_exporter import ReportExporter, export_dataset_statistics, format_matrix
from importers import (
    build_augmented_set, fill_opposites, load_augmentation_source, load_copa, load_corpus,
    load_defeasibility, load_training_examples, write_jsonl
)
from metrics.ceq import CeqConfig, build_stats
from metrics.providers import create_provider, generate_opposite
from metrics.rock import TableOracle
from model.cesar import CesarModel
from model.checkpoint import load_checkpoint, save_checkpoint
from model.embedders import FixedEmbedder
from model.training import train, write_curve
from utils.log import setup_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2

# 命令行参数 -> 配置键
_FLAG_KEYS = {
    'data': 'paths.data', 'model': 'paths.model', 'corpus': 'paths.corpus', 'fixtures': 'paths.fixtures',
    'rock_table': 'paths.rock_table', 'vocab': 'paths.vocab', 'input': 'paths.input',
    'output': 'paths.output', 'out_dir': 'paths.out_dir',
    'dim': 'model.dim', 'embedder': 'model.embedder', 'embeddings': 'model.embeddings_path',
    'attention_mode': 'model.attention_mode',
    'epochs': 'train.epochs', 'lr': 'train.learning_rate', 'lr_scale': 'train.lr_scale',
    'batch_size': 'train.batch_size', 'warmup_steps': 'train.warmup_steps',
    'metric': 'metric', 'tie_policy': 'tie_policy', 'provider': 'provider', 'template': 'template',
    'supporter_template': 'supporter_template', 'defeater_template': 'defeater_template',
    'ceq_alpha': 'ceq_alpha', 'mode': 'augment_mode', 'jobs': 'jobs',
}


def resolve_config(args) -> RunConfig:
    """配置文件 + 命令行覆盖"""
    config = RunConfig.from_json(args.config) if args.config else RunConfig()
    overrides = {key: getattr(args, flag) for flag, key in _FLAG_KEYS.items() if hasattr(args, flag)}
    if args.seed is not None:
        overrides['seed'] = args.seed
        overrides['train.seed'] = args.seed
    if getattr(args, 'no_specials', False):
        overrides['model.include_specials'] = False
    if getattr(args, 'no_clamp', False):
        overrides['clamp'] = False
    return config.with_overrides(overrides)


def build_metric(config: RunConfig) -> MetricHandle:
    """按配置构造指标"""
    paths = config.paths
    if config.metric == 'cesar':
        config.validate(['model'])
        expected = Vocabulary.load(paths.vocab) if paths.vocab else None
        return cesar_handle(load_checkpoint(paths.model, expected))
    if config.metric == 'ceq':
        config.validate(['corpus'])
        stats = build_stats(load_corpus(paths.corpus), source=str(paths.corpus))
        return ceq_handle(stats, CeqConfig(config.ceq_alpha))
    if config.metric == 'rock':
        config.validate(['rock_table'])
        return rock_handle(TableOracle.from_json(paths.rock_table))
    required = ['fixtures'] if paths.fixtures else []
    config.validate(required)
    # 给定夹具时不再为未知提示派生概率表
    provider = create_provider(config.provider, fixtures=paths.fixtures, strict=paths.fixtures is not None)
    return ctcw_handle(provider, template=config.template, clamp=config.clamp,
                       supporter_template=config.supporter_template,
                       defeater_template=config.defeater_template)


def cmd_augment(args, config: RunConfig) -> int:
    config.validate(['input'])
    if not config.paths.output:
        raise UsageError("augment requires --output")
    records = load_augmentation_source(config.paths.input)
    if args.generate_opposites:
        provider = create_provider(config.provider, fixtures=config.paths.fixtures)
        records = fill_opposites(records, lambda text: generate_opposite(provider, text))
    examples = build_augmented_set(records, config.targets, mode=config.augment_mode)
    write_jsonl(examples, config.paths.output)
    print(f"{len(examples)} examples written to {config.paths.output}")
    return EXIT_OK


def cmd_train(args, config: RunConfig) -> int:
    config.validate(['data'])
    if config.model.embedder == 'fixed' and not Path(config.model.embeddings_path).exists():
        raise ValidationError(f"Embedding file does not exist: {config.model.embeddings_path}")
    if not config.paths.model:
        raise UsageError("train requires --model")
    examples = load_training_examples(config.paths.data, config.targets)
    if not examples:
        raise ValidationError(f"No training examples in {config.paths.data}")
    texts: List[str] = []
    for ex in examples:
        texts += [ex.cause, ex.effect] + ([ex.addition] if ex.addition else [])
    vocab = Vocabulary.build(texts, max_size=config.model.vocab_max_size)
    fixed = None
    if config.model.embedder == 'fixed':
        fixed = FixedEmbedder.from_file(config.model.embeddings_path, vocab)
    model = CesarModel.create(vocab, dim=config.model.dim, embedder=config.model.embedder,
                              attention_mode=config.model.attention_mode,
                              include_specials=config.model.include_specials,
                              max_length=config.model.max_length, seed=config.seed,
                              fixed_embedder=fixed)
    model, history = train(model, examples, config.train)
    model_path = Path(config.paths.model)
    save_checkpoint(model, model_path)
    write_curve(history, model_path.with_name(model_path.stem + ".curve.csv"))
    if config.paths.vocab:
        vocab.save(config.paths.vocab)
    for epoch, loss in enumerate(history, 1):
        print(f"epoch {epoch}: loss {loss:.6f}")
    return EXIT_OK


def cmd_score(args, config: RunConfig) -> int:
    config.validate(['model'])
    expected = Vocabulary.load(config.paths.vocab) if config.paths.vocab else None
    model = load_checkpoint(config.paths.model, expected)
    breakdown = model.score(args.cause, args.effect, args.addition)
    print(f"score: {breakdown.score!r}")
    if args.breakdown:
        for name in ('M', 'A', 'S'):
            print(f"\n{name}:")
            print(format_matrix(getattr(breakdown, name), breakdown.cause_tokens, breakdown.effect_tokens))
    if args.heatmap:
        ReportExporter.export_heatmap({'M': breakdown.M, 'A': breakdown.A, 'S': breakdown.S},
                                      breakdown.cause_tokens, breakdown.effect_tokens, args.heatmap,
                                      title=f"score {breakdown.score:.3f}")
    return EXIT_OK


def _write_report(data: Dict, path: Optional[str]):
    if path:
        Path(path).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        logger.info("Report written to %s", path)


def cmd_eval(args, config: RunConfig) -> int:
    config.validate(['data'])
    data = load_defeasibility(config.paths.data)
    metric = build_metric(config)
    report = evaluate_defeasibility(metric, data, tie_policy=config.tie_policy, jobs=config.jobs)
    print("metric | supporter | defeater | geometric mean")
    print(report.table_row())
    if report.excluded:
        print(f"excluded: {', '.join(report.excluded)}")
    _write_report(report.to_dict(), config.paths.output)
    return EXIT_OK


def cmd_copa(args, config: RunConfig) -> int:
    config.validate(['data'])
    data = load_copa(config.paths.data)
    metric = build_metric(config)
    report = score_copa(metric, data, jobs=config.jobs)
    print(f"{metric.name} COPA accuracy: {100 * report.accuracy:.1f} ({report.correct}/{report.total})")
    _write_report(report.to_dict(), config.paths.output)
    return EXIT_OK


def cmd_shift_report(args, config: RunConfig) -> int:
    config.validate(['data'])
    if not config.paths.out_dir:
        raise UsageError("shift-report requires --out-dir")
    data = load_defeasibility(config.paths.data)
    metric = build_metric(config)
    report = shift_report(metric, data, config.paths.out_dir, jobs=config.jobs)
    print(f"mean delta supporter: {report.mean_supporter_delta:+.4f}")
    print(f"mean delta defeater: {report.mean_defeater_delta:+.4f}")
    return EXIT_OK


def cmd_stats(args, config: RunConfig) -> int:
    config.validate(['data'])
    if not config.paths.output:
        raise UsageError("stats requires --output")
    rows = export_dataset_statistics(load_defeasibility(config.paths.data), config.paths.output)
    for category, value, count in rows:
        print(f"{category:14s} {value:20s} {count}")
    return EXIT_OK


COMMANDS = {
    'augment': cmd_augment,
    'train': cmd_train,
    'score': cmd_score,
    'eval': cmd_eval,
    'copa': cmd_copa,
    'shift-report': cmd_shift_report,
    'stats': cmd_stats,
}


def main(argv: Optional[List[str]] = None) -> int:
    """
    命令行入口

    Parameters:
    -----------
    argv : List[str], optional
        参数列表，默认 sys.argv[1:]

    Returns:
    --------
    int
        退出码
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(str(e), file=sys.stderr)
        return EXIT_VALIDATION
    except SystemExit as e:
        # --help
        return int(e.code or 0)
    setup_logging(args.log_level)
    try:
        config = resolve_config(args)
        config.validate()
        return COMMANDS[args.command](args, config)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except ValidationError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except (CausalMetricError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME
