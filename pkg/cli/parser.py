"""
命令行参数定义
"""
import argparse

from core.config import (
    ATTENTION_MODES, AUGMENT_MODES, CTCW_TEMPLATES, EMBEDDER_KINDS, METRIC_NAMES, PROVIDERS, TIE_POLICIES
)
from utils.log import LOG_LEVELS


class UsageError(Exception):
    """命令行用法错误"""


class ArgumentParser(argparse.ArgumentParser):
    """出错时抛出 UsageError 而不是直接退出"""

    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _common(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="JSON run configuration; flags override its values")
    parser.add_argument("--seed", type=int, help="random seed (default: 42)")
    parser.add_argument("--log-level", choices=LOG_LEVELS, default="INFO", help="logging level (default: %(default)s)")


def _metric_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--metric", choices=METRIC_NAMES, help="metric to evaluate (default: cesar)")
    parser.add_argument("--model", help="CESAR checkpoint (metric cesar)")
    parser.add_argument("--corpus", help="causal statement JSONL for CEQ counts (metric ceq)")
    parser.add_argument("--ceq-alpha", type=float, help="CEQ exponent alpha (default: 0.66)")
    parser.add_argument("--rock-table", help="ROCK oracle table JSON (metric rock)")
    parser.add_argument("--provider", choices=PROVIDERS, help="CTCW provider (default: mock)")
    parser.add_argument("--fixtures", help="mock provider fixtures JSONL")
    parser.add_argument("--template", choices=CTCW_TEMPLATES,
                        help="CTCW template for both supporters and defeaters; overrides the two flags below")
    parser.add_argument("--supporter-template", choices=CTCW_TEMPLATES,
                        help="CTCW template for supporters (default: fact)")
    parser.add_argument("--defeater-template", choices=CTCW_TEMPLATES,
                        help="CTCW template for defeaters (default: and_later)")
    parser.add_argument("--no-clamp", action="store_true", help="do not rescale CTCW tables that sum above 1")
    parser.add_argument("--jobs", type=int, help="scoring threads (default: 1)")


def build_parser() -> ArgumentParser:
    """构建带子命令的解析器"""
    parser = ArgumentParser(prog="causal-strength",
                            description="Defeasible causal-strength metrics: CESAR, CEQ, ROCK, CTCW")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=ArgumentParser)
    sub.required = True

    p = sub.add_parser("augment", help="build the augmented training set")
    _common(p)
    p.add_argument("--input", help="augmentation source JSONL {cause, effect, explanation, opposite, is_causal}")
    p.add_argument("--output", help="training JSONL to write")
    p.add_argument("--mode", choices=AUGMENT_MODES, help="full | imbalanced | plain (default: full)")
    p.add_argument("--generate-opposites", action="store_true",
                   help="fill missing opposite explanations through the provider")
    p.add_argument("--provider", choices=PROVIDERS, help="provider for --generate-opposites (default: mock)")
    p.add_argument("--fixtures", help="mock provider fixtures JSONL")

    p = sub.add_parser("train", help="train a CESAR model")
    _common(p)
    p.add_argument("--data", help="training JSONL {cause, addition, effect, target}")
    p.add_argument("--model", help="checkpoint to write; the training curve goes next to it")
    p.add_argument("--vocab", help="also write the vocabulary to this file")
    p.add_argument("--dim", type=int, help="embedding dimension (default: 64)")
    p.add_argument("--embedder", choices=EMBEDDER_KINDS, help="embedding backend (default: lookup)")
    p.add_argument("--embeddings", help="embedding text file for --embedder fixed")
    p.add_argument("--attention-mode", choices=ATTENTION_MODES, help="learned | uniform (default: learned)")
    p.add_argument("--no-specials", action="store_true", help="drop [CLS]/[SEP] rows when scoring")
    p.add_argument("--epochs", type=int, help="training epochs (default: 4)")
    p.add_argument("--lr", type=float, help="base learning rate (default: 1e-5)")
    p.add_argument("--lr-scale", type=float, help="learning-rate multiplier (default: 1)")
    p.add_argument("--batch-size", type=int, help="examples per step (default: 16)")
    p.add_argument("--warmup-steps", type=int, help="linear warmup steps (default: 0)")

    p = sub.add_parser("score", help="score one cause/effect pair with a CESAR model")
    _common(p)
    p.add_argument("--model", help="CESAR checkpoint")
    p.add_argument("--vocab", help="vocabulary that must match the checkpoint")
    p.add_argument("--cause", required=True, help="cause sentence")
    p.add_argument("--effect", required=True, help="effect sentence")
    p.add_argument("--addition", help="supporter or defeater appended to the cause")
    p.add_argument("--breakdown", action="store_true", help="print the M, A and S matrices")
    p.add_argument("--heatmap", help="write an SVG heatmap of M, A and S")

    p = sub.add_parser("eval", help="supporter/defeater accuracy")
    _common(p)
    _metric_flags(p)
    p.add_argument("--data", help="defeasibility JSONL")
    p.add_argument("--tie-policy", choices=TIE_POLICIES, help="strict | lenient (default: strict)")
    p.add_argument("--output", help="write the report as JSON")

    p = sub.add_parser("copa", help="COPA two-choice accuracy")
    _common(p)
    _metric_flags(p)
    p.add_argument("--data", help="COPA JSONL")
    p.add_argument("--output", help="write the report as JSON")

    p = sub.add_parser("shift-report", help="score distribution shift (KDE) report")
    _common(p)
    _metric_flags(p)
    p.add_argument("--data", help="defeasibility JSONL")
    p.add_argument("--out-dir", help="report directory")

    p = sub.add_parser("stats", help="dataset counts per domain and time interval")
    _common(p)
    p.add_argument("--data", help="defeasibility JSONL")
    p.add_argument("--output", help="CSV to write")
    return parser
