"""数据导入模块"""
from importers.jsonl_loader import (
    read_jsonl, load_defeasibility, load_copa, load_training_examples,
    load_augmentation_source, load_corpus, write_jsonl
)
from importers.augmentation import build_augmented_set, fill_opposites
from importers.splits import DEFAULT_PROPORTIONS, split_dataset, split_sizes

__all__ = [
    'read_jsonl', 'load_defeasibility', 'load_copa', 'load_training_examples',
    'load_augmentation_source', 'load_corpus', 'write_jsonl',
    'build_augmented_set', 'fill_opposites',
    'DEFAULT_PROPORTIONS', 'split_dataset', 'split_sizes'
]
