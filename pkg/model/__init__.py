"""模型模块 - CESAR 模型、嵌入后端、训练与检查点"""
from model.records import (
    DOMAINS, TIME_INTERVALS, DefeasibleInstance, TrainingExample, AugmentationRecord, CopaInstance
)
from model.embedders import Embedder, LookupEmbedder, MixerEmbedder, FixedEmbedder
from model.cesar import CesarModel, ScoreBreakdown
from model.training import AdamW, LinearSchedule, train, write_curve
from model.checkpoint import FORMAT_VERSION, save_checkpoint, load_checkpoint

__all__ = [
    'DOMAINS', 'TIME_INTERVALS', 'DefeasibleInstance', 'TrainingExample',
    'AugmentationRecord', 'CopaInstance',
    'Embedder', 'LookupEmbedder', 'MixerEmbedder', 'FixedEmbedder',
    'CesarModel', 'ScoreBreakdown',
    'AdamW', 'LinearSchedule', 'train', 'write_curve',
    'FORMAT_VERSION', 'save_checkpoint', 'load_checkpoint'
]
