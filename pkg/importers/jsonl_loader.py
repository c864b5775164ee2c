"""
JSONL 数据加载器

每个加载器都是完整的校验器：输出的记录满足各自的不变量，
被拒绝的行以行号和字段名报告。
"""
import json
import logging
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional, Tuple, Union

from core.config import TargetLevels
from core.errors import DataError
from model.records import (
    AugmentationRecord, CopaInstance, DefeasibleInstance, TrainingExample,
    normalize_domain, normalize_time_interval
)

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

DEFEASIBILITY_FIELDS = ('id', 'domain', 'cause', 'effect', 'time_interval', 'supporter', 'defeater')
COPA_FIELDS = ('premise', 'ask_for', 'choice1', 'choice2', 'label')
TRAINING_FIELDS = ('cause', 'effect', 'target')
AUGMENTATION_FIELDS = ('cause', 'effect', 'is_causal')


def read_jsonl(path: PathLike) -> Iterator[Tuple[int, Dict]]:
    """
    逐行读取 JSON 对象

    Yields:
    -------
    (linenum, record)
        行号从 1 开始，空行跳过
    """
    try:
        source = open(path, encoding="utf-8")
    except OSError as e:
        raise DataError(f"Cannot open file: {e}", path=str(path)) from e
    with source:
        for linenum, line in enumerate(source, 1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as e:
                raise DataError(f"Invalid JSON: {e.msg}", line=linenum, path=str(path)) from e
            if not isinstance(record, dict):
                raise DataError("Each line must be a JSON object", line=linenum, path=str(path))
            yield linenum, record


def _require(record: Dict, fields: Iterable[str], linenum: int, path: PathLike):
    for name in fields:
        if name not in record or record[name] is None:
            raise DataError("Missing field", line=linenum, field=name, path=str(path))


def _text(record: Dict, name: str, linenum: int, path: PathLike) -> str:
    value = record[name]
    if not isinstance(value, str) or not value.strip():
        raise DataError("Expected a non-empty string", line=linenum, field=name, path=str(path))
    return value


def _finish(items: List, path: PathLike, kind: str) -> List:
    if not items:
        logger.warning("%s contains no %s records", path, kind)
    else:
        logger.info("Loaded %d %s records from %s", len(items), kind, path)
    return items


def load_defeasibility(path: PathLike) -> List[DefeasibleInstance]:
    """
    加载可废止实例

    字段：id, domain, cause, effect, time_interval, supporter, defeater。
    空文件返回空列表并给出警告。
    """
    instances = []
    seen = set()
    for linenum, record in read_jsonl(path):
        _require(record, DEFEASIBILITY_FIELDS, linenum, path)
        texts = {name: _text(record, name, linenum, path)
                 for name in ('cause', 'effect', 'supporter', 'defeater')}
        domain = normalize_domain(str(record['domain']))
        if domain is None:
            raise DataError(f"Unknown domain {record['domain']!r}", line=linenum, field='domain', path=str(path))
        interval = normalize_time_interval(str(record['time_interval']))
        if interval is None:
            raise DataError(f"Unknown time_interval {record['time_interval']!r}",
                            line=linenum, field='time_interval', path=str(path))
        instance_id = str(record['id'])
        if instance_id in seen:
            raise DataError(f"Duplicate id {instance_id!r}", line=linenum, field='id', path=str(path))
        seen.add(instance_id)
        instances.append(DefeasibleInstance(id=instance_id, domain=domain, time_interval=interval, **texts))
    return _finish(instances, path, "defeasibility")


def load_copa(path: PathLike) -> List[CopaInstance]:
    """加载 COPA 实例（premise, ask_for, choice1, choice2, label）"""
    instances = []
    for index, (linenum, record) in enumerate(read_jsonl(path)):
        _require(record, COPA_FIELDS, linenum, path)
        texts = {name: _text(record, name, linenum, path) for name in ('premise', 'choice1', 'choice2')}
        ask_for = str(record['ask_for']).strip().lower()
        if ask_for not in ('cause', 'effect'):
            raise DataError(f"ask_for must be 'cause' or 'effect', got {record['ask_for']!r}",
                            line=linenum, field='ask_for', path=str(path))
        label = record['label']
        if isinstance(label, bool) or label not in (1, 2):
            raise DataError(f"label must be 1 or 2, got {label!r}", line=linenum, field='label', path=str(path))
        instance_id = str(record.get('id', index))
        instances.append(CopaInstance(ask_for=ask_for, label=int(label), id=instance_id, **texts))
    return _finish(instances, path, "COPA")


def load_training_examples(path: PathLike, targets: Optional[TargetLevels] = None) -> List[TrainingExample]:
    """
    加载训练样本（cause, addition, effect, target）

    给出 targets 时，target 必须属于配置的目标集合。
    """
    examples = []
    for linenum, record in read_jsonl(path):
        _require(record, TRAINING_FIELDS, linenum, path)
        cause = _text(record, 'cause', linenum, path)
        effect = _text(record, 'effect', linenum, path)
        addition = record.get('addition')
        if addition is not None:
            addition = _text(record, 'addition', linenum, path)
        target = record['target']
        if isinstance(target, bool) or not isinstance(target, (int, float)) or not 0.0 <= target <= 1.0:
            raise DataError(f"target must be a number in [0, 1], got {target!r}",
                            line=linenum, field='target', path=str(path))
        if targets is not None and not targets.contains(float(target)):
            raise DataError(f"target {target} is not one of {targets.values()}",
                            line=linenum, field='target', path=str(path))
        examples.append(TrainingExample(cause=cause, effect=effect, target=float(target), addition=addition))
    return _finish(examples, path, "training")


def load_augmentation_source(path: PathLike) -> List[AugmentationRecord]:
    """加载增强源记录（cause, effect, explanation, opposite, is_causal）"""
    records = []
    for linenum, record in read_jsonl(path):
        _require(record, AUGMENTATION_FIELDS, linenum, path)
        if not isinstance(record['is_causal'], bool):
            raise DataError("is_causal must be true or false", line=linenum, field='is_causal', path=str(path))
        optional = {}
        for name in ('explanation', 'opposite'):
            if record.get(name) is not None:
                optional[name] = _text(record, name, linenum, path)
        records.append(AugmentationRecord(
            cause=_text(record, 'cause', linenum, path),
            effect=_text(record, 'effect', linenum, path),
            is_causal=record['is_causal'],
            **optional
        ))
    return _finish(records, path, "augmentation")


def load_corpus(path: PathLike) -> List[Tuple[str, str]]:
    """
    加载 CEQ 因果语句语料

    每行至少包含 cause 与 effect；带 is_causal=false 的行跳过。
    """
    statements = []
    for linenum, record in read_jsonl(path):
        _require(record, ('cause', 'effect'), linenum, path)
        if record.get('is_causal') is False:
            continue
        statements.append((_text(record, 'cause', linenum, path), _text(record, 'effect', linenum, path)))
    return _finish(statements, path, "corpus")


def write_jsonl(records: Iterable, path: PathLike) -> int:
    """把带 to_dict() 的记录写成 JSONL，返回行数"""
    count = 0
    with open(path, "w", encoding="utf-8") as sink:
        for record in records:
            data = record.to_dict() if hasattr(record, 'to_dict') else record
            sink.write(json.dumps(data, ensure_ascii=False) + "\n")
            count += 1
    logger.info("Wrote %d records to %s", count, path)
    return count
