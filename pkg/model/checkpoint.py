"""
检查点读写

单个 UTF-8 文本文件：
    第 1 行  JSON 头 {format_version, dim, embedder, attention_mode, include_specials, ...}
    vocab <n> 后接 n 行词
    param <name> <rows> <cols> 后接 rows 行，每行 cols 个 17 位有效数字的实数
"""
import json
import logging
from pathlib import Path
from typing import Dict, List, Optional, Union
import numpy as np

from core.errors import CheckpointError
from core.text import Vocabulary
from model.cesar import CesarModel
from model.embedders import embedder_from_state

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1

_EMBEDDER_PREFIX = "embedder."


def save_checkpoint(model: CesarModel, path: Union[str, Path]):
    """
    保存模型

    Parameters:
    -----------
    model : CesarModel
        模型
    path : str or Path
        输出文件
    """
    state = model.state()
    header = {
        'format_version': FORMAT_VERSION,
        'dim': model.dim,
        'embedder': model.embedder.kind,
        'attention_mode': model.attention_mode,
        'include_specials': model.include_specials,
        'max_length': model.max_length,
        'seed': model.seed,
        'vocab_size': len(model.vocab),
        'vocab_hash': model.vocab.content_hash(),
        'params': sorted(state)
    }
    lines: List[str] = [json.dumps(header, sort_keys=True)]
    lines.append(f"vocab {len(model.vocab)}")
    lines.extend(model.vocab.tokens)
    for name in sorted(state):
        array = np.atleast_2d(state[name])
        lines.append(f"param {name} {array.shape[0]} {array.shape[1]}")
        lines.extend(" ".join("%.17g" % value for value in row) for row in array)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    logger.info("Checkpoint written to %s", path)


def load_checkpoint(path: Union[str, Path], expected_vocab: Optional[Vocabulary] = None) -> CesarModel:
    """
    加载模型

    Parameters:
    -----------
    path : str or Path
        检查点文件
    expected_vocab : Vocabulary, optional
        若给出，其内容哈希必须与检查点一致

    Returns:
    --------
    CesarModel
        重建的模型
    """
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise CheckpointError(f"Cannot read checkpoint {path}: {e}") from e
    if not lines:
        raise CheckpointError(f"Checkpoint {path} is empty")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as e:
        raise CheckpointError(f"Checkpoint {path} has a corrupt header: {e}") from e
    if not isinstance(header, dict):
        raise CheckpointError(f"Checkpoint {path} has a corrupt header")
    version = header.get('format_version')
    if version != FORMAT_VERSION:
        raise CheckpointError(f"Unsupported checkpoint format_version {version!r} (expected {FORMAT_VERSION})")

    cursor = 1
    try:
        tag, count = lines[cursor].split()
        if tag != "vocab":
            raise ValueError("missing vocab section")
        count = int(count)
        vocab = Vocabulary(lines[cursor + 1:cursor + 1 + count])
        cursor += 1 + count
        if len(vocab) != count:
            raise ValueError("truncated vocab section")

        state: Dict[str, np.ndarray] = {}
        while cursor < len(lines):
            parts = lines[cursor].split()
            if not parts:
                cursor += 1
                continue
            if parts[0] != "param" or len(parts) != 4:
                raise ValueError(f"unexpected line {cursor + 1}")
            name, rows, cols = parts[1], int(parts[2]), int(parts[3])
            block = lines[cursor + 1:cursor + 1 + rows]
            if len(block) != rows:
                raise ValueError(f"truncated parameter {name}")
            array = np.array([[float(v) for v in row.split()] for row in block], dtype=np.float64)
            if array.shape != (rows, cols):
                raise ValueError(f"parameter {name} has shape {array.shape}, expected {(rows, cols)}")
            state[name] = array
            cursor += 1 + rows
    except (ValueError, IndexError) as e:
        raise CheckpointError(f"Checkpoint {path} is corrupt: {e}") from e

    vocab_hash = vocab.content_hash()
    if header.get('vocab_hash') != vocab_hash:
        raise CheckpointError("Stored vocabulary does not match the header hash")
    if expected_vocab is not None and expected_vocab.content_hash() != vocab_hash:
        raise CheckpointError("Vocabulary hash mismatch: checkpoint was trained with a different vocabulary")
    missing = set(header.get('params', [])) - set(state)
    if missing or 'w_q' not in state or 'w_k' not in state:
        raise CheckpointError(f"Checkpoint {path} is missing parameters: {sorted(missing) or ['w_q', 'w_k']}")
    for name, array in state.items():
        if not np.all(np.isfinite(array)):
            raise CheckpointError(f"Parameter {name} contains non-finite values")

    embedder_state = {name[len(_EMBEDDER_PREFIX):]: array for name, array in state.items()
                      if name.startswith(_EMBEDDER_PREFIX)}
    try:
        embedder = embedder_from_state(header['embedder'], embedder_state)
        model = CesarModel(vocab, embedder, state['w_q'], state['w_k'],
                           attention_mode=header['attention_mode'],
                           include_specials=bool(header['include_specials']),
                           max_length=int(header.get('max_length', 512)),
                           seed=header.get('seed'))
    except (KeyError, TypeError, ValueError) as e:
        raise CheckpointError(f"Checkpoint {path} is inconsistent: {e}") from e
    if model.dim != header.get('dim'):
        raise CheckpointError(f"Checkpoint dim {header.get('dim')} does not match parameters ({model.dim})")
    return model
