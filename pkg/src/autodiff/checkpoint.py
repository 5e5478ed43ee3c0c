"""The "A3DW" binary tensor container.

Layout: magic b"A3DW", one version byte, then per tensor:
name length (u32) + UTF-8 name, rank (u32), extents (u64 each),
values (f64). All integers and floats are little-endian.
"""

import logging
import struct
from pathlib import Path
from typing import Dict, Mapping, Union

import numpy as np

from src.common.exceptions import FormatError

logger = logging.getLogger(__name__)

MAGIC = b"A3DW"
VERSION = 1


def encode_tensors(tensors: Mapping[str, np.ndarray]) -> bytes:
    """Serialize named arrays in mapping order."""
    chunks = [MAGIC, struct.pack("<B", VERSION)]
    for name, array in tensors.items():
        array = np.asarray(array, dtype=np.float64)
        encoded = name.encode("utf-8")
        chunks.append(struct.pack("<I", len(encoded)))
        chunks.append(encoded)
        chunks.append(struct.pack("<I", array.ndim))
        chunks.append(struct.pack(f"<{array.ndim}Q", *array.shape))
        chunks.append(np.ascontiguousarray(array).astype("<f8").tobytes())
    return b"".join(chunks)


def decode_tensors(blob: bytes, source: str = "<bytes>") -> Dict[str, np.ndarray]:
    """
    Parse an A3DW container.

    Raises:
        FormatError: Bad magic, unsupported version, truncation, undecodable or duplicate names
    """
    if blob[:4] != MAGIC:
        raise FormatError(f"{source}: not an A3DW container (bad magic)")
    if len(blob) < 5:
        raise FormatError(f"{source}: truncated header")
    version = blob[4]
    if version != VERSION:
        raise FormatError(f"{source}: unsupported A3DW version {version}")

    tensors: Dict[str, np.ndarray] = {}
    offset = 5

    def take(size: int) -> bytes:
        nonlocal offset
        if offset + size > len(blob):
            raise FormatError(f"{source}: truncated record at byte {offset}")
        chunk = blob[offset:offset + size]
        offset += size
        return chunk

    while offset < len(blob):
        (name_len,) = struct.unpack("<I", take(4))
        name_offset = offset
        try:
            name = take(name_len).decode("utf-8")
        except UnicodeDecodeError:
            raise FormatError(f"{source}: tensor name at byte {name_offset} is not valid UTF-8")
        (rank,) = struct.unpack("<I", take(4))
        extents = struct.unpack(f"<{rank}Q", take(8 * rank)) if rank else ()
        count = int(np.prod(extents)) if rank else 1
        values = np.frombuffer(take(8 * count), dtype="<f8").astype(np.float64)
        if name in tensors:
            raise FormatError(f"{source}: duplicate tensor name {name!r}")
        tensors[name] = values.reshape(extents)
    return tensors


def save_tensors(path: Union[str, Path], tensors: Mapping[str, np.ndarray]) -> Path:
    """Write named arrays to an A3DW file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_tensors(tensors))
    logger.debug(f"Wrote {len(tensors)} tensors to {path}")
    return path


def load_tensors(path: Union[str, Path]) -> Dict[str, np.ndarray]:
    """Read named arrays from an A3DW file."""
    path = Path(path)
    if not path.exists():
        raise FormatError(f"tensor file not found: {path}")
    tensors = decode_tensors(path.read_bytes(), source=str(path))
    logger.debug(f"Loaded {len(tensors)} tensors from {path}")
    return tensors
