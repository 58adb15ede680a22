"""Binary checkpoints for resumable races.

Layout (little-endian, 73 bytes)::

    b"PRACE" | u32 version | u64 modulus, np, count1, count5, neither,
    last_prime, next_position | u64 checksum

The checksum is the sum, mod 2**64, of the version word and the seven u64
fields before it. Only moduli with two coprime classes (3, 4, 6) fit this
layout.
"""

from __future__ import annotations

import os
import struct
from dataclasses import dataclass
from pathlib import Path

from .errors import CheckpointCorruptError, CheckpointVersionError, ConfigError
from .race import RaceCounters

__all__ = ["FORMAT_VERSION", "Checkpoint", "save_checkpoint", "load_checkpoint", "write_checkpoint", "read_checkpoint"]

MAGIC = b"PRACE"
FORMAT_VERSION = 1
_LAYOUT = struct.Struct("<5sI8Q")
_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class Checkpoint:
    counters: RaceCounters
    next_position: int
    format_version: int = FORMAT_VERSION

    @property
    def modulus(self) -> int:
        return self.counters.modulus


def _checksum(words) -> int:
    return sum(words) & _MASK


def save_checkpoint(state: Checkpoint) -> bytes:
    c = state.counters
    if not c.two_class:
        raise ConfigError(f"checkpoints support two-class moduli only, got {c.modulus}")
    if state.next_position <= c.last_prime:
        raise ConfigError("next_position must lie beyond the last consumed prime")
    words = [c.modulus, c.np, c.count1, c.count5, c.neither, c.last_prime, state.next_position]
    return _LAYOUT.pack(MAGIC, state.format_version, *words, _checksum([state.format_version, *words]))


def load_checkpoint(data: bytes) -> Checkpoint:
    if len(data) != _LAYOUT.size:
        raise CheckpointCorruptError(f"checkpoint must be {_LAYOUT.size} bytes, got {len(data)}")
    magic, version, *words, checksum = _LAYOUT.unpack(data)
    if magic != MAGIC:
        raise CheckpointCorruptError("bad magic")
    if version != FORMAT_VERSION:
        raise CheckpointVersionError(f"unsupported checkpoint version {version}")
    if _checksum([version, *words]) != checksum:
        raise CheckpointCorruptError("checksum mismatch")
    modulus, np_, count1, count5, neither, last_prime, next_position = words
    try:
        counters = RaceCounters(
            modulus=modulus, np=np_, counts=(count1, count5), neither=neither, last_prime=last_prime
        )
    except ConfigError as exc:
        raise CheckpointCorruptError(f"inconsistent counters: {exc}") from exc
    return Checkpoint(counters, next_position, version)


def write_checkpoint(path: str | os.PathLike, state: Checkpoint) -> None:
    """Atomically replace ``path`` with the serialized checkpoint."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(save_checkpoint(state))
    os.replace(tmp, path)


def read_checkpoint(path: str | os.PathLike) -> Checkpoint:
    return load_checkpoint(Path(path).read_bytes())
