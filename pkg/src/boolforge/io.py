"""File formats, canonical JSON, run manifests and the on-disk result cache."""

from __future__ import annotations

import hashlib
import json
import os
import struct
import time
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from .boolfn import TruthTable

MAGIC = b"BFTT"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sIII")  # magic, version, n, reserved


class FormatError(ValueError):
    pass


def encode_table(tt: TruthTable) -> bytes:
    return _HEADER.pack(MAGIC, FORMAT_VERSION, tt.n, 0) + tt.words().astype("<u8").tobytes()


def decode_table(data: bytes) -> TruthTable:
    if len(data) < _HEADER.size:
        raise FormatError("truncated truth-table header")
    magic, version, n, _ = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}")
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported format version {version}")
    if n > 30:
        raise FormatError(f"implausible variable count {n}")
    nwords = max(1, (1 << n) >> 6)
    body = data[_HEADER.size:]
    if len(body) != 8 * nwords:
        raise FormatError(f"expected {8 * nwords} payload bytes, got {len(body)}")
    words = np.frombuffer(body, dtype="<u8")
    if n < 6 and int(words[0]) >> (1 << n):
        raise FormatError("padding bits beyond 2^n are set")
    return TruthTable.from_words(n, words)


def write_table(path: str | os.PathLike, tt: TruthTable) -> None:
    Path(path).write_bytes(encode_table(tt))


def read_table(path: str | os.PathLike) -> TruthTable:
    return decode_table(Path(path).read_bytes())


def _canon(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _canon(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_canon(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(f"{float(obj):.6g}")
    return obj


def canonical_json(obj: Any) -> str:
    """Sorted keys, compact separators, reals at 6 significant digits."""
    return json.dumps(_canon(obj), sort_keys=True, separators=(",", ":"))


def write_manifest(path: str | os.PathLike, command: str, parameters: dict, moduli: dict,
                   argv: list[str], wall_time: float, payload: str | None) -> dict:
    manifest = {
        "command": command,
        "parameters": parameters,
        "moduli": {str(k): f"{v:#x}" for k, v in sorted(moduli.items())},
        "tool_version": __version__,
        "argv": argv,
        "wall_time": wall_time,
        "payload": payload,
        "created": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
    }
    Path(path).write_text(canonical_json(manifest) + "\n")
    return manifest


class ResultCache:
    """Content-addressed store: key = sha256 of (command, canonical parameters, moduli)."""

    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)

    @staticmethod
    def key(command: str, parameters: dict, moduli: dict) -> str:
        blob = canonical_json({"command": command, "parameters": parameters,
                               "moduli": {str(k): v for k, v in moduli.items()},
                               "version": __version__})
        return hashlib.sha256(blob.encode()).hexdigest()

    def _path(self, key: str) -> Path:
        return self.root / key[:2] / f"{key}.json"

    def load(self, key: str) -> Any | None:
        p = self._path(key)
        if not p.exists():
            return None
        return json.loads(p.read_text())

    def store(self, key: str, value: Any) -> None:
        p = self._path(key)
        p.parent.mkdir(parents=True, exist_ok=True)
        tmp = p.with_suffix(".tmp")
        tmp.write_text(canonical_json(value))
        tmp.replace(p)
