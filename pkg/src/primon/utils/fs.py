"""
Filesystem helpers for primon.

Cache and report files are written through a sibling temporary file and an
atomic rename, so a crashed or interrupted run never leaves a half-written
prime table behind.
"""

from __future__ import annotations

import os
from pathlib import Path


def ensure_parent_dir(path: Path) -> Path:
    """
    Create the parent directory of ``path`` (like ``mkdir -p``) and return ``path``.

    Idempotent: calling it on an existing tree is a no-op.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def atomic_write_bytes(path: Path, data: bytes) -> None:
    """
    Write ``data`` to ``path`` atomically.

    The bytes land in ``<name>.tmp`` next to the target first and are moved
    into place with ``os.replace``; readers see either the old file or the
    complete new one.
    """
    path = ensure_parent_dir(Path(path))
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(data)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


def atomic_write_text(path: Path, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))
