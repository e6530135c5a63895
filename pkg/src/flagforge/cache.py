"""Disk cache for heavyweight exact artifacts (product tables, pairing
tensors), keyed by content hashes of their defining parameters.

Caching is enabled only when FLAGFORGE_CACHE_DIR names a directory (the CLI
sets a default unless --no-cache); library users opt in via the same
variable.  Entries store exact rationals as strings, so cache hits are
bit-identical to recomputation and results never depend on cache state.
"""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path
from typing import Optional

_ENV_DIR = "FLAGFORGE_CACHE_DIR"
_ENV_OFF = "FLAGFORGE_NO_CACHE"


def cache_dir() -> Optional[Path]:
    if os.environ.get(_ENV_OFF, "") not in ("", "0"):
        return None
    d = os.environ.get(_ENV_DIR)
    if not d:
        return None
    path = Path(d)
    path.mkdir(parents=True, exist_ok=True)
    return path


def default_dir() -> str:
    return str(Path.home() / ".cache" / "flagforge")


def _path_for(key: str) -> Optional[Path]:
    base = cache_dir()
    if base is None:
        return None
    digest = hashlib.sha256(key.encode()).hexdigest()[:32]
    return base / f"{digest}.json"


def get_json(key: str) -> Optional[dict]:
    path = _path_for(key)
    if path is None or not path.exists():
        return None
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError):
        return None
    if obj.get("__key__") != key:
        return None
    return obj


def put_json(key: str, obj: dict) -> None:
    path = _path_for(key)
    if path is None:
        return
    obj = dict(obj)
    obj["__key__"] = key
    tmp = path.with_suffix(".tmp")
    with open(tmp, "w") as fh:
        json.dump(obj, fh)
    os.replace(tmp, path)
