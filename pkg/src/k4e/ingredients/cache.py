"""On-disk cache of search-produced ingredients.

Entries are Design JSON files named ``<key>.v<version>.json`` in the cache
directory (``K4E_CACHE_DIR`` or the packaged ``data/cache``). Every loaded
entry is re-verified; a corrupt entry is ignored and regenerated. Writes go
through a temporary file and an atomic rename.
"""

from __future__ import annotations

import contextlib
import logging
import os
import tempfile
import threading
from pathlib import Path
from typing import Callable, Iterator

from ..model import Design
from ..verify import Report

log = logging.getLogger(__name__)

CACHE_ENV = "K4E_CACHE_DIR"
CACHE_VERSION = 1
_DEFAULT = Path(__file__).resolve().parent.parent / "data" / "cache"

_state = threading.local()
_write_lock = threading.Lock()


def cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    return Path(env) if env else _DEFAULT


def enabled() -> bool:
    return getattr(_state, "enabled", True)


@contextlib.contextmanager
def disabled() -> Iterator[None]:
    """Ignore cached entries (and do not write) inside the block."""
    prev = enabled()
    _state.enabled = False
    try:
        yield
    finally:
        _state.enabled = prev


def set_enabled(flag: bool) -> None:
    _state.enabled = flag


def path_for(key: str) -> Path:
    return cache_dir() / f"{key}.v{CACHE_VERSION}.json"


def load(key: str, check: Callable[[Design], Report]) -> Design | None:
    if not enabled():
        return None
    path = path_for(key)
    if not path.exists():
        return None
    try:
        design = Design.from_json(path.read_text())
    except (ValueError, KeyError, TypeError) as exc:
        log.warning("ignoring unreadable cache entry %s: %s", path, exc)
        return None
    rep = check(design)
    if not rep.ok:
        log.warning("ignoring cache entry %s: %s", path, rep.summary())
        return None
    return design


def store(key: str, design: Design) -> None:
    if not enabled():
        return
    path = path_for(key)
    try:
        with _write_lock:
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
            with os.fdopen(fd, "w") as fh:
                fh.write(design.to_json(indent=None))
                fh.write("\n")
            os.replace(tmp, path)
    except OSError as exc:
        log.warning("could not write cache entry %s: %s", path, exc)


def cached(key: str, build: Callable[[], Design], check: Callable[[Design], Report]) -> Design:
    """Load ``key`` or build, verify and store it."""
    hit = load(key, check)
    if hit is not None:
        return hit
    design = build()
    check(design).raise_for(f"ingredient {key}")
    store(key, design)
    return design

