"""Content-addressed on-disk memoisation of expensive results."""

from __future__ import annotations

import hashlib
import json
import logging
import os
from pathlib import Path
from typing import Callable

from . import __version__

log = logging.getLogger(__name__)


def default_cache_dir() -> Path:
    env = os.environ.get("VORONOI_BOUNDS_CACHE")
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "voronoi_bounds"


def cache_key(kind: str, params: dict) -> str:
    blob = json.dumps({"kind": kind, "params": params, "version": __version__}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


class Cache:
    """Stores text payloads under the sha256 of their request.

    Each entry records the digest of its payload; an entry that fails to parse
    or whose digest does not match is treated as a miss and rewritten.
    """

    def __init__(self, directory=None, enabled: bool = True):
        self.directory = Path(directory) if directory else default_cache_dir()
        self.enabled = enabled
        self.hits = 0
        self.misses = 0

    def path(self, key: str) -> Path:
        return self.directory / key[:2] / f"{key}.json"

    def _read(self, key: str) -> str | None:
        p = self.path(key)
        try:
            entry = json.loads(p.read_text())
            payload = entry["payload"]
            if hashlib.sha256(payload.encode()).hexdigest() != entry["sha256"] or entry["key"] != key:
                raise ValueError("digest mismatch")
            return payload
        except FileNotFoundError:
            return None
        except (ValueError, KeyError, TypeError) as exc:
            log.warning("discarding corrupt cache entry %s (%s)", p, exc)
            return None

    def _write(self, key: str, payload: str) -> None:
        p = self.path(key)
        p.parent.mkdir(parents=True, exist_ok=True)
        tmp = p.with_suffix(".tmp")
        entry = {"key": key, "sha256": hashlib.sha256(payload.encode()).hexdigest(), "payload": payload}
        tmp.write_text(json.dumps(entry))
        os.replace(tmp, p)

    def get_or_compute(self, kind: str, params: dict, producer: Callable[[], str]) -> str:
        if not self.enabled:
            self.misses += 1
            return producer()
        key = cache_key(kind, params)
        hit = self._read(key)
        if hit is not None:
            self.hits += 1
            return hit
        self.misses += 1
        payload = producer()
        try:
            self._write(key, payload)
        except OSError as exc:
            log.warning("cache write failed: %s", exc)
        return payload
