"""
A JSON cache for oracle results.

Every entry is one file named by a digest of its key. Files are written to a temporary
name first and published with ``os.replace``, so readers never see partial entries.
"""

import hashlib
import json
import logging
import os
import tempfile
from typing import Any, Callable, Optional

from .settings import settings

logger = logging.getLogger(__name__)


class OracleCache:
    """
    Append-only cache of JSON values keyed by the parameters of an oracle call.

    Args:
        root: The cache directory; ``PTW_CACHE`` when omitted.
        enabled: A disabled cache computes every value and stores nothing.
    """

    def __init__(self, root: Optional[str] = None, enabled: bool = True) -> None:
        self.root = root or settings.PTW_CACHE
        self.enabled = enabled
        self.hits = 0
        self.misses = 0

    @staticmethod
    def key_of(op: str, **params) -> str:
        return json.dumps({"op": op, **params}, sort_keys=True, default=str)

    def _path(self, key: str) -> str:
        digest = hashlib.sha256(key.encode("utf-8")).hexdigest()
        return os.path.join(self.root, digest[:2], f"{digest}.json")

    def get(self, key: str) -> Optional[Any]:
        if not self.enabled:
            return None
        path = self._path(key)
        try:
            with open(path, "r", encoding="utf-8") as f:
                entry = json.load(f)
        except FileNotFoundError:
            return None
        except json.JSONDecodeError:
            logger.debug(f"ignoring unreadable cache entry {path}")
            return None
        if entry.get("key") != key:
            return None
        return entry["value"]

    def put(self, key: str, value: Any) -> None:
        if not self.enabled:
            return
        path = self._path(key)
        os.makedirs(os.path.dirname(path), exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path), suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as f:
                json.dump({"key": key, "value": value}, f, sort_keys=True)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.remove(tmp)
            raise

    def get_or_compute(self, key: str, compute: Callable[[], Any]) -> Any:
        """Return the cached value or compute, publish and return it."""
        value = self.get(key)
        if value is not None:
            self.hits += 1
            logger.debug(f"oracle cache hit: {key}")
            return value
        self.misses += 1
        logger.debug(f"oracle cache miss: {key}")
        value = compute()
        self.put(key, value)
        return value


_default_cache: Optional[OracleCache] = None


def default_cache() -> OracleCache:
    global _default_cache
    if _default_cache is None:
        _default_cache = OracleCache()
    return _default_cache


def configure_cache(root: Optional[str] = None, enabled: bool = True) -> OracleCache:
    """Replace the process-wide cache, e.g. from the command line configuration."""
    global _default_cache
    _default_cache = OracleCache(root, enabled)
    return _default_cache
