"""
Cache Middleware - content-addressed result cache
File backend by default (one JSON envelope per key), Redis optional.
Every failure here is logged and turns the cache off; computations never abort.
"""

import fnmatch
import glob
import hashlib
import json
import logging
import os
import tempfile
import threading
from functools import wraps
from typing import Any, Callable, Optional

import redis

# Import from config
import sys
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '../..')))
from config.settings import CACHE_BACKEND, CACHE_DIR, CACHE_ENABLED, CACHE_TTL, REDIS_URL
from src.foldlab.serialization import dumps

logger = logging.getLogger(__name__)

REDIS_PREFIX = "foldlab:"


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


class CacheManager:
    """
    Content-addressed cache with checksummed JSON envelopes
    """

    def __init__(
        self,
        cache_dir: str,
        enabled: bool = True,
        backend: str = "file",
        redis_url: Optional[str] = None,
    ):
        """
        Initialize cache manager

        Args:
            cache_dir: Directory for the file backend
            enabled: Whether caching is enabled
            backend: "file" or "redis"
            redis_url: Redis connection URL (redis backend only)
        """
        self.cache_dir = cache_dir
        self.enabled = enabled
        self.backend = backend
        self.redis_url = redis_url
        self._redis = None
        self._lock = threading.Lock()
        self._stats = {"hits": 0, "misses": 0, "sets": 0, "corrupt": 0}

        if self.enabled and self.backend == "redis":
            try:
                self._redis = redis.from_url(redis_url, decode_responses=True)
                # Test connection
                self._redis.ping()
                logger.info(f"Cache manager initialized (Redis: {redis_url})")
            except Exception as e:
                logger.warning(f"Failed to connect to Redis, caching disabled: {e}")
                self.enabled = False

    def reconfigure(self, cache_dir: Optional[str] = None, enabled: Optional[bool] = None):
        """Point the file backend elsewhere or switch caching on/off"""
        with self._lock:
            if cache_dir is not None:
                self.cache_dir = cache_dir
            if enabled is not None:
                self.enabled = enabled

    @property
    def redis(self):
        if not self.enabled or self._redis is None:
            return None
        return self._redis

    # ------------------------------------------------------------------
    # Envelopes
    # ------------------------------------------------------------------
    def _path(self, key: str) -> str:
        return os.path.join(self.cache_dir, f"{_digest(key)}.json")

    @staticmethod
    def _envelope(key: str, value: Any) -> str:
        payload = dumps(value)
        return json.dumps({"key": key, "checksum": _digest(payload), "payload": payload}, sort_keys=True)

    def _open(self, key: str, raw: str) -> Optional[Any]:
        """Payload of a stored envelope, or None when it fails its checksum"""
        try:
            envelope = json.loads(raw)
            payload = envelope["payload"]
            if envelope.get("key") == key and envelope.get("checksum") == _digest(payload):
                return json.loads(payload)
        except (ValueError, KeyError, TypeError):
            pass
        logger.warning(f"Cache CORRUPT: {key}, recomputing")
        self._count("corrupt")
        return None

    def _count(self, name: str):
        with self._lock:
            self._stats[name] += 1

    def _ensure_dir(self) -> bool:
        try:
            os.makedirs(self.cache_dir, exist_ok=True)
            return True
        except OSError as e:
            logger.warning(f"Cache directory {self.cache_dir} unusable, caching disabled: {e}")
            self.enabled = False
            return False

    # ------------------------------------------------------------------
    # Operations
    # ------------------------------------------------------------------
    def get(self, key: str) -> Optional[Any]:
        """
        Get value from cache

        Args:
            key: Cache key

        Returns:
            Cached value, or None on miss / corrupted entry
        """
        if not self.enabled:
            return None

        try:
            if self.backend == "redis":
                raw = self.redis.get(REDIS_PREFIX + key) if self.redis is not None else None
            else:
                path = self._path(key)
                raw = None
                if os.path.exists(path):
                    with open(path, "r", encoding="utf-8") as handle:
                        raw = handle.read()
        except Exception as e:
            logger.error(f"Cache get error for key '{key}': {e}")
            return None

        if raw is None:
            logger.debug(f"Cache MISS: {key}")
            self._count("misses")
            return None
        value = self._open(key, raw)
        if value is None:
            self._count("misses")
            return None
        logger.debug(f"Cache HIT: {key}")
        self._count("hits")
        return value

    def set(self, key: str, value: Any, ttl: Optional[int] = None):
        """
        Store value under key (overwrites)

        Args:
            key: Cache key
            value: Value to cache (rendered through the lossless JSON encoder)
            ttl: Time-to-live in seconds (redis backend only)
        """
        if not self.enabled:
            return

        envelope = self._envelope(key, value)
        try:
            if self.backend == "redis":
                if self.redis is None:
                    return
                if ttl:
                    self.redis.setex(REDIS_PREFIX + key, ttl, envelope)
                else:
                    self.redis.set(REDIS_PREFIX + key, envelope)
            else:
                if not self._ensure_dir():
                    return
                fd, tmp = tempfile.mkstemp(dir=self.cache_dir, suffix=".tmp")
                with os.fdopen(fd, "w", encoding="utf-8") as handle:
                    handle.write(envelope)
                os.replace(tmp, self._path(key))
            logger.debug(f"Cache SET: {key}")
            self._count("sets")
        except Exception as e:
            logger.warning(f"Cache set error for key '{key}', caching disabled: {e}")
            self.enabled = False

    def delete(self, key: str):
        if not self.enabled:
            return

        try:
            if self.backend == "redis":
                if self.redis is not None:
                    self.redis.delete(REDIS_PREFIX + key)
            else:
                path = self._path(key)
                if os.path.exists(path):
                    os.remove(path)
            logger.debug(f"Cache DELETE: {key}")
        except Exception as e:
            logger.error(f"Cache delete error for key '{key}': {e}")

    def _file_keys(self):
        for path in glob.glob(os.path.join(self.cache_dir, "*.json")):
            try:
                with open(path, "r", encoding="utf-8") as handle:
                    yield json.loads(handle.read()).get("key"), path
            except (OSError, ValueError, AttributeError):
                yield None, path

    def invalidate_pattern(self, pattern: str) -> int:
        """
        Invalidate all keys matching a glob pattern

        Args:
            pattern: Key pattern (e.g., "module:A:*")

        Returns:
            Number of entries removed
        """
        if not self.enabled:
            return 0

        deleted_count = 0
        try:
            if self.backend == "redis":
                if self.redis is not None:
                    for key in self.redis.scan_iter(match=REDIS_PREFIX + pattern):
                        self.redis.delete(key)
                        deleted_count += 1
            else:
                for key, path in list(self._file_keys()):
                    if key is not None and fnmatch.fnmatch(key, pattern):
                        os.remove(path)
                        deleted_count += 1
            logger.info(f"Cache INVALIDATE: {pattern} ({deleted_count} keys)")
        except Exception as e:
            logger.error(f"Cache invalidate error for pattern '{pattern}': {e}")
        return deleted_count

    def flush_all(self):
        """Remove every foldlab entry"""
        if not self.enabled:
            return

        try:
            if self.backend == "redis":
                if self.redis is not None:
                    for key in self.redis.scan_iter(match=REDIS_PREFIX + "*"):
                        self.redis.delete(key)
            else:
                for _, path in list(self._file_keys()):
                    os.remove(path)
            logger.warning("Cache FLUSH: All keys deleted")
        except Exception as e:
            logger.error(f"Cache flush error: {e}")

    def get_stats(self) -> dict:
        """Counters for this process plus the number of stored entries"""
        with self._lock:
            stats = dict(self._stats)
        lookups = stats["hits"] + stats["misses"]
        stats.update({
            "enabled": self.enabled,
            "backend": self.backend,
            "hit_rate": stats["hits"] / lookups if lookups else 0.0,
        })
        if not self.enabled:
            return stats

        try:
            if self.backend == "redis":
                stats["entries"] = sum(1 for _ in self.redis.scan_iter(match=REDIS_PREFIX + "*")) if self.redis else 0
            else:
                stats["cache_dir"] = self.cache_dir
                stats["entries"] = len(glob.glob(os.path.join(self.cache_dir, "*.json")))
        except Exception as e:
            logger.error(f"Failed to get cache stats: {e}")
            stats["error"] = str(e)
        return stats


# Global cache instance
cache_manager = CacheManager(CACHE_DIR, enabled=CACHE_ENABLED, backend=CACHE_BACKEND, redis_url=REDIS_URL)


def cache_key(*args, **kwargs) -> str:
    """
    Generate cache key from arguments

    Args:
        *args, **kwargs: Arguments to hash

    Returns:
        SHA-256 hash of the canonical JSON of the arguments
    """
    key_data = json.dumps({"args": args, "kwargs": kwargs}, sort_keys=True, default=str)
    return _digest(key_data)


def cached(key_prefix: str, ttl: Optional[int] = None):
    """
    Decorator for caching JSON-renderable function results

    Hits and misses return the same canonical JSON structure, so callers
    see identical output whether or not the cache was warm.

    Args:
        key_prefix: Prefix for cache key (e.g., "module")
        ttl: Time-to-live in seconds (uses CACHE_TTL config if not specified)

    Example:
        @cached("twining")
        def twining_payload(series: str, rank: int, labels: tuple):
            ...
    """
    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def wrapper(*args, **kwargs):
            key = f"{key_prefix}:{cache_key(*args, **kwargs)}"

            cached_result = cache_manager.get(key)
            if cached_result is not None:
                return cached_result

            result = json.loads(dumps(func(*args, **kwargs)))

            effective_ttl = ttl
            if effective_ttl is None:
                for config_key, config_ttl in CACHE_TTL.items():
                    if config_key in key_prefix:
                        effective_ttl = config_ttl
                        break

            cache_manager.set(key, result, ttl=effective_ttl)
            return result

        return wrapper
    return decorator


def cache_roundtrip(key: str, value: Any) -> Any:
    """Store value and read it back through the cache (the stored JSON form)"""
    cache_manager.set(key, value)
    loaded = cache_manager.get(key)
    return loaded if loaded is not None else json.loads(dumps(value))


__all__ = [
    'CacheManager',
    'cache_manager',
    'cached',
    'cache_key',
    'cache_roundtrip',
]
