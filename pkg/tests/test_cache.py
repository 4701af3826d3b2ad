"""
Tests for the result cache middleware
Run with the file backend in a temporary directory
"""

import json
import os
import sys

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import pytest
from sympy import Rational

from src.foldlab.reps import freudenthal
from src.foldlab.rootdata import build_root_datum
from src.middleware.cache import CacheManager, cache_key, cache_manager, cache_roundtrip, cached


def test_cache_import():
    """Cache module exposes the global manager and decorator"""
    assert cache_manager is not None
    assert callable(cached)


def test_cache_operations(cache_dir):
    """Set/get/delete on the file backend"""
    value = {"message": "hello", "ratio": "3/4"}
    cache_manager.set("test:basic", value)
    assert cache_manager.get("test:basic") == value
    cache_manager.delete("test:basic")
    assert cache_manager.get("test:basic") is None


def test_cached_decorator_miss_then_hit(cache_dir):
    """Cold cache: the first call computes, the second is served from the cache"""
    calls = []

    @cached("test:decorator")
    def expensive(x):
        calls.append(x)
        return {"double": Rational(x, 3) * 2}

    first = expensive(5)
    second = expensive(5)
    assert first == second == {"double": "10/3"}
    assert calls == [5]
    stats = cache_manager.get_stats()
    assert stats["hits"] >= 1 and stats["sets"] >= 1


def test_weight_diagram_roundtrip(cache_dir):
    """Stored weight diagram of (A, 3, sc, omega_2) comes back identical"""
    datum = build_root_datum("A", 3, "sc")
    diagram = freudenthal(datum, datum.weight_from_labels([0, 1, 0])).to_dict()
    loaded = cache_roundtrip("module:A:3:sc:0,1,0", diagram)
    assert loaded == json.loads(json.dumps(diagram))
    assert loaded["total_dim"] == 6


def test_checksum_mismatch_recomputes(cache_dir):
    """A tampered entry is reported as a miss and overwritten on the next call"""
    calls = []

    @cached("test:corrupt")
    def compute():
        calls.append(1)
        return {"value": 7}

    compute()
    path = cache_manager._path(f"test:corrupt:{cache_key()}")
    with open(path, "r", encoding="utf-8") as handle:
        envelope = json.load(handle)
    envelope["payload"] = json.dumps({"value": 8})
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(envelope, handle)

    assert compute() == {"value": 7}
    assert len(calls) == 2
    assert compute() == {"value": 7}
    assert len(calls) == 2


def test_invalidate_pattern(cache_dir):
    for k in range(3):
        cache_manager.set(f"module:A:{k}", {"k": k})
    cache_manager.set("fold:A:3", {"k": 9})
    assert cache_manager.invalidate_pattern("module:*") == 3
    assert cache_manager.get("fold:A:3") == {"k": 9}


def test_unwritable_dir_disables_cache(tmp_path):
    """Infrastructure failures switch the cache off instead of raising"""
    blocker = tmp_path / "file"
    blocker.write_text("not a directory")
    manager = CacheManager(str(blocker / "cache"), enabled=True)
    manager.set("k", {"v": 1})
    assert manager.enabled is False
    assert manager.get("k") is None


def test_disabled_cache_is_transparent(cache_dir):
    cache_manager.reconfigure(enabled=False)
    calls = []

    @cached("test:disabled")
    def compute():
        calls.append(1)
        return [Rational(1, 2)]

    assert compute() == compute() == ["1/2"]
    assert len(calls) == 2


@pytest.mark.parametrize("garbage", ["", "{\"key\": ", "not json at all", "[1, 2, 3]"])
def test_unreadable_entry_recomputes_through_decorator(cache_dir, garbage):
    """A truncated or garbled file counts as corrupt and the decorator recomputes"""
    calls = []

    @cached("test:garbled")
    def compute(n):
        calls.append(n)
        return {"half": Rational(n, 2)}

    assert compute(3) == {"half": "3/2"}
    path = cache_manager._path(f"test:garbled:{cache_key(3)}")
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(garbage)

    corrupt_before = cache_manager.get_stats()["corrupt"]
    assert compute(3) == {"half": "3/2"}
    assert calls == [3, 3]
    assert cache_manager.get_stats()["corrupt"] == corrupt_before + 1
    assert compute(3) == {"half": "3/2"}
    assert calls == [3, 3]
