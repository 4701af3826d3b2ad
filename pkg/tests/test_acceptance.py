"""
Acceptance suite loading and execution
"""

import os
import sys

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import pytest

from config.settings import DATA_DIR
from src.foldlab.acceptance import load_suite, run_item, run_suite
from src.foldlab.errors import InvalidInputError


def _item(item_id):
    suite = load_suite()
    item = next(i for i in suite["items"] if i["id"] == item_id)
    return dict(item, base_dir=suite["base_dir"])


def test_default_suite_loads():
    suite = load_suite()
    ids = [item["id"] for item in suite["items"]]
    assert suite["suite"] == "foldlab"
    assert ids[:3] == ["folding-table", "coroot-doubling", "twining"]
    assert suite["base_dir"] == os.path.abspath(DATA_DIR)


def test_suite_validation(tmp_path):
    bad_kind = tmp_path / "kind.yaml"
    bad_kind.write_text("items:\n  - {id: a, kind: nope}\n")
    with pytest.raises(InvalidInputError):
        load_suite(str(bad_kind))

    duplicate = tmp_path / "dup.yaml"
    duplicate.write_text("items:\n  - {id: a, kind: chevalley}\n  - {id: a, kind: mf}\n")
    with pytest.raises(InvalidInputError):
        load_suite(str(duplicate))

    with pytest.raises(InvalidInputError):
        load_suite(str(tmp_path / "missing.yaml"))


@pytest.mark.parametrize("item_id", ["folding-table", "coroot-doubling", "nonmonoidality"])
def test_fixture_items_pass(item_id):
    result = run_item(_item(item_id))
    assert result["status"] == "pass", result["detail"]


def test_bad_item_becomes_an_error_status():
    result = run_item({"id": "bad", "kind": "chevalley", "algebras": ["g2"]})
    assert result["status"] == "error"
    assert result["detail"]["error"] == "invalid_input"


def test_only_keeps_suite_order():
    report = run_suite(only=["coroot-doubling", "folding-table"], jobs=2)
    assert [item["id"] for item in report["items"]] == ["folding-table", "coroot-doubling"]
    assert report["summary"]["pass"] == 2
    assert report["passed"]


def test_unknown_only_id():
    with pytest.raises(InvalidInputError):
        run_suite(only=["nope"])


@pytest.mark.slow
def test_full_suite_is_deterministic():
    first = run_suite(jobs=4)
    assert first["status"] in ("pass", "inconclusive")
    assert run_suite(jobs=1) == first
