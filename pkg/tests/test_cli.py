"""
Command line surface: JSON on stdout and exit codes 0/1/2/3
"""

import json
import logging
import os
import sys

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import pytest
from click.testing import CliRunner

import main
from config.settings import SCHEMA_DIR
from main import EXIT_FAILED, EXIT_INCONCLUSIVE, EXIT_INVALID, EXIT_OK, entry, run_command
from src.foldlab.errors import ComputationError, InconclusiveError
from src.middleware.cache import cache_manager


@pytest.fixture(autouse=True)
def isolated():
    """Restore the cache manager and drop the stderr handler after each run"""
    previous = (cache_manager.cache_dir, cache_manager.enabled)
    yield
    cache_manager.reconfigure(cache_dir=previous[0], enabled=previous[1])
    root = logging.getLogger()
    for handler in list(root.handlers):
        if handler.get_name() == "foldlab-stderr":
            root.removeHandler(handler)


def run(capsys, tmp_path, *args):
    code = run_command(["--cache-dir", str(tmp_path / "cache"), "--log-level", "ERROR", *args])
    out = capsys.readouterr().out.strip()
    return code, out


def test_fold_A3(capsys, tmp_path):
    code, out = run(capsys, tmp_path, "fold", "--type", "A", "--rank", "3", "--perm", "3,2,1")
    payload = json.loads(out)
    assert code == EXIT_OK
    assert payload["folded"]["type"] == "C2"
    assert payload["automorphism"]["order"] == 2
    assert all(row["match"] for row in payload["orbit_coroots"])


def test_fold_output_is_deterministic(capsys, tmp_path):
    args = ("fold", "--type", "A", "--rank", "4", "--perm", "4,3,2,1")
    _, first = run(capsys, tmp_path, *args)
    _, cached = run(capsys, tmp_path, *args)
    _, uncached = run(capsys, tmp_path, "--no-cache", *args)
    assert first == cached == uncached
    assert json.loads(first)["folded"]["type"] == "B2"


@pytest.mark.parametrize(
    "args",
    [
        ("frobnicate",),
        ("fold", "--rank", "3"),
        ("fold", "--type", "A", "--rank", "3", "--perm", "3,x,1"),
        ("section-check",),
        ("oper", "residue", "--algebra", "sl2"),
    ],
)
def test_usage_errors_exit_3(capsys, tmp_path, args):
    code, out = run(capsys, tmp_path, *args)
    assert code == EXIT_INVALID
    assert json.loads(out)["error"] == "usage"


@pytest.mark.parametrize(
    "args",
    [
        ("fold", "--type", "A", "--rank", "3", "--perm", "2,1,3"),
        ("fold", "--type", "Q", "--rank", "3"),
        ("invariants", "--algebra", "g2"),
        ("twining", "--type", "A", "--rank", "2", "--perm", "2,1", "--weight", "1,0"),
        ("spectrum", "--algebra", "sl3", "--weight", "1,1", "--sigma", "1,2"),
    ],
)
def test_invalid_input_exits_3(capsys, tmp_path, args):
    code, out = run(capsys, tmp_path, *args)
    assert code == EXIT_INVALID
    assert json.loads(out)["error"] == "invalid_input"


def test_dual(capsys, tmp_path):
    code, out = run(capsys, tmp_path, "dual", "--type", "B", "--rank", "2", "--perm", "")
    payload = json.loads(out)
    assert code == EXIT_OK
    assert payload["dual"]["type"] == "C2"
    assert payload["dual"]["isogeny_class"]["adjoint"]


def test_twining(capsys, tmp_path):
    code, out = run(capsys, tmp_path, "twining", "--type", "A", "--rank", "2", "--perm", "2,1", "--weight", "1,1")
    assert code == EXIT_OK
    assert json.loads(out)["passed"]


def test_lr_and_witness(capsys, tmp_path):
    code, out = run(capsys, tmp_path, "lr", "--n", "3", "--lhs", "2,1", "--rhs", "2,1", "--check-characters")
    assert code == EXIT_OK
    assert json.loads(out)["characters_agree"]
    code, out = run(capsys, tmp_path, "witness-nonmonoidal")
    assert code == EXIT_OK
    assert json.loads(out)["nu_pgl"] == [5, 2, 1]


def test_hc_on_sl2(capsys, tmp_path):
    code, out = run(capsys, tmp_path, "hc", "--algebra", "sl2", "--weight", "2")
    assert code == EXIT_OK
    assert json.loads(out)["casimir"] == "4"


def test_compatible_pair(capsys, tmp_path):
    code, out = run(capsys, tmp_path, "compatible-pair", "--algebra", "sl4", "--policy", "zero")
    payload = json.loads(out)
    assert code == EXIT_OK
    assert payload["folded"] == "sp4"
    assert payload["passed"]


def test_oper_commands(capsys, tmp_path):
    connection = tmp_path / "conn.json"
    connection.write_text(json.dumps({"v": {"h1": [1, 2], "E12": ["1/2"]}}))
    code, out = run(capsys, tmp_path, "--order", "4", "oper", "reduce", "--algebra", "sl2", "--input", str(connection))
    assert code == EXIT_OK
    assert json.loads(out)["canonical"]["coefficients"][0]["degree"] == 1

    code, out = run(capsys, tmp_path, "oper", "residue", "--algebra", "sl3", "--weight", "1,0")
    assert code == EXIT_OK
    assert json.loads(out)["passed"]


def test_spectrum_sl2(capsys, tmp_path):
    code, out = run(capsys, tmp_path, "spectrum", "--algebra", "sl2", "--weight", "2", "--chi", "1,-1")
    payload = json.loads(out)
    assert code == EXIT_OK
    assert payload["simple"]
    assert payload["dimension_sum"] == 3


def test_accept_single_item(capsys, tmp_path):
    code, out = run(capsys, tmp_path, "accept", "--only", "folding-table")
    payload = json.loads(out)
    assert code == EXIT_OK
    assert payload["status"] == "pass"
    assert [item["id"] for item in payload["items"]] == ["folding-table"]


def test_cache_stats(capsys, tmp_path):
    run(capsys, tmp_path, "fold", "--type", "A", "--rank", "3", "--perm", "3,2,1")
    code, out = run(capsys, tmp_path, "cache-stats")
    stats = json.loads(out)
    assert code == EXIT_OK
    assert stats["entries"] >= 1
    code, out = run(capsys, tmp_path, "cache-stats", "--flush")
    assert json.loads(out)["entries"] == 0


@pytest.mark.parametrize(
    "schema,args",
    [
        ("fold", ("fold", "--type", "A", "--rank", "4", "--perm", "4,3,2,1")),
        ("twining", ("twining", "--type", "A", "--rank", "3", "--perm", "3,2,1", "--weight", "0,1,0")),
        ("spectrum", ("spectrum", "--algebra", "sl2", "--weight", "1")),
        ("accept", ("accept", "--only", "coroot-doubling")),
        ("error", ("invariants", "--algebra", "g2")),
    ],
)
def test_outputs_carry_schema_fields(capsys, tmp_path, schema, args):
    """Every key the published schema requires is present"""
    with open(os.path.join(SCHEMA_DIR, f"{schema}.schema.json"), "r", encoding="utf-8") as handle:
        required = json.load(handle)["required"]
    _, out = run(capsys, tmp_path, *args)
    payload = json.loads(out)
    assert set(required) <= set(payload)


# ============================================
# Process exit codes
# ============================================
def invoke(tmp_path, *args):
    runner = CliRunner()
    result = runner.invoke(entry, ["--cache-dir", str(tmp_path / "cache"), "--log-level", "ERROR", *args])
    return result.exit_code, json.loads(result.output.strip().splitlines()[-1])


def test_exit_code_ok(tmp_path):
    code, payload = invoke(tmp_path, "fold", "--type", "A", "--rank", "3", "--perm", "3,2,1")
    assert code == EXIT_OK
    assert payload["folded"]["type"] == "C2"


def test_exit_code_failed_check(tmp_path):
    suite = tmp_path / "suite.yaml"
    suite.write_text("suite: broken\nitems:\n  - {id: bad-algebra, kind: chevalley, algebras: [g2]}\n")
    code, payload = invoke(tmp_path, "accept", "--suite", str(suite))
    assert code == EXIT_FAILED
    assert payload["status"] == "fail"


def test_exit_code_computation_error(tmp_path, monkeypatch):
    def broken(*args, **kwargs):
        raise ComputationError("pairing does not reproduce the Cartan matrix")

    monkeypatch.setattr(main, "fold_payload", broken)
    code, payload = invoke(tmp_path, "fold", "--type", "A", "--rank", "3")
    assert code == EXIT_FAILED
    assert payload["error"] == "computation_failed"


def test_exit_code_inconclusive(tmp_path, monkeypatch):
    def undecided(*args, **kwargs):
        raise InconclusiveError("eigenvalue split stayed degenerate")

    monkeypatch.setattr(main, "fold_payload", undecided)
    code, payload = invoke(tmp_path, "fold", "--type", "A", "--rank", "3")
    assert code == EXIT_INCONCLUSIVE
    assert payload["error"] == "inconclusive"


def test_inconclusive_status_maps_to_exit_2():
    assert main._exit_code({"status": "inconclusive", "passed": False}) == EXIT_INCONCLUSIVE
    assert main._exit_code({"passed": False}) == EXIT_FAILED
    assert main._exit_code({"passed": True}) == EXIT_OK


@pytest.mark.parametrize(
    "args,error",
    [
        (("fold", "--type", "Q", "--rank", "3"), "invalid_input"),
        (("fold", "--rank", "3"), "usage"),
    ],
)
def test_exit_code_invalid(tmp_path, args, error):
    code, payload = invoke(tmp_path, *args)
    assert code == EXIT_INVALID
    assert payload["error"] == error
