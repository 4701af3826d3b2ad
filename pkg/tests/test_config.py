"""
Configuration and logging setup
"""

import json
import logging
import os
import sys

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import pytest

from config import settings
from src.middleware.log_setup import configure_logging


def test_defaults_are_valid():
    """Shipped defaults pass validation"""
    settings.validate_config()
    assert settings.TRUNCATION_ORDER >= 2
    assert settings.sample_bounds() == (-settings.SAMPLE_RANGE, settings.SAMPLE_RANGE)


def test_validation_collects_errors(monkeypatch):
    monkeypatch.setattr(settings, "TRUNCATION_ORDER", 1)
    monkeypatch.setattr(settings, "CACHE_BACKEND", "memcached")
    with pytest.raises(ValueError) as exc:
        settings.validate_config()
    message = str(exc.value)
    assert "FOLDLAB_TRUNCATION_ORDER" in message
    assert "memcached" in message


def test_feature_lookup():
    assert settings.get_feature("no_such_feature") is False
    assert settings.get_feature("cache") == settings.CACHE_ENABLED


def test_json_logging_goes_to_stderr(capsys):
    """Structured log lines land on stderr, stdout stays clean"""
    handler = configure_logging("INFO", "json")
    try:
        logging.getLogger("foldlab.test").info("hello")
        captured = capsys.readouterr()
        assert captured.out == ""
        line = captured.err.strip().splitlines()[-1]
        record = json.loads(line)
        assert record["message"] == "hello"
        assert record["levelname"] == "INFO"
    finally:
        logging.getLogger().removeHandler(handler)


def test_configure_logging_replaces_handler():
    first = configure_logging("WARNING", "text")
    second = configure_logging("WARNING", "text")
    root = logging.getLogger()
    try:
        assert first not in root.handlers
        assert sum(1 for h in root.handlers if h.get_name() == second.get_name()) == 1
    finally:
        root.removeHandler(second)
