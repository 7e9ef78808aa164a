import json
import os

import pytest
from pydantic import ValidationError
from pydantic_settings import SettingsConfigDict

from gapforge.config import DEFAULT_MR_ROUNDS, Settings, load_settings, save_settings
from gapforge.forge import ForgePolicy


def _settings_with_file(path):
    return type("FileSettings", (Settings,), {"model_config": SettingsConfigDict(json_file=path)})


def test_defaults():
    settings = Settings(_env_file=None)
    assert settings.mr_rounds == DEFAULT_MR_ROUNDS
    assert settings.prime_strategy == "random"


def test_environment_override(monkeypatch):
    monkeypatch.setenv("GAPFORGE_THREADS", "3")
    monkeypatch.setenv("GAPFORGE_PRIME_STRATEGY", "sequential")
    settings = load_settings()
    assert settings.threads == 3
    assert settings.prime_strategy == "sequential"


def test_keyword_beats_environment(monkeypatch):
    monkeypatch.setenv("GAPFORGE_THREADS", "3")
    assert load_settings(threads=2).threads == 2
    assert load_settings(threads=None).threads == 3


def test_invalid_values(monkeypatch):
    monkeypatch.setenv("GAPFORGE_PRIME_STRATEGY", "spiral")
    with pytest.raises(ValidationError):
        load_settings()
    with pytest.raises(ValidationError):
        load_settings(mr_rounds=0)


def test_worker_count():
    assert Settings(threads=4).worker_count == 4
    assert Settings(threads=0).worker_count == (os.cpu_count() or 1)


def test_save_settings(tmp_path):
    path = save_settings(load_settings(witness_budget=99), tmp_path / "nested" / "config.json")
    data = json.loads(path.read_text(encoding="utf-8"))
    assert data["witness_budget"] == 99
    assert data["prime_strategy"] == "random"


def test_json_file_sits_below_environment(tmp_path, monkeypatch):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"mr_rounds": 9, "witness_budget": 7}), encoding="utf-8")
    file_settings = _settings_with_file(path)
    assert file_settings().mr_rounds == 9
    monkeypatch.setenv("GAPFORGE_MR_ROUNDS", "5")
    settings = file_settings()
    assert settings.mr_rounds == 5
    assert settings.witness_budget == 7


def test_policy_from_settings():
    policy = ForgePolicy.from_settings(load_settings(threads=2, max_candidates=10, prime_strategy="sequential"))
    assert policy.threads == 2
    assert policy.max_candidates == 10
    assert policy.strategy == "sequential"
