import json

import pytest

from padelic.config import Config, ConfigError


def test_defaults():
    cfg = Config()
    assert cfg.to_dict() == {
        "truncation_order": 32,
        "primes": [2, 3, 5, 7],
        "h": "1",
        "tolerance": 1e-9,
        "oracle_budget": 10**7,
        "seed": 42,
        "output": "json",
    }


def test_load_with_aliases(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"truncationOrder": 16, "primeSet": [3, 5], "outputFormat": "text"}))
    cfg = Config.load(path)
    assert cfg.truncation_order == 16 and cfg.primes == (3, 5) and cfg.output == "text"


def test_environment_budget(monkeypatch):
    monkeypatch.setenv("PADELIC_ORACLE_BUDGET", "1234")
    assert Config.load().oracle_budget == 1234


@pytest.mark.parametrize(
    "doc", [{"primeSet": [2, 9]}, {"floatTolerance": 0}, {"oracleBudget": -1}, {"outputFormat": "xml"}, {"bogus": 1}]
)
def test_invalid_documents(tmp_path, doc):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(ConfigError):
        Config.load(path)


def test_missing_and_malformed_files(tmp_path):
    with pytest.raises(ConfigError):
        Config.load(tmp_path / "absent.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    with pytest.raises(ConfigError):
        Config.load(bad)
