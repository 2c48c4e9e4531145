import importlib

import pytest

from slopegap import config


@pytest.fixture
def reload_config(monkeypatch):
    yield lambda: importlib.reload(config)
    monkeypatch.undo()
    importlib.reload(config)


def test_defaults(reload_config, monkeypatch):
    for key in ("SLOPEGAP_ORBIT_CAP", "SLOPEGAP_SEARCH_LIMIT", "SLOPEGAP_KS_THRESHOLD"):
        monkeypatch.delenv(key, raising=False)
    module = reload_config()
    assert module.ORBIT_CAP == 1_000_000
    assert module.SEARCH_LIMIT == 400
    assert module.KS_THRESHOLD == 0.02


def test_environment_overrides(reload_config, monkeypatch):
    monkeypatch.setenv("SLOPEGAP_PRECISION_DPS", "40")
    monkeypatch.setenv("SLOPEGAP_LOG_LEVEL", "debug")
    module = reload_config()
    assert module.PRECISION_DPS == 40
    assert module.LOG_LEVEL == "DEBUG"


@pytest.mark.parametrize("value", ["0", "-3", "many"])
def test_invalid_values_raise(reload_config, monkeypatch, value):
    monkeypatch.setenv("SLOPEGAP_ORBIT_CAP", value)
    with pytest.raises(EnvironmentError, match="SLOPEGAP_ORBIT_CAP"):
        reload_config()
