import threading
from concurrent.futures import ThreadPoolExecutor

import pytest

from engine.errors import ConfigurationError
from utils import config
from utils.config import EngineSettings, get_settings, load_settings, override_settings


@pytest.fixture
def clean_env(monkeypatch):
    for key in config._ENV_KEYS.values():
        monkeypatch.delenv(key, raising=False)
    return monkeypatch


def test_defaults(clean_env):
    assert load_settings() == EngineSettings()


def test_environment_overrides(clean_env):
    clean_env.setenv("TRACE_MAX_DEGREE", "32")
    clean_env.setenv("TRACE_JOBS", "4")
    clean_env.setenv("TRACE_LOG_LEVEL", "debug")
    settings = load_settings()
    assert settings.max_degree == 32
    assert settings.jobs == 4
    assert settings.log_level == "DEBUG"


@pytest.mark.parametrize("key, value", [
    ("TRACE_DIM_CAP", "big"),
    ("TRACE_EXT_BOUND", "0"),
    ("TRACE_SEED", "-3"),
])
def test_invalid_environment(clean_env, key, value):
    clean_env.setenv(key, value)
    with pytest.raises(ConfigurationError):
        load_settings()


def test_override_ignores_none():
    before = get_settings()
    with override_settings(seed=9, jobs=None) as settings:
        assert settings.seed == 9
        assert settings.jobs == before.jobs
        assert get_settings() is settings
    assert get_settings() == before


def test_override_is_validated():
    with pytest.raises(ConfigurationError):
        with override_settings(max_degree=0):
            pass


def test_overrides_stay_in_their_thread():
    before = get_settings()
    barrier = threading.Barrier(2)

    def run(seed):
        with override_settings(seed=seed):
            # both threads hold an override at the same time
            barrier.wait(timeout=5)
            seen = get_settings().seed
            barrier.wait(timeout=5)
        return seen

    with ThreadPoolExecutor(max_workers=2) as pool:
        seen = list(pool.map(run, [101, 202]))
    assert seen == [101, 202]
    assert get_settings() == before
