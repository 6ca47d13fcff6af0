from pathlib import Path

import pytest

from plmc.core import kernel
from plmc.deps import PLMCSettings, _coerce_bool, build_services, load_settings
from plmc.util.errors import ConfigError


def test_defaults_without_environment():
    settings = load_settings({})
    assert settings == PLMCSettings()


def test_environment_overrides():
    settings = load_settings(
        {
            "PLMC_LOG_LEVEL": "debug",
            "PLMC_MAX_WORKERS": "8",
            "PLMC_KERNEL_CACHE_SIZE": "0",
            "PLMC_OUTPUT_DIR": "/tmp/plmc-out",
            "PLMC_RECORD_TIMING": "yes",
        }
    )
    assert settings.log_level == "DEBUG"
    assert settings.max_workers == 8
    assert settings.kernel_cache_size == 0
    assert settings.output_dir == Path("/tmp/plmc-out")
    assert settings.record_timing is True


@pytest.mark.parametrize(
    "env",
    [{"PLMC_MAX_WORKERS": "many"}, {"PLMC_MAX_WORKERS": "0"}, {"PLMC_KERNEL_CACHE_SIZE": "-1"}],
)
def test_bad_values_raise_config_error(env):
    with pytest.raises(ConfigError):
        load_settings(env)


@pytest.mark.parametrize(
    ("raw", "expected"),
    [(None, False), ("1", True), (" On ", True), ("false", False), ("no", False), ("maybe", False)],
)
def test_coerce_bool(raw, expected):
    assert _coerce_bool(raw, default=False) is expected


def test_build_services_wires_pool_and_cache(tmp_path):
    services = build_services(PLMCSettings(max_workers=3, kernel_cache_size=16, output_dir=tmp_path))
    try:
        assert services.pool.max_workers == 3
        assert kernel.kernel_cache().stats()["max_size"] == 16
    finally:
        services.close()
        kernel.configure_kernel_cache(4096)
