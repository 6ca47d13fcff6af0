from __future__ import annotations

import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
SRC = ROOT / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

from plmc.core.potential import PotentialSpec, make_quadratic
from plmc.core.rng import RngStream
from plmc.deps import PLMCSettings, ServiceContainer, build_services


@pytest.fixture()
def isotropic_spec() -> PotentialSpec:
    return make_quadratic([1.0, 1.0], [0.0, 0.0])


@pytest.fixture()
def anisotropic_spec() -> PotentialSpec:
    return make_quadratic([1.0, 4.0], [1.0, -0.5])


@pytest.fixture()
def rng() -> RngStream:
    return RngStream(1234, 0)


@pytest.fixture()
def settings(tmp_path: Path) -> PLMCSettings:
    return PLMCSettings(max_workers=2, output_dir=tmp_path)


@pytest.fixture()
def services(settings: PLMCSettings):
    container: ServiceContainer = build_services(settings)
    yield container
    container.close()
