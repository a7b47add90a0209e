from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from koenigs.models import Constants, SolverSettings, SpaceKI, SpaceKII, SpaceKIII, Window  # noqa: E402


@pytest.fixture
def settings() -> SolverSettings:
    return SolverSettings()


@pytest.fixture
def flat_ki() -> SpaceKI:
    return SpaceKI(alpha=0.0, beta=0.0, gamma=0.0, delta=1.0, omega=1.0, kx=0.5, ky=0.5)


@pytest.fixture
def curved_ki() -> SpaceKI:
    return SpaceKI(alpha=0.1, beta=0.0, gamma=0.0, delta=1.0, omega=1.0, kx=0.5, ky=0.5)


@pytest.fixture
def flat_kii() -> SpaceKII:
    return SpaceKII(alpha=0.0, beta=0.0, gamma=0.0, delta=1.0, omega=1.0, kx=0.5, ky_lin=0.7)


@pytest.fixture
def hydrogen_kiii() -> SpaceKIII:
    return SpaceKIII(alpha1=0.0, beta=0.0, gamma=0.0, delta=1.0, alpha2=1.0, k1=0.5, k2=0.5, constants=Constants())


@pytest.fixture
def wide_window() -> Window:
    return Window(-8.0, 8.0, -8.0, 8.0)
