from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from coisotropic.ingredients import IngredientList
from coisotropic.schema import parse

FIXTURES = Path(__file__).parent.parent / "fixtures"

settings.register_profile(
    "default", deadline=None, max_examples=25, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def load_fixture(name: str) -> IngredientList:
    return parse((FIXTURES / name).read_text())


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def thurston() -> IngredientList:
    return load_fixture("thurston.json")


@pytest.fixture
def thurston_c0() -> IngredientList:
    return load_fixture("thurston_c0.json")


@pytest.fixture
def delzant_cp2() -> IngredientList:
    return load_fixture("delzant_cp2.json")


@pytest.fixture
def benoist() -> IngredientList:
    return load_fixture("benoist_cex.json")


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    for name in ("COISO_LOG_LEVEL", "COISO_REPORT_WORKERS", "COISO_HOLONOMY_WORD_LENGTH", "COISO_MAX_POLYTOPE_DIM"):
        monkeypatch.delenv(name, raising=False)
