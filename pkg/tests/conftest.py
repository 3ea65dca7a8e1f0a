import pytest

from asa_bounds.galois_modules import cyclic_group, symmetric_group
from asa_bounds.utils.parsing import parse_group


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    """Les variables ASA_* de l'opérateur ne doivent pas fuiter dans les tests."""
    for name in ("ASA_PRIME_BOUND", "ASA_DIRICHLET_S", "ASA_MAX_GROUP_ORDER",
                 "ASA_DENSITY_CHUNK", "ASA_DENSITY_WORKERS", "ASA_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)


@pytest.fixture
def c2():
    return cyclic_group(2)


@pytest.fixture
def c3():
    return cyclic_group(3)


@pytest.fixture
def c4():
    return cyclic_group(4)


@pytest.fixture
def klein():
    return parse_group("klein")


@pytest.fixture
def s3():
    return symmetric_group(3)
