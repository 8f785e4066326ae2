import os

import pytest

os.environ.setdefault("MPLBACKEND", "Agg")

from disagg.techdb import builtin_catalog, default_machine


@pytest.fixture(scope="session")
def catalog():
    return builtin_catalog()


@pytest.fixture(scope="session")
def machine(catalog):
    return default_machine(catalog)
