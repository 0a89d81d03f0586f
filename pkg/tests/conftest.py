import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from heredpoly import catalog  # noqa: E402

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def data_dir():
    return DATA


@pytest.fixture(scope="session")
def get():
    return catalog.catalog_get
