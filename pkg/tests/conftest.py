from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent


@pytest.fixture(scope="session")
def schema_dir() -> Path:
    return ROOT / "schemas"
