import shutil
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"
SOCCER_DIR = FIXTURES / "soccer"


@pytest.fixture(scope="session")
def soccer_dir() -> Path:
    return SOCCER_DIR


@pytest.fixture(scope="session")
def golden_document(soccer_dir) -> str:
    return (soccer_dir / "golden.ann").read_text(encoding="utf-8")


@pytest.fixture
def soccer_copy(tmp_path) -> Path:
    """Writable copy of the soccer fixture project."""
    target = tmp_path / "soccer"
    shutil.copytree(SOCCER_DIR, target)
    return target
