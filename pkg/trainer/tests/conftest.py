from pathlib import Path

import pytest

FIXTURES = Path(__file__).resolve().parent / "fixtures"


@pytest.fixture(scope="session")
def corpus_path() -> Path:
    return FIXTURES / "train_n250.jsonl"


@pytest.fixture(scope="session")
def manifest_path() -> Path:
    return FIXTURES / "token_manifest.json"
