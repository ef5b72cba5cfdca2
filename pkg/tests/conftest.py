from __future__ import annotations

import logging
import sys
from pathlib import Path

import pytest

TESTS_DIR = Path(__file__).resolve().parent
sys.path.insert(0, str(TESTS_DIR))

from adoptrace.valence import Lexicon, default_lexicon  # noqa: E402

logging.getLogger("adoptrace").setLevel(logging.ERROR)


@pytest.fixture(scope="session")
def lexicon() -> Lexicon:
    return default_lexicon()


@pytest.fixture(scope="session")
def golden_rows() -> list[dict]:
    import json
    return json.loads((TESTS_DIR / "data" / "golden_sentences.json").read_text(encoding="utf-8"))
