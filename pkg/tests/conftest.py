import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

A, B = (1, 0), (0, 1)


@pytest.fixture
def two_letters():
    return [A, B]
