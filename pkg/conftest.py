import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent / "src"))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def config_dir():
    return Path(__file__).parent / "config"
