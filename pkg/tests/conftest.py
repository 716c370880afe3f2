import sys
from pathlib import Path

import pytest

# Add parent to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from eiscoh.kostant import InfinityType
from eiscoh.lchar import HeckeCharSymbol
from eiscoh.presets import load_tower


@pytest.fixture(scope="session")
def gauss():
    return load_tower("gauss")


@pytest.fixture(scope="session")
def zeta5():
    return load_tower("zeta5")


@pytest.fixture(scope="session")
def root_1pi():
    return load_tower("gauss-root-1pi")


@pytest.fixture
def eta_n3():
    """Balanced for n = 3 at one place."""
    return InfinityType.from_values((0, 3))


@pytest.fixture
def gauss_chi(gauss):
    """eta with infinity type (0, 3) on Q(i), in embedding order."""
    labels = gauss.embeddings.labels
    return HeckeCharSymbol("eta", InfinityType(dict(zip(labels, (0, 3))), gauss.places()), gauss.name)
