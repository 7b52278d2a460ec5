import logging
import random

import pytest

from basisgov import Basis

# Engine logging is noisy at scale and irrelevant to assertions.
logging.getLogger("basisgov").setLevel(logging.CRITICAL)


@pytest.fixture
def basis():
    b = Basis(durable=False)
    yield b
    b.close()


@pytest.fixture
def rng():
    return random.Random(0xBA5150)
