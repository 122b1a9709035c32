import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from vnmlab import oracles as orc  # noqa: E402
from vnmlab.gates import hadamard, oracle_apply  # noqa: E402
from vnmlab.statecore import RegisterLayout, prepare  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def xf22():
    return RegisterLayout.of(X=2, F=2)


@pytest.fixture
def two_bit():
    return orc.two_bit_oracle()


@pytest.fixture
def t2_state(xf22, two_bit):
    """1/2 (|0,0> + |1,1> + |2,0> + |3,1>) for the 2-bit example."""
    return oracle_apply(hadamard(prepare(xf22, {"X": 0, "F": 0}), "X"), two_bit, "X", "F")
