import numpy as np
import pytest

from lcodec.codes import BchParams, bch_construct, hamming_7_4

HAMMING_H = np.array(
    [[1, 1, 0, 1, 1, 0, 0],
     [1, 0, 1, 1, 0, 1, 0],
     [0, 1, 1, 1, 0, 0, 1]], dtype=np.uint8)


@pytest.fixture(scope="session")
def hamming():
    return hamming_7_4()


@pytest.fixture(scope="session")
def bch15_7():
    return bch_construct(BchParams(4, 2))


@pytest.fixture(scope="session")
def bch15_11():
    return bch_construct(BchParams(4, 1))


@pytest.fixture(scope="session")
def bch63_45():
    return bch_construct(BchParams(6, 3))


def random_full_rank(rng, rows, cols):
    from lcodec.gf2 import rank_mod2

    while True:
        M = rng.integers(0, 2, (rows, cols), dtype=np.uint8)
        if rank_mod2(M) == min(rows, cols):
            return M


@pytest.fixture(scope="session")
def trained_bch15_7(bch15_7):
    """Vanilla net trained on BCH(15,7) at 4 dB for 2e4 batches of 128 (about 90 s)."""
    from lcodec.training import TrainConfig, train

    return train(bch15_7, None, "vanilla", TrainConfig(batch_count=20_000, seed=1))


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(line)
