import csv
from pathlib import Path

import mpmath
import pytest

from apz import pzeta

DATA = Path(__file__).parent / "data"


@pytest.fixture(autouse=True, scope="session")
def _memory_cache():
    """Keep the suite off the user's cache file."""
    old = pzeta.set_cache(pzeta.ZetaCache(None))
    yield
    pzeta.set_cache(old)


def load_table(name):
    with open(DATA / f"table_{name}.csv", newline="") as fh:
        return list(csv.DictReader(fh))


def digits_agree(computed, printed: str) -> int:
    """Number of leading decimals of ``printed`` reproduced by ``computed``.

    The last printed digit may be truncated or rounded, so a mismatch of one
    unit there still counts as a full match.
    """
    dec = len(printed.split(".")[1])
    with mpmath.workdps(dec + 20):
        diff = abs(mpmath.mpf(computed) - mpmath.mpf(printed))
        if diff <= mpmath.mpf(10) ** (-dec):
            return dec
        return max(0, int(-mpmath.log10(diff)))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
