from __future__ import annotations

import random

import pytest
from hypothesis import strategies as st

from ndepth.lattice import GoodPartition, interval_bits


def random_partition(k: int, rng: random.Random) -> GoodPartition:
    """Uniform-ish random good partition: smallest uncovered mask gets a random free top."""
    size = 1 << k
    full = (1 << size) - 1
    covered = 1
    pairs = []
    while covered != full:
        x = (~covered & (covered + 1)).bit_length() - 1
        tops = [y for y in range(x, size) if y & x == x and not covered & interval_bits(x, y)]
        y = rng.choice(tops)
        pairs.append((x, y))
        covered |= interval_bits(x, y)
    return GoodPartition.from_bits(pairs, k)


def sorted_weights(k_min=1, k_max=5, max_entry=6):
    return st.lists(st.integers(1, max_entry), min_size=k_min, max_size=k_max).map(lambda v: tuple(sorted(v)))


@pytest.fixture
def rng():
    return random.Random(20261016)


ACCEPTANCE_RESULTS: dict[str, tuple[bool, str]] = {}


def pytest_runtest_makereport(item, call):
    if call.when == "call" and item.get_closest_marker("criterion"):
        label = item.get_closest_marker("criterion").args[0]
        ok = call.excinfo is None
        detail = "" if ok else call.excinfo.exconly().splitlines()[0][:160]
        ACCEPTANCE_RESULTS[label] = (ok, detail)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): an acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(ACCEPTANCE_RESULTS, key=lambda s: (int(s.split()[0].rstrip("ab")), s)):
        ok, detail = ACCEPTANCE_RESULTS[label]
        line = f"{'PASS' if ok else 'FAIL'}  criterion {label}"
        terminalreporter.write_line(line + (f"  -- {detail}" if detail else ""))
