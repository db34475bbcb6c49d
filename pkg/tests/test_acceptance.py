"""Exit criteria.  Every comparison is exact integer equality."""

import functools
import math
import random
import subprocess
import sys

import pytest

from ndepth.certificates import THEOREM_FAMILIES, certificate_by_name, check_certificate, paper_corpus
from ndepth.formulas import THEOREM_FORMULAS, closed_form, upper_bound
from ndepth.formulas import MaxMinFormula
from ndepth.lattice import lemma1_check, partition_ndepth, validate_good_partition
from ndepth.oracle import (
    count_good_partitions_top_down,
    derive_formula,
    enumerate_good_partitions,
    full_poset_ndepth,
    grid_mismatch,
)
from ndepth.solver import exact_ndepth, sorted_grid

from conftest import random_partition

NODE_LIMIT = 10**8
K3_PARTITIONS = 51


def crit(label):
    return pytest.mark.criterion(label)


@functools.lru_cache(maxsize=None)
def solve(w):
    return exact_ndepth(w, node_limit=NODE_LIMIT)


def criterion_1_instances():
    return [w for k in range(1, 5) for w in sorted_grid(k, 3)]


def criterion_2_instances():
    rng = random.Random(5)
    extra = set()
    grid = set(sorted_grid(5, 3))
    while len(extra) < 30:
        w = tuple(sorted(rng.randint(1, 4) for _ in range(5)))
        if w not in grid:
            extra.add(w)
    return sorted(grid) + sorted(extra)


def criterion_3_instances():
    pairs = [(n, k) for n in (2, 3, 4) for k in range(1, 5)] + [(2, 5), (3, 5)]
    return pairs


def all_instances():
    out = criterion_1_instances() + criterion_2_instances()
    out += [(n - 1,) * k for n, k in criterion_3_instances()]
    out += [(1,) * k for k in range(1, 6)]
    return list(dict.fromkeys(out))


@crit("1 formula agreement k<=4")
def test_criterion_1():
    instances = criterion_1_instances()
    assert [sum(len(w) == k for w in instances) for k in range(1, 5)] == [3, 6, 10, 15]
    bad = [(w, solve(w).value, closed_form(w)) for w in instances if solve(w).value != closed_form(w)]
    assert not bad


@crit("2 formula agreement k=5")
def test_criterion_2():
    instances = criterion_2_instances()
    assert len(instances) >= 21 + 30
    bad = [(w, solve(w).value, closed_form(w)) for w in instances if solve(w).value != closed_form(w)]
    assert not bad


@crit("3 chain-power theorem and scaling")
def test_criterion_3():
    for n, k in criterion_3_instances():
        value = solve((n - 1,) * k).value
        assert value == (n - 1) * math.ceil(k / 2), (n, k)
        assert value == (n - 1) * solve((1,) * k).value, (n, k)


@crit("4 boolean lattice ceil(k/2)")
def test_criterion_4():
    for k in range(1, 6):
        assert solve((1,) * k).value == math.ceil(k / 2), k


@crit("5 upper bound, tight for k<=3")
def test_criterion_5():
    for w in all_instances():
        value = solve(w).value
        assert value <= upper_bound(w), w
        if len(w) <= 3:
            assert value == upper_bound(w), w


@crit("6a all 11 corpus partitions structurally valid as printed")
def test_criterion_6_structure():
    invalid = [
        (c.name, validate_good_partition(c.intervals, c.k).describe())
        for c in paper_corpus()
        if not validate_good_partition(c.intervals, c.k).ok
    ]
    assert len(paper_corpus()) == 11
    assert not invalid, f"not partitions as printed: {invalid}"


@crit("6b corpus claims, 5.1 erratum, example families")
def test_criterion_6_claims():
    reports = {c.name: check_certificate(c) for c in paper_corpus()}
    verified = [name for name, r in reports.items() if r.claim_verified]
    assert len(verified) == 10
    assert "example-5.1" not in verified
    r51 = reports["example-5.1"]
    assert r51.status == "documented-discrepancy"
    assert r51.reduced_term.sets == {frozenset({4})} != certificate_by_name("example-5.1").claim.sets
    fixed = check_certificate(certificate_by_name("example-5.1-erratum"))
    assert fixed.claim_verified and fixed.reduced_term.sets == {frozenset({5})}
    for k, names in THEOREM_FAMILIES.items():
        family = [certificate_by_name(n).partition() for n in names]
        for w in sorted_grid(k, 3):
            assert max(partition_ndepth(P, w) for P in family) == closed_form(w), (k, w)


@crit("7 good partitions lose nothing (full poset)")
def test_criterion_7():
    for w in [(2,), (3,), (1, 1), (1, 2), (2, 2), (1, 1, 1), (1, 1, 2)]:
        assert full_poset_ndepth(w) == solve(w).value, w


@crit("8 lemma on witnesses and 10,000 random partitions")
def test_criterion_8():
    for w in all_instances():
        assert lemma1_check(solve(w).witness).holds, w
    rng = random.Random(8)
    for k in (3, 4):
        for _ in range(10_000):
            P = random_partition(k, rng)
            assert lemma1_check(P).holds, str(P)


@crit("9 derived formulas and enumeration counts")
def test_criterion_9():
    for k in (2, 3, 4):
        derived = derive_formula(k)
        assert grid_mismatch(derived.evaluate, THEOREM_FORMULAS[k].evaluate, k, 4) is None, k
    assert THEOREM_FORMULAS[3] == MaxMinFormula.parse("max( min(<3>), min(<12>) )")
    expected = {1: 1, 2: 3, 3: K3_PARTITIONS}
    for k, count in expected.items():
        assert enumerate_good_partitions(k) == count_good_partitions_top_down(k) == count, k


def _solve_records(weights):
    cmd = [sys.executable, "-m", "ndepth", "solve", *map(str, weights),
           "--format", "records", "--deterministic-witness"]
    return subprocess.run(cmd, capture_output=True, check=True).stdout


@crit("10 deterministic solve output")
def test_criterion_10():
    for w in [(1, 2, 3), (1, 1, 2, 3, 5), (2, 2, 2, 2)]:
        assert _solve_records(w) == _solve_records(w)
