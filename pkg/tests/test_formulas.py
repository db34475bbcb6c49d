import itertools
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ndepth.errors import NoClosedForm, UsageError
from ndepth.formulas import (
    THEOREM_FORMULAS,
    MaxMinFormula,
    angle,
    canonicalize,
    chain_power_ndepth,
    closed_form,
    upper_bound,
)

from conftest import sorted_weights


@pytest.mark.parametrize(
    "w, sorted_, perm",
    [
        ((3, 1, 2), (1, 2, 3), (2, 3, 1)),
        ((1, 1, 1), (1, 1, 1), (1, 2, 3)),
        ((4, 4, 1), (1, 4, 4), (3, 1, 2)),
    ],
)
def test_canonicalize(w, sorted_, perm):
    c = canonicalize(w)
    assert c.sorted.values == sorted_
    assert c.permutation == perm
    assert c.restore().values == w


def test_canonicalize_rejects_bad_weights():
    with pytest.raises(UsageError):
        canonicalize((0, 2))


@pytest.mark.parametrize("w, expected", [((1, 2, 3), 3), ((1, 1, 1, 1, 1), 4), ((7,), 7), ((5, 1), 5)])
def test_upper_bound(w, expected):
    assert upper_bound(w) == expected


@pytest.mark.parametrize(
    "w, expected",
    [
        ((1, 2, 3, 4), 6),
        ((1, 1, 1, 1, 1), 3),
        ((2, 2), 2),
        ((1, 1, 2, 3, 5), 7),  # regression value, confirmed by exact search in test_solver
        ((4,), 4),
        ((1, 2, 5), 5),
        ((2, 3, 4), 5),
    ],
)
def test_closed_form(w, expected):
    assert closed_form(w) == expected


def test_closed_form_k6_refused():
    with pytest.raises(NoClosedForm):
        closed_form((1,) * 6)


@pytest.mark.parametrize("n, k, expected", [(2, 5, 3), (3, 4, 4), (4, 1, 3)])
def test_chain_power(n, k, expected):
    assert chain_power_ndepth(n, k) == expected


def test_chain_power_domain():
    with pytest.raises(UsageError):
        chain_power_ndepth(1, 3)
    with pytest.raises(UsageError):
        chain_power_ndepth(3, 0)


@pytest.mark.parametrize("n, k", list(itertools.product([2, 3, 4], range(1, 6))))
def test_closed_form_consistent_with_chain_power(n, k):
    assert closed_form((n - 1,) * k) == chain_power_ndepth(n, k) == (n - 1) * math.ceil(k / 2)


@given(sorted_weights(k_min=2))
def test_closed_form_below_upper_bound(w):
    assert closed_form(w) <= upper_bound(w)


@given(st.lists(st.integers(1, 9), min_size=1, max_size=5), st.randoms(use_true_random=False))
def test_closed_form_permutation_invariant(w, r):
    shuffled = list(w)
    r.shuffle(shuffled)
    assert closed_form(shuffled) == closed_form(w)
    assert upper_bound(shuffled) == upper_bound(w)


@given(sorted_weights(k_min=5, k_max=5, max_entry=50))
def test_k5_dominance_facts(w):
    a = lambda s: angle(w, map(int, s))  # noqa: E731
    assert a("1234") >= a("234")
    assert a("45") >= a("35") >= a("5")
    assert a("1234") >= a("134")


def test_formula_text_round_trip():
    for f in THEOREM_FORMULAS.values():
        assert MaxMinFormula.parse(str(f)) == f
    assert str(THEOREM_FORMULAS[3]) == "max( min(<3>), min(<12>) )"
    assert str(THEOREM_FORMULAS[2]) == "max( min(<2>) )"


def test_formula_rejects_empty_parts():
    with pytest.raises(UsageError):
        MaxMinFormula(frozenset())
    with pytest.raises(UsageError):
        MaxMinFormula.of([])
    with pytest.raises(UsageError):
        MaxMinFormula.of([[]])
    with pytest.raises(UsageError):
        MaxMinFormula.parse("min(<1>)")


def test_formula_evaluate():
    f = MaxMinFormula.parse("max( min(<4>), min(<24>,<123>) )")
    assert f.evaluate((1, 2, 3, 4)) == 6
    assert f.evaluate((1, 1, 1, 5)) == 5
