"""Closed forms and bounds for ndepth, plus the max-min formula type.

Every closed form here assumes nondecreasing weights; inputs are sorted
first because relabeling coordinates does not change ndepth.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import ceil
from typing import Iterable, Sequence

from .errors import NoClosedForm, UsageError
from .lattice import WeightsLike, WeightVector, as_weights

IndexSet = frozenset  # frozenset[int] of 1-based coordinates
MinTerm = frozenset  # frozenset[IndexSet]


@dataclass(frozen=True)
class CanonicalWeights:
    """``sorted.values[j] == original.values[permutation[j] - 1]``."""

    sorted: WeightVector
    permutation: tuple[int, ...]

    def restore(self) -> WeightVector:
        out = [0] * len(self.permutation)
        for j, src in enumerate(self.permutation):
            out[src - 1] = self.sorted.values[j]
        return WeightVector(tuple(out))


def canonicalize(w: WeightsLike) -> CanonicalWeights:
    w = as_weights(w)
    order = sorted(range(w.k), key=lambda i: w.values[i])  # stable
    return CanonicalWeights(
        WeightVector(tuple(w.values[i] for i in order)),
        tuple(i + 1 for i in order),
    )


def angle(w: Sequence[int], index_set: Iterable[int]) -> int:
    """``<I>``: sum of ``w[i-1]`` over ``i`` in ``index_set``."""
    return sum(w[i - 1] for i in index_set)


def upper_bound(w: WeightsLike) -> int:
    """``max(<1..k-1>, <k>)`` on sorted weights; the exact value ``n_1`` when k = 1."""
    n = canonicalize(w).sorted.values
    if len(n) == 1:
        return n[0]
    return max(sum(n[:-1]), n[-1])


def chain_power_ndepth(n: int, k: int) -> int:
    """ndepth of the product of ``k`` chains of length ``n`` minus its bottom."""
    if not isinstance(n, int) or n < 2:
        raise UsageError(f"chain length n must be >= 2, got {n!r}")
    if not isinstance(k, int) or k < 1:
        raise UsageError(f"k must be >= 1, got {k!r}")
    return (n - 1) * ceil(k / 2)


def _index_key(s: IndexSet) -> tuple:
    return (len(s), tuple(sorted(s, reverse=True)))


def _term_key(term: MinTerm) -> tuple:
    return (len(term), sorted(_index_key(s) for s in term))


def _render_set(s: IndexSet) -> str:
    items = sorted(s)
    sep = "," if any(i > 9 for i in items) else ""
    return "<" + sep.join(map(str, items)) + ">"


def _parse_set(text: str) -> IndexSet:
    body = text.strip()
    if "," in body:
        items = [int(p) for p in body.split(",")]
    else:
        items = [int(c) for c in body]
    if not items or any(i < 1 for i in items):
        raise UsageError(f"bad index set <{text}>")
    return frozenset(items)


@dataclass(frozen=True)
class MaxMinFormula:
    """``max`` over min-terms of ``min`` over ``<T>`` for the index sets ``T``."""

    terms: frozenset

    def __post_init__(self):
        terms = frozenset(frozenset(frozenset(s) for s in term) for term in self.terms)
        if not terms:
            raise UsageError("formula needs at least one min-term")
        for term in terms:
            if not term:
                raise UsageError("empty min-term")
            if any(not s for s in term):
                raise UsageError("min-term contains the empty index set")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def of(cls, *terms: Iterable[Iterable[int]]) -> MaxMinFormula:
        return cls(frozenset(frozenset(frozenset(s) for s in t) for t in terms))

    @classmethod
    def parse(cls, text: str) -> MaxMinFormula:
        """Parse ``"max( min(<3>), min(<12>) )"``."""
        body = text.strip()
        m = re.fullmatch(r"max\s*\((.*)\)", body, re.S)
        if not m:
            raise UsageError(f"formula must look like max(...): {text!r}")
        inner = m.group(1)
        terms = []
        for tm in re.finditer(r"min\s*\(([^()]*)\)", inner):
            sets = re.findall(r"<([^<>]*)>", tm.group(1))
            terms.append(frozenset(_parse_set(s) for s in sets))
        if re.sub(r"min\s*\([^()]*\)", "", inner).replace(",", "").strip():
            raise UsageError(f"unexpected text in formula: {text!r}")
        return cls(frozenset(terms))

    @property
    def arity(self) -> int:
        return max(max(s) for term in self.terms for s in term)

    def sorted_terms(self) -> list[list[IndexSet]]:
        ordered = sorted(self.terms, key=_term_key)
        return [sorted(term, key=_index_key) for term in ordered]

    def evaluate(self, w: Sequence[int]) -> int:
        """Value at weights ``w`` taken as already sorted."""
        w = tuple(w)
        if self.arity > len(w):
            raise UsageError(f"formula mentions coordinate {self.arity} but only {len(w)} weights given")
        return max(min(angle(w, s) for s in term) for term in self.terms)

    def __str__(self) -> str:
        parts = ["min(" + ",".join(_render_set(s) for s in term) + ")" for term in self.sorted_terms()]
        return "max( " + ", ".join(parts) + " )"


THEOREM_FORMULAS: dict[int, MaxMinFormula] = {
    1: MaxMinFormula.parse("max( min(<1>) )"),
    2: MaxMinFormula.parse("max( min(<2>) )"),
    3: MaxMinFormula.parse("max( min(<3>), min(<12>) )"),
    4: MaxMinFormula.parse("max( min(<4>), min(<24>,<123>) )"),
    5: MaxMinFormula.parse(
        "max( min(<5>), min(<35>,<1234>), min(<45>,<234>,<135>),"
        " min(<45>,<1234>,<125>), min(<125>,<134>) )"
    ),
}


def closed_form(w: WeightsLike) -> int:
    """Known ndepth for ``k <= 5``; raises :class:`NoClosedForm` beyond."""
    w = as_weights(w)
    if w.k not in THEOREM_FORMULAS:
        raise NoClosedForm(f"no closed form known for k = {w.k}; use the exact solver")
    return THEOREM_FORMULAS[w.k].evaluate(canonicalize(w).sorted.values)
