"""Brute-force cross-checks that do not share code with the solver.

* :func:`full_poset_ndepth` searches *all* interval partitions of the full
  product of chains, not just the good ones.
* :func:`induce_to_masks` intersects a full-poset partition with the copy of
  the boolean lattice sitting at coordinates 0/1.
* :func:`enumerate_good_partitions` lists every partition of the nonzero
  masks; :func:`count_good_partitions_top_down` counts them another way.
* :func:`derive_formula` turns the enumeration into a reduced max-min formula.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import prod
from typing import Callable, Iterable, Iterator, Sequence

from .errors import ResourceLimitError, UsageError
from .formulas import MaxMinFormula
from .lattice import GoodPartition, Interval, SubsetMask, WeightsLike, as_weights, interval_bits

FULL_POSET_LIMIT = 20
MAX_ENUM_ARITY = 4

GeneralPoint = tuple  # tuple[int, ...] with 0 <= x_i <= n_i


@dataclass(frozen=True)
class GeneralInterval:
    bottom: GeneralPoint
    top: GeneralPoint

    def __post_init__(self):
        if len(self.bottom) != len(self.top):
            raise UsageError("arity mismatch in general interval")
        if any(b > t for b, t in zip(self.bottom, self.top)):
            raise UsageError(f"bottom {self.bottom} not below top {self.top}")
        if not any(self.bottom):
            raise UsageError("general interval bottom must be nonzero")

    def __contains__(self, z) -> bool:
        return all(b <= c <= t for b, c, t in zip(self.bottom, z, self.top))

    @property
    def depth(self) -> int:
        return sum(self.top)


def _poset_points(n: Sequence[int]) -> list[tuple[int, ...]]:
    pts = [p for p in itertools.product(*(range(m + 1) for m in n)) if any(p)]
    # a linear extension: anything below p has a smaller coordinate sum
    pts.sort(key=lambda p: (sum(p), p))
    return pts


def _below(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


class _FullPoset:
    def __init__(self, w: WeightsLike):
        self.n = as_weights(w).values
        size = prod(m + 1 for m in self.n) - 1
        if size > FULL_POSET_LIMIT:
            raise ResourceLimitError(
                f"full poset has {size} elements; the brute force is capped at {FULL_POSET_LIMIT}"
            )
        self.points = _poset_points(self.n)
        self.index = {p: i for i, p in enumerate(self.points)}
        self.full = (1 << len(self.points)) - 1
        self.tops = []
        for x in self.points:
            row = []
            for y in self.points:
                if _below(x, y):
                    bits = 0
                    for i, z in enumerate(self.points):
                        if _below(x, z) and _below(z, y):
                            bits |= 1 << i
                    row.append((y, bits))
            self.tops.append(row)

    def partitions(self) -> Iterator[list[GeneralInterval]]:
        chosen: list[GeneralInterval] = []

        def rec(covered):
            if covered == self.full:
                yield list(chosen)
                return
            i = (~covered & (covered + 1)).bit_length() - 1
            x = self.points[i]
            for y, bits in self.tops[i]:
                if covered & bits:
                    continue
                chosen.append(GeneralInterval(x, y))
                yield from rec(covered | bits)
                chosen.pop()

        yield from rec(0)

    def best(self) -> tuple[int, list[GeneralInterval]]:
        best = [0, None]
        chosen = []

        def rec(covered, current):
            if current <= best[0]:
                return
            if covered == self.full:
                best[0], best[1] = current, list(chosen)
                return
            i = (~covered & (covered + 1)).bit_length() - 1
            x = self.points[i]
            for y, bits in self.tops[i]:
                if covered & bits:
                    continue
                chosen.append(GeneralInterval(x, y))
                rec(covered | bits, min(current, sum(y)))
                chosen.pop()

        rec(0, sum(self.n) + 1)
        return best[0], best[1]


def full_poset_ndepth(w: WeightsLike) -> int:
    """ndepth over every interval partition of the nonzero submultisets."""
    return _FullPoset(w).best()[0]


def full_poset_partitions(w: WeightsLike) -> Iterator[list[GeneralInterval]]:
    """Every interval partition of the full poset (tiny instances only)."""
    return _FullPoset(w).partitions()


def induce_to_masks(P: Iterable[GeneralInterval], w: WeightsLike) -> tuple[Interval, ...]:
    """Intersect each interval with the 0/1 points; drop empty intersections."""
    k = as_weights(w).k
    out = []
    for iv in P:
        if len(iv.bottom) != k:
            raise UsageError("interval arity does not match weights")
        if any(b > 1 for b in iv.bottom):
            continue
        bottom = SubsetMask(k, sum(1 << (k - 1 - i) for i, b in enumerate(iv.bottom) if b))
        top = SubsetMask(k, sum(1 << (k - 1 - i) for i, t in enumerate(iv.top) if t >= 1))
        out.append(Interval(bottom, top))
    return tuple(out)


def _check_enum_arity(k: int) -> None:
    if k > MAX_ENUM_ARITY:
        raise ResourceLimitError(
            f"enumerating all partitions for k = {k} is infeasible (cap is {MAX_ENUM_ARITY}); "
            "use the exact solver for individual weight vectors instead"
        )
    if k < 1:
        raise UsageError(f"k must be >= 1, got {k}")


def _good_partition_pairs(k: int) -> Iterator[tuple[tuple[int, int], ...]]:
    size = 1 << k
    full = (1 << size) - 1
    opts = {}
    for x in range(1, size):
        opts[x] = [(y, interval_bits(x, y)) for y in range(x, size) if y & x == x]
    chosen = []

    def rec(covered):
        if covered == full:
            yield tuple(chosen)
            return
        x = (~covered & (covered + 1)).bit_length() - 1
        for y, bits in opts[x]:
            if covered & bits:
                continue
            chosen.append((x, y))
            yield from rec(covered | bits)
            chosen.pop()

    yield from rec(1)


def enumerate_good_partitions(k: int, visitor: Callable[[GoodPartition], object] | None = None) -> int:
    """Visit every good partition of arity ``k`` once; return how many there are."""
    _check_enum_arity(k)
    count = 0
    for pairs in _good_partition_pairs(k):
        count += 1
        if visitor is not None:
            visitor(GoodPartition.from_bits(pairs, k))
    return count


def count_good_partitions_top_down(k: int) -> int:
    """Count partitions by fixing tops instead of bottoms.

    The numerically largest uncovered mask has every strict superset
    covered, so it must be a top; its bottom ranges over its submasks.
    Memoized on the covered set.
    """
    _check_enum_arity(k)
    size = 1 << k
    full = (1 << size) - 2

    def members(b, t):
        return sum(1 << z for z in range(1, size) if z & b == b and z & t == z)

    @lru_cache(maxsize=None)
    def count(covered):
        if covered == full:
            return 1
        todo = full & ~covered
        y = todo.bit_length() - 1
        total = 0
        for b in range(1, y + 1):
            if b & y == b:
                bits = members(b, y)
                if not covered & bits:
                    total += count(covered | bits)
        return total

    return count(0)


def suffix_dominates(S: Iterable[int], T: Iterable[int], k: int) -> bool:
    """``<S> >= <T>`` for every ``1 <= n_1 <= ... <= n_k``.

    Writing ``n_i`` as a sum of nonnegative increments shows this holds
    iff ``S`` has at least as many members as ``T`` in each suffix ``{j..k}``.
    """
    S, T = set(S), set(T)
    for s in (S, T):
        if any(not 1 <= i <= k for i in s):
            raise UsageError(f"index set {sorted(s)} not inside 1..{k}")
    s_count = t_count = 0
    for j in range(k, 0, -1):
        s_count += j in S
        t_count += j in T
        if s_count < t_count:
            return False
    return True


def reduce_min_term(term: Iterable[Iterable[int]], k: int) -> frozenset:
    """Drop every set that dominates another member; it can never be the min."""
    sets = {frozenset(s) for s in term}
    return frozenset(
        s for s in sets if not any(o != s and suffix_dominates(s, o, k) for o in sets)
    )


def term_dominated(B, A, k: int) -> bool:
    """``min B <= min A`` everywhere: each ``a`` in A dominates some ``b`` in B."""
    return all(any(suffix_dominates(a, b, k) for b in B) for a in A)


def reduce_formula(terms: Iterable[Iterable[Iterable[int]]], k: int) -> MaxMinFormula:
    reduced = {reduce_min_term(t, k) for t in terms}
    ordered = sorted(MaxMinFormula(frozenset(reduced)).sorted_terms(), key=len, reverse=True)
    kept = [frozenset(t) for t in ordered]
    for B in list(kept):
        if any(A != B and term_dominated(B, A, k) for A in kept):
            kept.remove(B)
    return MaxMinFormula(frozenset(kept))


def _tops_term(pairs, k: int) -> frozenset:
    return frozenset(
        frozenset(i for i in range(1, k + 1) if top >> (k - i) & 1) for _, top in pairs
    )


def unreduced_formula(k: int) -> MaxMinFormula:
    """One min-term (the set of tops) per good partition, deduplicated."""
    _check_enum_arity(k)
    return MaxMinFormula(frozenset(_tops_term(p, k) for p in _good_partition_pairs(k)))


def derive_formula(k: int) -> MaxMinFormula:
    return reduce_formula(unreduced_formula(k).terms, k)


def grid_mismatch(f: Callable[[tuple[int, ...]], int], g: Callable[[tuple[int, ...]], int],
                  k: int, max_entry: int = 4) -> tuple[int, ...] | None:
    """First sorted grid point where ``f`` and ``g`` differ, else ``None``."""
    for w in itertools.combinations_with_replacement(range(1, max_entry + 1), k):
        if f(w) != g(w):
            return w
    return None

