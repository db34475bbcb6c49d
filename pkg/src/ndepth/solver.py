"""Exact ndepth by threshold-feasibility search over good partitions.

``feasible_at(w, t)`` asks for a partition of the nonzero masks whose every
top weighs at least ``t``.  The search always branches on the numerically
smallest uncovered mask ``x``: all of its proper nonzero submasks are smaller
and already covered, so ``x`` must be the bottom of its interval.  Candidate
tops are tried in increasing numeric order, which makes the witness a pure
function of ``(w, t)``.

Pruning: every uncovered mask ``z`` still needs an interval ``[z, y]`` with
``weight(y) >= t`` and no covered member.  Only inclusion-minimal such ``y``
need checking, since ``[z, y']`` sits inside ``[z, y]`` for ``y' <= y``.
"""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator

from .errors import SearchLimitExceeded
from .formulas import closed_form, upper_bound
from .lattice import GoodPartition, WeightsLike, as_weights, interval_bits, weight_table

DEFAULT_NODE_LIMIT = 10**8


class _Search:
    def __init__(self, w: WeightsLike, t: int):
        self.w = as_weights(w)
        self.t = t
        self.k = self.w.k
        self.size = 1 << self.k
        self.full = (1 << self.size) - 1
        self.wt = weight_table(self.w)
        self._options: dict[int, list[tuple[int, int]]] = {}
        self._minimal: dict[int, list[int]] = {}

    def _supersets(self, x: int) -> Iterator[int]:
        free = (self.size - 1) & ~x
        sub = 0
        # ascending enumeration of submasks of ``free``
        while True:
            yield x | sub
            if sub == free:
                return
            sub = (sub - free) & free

    def options(self, x: int) -> list[tuple[int, int]]:
        opts = self._options.get(x)
        if opts is None:
            opts = [(y, interval_bits(x, y)) for y in self._supersets(x) if self.wt[y] >= self.t]
            self._options[x] = opts
        return opts

    def minimal(self, z: int) -> list[int]:
        mins = self._minimal.get(z)
        if mins is None:
            mins = []
            for y, bits in self.options(z):
                extra = y & ~z
                minimal = True
                while extra:
                    low = extra & -extra
                    extra ^= low
                    if self.wt[y ^ low] >= self.t:
                        minimal = False
                        break
                if minimal:
                    mins.append(bits)
            self._minimal[z] = mins
        return mins

    def completable(self, covered: int) -> bool:
        todo = self.full & ~covered
        while todo:
            low = todo & -todo
            todo ^= low
            for bits in self.minimal(low.bit_length() - 1):
                if not covered & bits:
                    break
            else:
                return False
        return True

    def run(self, covered: int = 1, path: list | None = None, node_limit: int | None = None):
        """DFS from ``covered``; returns ``(pairs or None, nodes)``."""
        path = list(path or [])
        nodes = 1
        if covered == self.full:
            return path, nodes
        if not self.completable(covered):
            return None, nodes
        stack = [(covered, self.options((~covered & (covered + 1)).bit_length() - 1), 0)]
        base = len(path)
        while stack:
            cov, opts, i = stack[-1]
            child = None
            while i < len(opts):
                y, bits = opts[i]
                i += 1
                if cov & bits:
                    continue
                nxt = cov | bits
                if nxt == self.full or self.completable(nxt):
                    child = (y, nxt)
                    break
            if child is None:
                stack.pop()
                if len(path) > base:
                    path.pop()
                continue
            stack[-1] = (cov, opts, i)
            y, nxt = child
            x = (~cov & (cov + 1)).bit_length() - 1
            path.append((x, y))
            nodes += 1
            if node_limit is not None and nodes > node_limit:
                raise SearchLimitExceeded(
                    f"node limit {node_limit} exceeded at threshold {self.t}", nodes, self.t
                )
            if nxt == self.full:
                return path, nodes
            stack.append((nxt, self.options((~nxt & (nxt + 1)).bit_length() - 1), 0))
        return None, nodes

    def root_branches(self) -> list[tuple[int, int]]:
        return [(y, 1 | bits) for y, bits in self.options(1)
                if (1 | bits) == self.full or self.completable(1 | bits)]


def _run_branch(args):
    w, t, y, covered, node_limit = args
    return _Search(w, t).run(covered, [(1, y)], node_limit)


def _search(w, t, node_limit=None, workers=1):
    search = _Search(w, t)
    if workers <= 1 or search.size <= 2:
        return search.run(node_limit=node_limit)
    branches = search.root_branches()
    jobs = [(search.w, t, y, cov, node_limit) for y, cov in branches]
    nodes = 1
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map() yields in submission order, so the first hit is the serial witness
        for pairs, n in pool.map(_run_branch, jobs):
            nodes += n
            if pairs is not None:
                return pairs, nodes
    return None, nodes


def _to_partition(pairs, k) -> GoodPartition:
    return GoodPartition.from_bits(pairs, k)


def feasible_at(w: WeightsLike, t: int, *, node_limit: int | None = None, workers: int = 1) -> GoodPartition | None:
    """A good partition whose tops all weigh at least ``t``, or ``None``."""
    w = as_weights(w)
    if t < 1:
        raise ValueError(f"threshold must be >= 1, got {t}")
    pairs, _ = _search(w, t, node_limit, workers)
    return None if pairs is None else _to_partition(pairs, w.k)


@dataclass
class SolveResult:
    value: int
    witness: GoodPartition
    nodes: int = 0
    elapsed: float = 0.0
    probes: list[tuple[int, bool, int]] = field(default_factory=list)
    """``(threshold, feasible, nodes)`` for every threshold tried."""


def exact_ndepth(w: WeightsLike, *, node_limit: int | None = DEFAULT_NODE_LIMIT, workers: int = 1) -> SolveResult:
    """Scan thresholds downward from the upper bound; the first feasible one wins.

    ``node_limit`` caps the nodes summed over all probes of this instance.
    """
    w = as_weights(w)
    start = time.perf_counter()
    total = 0
    probes = []
    for t in range(upper_bound(w), 0, -1):
        budget = None if node_limit is None else node_limit - total
        try:
            pairs, nodes = _search(w, t, budget, workers)
        except SearchLimitExceeded as exc:
            raise SearchLimitExceeded(str(exc), total + exc.nodes, t) from None
        total += nodes
        probes.append((t, pairs is not None, nodes))
        if pairs is not None:
            return SolveResult(t, _to_partition(pairs, w.k), total, time.perf_counter() - start, probes)
    raise AssertionError("threshold 1 is always feasible")  # pragma: no cover


def sorted_grid(k: int, max_entry: int) -> Iterator[tuple[int, ...]]:
    """All nondecreasing vectors of length ``k`` with entries in ``1..max_entry``."""
    return itertools.combinations_with_replacement(range(1, max_entry + 1), k)


@dataclass
class SweepRow:
    weights: tuple[int, ...]
    exact: int
    closed_form: int
    bound: int
    nodes: int

    @property
    def agree(self) -> bool:
        return self.exact == self.closed_form


def sweep_instance(weights, node_limit: int | None = DEFAULT_NODE_LIMIT) -> SweepRow:
    result = exact_ndepth(weights, node_limit=node_limit)
    return SweepRow(tuple(weights), result.value, closed_form(weights), upper_bound(weights), result.nodes)


def _sweep_job(args):
    weights, node_limit = args
    return sweep_instance(weights, node_limit)


def sweep(vectors, *, node_limit: int | None = DEFAULT_NODE_LIMIT, workers: int = 1) -> Iterator[SweepRow]:
    """Exact vs closed form for each vector, yielded in input order."""
    vectors = [tuple(v) for v in vectors]
    if workers <= 1:
        for v in vectors:
            yield sweep_instance(v, node_limit)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(_sweep_job, [(v, node_limit) for v in vectors])
