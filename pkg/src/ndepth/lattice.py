"""Masks, weights, intervals and good partitions of the boolean lattice.

A mask is a subset of the coordinates ``1..k``.  Its textual form is a 0/1
string whose leftmost character is coordinate 1, so ``"10001"`` is the set
``{1, 5}``.  Internally the string is read as a binary number, which makes
coordinate ``i`` the bit ``k - i`` and numeric order equal string order.

A good partition is a set of intervals ``[bottom, top]`` of masks that
covers every nonzero mask exactly once.  Weighting coordinate ``i`` by the
multiplicity ``n_i`` turns the top of an interval into the depth of the
corresponding submultiset.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence, Union

from .errors import StructuralError, UsageError

MAX_ARITY = 16
MAX_WEIGHT = 2**40


def _check_arity(k: int) -> None:
    if not isinstance(k, int) or isinstance(k, bool):
        raise UsageError(f"arity must be an integer, got {k!r}")
    if not 1 <= k <= MAX_ARITY:
        raise UsageError(f"arity must be in 1..{MAX_ARITY}, got {k}")


@dataclass(frozen=True, order=True)
class SubsetMask:
    """A subset of ``{1..k}`` stored as an integer bitset."""

    k: int
    bits: int

    def __post_init__(self):
        _check_arity(self.k)
        if not 0 <= self.bits < (1 << self.k):
            raise UsageError(f"bits {self.bits} out of range for arity {self.k}")

    @classmethod
    def parse(cls, text: str) -> SubsetMask:
        text = text.strip()
        if not text:
            raise UsageError("empty mask string")
        bad = [c for c in text if c not in "01"]
        if bad:
            raise UsageError(f"invalid character {bad[0]!r} in mask {text!r}")
        return cls(len(text), int(text, 2))

    @classmethod
    def from_indices(cls, indices: Iterable[int], k: int) -> SubsetMask:
        _check_arity(k)
        bits = 0
        for i in indices:
            if not 1 <= i <= k:
                raise UsageError(f"coordinate {i} out of range 1..{k}")
            bits |= 1 << (k - i)
        return cls(k, bits)

    @classmethod
    def full(cls, k: int) -> SubsetMask:
        _check_arity(k)
        return cls(k, (1 << k) - 1)

    @property
    def depth(self) -> int:
        return mask_depth(self)

    @property
    def indices(self) -> tuple[int, ...]:
        """Coordinates present in the mask, 1-based and ascending."""
        return tuple(i for i in range(1, self.k + 1) if self.bits >> (self.k - i) & 1)

    def issubset(self, other: SubsetMask) -> bool:
        _same_arity(self.k, other.k)
        return self.bits & other.bits == self.bits

    def __bool__(self) -> bool:
        return self.bits != 0

    def __str__(self) -> str:
        return format(self.bits, f"0{self.k}b")


MaskLike = Union[SubsetMask, str]


def as_mask(value: MaskLike, k: int | None = None) -> SubsetMask:
    mask = SubsetMask.parse(value) if isinstance(value, str) else value
    if not isinstance(mask, SubsetMask):
        raise UsageError(f"not a mask: {value!r}")
    if k is not None and mask.k != k:
        raise UsageError(f"mask {mask} has arity {mask.k}, expected {k}")
    return mask


def _same_arity(a: int, b: int) -> None:
    if a != b:
        raise UsageError(f"arity mismatch: {a} != {b}")


@dataclass(frozen=True)
class WeightVector:
    """Multiplicities ``(n_1, ..., n_k)`` of the multiset, each at least 1."""

    values: tuple[int, ...]

    def __post_init__(self):
        values = tuple(self.values)
        object.__setattr__(self, "values", values)
        _check_arity(len(values))
        for n in values:
            if not isinstance(n, int) or isinstance(n, bool):
                raise UsageError(f"weights must be integers, got {n!r}")
            if n < 1:
                raise UsageError(f"weights must be >= 1, got {n}")
            if n > MAX_WEIGHT:
                raise UsageError(f"weight {n} exceeds the 2**40 guard")

    @property
    def k(self) -> int:
        return len(self.values)

    @property
    def is_sorted(self) -> bool:
        return all(a <= b for a, b in zip(self.values, self.values[1:]))

    def __iter__(self):
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.values)) + ")"


WeightsLike = Union[WeightVector, Sequence[int]]


def as_weights(value: WeightsLike) -> WeightVector:
    if isinstance(value, WeightVector):
        return value
    return WeightVector(tuple(value))


def mask_depth(mask: SubsetMask) -> int:
    return mask.bits.bit_count()


def weight_of(mask: SubsetMask, w: WeightsLike) -> int:
    """Sum of ``n_i`` over the coordinates in ``mask``."""
    w = as_weights(w)
    _same_arity(mask.k, w.k)
    return sum(n for i, n in enumerate(w.values) if mask.bits >> (w.k - 1 - i) & 1)


def weight_table(w: WeightsLike) -> list[int]:
    """``table[bits]`` is the weight of every mask of arity ``k``."""
    w = as_weights(w)
    k = w.k
    table = [0] * (1 << k)
    for bits in range(1, 1 << k):
        low = bits & -bits
        table[bits] = table[bits ^ low] + w.values[k - low.bit_length()]
    return table


@lru_cache(maxsize=None)
def interval_bits(bottom: int, top: int) -> int:
    """Bitset over masks (bit ``m`` set iff ``bottom <= m <= top``)."""
    free = top & ~bottom
    out = 0
    sub = free
    while True:
        out |= 1 << (bottom | sub)
        if not sub:
            return out
        sub = (sub - 1) & free


@dataclass(frozen=True, order=True)
class Interval:
    """The interval ``[bottom, top]`` of masks; ``bottom`` is nonzero."""

    bottom: SubsetMask
    top: SubsetMask

    def __post_init__(self):
        _same_arity(self.bottom.k, self.top.k)
        if not self.bottom:
            raise UsageError("interval bottom must be nonzero")
        if self.bottom.bits & ~self.top.bits:
            raise UsageError(f"bottom {self.bottom} not contained in top {self.top}")

    @classmethod
    def of(cls, bottom: MaskLike, top: MaskLike | None = None) -> Interval:
        b = as_mask(bottom)
        t = b if top is None else as_mask(top)
        return cls(b, t)

    @classmethod
    def parse(cls, text: str) -> Interval:
        """Parse ``"[110,111]"`` or the singleton shorthand ``"[001]"``."""
        body = text.strip()
        if not (body.startswith("[") and body.endswith("]")):
            raise UsageError(f"interval must be bracketed: {text!r}")
        parts = [p.strip() for p in body[1:-1].split(",")]
        if len(parts) not in (1, 2):
            raise UsageError(f"interval needs one or two masks: {text!r}")
        return cls.of(*parts)

    @property
    def k(self) -> int:
        return self.bottom.k

    @property
    def members(self) -> int:
        return interval_bits(self.bottom.bits, self.top.bits)

    def __contains__(self, z: SubsetMask) -> bool:
        return interval_contains(self, z)

    def __str__(self) -> str:
        if self.bottom == self.top:
            return f"[{self.bottom}]"
        return f"[{self.bottom},{self.top}]"


def interval_contains(iv: Interval, z: SubsetMask) -> bool:
    _same_arity(iv.k, z.k)
    return iv.bottom.bits & ~z.bits == 0 and z.bits & ~iv.top.bits == 0


def interval_cardinality(iv: Interval) -> int:
    return 1 << (mask_depth(iv.top) - mask_depth(iv.bottom))


@dataclass
class ValidationReport:
    """Outcome of :func:`validate_good_partition`.

    ``double_covered`` and ``uncovered`` hold the numerically smallest
    offending mask of each kind.  ``structural`` holds ``(index, message)``
    for the first malformed interval; coverage is not checked in that case.
    """

    k: int
    double_covered: SubsetMask | None = None
    uncovered: SubsetMask | None = None
    structural: tuple[int, str] | None = None

    @property
    def ok(self) -> bool:
        return self.structural is None and self.double_covered is None and self.uncovered is None

    @property
    def witness(self) -> SubsetMask | None:
        return self.double_covered or self.uncovered

    def describe(self) -> str:
        if self.structural is not None:
            index, message = self.structural
            return f"interval #{index}: {message}"
        if self.double_covered is not None:
            return f"double cover at {self.double_covered}"
        if self.uncovered is not None:
            return f"uncovered mask {self.uncovered}"
        return "OK"

    def __bool__(self) -> bool:
        return self.ok


IntervalLike = Union[Interval, str, Sequence[MaskLike]]


def _coerce_interval(item: IntervalLike) -> Interval:
    if isinstance(item, Interval):
        return item
    if isinstance(item, str):
        return Interval.parse(item)
    return Interval.of(*item)


def validate_good_partition(ivs: Iterable[IntervalLike], k: int) -> ValidationReport:
    _check_arity(k)
    report = ValidationReport(k)
    covered = 0
    double = 0
    for index, item in enumerate(ivs):
        try:
            iv = _coerce_interval(item)
        except (UsageError, TypeError) as exc:
            report.structural = (index, str(exc))
            return report
        if iv.k != k:
            report.structural = (index, f"arity {iv.k} != {k}")
            return report
        bits = iv.members
        double |= covered & bits
        covered |= bits
    missing = ((1 << (1 << k)) - 2) & ~covered
    if double:
        report.double_covered = SubsetMask(k, (double & -double).bit_length() - 1)
    if missing:
        report.uncovered = SubsetMask(k, (missing & -missing).bit_length() - 1)
    return report


@dataclass(frozen=True)
class GoodPartition:
    """A validated partition of the nonzero masks of arity ``k`` into intervals."""

    intervals: tuple[Interval, ...]
    k: int
    _tops: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        ivs = tuple(_coerce_interval(iv) for iv in self.intervals)
        object.__setattr__(self, "intervals", ivs)
        report = validate_good_partition(ivs, self.k)
        if not report.ok:
            raise StructuralError(f"invalid partition: {report.describe()}", report)
        object.__setattr__(self, "_tops", tuple(iv.top.bits for iv in ivs))

    @classmethod
    def parse(cls, text: str, k: int | None = None) -> GoodPartition:
        """Parse the bracket notation ``"[110,111],[100,101],[001]"``."""
        pieces = re.findall(r"\[[^\]]*\]", text)
        leftover = re.sub(r"\[[^\]]*\]", "", text)
        if leftover.replace(",", "").strip():
            raise UsageError(f"unexpected text outside intervals: {leftover.strip()!r}")
        ivs = [Interval.parse(p) for p in pieces]
        if k is None:
            if not ivs:
                raise UsageError("cannot infer arity of an empty partition")
            k = ivs[0].k
        return cls(tuple(ivs), k)

    @classmethod
    def from_bits(cls, pairs: Iterable[tuple[int, int]], k: int) -> GoodPartition:
        return cls(tuple(Interval(SubsetMask(k, b), SubsetMask(k, t)) for b, t in pairs), k)

    @property
    def tops(self) -> tuple[SubsetMask, ...]:
        return tuple(iv.top for iv in self.intervals)

    def interval_of(self, z: SubsetMask) -> Interval:
        for iv in self.intervals:
            if interval_contains(iv, z):
                return iv
        raise StructuralError(f"mask {z} not covered")

    def permuted(self, perm: Sequence[int]) -> GoodPartition:
        """Relabel coordinates: new coordinate ``j`` is old coordinate ``perm[j-1]``."""
        def move(m: SubsetMask) -> SubsetMask:
            present = set(m.indices)
            return SubsetMask.from_indices((j for j, src in enumerate(perm, 1) if src in present), self.k)

        return GoodPartition(tuple(Interval(move(iv.bottom), move(iv.top)) for iv in self.intervals), self.k)

    def __len__(self) -> int:
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def __str__(self) -> str:
        return ",".join(map(str, self.intervals))


def partition_ndepth(P: GoodPartition, w: WeightsLike) -> int:
    """Minimum weight over the tops of ``P``."""
    if not isinstance(P, GoodPartition):
        raise StructuralError("partition_ndepth needs a validated GoodPartition")
    w = as_weights(w)
    _same_arity(P.k, w.k)
    table = weight_table(w)
    return min(table[t] for t in P._tops)


@dataclass(frozen=True)
class LemmaResult:
    holds: bool
    tops: tuple[SubsetMask, ...]
    violation: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.holds


def singleton_tops(P: GoodPartition) -> tuple[SubsetMask, ...]:
    """``a(i)`` for ``i = 1..k``: the top of the interval whose bottom is ``{i}``."""
    out = []
    for i in range(1, P.k + 1):
        single = SubsetMask.from_indices([i], P.k)
        iv = P.interval_of(single)
        if iv.bottom != single:
            raise StructuralError(f"singleton {single} lies in {iv} but is not its bottom")
        out.append(iv.top)
    return tuple(out)


def lemma1_check(P: GoodPartition | Iterable[IntervalLike], k: int | None = None) -> LemmaResult:
    """No two singleton tops may contain each other's coordinate.

    Raw interval lists are validated first and rejected with
    :class:`StructuralError` when they are not partitions.
    """
    if not isinstance(P, GoodPartition):
        ivs = tuple(P)
        if k is None:
            k = _coerce_interval(ivs[0]).k if ivs else 1
        P = GoodPartition(ivs, k)
    a = singleton_tops(P)
    for i in range(1, P.k + 1):
        for j in range(1, P.k + 1):
            if i != j and j in a[i - 1].indices and i in a[j - 1].indices:
                return LemmaResult(False, a, (i, j))
    return LemmaResult(True, a)
