"""Partition certificates: the published example corpus, a file format, a checker.

A certificate names a good partition and claims its ndepth either
symbolically (a min-term: "ndepth = min of <T> over these index sets, for
every sorted weight vector") or numerically at explicit weights.

Certificate files are JSON objects with exactly these fields::

    {
      "name": "example-3.1",
      "k": 3,
      "intervals": [{"bottom": "110", "top": "111"}, ...],
      "claim": {"type": "minterm", "sets": [[3]]},
      "erratum": "optional note"
    }

An interval may also be written ``"[110,111]"``, ``["110", "111"]``, or as a
singleton (``"[001]"``, ``["001"]``, ``{"bottom": "001"}``).  The claim may
instead be ``{"type": "value", "weights": [1, 2, 5], "value": 5}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from itertools import combinations_with_replacement
from typing import Union

from .errors import CertificateParseError
from .formulas import angle
from .lattice import GoodPartition, Interval, SubsetMask, validate_good_partition
from .oracle import reduce_min_term

CLAIM_GRID_MAX = 3


@dataclass(frozen=True)
class MinTermClaim:
    sets: frozenset  # frozenset of frozenset[int]

    def value(self, w) -> int:
        return min(angle(w, s) for s in self.sets)

    def __str__(self) -> str:
        return "{" + ",".join("<" + "".join(map(str, sorted(s))) + ">" for s in _ordered_sets(self.sets)) + "}"


@dataclass(frozen=True)
class ValueClaim:
    weights: tuple[int, ...]
    value: int

    def __str__(self) -> str:
        return f"{self.value} at {self.weights}"


Claim = Union[MinTermClaim, ValueClaim]


def _ordered_sets(sets) -> list:
    return sorted((tuple(sorted(s)) for s in sets), key=lambda s: (len(s), s))


@dataclass(frozen=True)
class Certificate:
    name: str
    k: int
    intervals: tuple[Interval, ...]
    claim: Claim
    erratum: str | None = None

    def partition(self) -> GoodPartition:
        return GoodPartition(self.intervals, self.k)

    def min_top_weight(self, w) -> int:
        """Minimum top weight over the listed intervals, valid partition or not."""
        return min(angle(w, iv.top.indices) for iv in self.intervals)


def _minterm(*sets: str) -> MinTermClaim:
    return MinTermClaim(frozenset(frozenset(int(c) for c in s) for s in sets))


def _cert(name: str, text: str, claim: MinTermClaim, erratum: str | None = None) -> Certificate:
    intervals = tuple(Interval.parse(p + "]") for p in text.rstrip("]").split("],"))
    return Certificate(name, intervals[0].k, intervals, claim, erratum)


_ERRATUM_5_1 = (
    "as printed, [00001,00011],[00010] makes <4> the minimum top weight; "
    "swapping to [00010,00011],[00001] gives the claimed <5>"
)

_ERRATUM_5_4 = (
    "as printed, [00010,11110] and [01110,01111] both contain 01110 while 01011 "
    "is uncovered; [01011,01111] in place of [01110,01111] makes it a partition "
    "with the same tops"
)

_CORPUS = (
    _cert("case-k1", "[1]", _minterm("1")),
    _cert("case-k2", "[10,11],[01]", _minterm("2")),
    _cert("example-3.1", "[110,111],[100,101],[010,011],[001]", _minterm("3")),
    _cert("example-3.2", "[100,110],[001,101],[010,011],[111]", _minterm("12")),
    _cert("example-4.1", "[1100,1111],[1000,1011],[0100,0111],[0010,0011],[0001]", _minterm("4")),
    _cert(
        "example-4.2",
        "[1000,1011],[0100,1110],[0010,0011],[0001,0101],[1101,1111],[0111]",
        _minterm("24", "123"),
    ),
    _cert(
        "example-5.1",
        "[11000,11111],[10000,10111],[01000,01111],[00100,00111],[00001,00011],[00010]",
        _minterm("5"),
        _ERRATUM_5_1,
    ),
    _cert(
        "example-5.2",
        "[10000,10101],[01000,01101],[00100,00101],[00010,11110],"
        "[00001,00011],[01011,01111],[10011,10111],[11000,11101],"
        "[11111],[11011],[00111]",
        _minterm("35", "1234"),
    ),
    _cert(
        "example-5.3",
        "[00001,00011],[00010,01110],[00100,10101],[01000,01101],"
        "[10000,10011],[00111,01111],[10110,10111],[11000,11111],"
        "[01011]",
        _minterm("45", "234", "135"),
    ),
    _cert(
        "example-5.4",
        "[00001,00011],[00010,11110],[00100,10101],[01000,01101],"
        "[10000,11001],[10011,10111],[01110,01111],[11100,11101],"
        "[11011,11111],[00111]",
        _minterm("45", "1234", "125"),
        _ERRATUM_5_4,
    ),
    _cert(
        "example-5.5",
        "[10000,11001],[01000,01110],[00100,10101],[00010,10110],"
        "[00001,01011],[10011,11011],[01101,01111],[11010,11110],"
        "[00111,10111],[11100,11101],[11111]",
        _minterm("125", "134"),
    ),
)

# certificate name -> (intervals as printed, replacement)
_ERRATA_FIXES = {
    "example-5.1": (("[00001,00011]", "[00010]"), ("[00010,00011]", "[00001]")),
    "example-5.4": (("[01110,01111]",), ("[01011,01111]",)),
}

# examples whose claimed values together realize the closed form for each k
THEOREM_FAMILIES = {
    3: ("example-3.1", "example-3.2"),
    4: ("example-4.1", "example-4.2"),
    5: ("example-5.1-erratum", "example-5.2", "example-5.3", "example-5.4-erratum", "example-5.5"),
}


def paper_corpus() -> list[Certificate]:
    """The eleven published partitions with their claims, both exactly as printed."""
    return list(_CORPUS)


def erratum_variant(cert: Certificate) -> Certificate:
    """The corrected form of a certificate that carries an erratum note."""
    if cert.name not in _ERRATA_FIXES:
        raise KeyError(f"no erratum recorded for {cert.name}")
    old, new = _ERRATA_FIXES[cert.name]
    swap = dict(zip((Interval.parse(s) for s in old), (Interval.parse(s) for s in new)))
    intervals = tuple(swap.get(iv, iv) for iv in cert.intervals)
    return replace(cert, name=cert.name + "-erratum", intervals=intervals, erratum=None)


def erratum_corpus() -> list[Certificate]:
    return [erratum_variant(c) for c in _CORPUS if c.name in _ERRATA_FIXES]


def certificate_by_name(name: str) -> Certificate:
    for c in paper_corpus() + erratum_corpus():
        if c.name == name:
            return c
    raise KeyError(name)


@dataclass
class CertificateReport:
    name: str
    structure_ok: bool
    claim_verified: bool
    details: list[str] = field(default_factory=list)
    reduced_term: MinTermClaim | None = None
    erratum: str | None = None

    @property
    def status(self) -> str:
        if self.structure_ok and self.claim_verified:
            return "verified"
        if self.erratum:
            return "documented-discrepancy"
        return "claim-failed" if self.structure_ok else "invalid-structure"


def _sorted_grid(k: int, max_entry: int):
    return combinations_with_replacement(range(1, max_entry + 1), k)


def check_certificate(c: Certificate, grid_max: int = CLAIM_GRID_MAX) -> CertificateReport:
    """Check structure and claim independently.

    The claim is judged on the listed tops even when the intervals fail to
    form a partition, so a typo in one interval does not hide whether the
    claimed min-term is right.
    """
    report = CertificateReport(c.name, False, False, erratum=c.erratum)
    validation = validate_good_partition(c.intervals, c.k)
    report.structure_ok = validation.ok
    if not validation.ok:
        details = [validation.describe()]
        if validation.double_covered and validation.uncovered:
            details.append(f"uncovered mask {validation.uncovered}")
        report.details.extend(details)

    if isinstance(c.claim, ValueClaim):
        got = c.min_top_weight(c.claim.weights)
        report.claim_verified = got == c.claim.value
        report.details.append(f"ndepth at {c.claim.weights} is {got}, claimed {c.claim.value}")
        return report

    reduced = MinTermClaim(reduce_min_term((iv.top.indices for iv in c.intervals), c.k))
    report.reduced_term = reduced
    symbolic = reduced.sets == c.claim.sets
    if not symbolic:
        report.details.append(f"reduced min-term {reduced} != claimed {c.claim}")
    mismatch = None
    for w in _sorted_grid(c.k, grid_max):
        if c.min_top_weight(w) != c.claim.value(w):
            mismatch = w
            break
    if mismatch is not None:
        report.details.append(
            f"at weights {mismatch}: min top weight {c.min_top_weight(mismatch)}, "
            f"claim gives {c.claim.value(mismatch)}"
        )
    report.claim_verified = symbolic and mismatch is None
    if report.claim_verified:
        report.details.append(f"min-term {reduced} verified")
    return report


_FIELDS = ("name", "k", "intervals", "claim", "erratum")


def _line_of(text: str, needle: str | None) -> int | None:
    if not needle:
        return None
    for no, line in enumerate(text.splitlines(), 1):
        if needle in line:
            return no
    return None


def _first_mask(raw) -> str | None:
    if isinstance(raw, str):
        return raw.strip()
    if isinstance(raw, list) and raw and isinstance(raw[0], str):
        return raw[0]
    if isinstance(raw, dict) and isinstance(raw.get("bottom"), str):
        return raw["bottom"]
    return None


def _parse_mask(raw, k: int, where: str) -> SubsetMask:
    if not isinstance(raw, str):
        raise CertificateParseError(f"mask must be a string, got {raw!r}", where)
    if len(raw) != k:
        raise CertificateParseError(f"malformed mask length: {raw!r} has length {len(raw)}, expected {k}", where)
    bad = [ch for ch in raw if ch not in "01"]
    if bad:
        raise CertificateParseError(f"invalid character {bad[0]!r} in mask {raw!r}", where)
    return SubsetMask(k, int(raw, 2))


def _parse_interval(raw, k: int, where: str) -> Interval:
    if isinstance(raw, str):
        body = raw.strip()
        if not (body.startswith("[") and body.endswith("]")):
            raise CertificateParseError(f"interval string must be bracketed: {raw!r}", where)
        parts = [p.strip() for p in body[1:-1].split(",")]
    elif isinstance(raw, list):
        parts = raw
    elif isinstance(raw, dict):
        extra = set(raw) - {"bottom", "top"}
        if extra:
            raise CertificateParseError(f"unknown interval fields {sorted(extra)}", where)
        if "bottom" not in raw:
            raise CertificateParseError("interval needs a bottom", where)
        parts = [raw["bottom"]] + ([raw["top"]] if "top" in raw else [])
    else:
        raise CertificateParseError(f"cannot read interval {raw!r}", where)
    if len(parts) not in (1, 2):
        raise CertificateParseError(f"interval needs one or two masks, got {len(parts)}", where)
    bottom = _parse_mask(parts[0], k, where)
    top = _parse_mask(parts[-1], k, where)
    if not bottom:
        raise CertificateParseError("interval bottom must be nonzero", where)
    if bottom.bits & ~top.bits:
        raise CertificateParseError(f"bottom not contained in top: [{bottom},{top}]", where)
    return Interval(bottom, top)


def _parse_claim(raw, k: int) -> Claim:
    if not isinstance(raw, dict) or "type" not in raw:
        raise CertificateParseError("claim must be an object with a type", "claim")
    kind = raw["type"]
    if kind == "minterm":
        extra = set(raw) - {"type", "sets"}
        if extra:
            raise CertificateParseError(f"unknown claim fields {sorted(extra)}", "claim")
        sets = raw.get("sets")
        if not isinstance(sets, list) or not sets:
            raise CertificateParseError("minterm claim needs a nonempty list of sets", "claim.sets")
        out = []
        for s in sets:
            if not isinstance(s, list) or not s or not all(isinstance(i, int) and 1 <= i <= k for i in s):
                raise CertificateParseError(f"index set {s!r} must be a nonempty list inside 1..{k}", "claim.sets")
            out.append(frozenset(s))
        return MinTermClaim(frozenset(out))
    if kind == "value":
        extra = set(raw) - {"type", "weights", "value"}
        if extra:
            raise CertificateParseError(f"unknown claim fields {sorted(extra)}", "claim")
        weights, value = raw.get("weights"), raw.get("value")
        if not isinstance(weights, list) or len(weights) != k or not all(isinstance(n, int) and n >= 1 for n in weights):
            raise CertificateParseError(f"weights must be {k} integers >= 1", "claim.weights")
        if not isinstance(value, int):
            raise CertificateParseError("value must be an integer", "claim.value")
        return ValueClaim(tuple(weights), value)
    raise CertificateParseError(f"unknown claim type {kind!r}", "claim.type")


def parse_certificate(text: str) -> Certificate:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CertificateParseError(exc.msg, line=exc.lineno) from None
    if not isinstance(doc, dict):
        raise CertificateParseError("certificate must be a JSON object")
    unknown = [key for key in doc if key not in _FIELDS]
    if unknown:
        raise CertificateParseError(f"unknown field {unknown[0]!r}", unknown[0], _line_of(text, f'"{unknown[0]}"'))
    for key in ("name", "k", "intervals", "claim"):
        if key not in doc:
            raise CertificateParseError("missing required field", key)
    name, k = doc["name"], doc["k"]
    if not isinstance(name, str) or not name:
        raise CertificateParseError("name must be a nonempty string", "name")
    if not isinstance(k, int) or isinstance(k, bool) or not 1 <= k <= 16:
        raise CertificateParseError("k must be an integer in 1..16", "k", _line_of(text, '"k"'))
    if not isinstance(doc["intervals"], list):
        raise CertificateParseError("intervals must be a list", "intervals")
    intervals = []
    seen = set()
    for i, raw in enumerate(doc["intervals"]):
        where = f"intervals[{i}]"
        try:
            iv = _parse_interval(raw, k, where)
        except CertificateParseError as exc:
            exc.line = _line_of(text, _first_mask(raw))
            if exc.line is not None:
                exc.args = (f"line {exc.line}, {exc.args[0]}",)
            raise
        if iv in seen:
            raise CertificateParseError(f"duplicate interval {iv}", where)
        seen.add(iv)
        intervals.append(iv)
    claim = _parse_claim(doc["claim"], k)
    erratum = doc.get("erratum")
    if erratum is not None and not isinstance(erratum, str):
        raise CertificateParseError("erratum must be a string", "erratum")
    return Certificate(name, k, tuple(intervals), claim, erratum)


def serialize_certificate(c: Certificate) -> str:
    lines = ["{", f'  "name": {json.dumps(c.name)},', f'  "k": {c.k},', '  "intervals": [']
    ivs = [f'    {{"bottom": "{iv.bottom}", "top": "{iv.top}"}}' for iv in c.intervals]
    lines.append(",\n".join(ivs))
    lines.append("  ],")
    if isinstance(c.claim, MinTermClaim):
        claim = {"type": "minterm", "sets": [list(s) for s in _ordered_sets(c.claim.sets)]}
    else:
        claim = {"type": "value", "weights": list(c.claim.weights), "value": c.claim.value}
    tail = f'  "claim": {json.dumps(claim)}'
    if c.erratum is not None:
        tail += f',\n  "erratum": {json.dumps(c.erratum)}'
    lines.append(tail)
    lines.append("}")
    return "\n".join(lines) + "\n"


def load_certificate(path) -> Certificate:
    with open(path, encoding="utf-8") as fh:
        return parse_certificate(fh.read())

