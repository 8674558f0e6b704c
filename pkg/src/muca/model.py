"""Problem data for multi-unit combinatorial auctions and the instance file format.

An auction offers ``caps[j]`` identical units of each commodity ``j``.  A bid
asks for ``q[j]`` units of every commodity and offers a price ``p`` for the
whole bundle.  Prices are exact decimals: an instance carries a power-of-ten
``scale`` and every price must be a whole number of ``10**-scale`` units.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from functools import cached_property
from typing import Iterable

INT64_MAX = 2**63 - 1

_PRICE_RE = re.compile(r"^(\d+)(?:\.(\d+))?$")
_INT_RE = re.compile(r"^\d+$")


class InstanceError(ValueError):
    """Raised when an instance file cannot be parsed or describes an invalid auction."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        self.message = message
        super().__init__(f"line {lineno}: {message}" if lineno is not None else message)


def as_price(value) -> Fraction:
    """Convert ``value`` to an exact price.

    Floats go through their shortest decimal repr, so ``as_price(0.1)`` is
    exactly one tenth.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(Decimal(repr(value)))
    if isinstance(value, (int, Decimal)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(Decimal(value))
    return Fraction(value)


def format_price(value: Fraction, scale: int) -> str:
    """Render an exact price with exactly ``scale`` fraction digits."""
    units = value * 10**scale
    if units.denominator != 1:
        raise ValueError(f"{value} is not representable with {scale} decimal digits")
    units = int(units)
    sign = "-" if units < 0 else ""
    units = abs(units)
    if scale == 0:
        return f"{sign}{units}"
    whole, frac = divmod(units, 10**scale)
    return f"{sign}{whole}.{frac:0{scale}d}"


@dataclass(frozen=True)
class Bid:
    """Request for ``q[j]`` units of each commodity at total price ``p``."""

    q: tuple[int, ...]
    p: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "q", tuple(int(x) for x in self.q))
        object.__setattr__(self, "p", as_price(self.p))

    @property
    def size(self) -> int:
        return sum(self.q)


def _coerce_bid(b) -> Bid:
    # accepts Bid, (q, p) or flat (q_1, ..., q_n, p)
    if isinstance(b, Bid):
        return b
    if len(b) == 2 and isinstance(b[0], (tuple, list)):
        return Bid(b[0], b[1])
    return Bid(b[:-1], b[-1])


@dataclass(frozen=True)
class Instance:
    """An auction: capacities per commodity, an ordered bid list and exclusion pairs.

    Instances are immutable.  Construction never raises on bad data; call
    :func:`validate` (or :func:`ensure_valid`) to check the invariants.
    """

    caps: tuple[int, ...]
    bids: tuple[Bid, ...] = ()
    exclusions: frozenset[tuple[int, int]] = field(default_factory=frozenset)
    scale: int = 0

    def __post_init__(self):
        object.__setattr__(self, "caps", tuple(int(c) for c in self.caps))
        object.__setattr__(self, "bids", tuple(_coerce_bid(b) for b in self.bids))
        pairs = frozenset(tuple(sorted((int(i), int(j)))) for i, j in self.exclusions)
        object.__setattr__(self, "exclusions", pairs)

    @property
    def n(self) -> int:
        return len(self.caps)

    @property
    def k(self) -> int:
        return sum(self.caps)

    def __len__(self) -> int:
        return len(self.bids)

    @cached_property
    def price_units(self) -> tuple[int, ...]:
        """Prices as integers counted in units of ``10**-scale``."""
        factor = 10**self.scale
        out = []
        for b in self.bids:
            u = b.p * factor
            if u.denominator != 1:
                raise InstanceError(f"price {b.p} has more than {self.scale} fraction digits")
            out.append(int(u))
        return tuple(out)

    @cached_property
    def excluded_with(self) -> tuple[frozenset[int], ...]:
        """For every bid, the set of bids it may not be combined with."""
        partners: list[set[int]] = [set() for _ in self.bids]
        for i, j in self.exclusions:
            partners[i].add(j)
            partners[j].add(i)
        return tuple(frozenset(s) for s in partners)

    def conflicts(self, a: int, b: int) -> bool:
        """True when bids ``a`` and ``b`` can never be accepted together."""
        if (min(a, b), max(a, b)) in self.exclusions:
            return True
        qa, qb = self.bids[a].q, self.bids[b].q
        return any(x + y > c for x, y, c in zip(qa, qb, self.caps))

    def value_of(self, chosen: Iterable[int]) -> Fraction:
        return sum((self.bids[i].p for i in chosen), Fraction(0))

    def is_feasible(self, chosen: Iterable[int]) -> bool:
        chosen = sorted(set(chosen))
        used = [0] * self.n
        for i in chosen:
            for j, x in enumerate(self.bids[i].q):
                used[j] += x
        if any(u > c for u, c in zip(used, self.caps)):
            return False
        chosen_set = set(chosen)
        return not any(i in chosen_set and j in chosen_set for i, j in self.exclusions)


@dataclass(frozen=True)
class Solution:
    """A conflict-free set of accepted bids and its exact total price."""

    chosen: frozenset[int]
    value: Fraction

    @classmethod
    def of(cls, inst: Instance, chosen: Iterable[int]) -> Solution:
        chosen = frozenset(chosen)
        return cls(chosen, inst.value_of(chosen))

    @property
    def winners(self) -> list[int]:
        return sorted(self.chosen)


def validate(inst: Instance) -> list[str]:
    """Return every invariant violation of ``inst``; an empty list means valid."""
    problems: list[str] = []
    if inst.n < 1:
        problems.append("instance must have at least one commodity")
    if not isinstance(inst.scale, int) or inst.scale < 0:
        problems.append(f"scale must be a nonnegative integer, got {inst.scale!r}")
    for j, c in enumerate(inst.caps):
        if c < 1:
            problems.append(f"capacity must be ≥ 1 (commodity {j} has {c})")
        if c > INT64_MAX:
            problems.append(f"capacity of commodity {j} overflows 64 bits")
    if sum(inst.caps) > INT64_MAX:
        problems.append("total capacity overflows 64 bits")

    totals = [0] * inst.n
    factor = 10**inst.scale if isinstance(inst.scale, int) and inst.scale >= 0 else None
    for i, b in enumerate(inst.bids):
        if len(b.q) != inst.n:
            problems.append(f"bid {i} has {len(b.q)} quantities, expected {inst.n}")
        for j, (x, c) in enumerate(zip(b.q, inst.caps)):
            if x < 0:
                problems.append(f"bid {i}: negative quantity for commodity {j}")
            elif x > c:
                problems.append(f"bid {i}: quantity exceeds capacity for commodity {j} ({x} > {c})")
            totals[j] += x
        if sum(b.q) <= 0:
            problems.append(f"bid {i}: empty bid")
        if b.p < 0:
            problems.append(f"bid {i}: negative price")
        if factor is not None and (b.p * factor).denominator != 1:
            problems.append(f"bid {i}: price {b.p} needs more than {inst.scale} fraction digits")
    if any(t > INT64_MAX for t in totals):
        problems.append("requested quantities overflow 64 bits")

    for i, j in sorted(inst.exclusions):
        if i == j:
            problems.append(f"exclusion pair ({i}, {j}) names the same bid twice")
        if not (0 <= i < len(inst.bids) and 0 <= j < len(inst.bids)):
            problems.append(f"exclusion pair ({i}, {j}) references a missing bid")
    return problems


def ensure_valid(inst: Instance) -> Instance:
    problems = validate(inst)
    if problems:
        raise InstanceError("; ".join(problems))
    return inst


def _int(token: str, lineno: int, what: str) -> int:
    if not _INT_RE.match(token):
        raise InstanceError(f"{what} must be a nonnegative integer, got {token!r}", lineno)
    value = int(token)
    if value > INT64_MAX:
        raise InstanceError(f"{what} overflows 64 bits", lineno)
    return value


def _price(token: str, scale: int, lineno: int) -> Fraction:
    m = _PRICE_RE.match(token)
    if not m:
        raise InstanceError(f"price must be a nonnegative decimal, got {token!r}", lineno)
    if m.group(2) and len(m.group(2)) > scale:
        raise InstanceError(f"price {token} has more than {scale} fraction digits", lineno)
    return Fraction(Decimal(token))


def parse_instance(text: str) -> Instance:
    """Parse the line-oriented ``MUCA 1`` format.  Errors carry the offending line number."""
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if tokens:
            lines.append((lineno, tokens))
    it = iter(lines)

    def expect(keyword: str):
        try:
            lineno, tokens = next(it)
        except StopIteration:
            raise InstanceError(f"unexpected end of file, expected {keyword}") from None
        if tokens[0] != keyword:
            raise InstanceError(f"expected {keyword}, got {tokens[0]!r}", lineno)
        return lineno, tokens[1:]

    lineno, rest = expect("MUCA")
    if rest != ["1"]:
        raise InstanceError("malformed header, expected 'MUCA 1'", lineno)

    scale = 0
    lineno, tokens = next(it, (None, None))
    if tokens is None:
        raise InstanceError("unexpected end of file, expected GOODS")
    if tokens[0] == "SCALE":
        if len(tokens) != 2:
            raise InstanceError("SCALE takes one value", lineno)
        scale = _int(tokens[1], lineno, "scale")
        lineno, tokens = next(it, (None, None))
        if tokens is None:
            raise InstanceError("unexpected end of file, expected GOODS")
    if tokens[0] != "GOODS" or len(tokens) != 2:
        raise InstanceError("malformed header, expected 'GOODS n'", lineno)
    n = _int(tokens[1], lineno, "commodity count")
    if n < 1:
        raise InstanceError("commodity count must be ≥ 1", lineno)

    lineno, rest = expect("CAPS")
    if len(rest) != n:
        raise InstanceError(f"CAPS lists {len(rest)} values, expected {n}", lineno)
    caps = tuple(_int(t, lineno, "capacity") for t in rest)
    for c in caps:
        if c < 1:
            raise InstanceError("capacity must be ≥ 1", lineno)
    if sum(caps) > INT64_MAX:
        raise InstanceError("total capacity overflows 64 bits", lineno)

    lineno, rest = expect("BIDS")
    if len(rest) != 1:
        raise InstanceError("malformed header, expected 'BIDS m'", lineno)
    m = _int(rest[0], lineno, "bid count")

    bids = []
    for _ in range(m):
        lineno, rest = expect("BID")
        if len(rest) != n + 1:
            raise InstanceError(f"BID needs {n} quantities and a price", lineno)
        q = tuple(_int(t, lineno, "quantity") for t in rest[:-1])
        for x, c in zip(q, caps):
            if x > c:
                raise InstanceError("quantity exceeds capacity", lineno)
        if sum(q) == 0:
            raise InstanceError("empty bid", lineno)
        bids.append(Bid(q, _price(rest[-1], scale, lineno)))

    exclusions = set()
    for lineno, tokens in it:
        if tokens[0] != "EXCL" or len(tokens) != 3:
            raise InstanceError(f"expected 'EXCL i j', got {' '.join(tokens)!r}", lineno)
        i = _int(tokens[1], lineno, "bid index")
        j = _int(tokens[2], lineno, "bid index")
        if i == j or i >= m or j >= m:
            raise InstanceError(f"bad exclusion index pair ({i}, {j})", lineno)
        exclusions.add((min(i, j), max(i, j)))

    inst = Instance(caps, tuple(bids), frozenset(exclusions), scale)
    problems = validate(inst)
    if problems:
        raise InstanceError("; ".join(problems))
    return inst


def serialize_instance(inst: Instance) -> str:
    """Canonical text form; ``SCALE`` is written only when nonzero."""
    out = ["MUCA 1"]
    if inst.scale:
        out.append(f"SCALE {inst.scale}")
    out.append(f"GOODS {inst.n}")
    out.append("CAPS " + " ".join(map(str, inst.caps)))
    out.append(f"BIDS {len(inst.bids)}")
    for b in inst.bids:
        out.append("BID " + " ".join(map(str, b.q)) + " " + format_price(b.p, inst.scale))
    for i, j in sorted(inst.exclusions):
        out.append(f"EXCL {i} {j}")
    return "\n".join(out) + "\n"


def read_instance(path) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def write_instance(inst: Instance, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_instance(inst))
