"""Per-bid ranking criteria, static bid orderings and dominated-bid removal."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .model import Bid, Instance


class Kind(enum.Enum):
    PRICE = "price"
    AVG = "avg"
    AVG_NORM = "avg-norm"
    EUCLID = "euclid"
    EUCLID_NORM = "euclid-norm"
    SQRT = "sqrt"
    SQRT_NORM = "sqrt-norm"
    FAMILY = "family"


@dataclass(frozen=True)
class Criterion:
    """How promising a bid looks at first sight.

    ``FAMILY`` scores ``p / (sum_j x_j**l)**m`` where ``x_j`` is ``q_j`` or,
    when ``normalized``, ``q_j / caps[j]``.  The other kinds are fixed members
    of that family, except ``PRICE`` which is ``p`` alone.
    """

    kind: Kind = Kind.SQRT
    l: int = 1
    m: Fraction = Fraction(1)
    normalized: bool = False

    def __post_init__(self):
        object.__setattr__(self, "m", Fraction(self.m))
        if self.kind is Kind.FAMILY and (self.l < 1 or self.m <= 0):
            raise ValueError("family criterion needs l >= 1 and m > 0")

    @classmethod
    def family(cls, l: int, m, normalized: bool = False) -> Criterion:
        return cls(Kind.FAMILY, int(l), Fraction(m), bool(normalized))

    @classmethod
    def parse(cls, name: str) -> Criterion:
        """Parse a CLI name such as ``sqrt`` or ``family:l=2,m=1/2,norm``."""
        name = name.strip()
        if name.startswith("family:"):
            l = m = None
            normalized = False
            for part in name[len("family:"):].split(","):
                part = part.strip()
                if part == "norm":
                    normalized = True
                elif part.startswith("l="):
                    l = int(part[2:])
                elif part.startswith("m="):
                    m = Fraction(part[2:])
                else:
                    raise ValueError(f"unknown family parameter {part!r}")
            if l is None or m is None:
                raise ValueError("family criterion needs both l= and m=")
            return cls.family(l, m, normalized)
        try:
            kind = Kind(name)
        except ValueError:
            raise ValueError(f"unknown criterion {name!r}") from None
        if kind is Kind.FAMILY:
            raise ValueError("use family:l=<int>,m=<rat>[,norm]")
        return cls(kind)

    def __str__(self) -> str:
        if self.kind is Kind.FAMILY:
            return f"family:l={self.l},m={self.m}" + (",norm" if self.normalized else "")
        return self.kind.value

    @property
    def uses_caps(self) -> bool:
        return self.kind in (Kind.AVG_NORM, Kind.EUCLID_NORM, Kind.SQRT_NORM) or (
            self.kind is Kind.FAMILY and self.normalized
        )


NAMED_CRITERIA = tuple(Criterion(k) for k in Kind if k is not Kind.FAMILY)


def score(c: Criterion, bid: Bid, inst: Instance) -> float:
    p = float(bid.p)
    q = bid.q
    caps = inst.caps
    kind = c.kind
    if kind is Kind.PRICE:
        return p
    if kind is Kind.AVG:
        return p / sum(q)
    if kind is Kind.AVG_NORM:
        return p / sum(x / k for x, k in zip(q, caps))
    if kind is Kind.EUCLID:
        return p / math.sqrt(sum(x * x for x in q))
    if kind is Kind.EUCLID_NORM:
        return p / math.sqrt(sum((x / k) ** 2 for x, k in zip(q, caps)))
    if kind is Kind.SQRT:
        return p / math.sqrt(sum(q))
    if kind is Kind.SQRT_NORM:
        return p / math.sqrt(sum(x / k for x, k in zip(q, caps)))
    xs = [x / k for x, k in zip(q, caps)] if c.normalized else q
    return p / sum(x**c.l for x in xs) ** float(c.m)


@dataclass(frozen=True)
class Ranking:
    """Bids in descending score order; equal scores keep ascending index order."""

    order: tuple[int, ...]
    scores: tuple[float, ...]

    def position(self, i: int) -> int:
        return self.order.index(i)


def rank_bids(c: Criterion, inst: Instance) -> Ranking:
    scores = tuple(score(c, b, inst) for b in inst.bids)
    order = tuple(sorted(range(len(scores)), key=lambda i: (-scores[i], i)))
    return Ranking(order, scores)


class PruneResult(NamedTuple):
    instance: Instance
    removed: frozenset[int]
    kept: tuple[int, ...]  # kept[new_index] == original index


def _dominates(a: Bid, b: Bid) -> bool:
    if a.q == b.q:
        return a.p > b.p
    return a.p == b.p and all(x <= y for x, y in zip(a.q, b.q))


def dominance_prune(inst: Instance) -> PruneResult:
    """Drop bids beaten by a conflicting bid that asks for no more and pays no less.

    A bid ``b`` goes when some surviving ``a`` dominates it, the two conflict,
    and every exclusion partner of ``a`` (other than ``b``) is also a partner of
    ``b``.  The last condition keeps the swap ``b -> a`` feasible in any
    allocation, so the optimal value is unchanged.  Bids are examined in index
    order against the bids still present, so chains of removals stay sound.
    """
    alive = list(range(len(inst.bids)))
    partners = inst.excluded_with
    removed = set()
    for b in range(len(inst.bids)):
        for a in alive:
            if a == b or a in removed:
                continue
            if not _dominates(inst.bids[a], inst.bids[b]):
                continue
            if not inst.conflicts(a, b):
                continue
            if not (partners[a] - {b}) <= (partners[b] - {a}):
                continue
            removed.add(b)
            break
    if not removed:
        return PruneResult(inst, frozenset(), tuple(range(len(inst.bids))))
    kept = tuple(i for i in range(len(inst.bids)) if i not in removed)
    new_index = {old: new for new, old in enumerate(kept)}
    exclusions = frozenset(
        (new_index[i], new_index[j]) for i, j in inst.exclusions if i in new_index and j in new_index
    )
    pruned = Instance(inst.caps, tuple(inst.bids[i] for i in kept), exclusions, inst.scale)
    return PruneResult(pruned, frozenset(removed), kept)
