"""Instance generators: a sparse random distribution, the independent-set
reduction from graphs, and the two hand-built worst cases for greedy ranking."""

from __future__ import annotations

import decimal
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction

from .model import Bid, Instance
from .rng import SplitMix64

CONSTRUCTION_SCALE = 6
_QUANTUM = Decimal(1).scaleb(-CONSTRUCTION_SCALE)
_PERTURB = Fraction(1, 10**CONSTRUCTION_SCALE)


@dataclass(frozen=True)
class GenParams:
    goods: int
    bids: int
    cap_range: tuple[int, int] = (1, 5)
    req_prob: float = 0.2
    qty_range: tuple[int, int] = (1, 3)
    unit_value_range: tuple[float, float] = (0.5, 1.5)
    price_scale: int = 2
    seed: int = 0

    def __post_init__(self):
        if self.goods < 1 or self.bids < 0:
            raise ValueError("need goods >= 1 and bids >= 0")
        lo, hi = self.cap_range
        if not 1 <= lo <= hi:
            raise ValueError(f"bad cap_range {self.cap_range}")
        qlo, qhi = self.qty_range
        if not 1 <= qlo <= qhi:
            raise ValueError(f"bad qty_range {self.qty_range}")
        ulo, uhi = self.unit_value_range
        if not 0 <= ulo <= uhi:
            raise ValueError(f"bad unit_value_range {self.unit_value_range}")
        if not 0 < self.req_prob <= 1:
            raise ValueError("req_prob must lie in (0, 1]")
        if self.price_scale < 0:
            raise ValueError("price_scale must be >= 0")


def gen_random(params: GenParams) -> Instance:
    """Sparse bids: each good is requested with probability ``req_prob``, a few units at a time.

    A bid's price is its unit count times a uniform per-unit value.  Bids that
    come out empty are redrawn.
    """
    rng = SplitMix64(params.seed)
    caps = tuple(rng.randint(*params.cap_range) for _ in range(params.goods))
    factor = 10**params.price_scale
    ulo, uhi = params.unit_value_range
    bids = []
    for _ in range(params.bids):
        while True:
            q = tuple(
                min(rng.randint(*params.qty_range), k) if rng.bernoulli(params.req_prob) else 0
                for k in caps
            )
            if any(q):
                break
        units = round(sum(q) * rng.uniform(ulo, uhi) * factor)
        bids.append(Bid(q, Fraction(units, factor)))
    return Instance(caps, tuple(bids), scale=params.price_scale)


@dataclass(frozen=True)
class Graph:
    vertices: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        seen = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.vertices and 0 <= v < self.vertices):
                raise ValueError(f"edge ({u}, {v}) names a missing vertex")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
        object.__setattr__(self, "edges", edges)


def from_graph(g: Graph, caps=None) -> Instance:
    """One unit-price bid per vertex, taking every unit of each incident edge.

    Edges become commodities 0..e-1.  Each isolated vertex gets a private
    capacity-1 commodity appended after the edges so its bid is not empty.
    Accepted bids form an independent set, so the optimum is the size of a
    maximum independent set.
    """
    caps = tuple(caps) if caps is not None else (1,) * len(g.edges)
    if len(caps) != len(g.edges):
        raise ValueError(f"{len(caps)} capacities for {len(g.edges)} edges")
    if any(c < 1 for c in caps):
        raise ValueError("edge capacities must be >= 1")
    degree = [0] * g.vertices
    for u, v in g.edges:
        degree[u] += 1
        degree[v] += 1
    isolated = [v for v in range(g.vertices) if degree[v] == 0]
    all_caps = caps + (1,) * len(isolated)
    private = {v: len(caps) + t for t, v in enumerate(isolated)}
    bids = []
    for v in range(g.vertices):
        q = [0] * len(all_caps)
        for j, (a, b) in enumerate(g.edges):
            if v in (a, b):
                q[j] = caps[j]
        if v in private:
            q[private[v]] = 1
        bids.append(Bid(tuple(q), 1))
    return Instance(all_caps, tuple(bids))


def _round6(x: Decimal) -> Fraction:
    return Fraction(x.quantize(_QUANTUM, rounding=decimal.ROUND_HALF_EVEN))


def _sqrt(x: int) -> Decimal:
    with decimal.localcontext() as ctx:
        ctx.prec = 40
        return Decimal(x).sqrt()


def adversarial_pair(caps, criterion=None) -> tuple[Instance, Instance]:
    """Two auctions on which any static ranking is off by a factor of ``sqrt(k)``.

    Both contain ``A``, a bid for every unit at price ``sqrt(k)``.  The first
    adds one unit bid ``u``, the second ``caps[j]`` unit bids for each
    commodity ``j``.  ``u`` is the unit bid that ``criterion`` ranks first
    (commodity 0 when no criterion is given, or on ties); with equal caps
    every choice is equivalent.  Unit bids pay ``1.000001`` so that no
    criterion ties them with ``A``.
    """
    caps = tuple(int(c) for c in caps)
    if not caps or any(c < 1 for c in caps):
        raise ValueError("capacities must be >= 1")
    k = sum(caps)
    big = Bid(caps, _round6(_sqrt(k)))
    unit_price = 1 + _PERTURB

    def unit(j: int) -> Bid:
        return Bid(tuple(1 if t == j else 0 for t in range(len(caps))), unit_price)

    top = 0
    if criterion is not None:
        from .ordering import rank_bids

        probe = Instance(caps, tuple(unit(j) for j in range(len(caps))), scale=CONSTRUCTION_SCALE)
        top = rank_bids(criterion, probe).order[0]
    first = Instance(caps, (big, unit(top)), scale=CONSTRUCTION_SCALE)
    units = tuple(unit(j) for j, c in enumerate(caps) for _ in range(c))
    second = Instance(caps, (big,) + units, scale=CONSTRUCTION_SCALE)
    return first, second


def normalized_counterexample(k: int) -> Instance:
    """Caps ``(k, 1)`` with bids ``<k, 1, sqrt 2>`` and ``<1, 0, 1/sqrt k>``.

    The small bid is nudged up by ``1e-6`` so the normalized square-root
    criterion strictly prefers it, after which the large bid no longer fits.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    with decimal.localcontext() as ctx:
        ctx.prec = 40
        inv_sqrt_k = Decimal(1) / _sqrt(k)
    big = Bid((k, 1), _round6(_sqrt(2)))
    small = Bid((1, 0), _round6(inv_sqrt_k) + _PERTURB)
    return Instance((k, 1), (big, small), scale=CONSTRUCTION_SCALE)


def parse_edge_list(text: str) -> tuple[Graph, tuple[int, ...]]:
    """Read ``u v [cap]`` lines (``#`` comments).  An optional ``VERTICES v`` line
    sets the vertex count; otherwise it is one more than the largest index."""
    vertices = None
    edges = []
    caps = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        if tokens[0] == "VERTICES":
            vertices = int(tokens[1])
            continue
        if len(tokens) not in (2, 3):
            raise ValueError(f"line {lineno}: expected 'u v [cap]'")
        u, v = int(tokens[0]), int(tokens[1])
        edges.append((u, v))
        caps.append(int(tokens[2]) if len(tokens) == 3 else 1)
    if vertices is None:
        vertices = 1 + max((max(e) for e in edges), default=-1)
    return Graph(vertices, tuple(edges)), tuple(caps)
