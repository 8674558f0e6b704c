"""Fixtures and independent oracles shared by the test modules."""

from __future__ import annotations

import itertools
from fractions import Fraction

from muca.model import Bid, Instance
from muca.rng import SplitMix64

E1_TEXT = """\
MUCA 1
GOODS 2
CAPS 2 1
BIDS 4
BID 1 1 5
BID 2 0 6
BID 1 0 2
BID 0 1 3
"""

E1 = Instance((2, 1), (Bid((1, 1), 5), Bid((2, 0), 6), Bid((1, 0), 2), Bid((0, 1), 3)))


def small_instance(
    seed: int,
    max_goods: int = 5,
    max_bids: int = 15,
    max_cap: int = 5,
    prices: tuple[int, int] = (1, 100),
    exclusion_prob: float = 0.0,
    min_bids: int = 1,
) -> Instance:
    """Random small auction with integer prices; bid density varies per instance."""
    rng = SplitMix64(seed)
    n = rng.randint(1, max_goods)
    m = rng.randint(min_bids, max_bids)
    caps = tuple(rng.randint(1, max_cap) for _ in range(n))
    density = rng.uniform(0.2, 1.0)
    bids = []
    for _ in range(m):
        while True:
            q = tuple(rng.randint(1, k) if rng.bernoulli(density) else 0 for k in caps)
            if any(q):
                break
        bids.append(Bid(q, rng.randint(*prices)))
    excl = set()
    if exclusion_prob > 0:
        for i, j in itertools.combinations(range(m), 2):
            if rng.bernoulli(exclusion_prob):
                excl.add((i, j))
    return Instance(caps, tuple(bids), frozenset(excl))


def subset_optimum(inst: Instance) -> Fraction:
    """Plain itertools enumeration, independent of the numpy oracle in the package."""
    best = Fraction(0)
    m = len(inst.bids)
    for r in range(1, m + 1):
        for combo in itertools.combinations(range(m), r):
            if inst.is_feasible(combo):
                best = max(best, inst.value_of(combo))
    return best


def max_independent_set(vertices: int, edges) -> int:
    best = 0
    for mask in range(1 << vertices):
        if all(not (mask >> u & 1 and mask >> v & 1) for u, v in edges):
            best = max(best, bin(mask).count("1"))
    return best


def _solve_exact(rows: list[list[Fraction]], rhs: list[Fraction]):
    n = len(rows)
    M = [list(r) + [b] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col] / M[col][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[col])]
    return [M[i][n] / M[i][i] for i in range(n)]


def lp_vertex_optimum(qs, ps, caps):
    """Exact LP optimum over the box-packing polytope by enumerating its vertices.

    Every vertex is the unique solution of some set of active constraints
    chosen from ``A x <= b``, ``x >= 0`` and ``x <= 1``.
    """
    nvar = len(qs)
    if nvar == 0:
        return Fraction(0), ()
    cons = []
    for j, cap in enumerate(caps):
        cons.append(([Fraction(q[j]) for q in qs], Fraction(cap)))
    for i in range(nvar):
        e = [Fraction(0)] * nvar
        e[i] = Fraction(1)
        cons.append((e, Fraction(1)))
        cons.append(([-x for x in e], Fraction(0)))
    best, arg = None, None
    for active in itertools.combinations(cons, nvar):
        x = _solve_exact([a for a, _ in active], [b for _, b in active])
        if x is None:
            continue
        if all(sum(a * v for a, v in zip(row, x)) <= b for row, b in cons):
            val = sum(Fraction(p) * v for p, v in zip(ps, x))
            if best is None or val > best:
                best, arg = val, tuple(x)
    return best, arg
