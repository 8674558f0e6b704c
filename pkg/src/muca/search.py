"""Depth-first branch and bound over a static bid ranking, plus the exhaustive oracle.

The search keeps only the current partial allocation, the incumbent and the
recursion stack, so memory is linear in the instance size.  A node is a
partial allocation; its children add one later-ranked bid that still fits.
Trying candidates in rank order is binary include/exclude branching with
include first, and the first leaf reached is the greedy allocation.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import bounds as B
from .bounds import BoundSkipped, Method
from .greedy import greedy_allocate
from .model import Instance, Solution, ensure_valid
from .ordering import Criterion, dominance_prune, rank_bids

BRUTE_FORCE_MAX_BIDS = 25


@dataclass(frozen=True)
class SolveConfig:
    criterion: Criterion = field(default_factory=Criterion)
    bound_methods: frozenset[Method] = frozenset({Method.AVG})
    seed_incumbent: bool = True
    node_limit: int | None = None
    # None means: on whenever LP is among the bound methods
    lp_integral_backtrack: bool | None = None
    time_limit: float | None = None
    prune_dominated: bool = True

    def __post_init__(self):
        object.__setattr__(self, "bound_methods", frozenset(self.bound_methods) - {Method.MIN})

    @property
    def lp_backtrack(self) -> bool:
        if Method.LP not in self.bound_methods:
            return False
        return True if self.lp_integral_backtrack is None else self.lp_integral_backtrack


@dataclass(frozen=True)
class SolveResult:
    best: Solution
    proven_optimal: bool
    nodes_visited: int
    node_fraction: float
    time_total: float
    time_to_best: float
    nodes_to_best: int
    live_bids: int
    bound_calls: dict[str, int] = field(default_factory=dict)
    bound_time: dict[str, float] = field(default_factory=dict)
    first_leaf: frozenset[int] | None = None
    stop_reason: str | None = None

    @property
    def value(self):
        return self.best.value


class _Stop(Exception):
    pass


class _Search:
    def __init__(self, inst: Instance, order: tuple[int, ...], cfg: SolveConfig, started: float):
        self.cfg = cfg
        self.started = started
        self.order = order
        self.m = len(order)
        self.n = inst.n
        self.qs = [inst.bids[i].q for i in order]
        units = inst.price_units
        self.ps = [units[i] for i in order]
        pos_of = {b: pos for pos, b in enumerate(order)}
        self.excl = [
            [pos_of[o] for o in inst.excluded_with[b]] for b in order
        ]
        self.methods = [m for m in B.EVALUATION_ORDER if m in cfg.bound_methods]
        self.lp_backtrack = cfg.lp_backtrack

        self.residual = list(inst.caps)
        self.blocked = [0] * self.m
        self.partial: list[int] = []

        self.inc_value = 0
        self.inc_set: tuple[int, ...] = ()
        self.nodes = 0
        self.nodes_to_best = 0
        self.time_to_best = 0.0
        self.first_leaf: tuple[int, ...] | None = None
        self.calls = {m.value: 0 for m in self.methods}
        self.spent = {m.value: 0.0 for m in self.methods}
        self.deadline = started + cfg.time_limit if cfg.time_limit is not None else None

    def improve(self, value: int, positions: Iterable[int]):
        self.inc_value = value
        self.inc_set = tuple(self.order[p] for p in positions)
        self.nodes_to_best = self.nodes
        self.time_to_best = time.perf_counter() - self.started

    def fits(self, pos: int) -> bool:
        if self.blocked[pos]:
            return False
        return all(x <= r for x, r in zip(self.qs[pos], self.residual))

    def bound(self, start: int, value: int):
        """Return ``(prune, lifted)`` for the subproblem of fitting bids from ``start`` on."""
        live = [p for p in range(start, self.m) if self.fits(p)]
        qs = [self.qs[p] for p in live]
        ps = [self.ps[p] for p in live]
        caps = self.residual
        gap = self.inc_value - value
        tol = min(0.25, 1e-9 * max(1.0, abs(self.inc_value)))
        for method in self.methods:
            t0 = time.perf_counter()
            try:
                if method is Method.AVG:
                    self.calls["avg"] += 1
                    prune = B._avg(qs, ps, caps) <= gap + tol
                elif method is Method.PROJ:
                    prune = False
                    for j in range(self.n):
                        self.calls["proj"] += 1
                        try:
                            if B._proj(qs, ps, caps, j) <= gap + tol:
                                prune = True
                                break
                        except BoundSkipped:
                            continue
                else:
                    self.calls["lp"] += 1
                    lp_value, x, integral = B._lp(qs, ps, caps)
                    prune = lp_value <= gap + tol
                    if not prune and integral and self.lp_backtrack:
                        chosen = [live[i] for i in np.flatnonzero(x > 0.5)]
                        if self._compatible(chosen):
                            return False, chosen
            except BoundSkipped:
                prune = False
            finally:
                self.spent[method.value] += time.perf_counter() - t0
            if prune:
                return True, None
        return False, None

    def _compatible(self, chosen: list[int]) -> bool:
        used = [0] * self.n
        for p in chosen:
            for j, x in enumerate(self.qs[p]):
                used[j] += x
        if any(u > r for u, r in zip(used, self.residual)):
            return False
        members = set(chosen)
        return not any(o in members for p in chosen for o in self.excl[p])

    def expand(self, start: int, value: int):
        limit = self.cfg.node_limit
        if limit is not None and self.nodes >= limit:
            raise _Stop("node_limit")
        self.nodes += 1
        if self.deadline is not None and self.nodes % 128 == 0 and time.perf_counter() > self.deadline:
            raise _Stop("time_limit")
        if value > self.inc_value:
            self.improve(value, self.partial)

        any_fit = False
        for pos in range(start, self.m):
            if not self.fits(pos):
                continue
            any_fit = True
            if self.methods:
                prune, lifted = self.bound(pos, value)
                if prune:
                    break
                if lifted is not None:
                    lifted_value = value + sum(self.ps[p] for p in lifted)
                    if lifted_value > self.inc_value:
                        self.improve(lifted_value, self.partial + lifted)
                    break
            q = self.qs[pos]
            for j, x in enumerate(q):
                self.residual[j] -= x
            for o in self.excl[pos]:
                self.blocked[o] += 1
            self.partial.append(pos)
            try:
                self.expand(pos + 1, value + self.ps[pos])
            finally:
                self.partial.pop()
                for o in self.excl[pos]:
                    self.blocked[o] -= 1
                for j, x in enumerate(q):
                    self.residual[j] += x
        if not any_fit and self.first_leaf is None:
            self.first_leaf = tuple(self.order[p] for p in self.partial)


def solve(inst: Instance, cfg: SolveConfig | None = None) -> SolveResult:
    """Find a maximum-value conflict-free set of bids by branch and bound.

    Winners in the result refer to the original bid indices of ``inst``.
    When a node or time limit stops the search, the best allocation found so
    far is returned with ``proven_optimal=False``.
    """
    cfg = cfg or SolveConfig()
    ensure_valid(inst)
    started = time.perf_counter()

    if cfg.prune_dominated:
        work, _, kept = dominance_prune(inst)
    else:
        work, kept = inst, tuple(range(len(inst.bids)))
    ranking = rank_bids(cfg.criterion, work)
    search = _Search(work, ranking.order, cfg, started)

    if cfg.seed_incumbent and work.bids:
        seed = greedy_allocate(work, cfg.criterion).solution
        units = work.price_units
        seed_value = sum(units[i] for i in seed.chosen)
        if seed_value > search.inc_value:
            search.inc_value = seed_value
            search.inc_set = tuple(sorted(seed.chosen))
            search.time_to_best = time.perf_counter() - started

    stop_reason = None
    try:
        search.expand(0, 0)
    except _Stop as stop:
        stop_reason = str(stop)
    elapsed = time.perf_counter() - started

    best = Solution.of(inst, (kept[i] for i in search.inc_set))
    m = len(work.bids)
    leaf = None
    if search.first_leaf is not None:
        leaf = frozenset(kept[i] for i in search.first_leaf)
    return SolveResult(
        best=best,
        proven_optimal=stop_reason is None,
        nodes_visited=search.nodes,
        node_fraction=search.nodes / 2.0**m if search.nodes else 0.0,
        time_total=elapsed,
        time_to_best=min(search.time_to_best, elapsed),
        nodes_to_best=search.nodes_to_best,
        live_bids=m,
        bound_calls=dict(search.calls),
        bound_time=dict(search.spent),
        first_leaf=leaf,
        stop_reason=stop_reason,
    )


def brute_force(inst: Instance) -> Solution:
    """Exact optimum by checking every subset of bids.

    Among optimal subsets the lexicographically smallest sorted index tuple
    wins.  Refuses instances with more than 25 bids.
    """
    ensure_valid(inst)
    m = len(inst.bids)
    if m > BRUTE_FORCE_MAX_BIDS:
        raise ValueError(f"brute force is limited to {BRUTE_FORCE_MAX_BIDS} bids, got {m}")
    if m == 0:
        return Solution(frozenset(), inst.value_of(()))
    Q = np.array([b.q for b in inst.bids], dtype=np.int64)
    caps = np.array(inst.caps, dtype=np.int64)
    units = inst.price_units
    exact_int64 = sum(units) < 2**62 and int(Q.sum()) < 2**62
    prices = np.array(units, dtype=np.int64 if exact_int64 else object)
    bit = np.int64(1) << np.arange(m, dtype=np.int64)

    best_value = None
    best_masks: list[int] = []
    chunk = 1 << min(m, 16)
    for start in range(0, 1 << m, chunk):
        masks = np.arange(start, start + chunk, dtype=np.int64)
        member = (masks[:, None] & bit) != 0
        ok = np.all(member.astype(np.int64) @ Q <= caps, axis=1)
        for i, j in inst.exclusions:
            ok &= ~(member[:, i] & member[:, j])
        if not ok.any():
            continue
        values = member[ok].astype(prices.dtype) @ prices
        top = values.max()
        if best_value is None or top > best_value:
            best_value = top
            best_masks = []
        if top == best_value:
            best_masks.extend(int(x) for x in masks[ok][values == top])

    def indices(mask: int) -> tuple[int, ...]:
        return tuple(i for i in range(m) if mask >> i & 1)

    winner = min((indices(mk) for mk in best_masks))
    return Solution.of(inst, winner)
