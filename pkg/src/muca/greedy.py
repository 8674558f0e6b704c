"""Greedy allocation along a static bid ranking."""

from __future__ import annotations

from dataclasses import dataclass

from .model import Instance, Solution, ensure_valid
from .ordering import Criterion, Ranking, rank_bids


@dataclass(frozen=True)
class GreedyResult:
    solution: Solution
    order_used: Ranking
    skipped: tuple[int, ...]


def greedy_allocate(inst: Instance, c: Criterion | None = None) -> GreedyResult:
    """Accept bids in ranking order whenever the remaining units and exclusions allow.

    With the default square-root criterion the result is within a factor
    ``sqrt(inst.k)`` of the optimum.
    """
    ensure_valid(inst)
    ranking = rank_bids(c or Criterion(), inst)
    residual = list(inst.caps)
    blocked: set[int] = set()
    chosen: list[int] = []
    skipped: list[int] = []
    for i in ranking.order:
        q = inst.bids[i].q
        if i in blocked or any(x > r for x, r in zip(q, residual)):
            skipped.append(i)
            continue
        chosen.append(i)
        residual = [r - x for r, x in zip(residual, q)]
        blocked |= inst.excluded_with[i]
    return GreedyResult(Solution.of(inst, chosen), ranking, tuple(skipped))
