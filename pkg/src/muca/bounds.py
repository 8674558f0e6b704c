"""Upper bounds on the best value still obtainable from a partially allocated auction.

Three families are provided: the average-price bound, per-commodity
projections onto 0/1 knapsacks, and the LP relaxation.  All of them ignore
exclusion pairs, which can only make them looser.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .model import Instance
from .simplex import PivotLimitExceeded, solve_box_lp

INTEGRALITY_TOL = 1e-6
KNAPSACK_WORK_LIMIT = 20_000_000


class Method(enum.Enum):
    AVG = "avg"
    PROJ = "proj"
    LP = "lp"
    MIN = "min"


ALL_METHODS = frozenset({Method.AVG, Method.PROJ, Method.LP})
# cheapest first
EVALUATION_ORDER = (Method.AVG, Method.PROJ, Method.LP)


def parse_methods(text: str) -> frozenset[Method]:
    """``"avg,lp"`` -> ``{AVG, LP}``; ``"all"`` -> every method; ``"none"`` or ``""`` -> empty set."""
    text = text.strip()
    if text in ("", "none"):
        return frozenset()
    if text == "all":
        return ALL_METHODS
    out = set()
    for part in text.split(","):
        try:
            method = Method(part.strip())
        except ValueError:
            raise ValueError(f"unknown bound method {part!r}") from None
        if method is Method.MIN:
            raise ValueError("'min' is not a bound method")
        out.add(method)
    return frozenset(out)


class BoundSkipped(Exception):
    """A bound was too expensive to compute; no bound is implied."""


@dataclass(frozen=True)
class Subproblem:
    """Residual units plus the bids that still fit and are not excluded."""

    instance: Instance
    residual_caps: tuple[int, ...]
    live_bids: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "residual_caps", tuple(self.residual_caps))
        object.__setattr__(self, "live_bids", tuple(self.live_bids))
        for i in self.live_bids:
            if any(x > r for x, r in zip(self.instance.bids[i].q, self.residual_caps)):
                raise ValueError(f"bid {i} does not fit the residual capacities")

    @classmethod
    def root(cls, inst: Instance) -> Subproblem:
        return cls(inst, inst.caps, tuple(range(len(inst.bids))))

    def quantities(self) -> list[tuple[int, ...]]:
        return [self.instance.bids[i].q for i in self.live_bids]

    def prices(self) -> list[float]:
        return [float(self.instance.bids[i].p) for i in self.live_bids]


@dataclass(frozen=True)
class BoundReport:
    value: float
    method: Method
    commodity: int | None = None
    lp_x: tuple[float, ...] | None = None
    lp_integral: bool | None = None
    parts: tuple[BoundReport, ...] = field(default=(), repr=False)


def knapsack_max(items: Iterable[tuple[int, float]], capacity: int, work_limit: int = KNAPSACK_WORK_LIMIT):
    """Exact 0/1 knapsack optimum by dynamic programming over capacity.

    Zero-weight items are always taken.  Integer values give an exact integer
    answer.  Raises :class:`BoundSkipped` when ``capacity * len(items)``
    exceeds ``work_limit``.
    """
    items = list(items)
    free = sum(v for w, v in items if w == 0)
    rest = [(w, v) for w, v in items if 0 < w <= capacity and v > 0]
    if sum(w for w, _ in rest) <= capacity:
        return free + sum(v for _, v in rest)
    if capacity * len(rest) > work_limit:
        raise BoundSkipped(f"knapsack of {len(rest)} items x capacity {capacity} over work limit")
    exact = all(isinstance(v, (int, np.integer)) for _, v in rest)
    dp = np.zeros(capacity + 1, dtype=np.int64 if exact else float)
    for w, v in rest:
        dp[w:] = np.maximum(dp[w:], dp[:-w] + v)
    best = dp[-1]
    return free + (int(best) if exact else float(best))


def _avg(qs: Sequence[Sequence[int]], ps: Sequence[float], caps: Sequence[int]) -> float:
    if not qs:
        return 0.0
    return max(p / sum(q) for q, p in zip(qs, ps)) * sum(caps)


def _proj(qs, ps, caps, j: int):
    return knapsack_max(((q[j], p) for q, p in zip(qs, ps)), caps[j])


def _lp(qs, ps, caps) -> tuple[float, np.ndarray, bool]:
    if not qs:
        return 0.0, np.zeros(0), True
    A = np.array(qs, dtype=float).T
    try:
        res = solve_box_lp(ps, A, caps)
    except PivotLimitExceeded as exc:
        raise BoundSkipped(str(exc)) from exc
    integral = bool(np.all(np.minimum(res.x, 1.0 - res.x) <= INTEGRALITY_TOL))
    return res.value, res.x, integral


def avg_price_bound(sub: Subproblem) -> BoundReport:
    return BoundReport(_avg(sub.quantities(), sub.prices(), sub.residual_caps), Method.AVG)


def projection_bound(sub: Subproblem, j: int) -> BoundReport:
    if not 0 <= j < len(sub.residual_caps):
        raise IndexError(f"commodity {j} out of range")
    value = _proj(sub.quantities(), sub.prices(), sub.residual_caps, j)
    return BoundReport(float(value), Method.PROJ, commodity=j)


def lp_bound(sub: Subproblem) -> BoundReport:
    value, x, integral = _lp(sub.quantities(), sub.prices(), sub.residual_caps)
    return BoundReport(value, Method.LP, lp_x=tuple(float(v) for v in x), lp_integral=integral)


def best_bound(sub: Subproblem, enabled: Iterable[Method], threshold: float | None = None) -> BoundReport:
    """Smallest bound over the enabled methods, cheapest methods first.

    With ``threshold`` set, evaluation stops as soon as some bound is at or
    below it.  When every method is skipped the value is ``inf``.
    """
    enabled = frozenset(enabled) - {Method.MIN}
    if not enabled:
        raise ValueError("at least one bound method must be enabled")
    parts: list[BoundReport] = []
    best: BoundReport | None = None

    def consider(report: BoundReport) -> bool:
        nonlocal best
        parts.append(report)
        if best is None or report.value < best.value:
            best = report
        return threshold is not None and best.value <= threshold

    done = False
    for method in EVALUATION_ORDER:
        if done or method not in enabled:
            continue
        if method is Method.AVG:
            done = consider(avg_price_bound(sub))
        elif method is Method.PROJ:
            for j in range(len(sub.residual_caps)):
                try:
                    done = consider(projection_bound(sub, j))
                except BoundSkipped:
                    continue
                if done:
                    break
        else:
            try:
                done = consider(lp_bound(sub))
            except BoundSkipped:
                pass

    if best is None:
        return BoundReport(float("inf"), Method.MIN, parts=tuple(parts))
    lp_fields = {}
    for report in parts:
        if report.method is Method.LP and report.value <= best.value + 1e-9:
            lp_fields = dict(lp_x=report.lp_x, lp_integral=report.lp_integral)
    return BoundReport(best.value, Method.MIN, commodity=best.commodity, parts=tuple(parts), **lp_fields)
