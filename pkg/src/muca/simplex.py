"""Dense bounded-variable primal simplex for box-constrained packing LPs.

Solves ``max c.x  s.t.  A x <= b, 0 <= x <= 1`` with ``b >= 0``, so the
all-slack basis at ``x = 0`` is feasible and no phase one is needed.
Nonbasic structural variables sit at either bound; reaching the opposite
bound is a bound flip rather than a pivot.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

FEAS_TOL = 1e-9
PIVOT_TOL = 1e-9


class PivotLimitExceeded(RuntimeError):
    pass


@dataclass
class LPResult:
    value: float
    x: np.ndarray
    pivots: int


def solve_box_lp(c, A, b, max_pivots: int | None = None) -> LPResult:
    c = np.asarray(c, dtype=float)
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    n_rows, n_cols = A.shape
    if n_cols == 0:
        return LPResult(0.0, np.zeros(0), 0)
    if np.any(b < 0):
        raise ValueError("right-hand side must be nonnegative")

    total = n_cols + n_rows
    tab = np.hstack([A, np.eye(n_rows)])
    upper = np.concatenate([np.ones(n_cols), np.full(n_rows, np.inf)])
    reduced = np.concatenate([c, np.zeros(n_rows)])
    basis = np.arange(n_cols, total)
    is_basic = np.zeros(total, dtype=bool)
    is_basic[n_cols:] = True
    at_upper = np.zeros(total, dtype=bool)
    beta = b.copy()

    if max_pivots is None:
        max_pivots = 50 * total + 100
    # switch to Bland's rule once degenerate pivots exceed this count
    degeneracy_threshold = 2 * total
    degenerate = 0
    bland = False
    pivots = 0

    while True:
        candidates = ~is_basic & (
            (~at_upper & (reduced > FEAS_TOL)) | (at_upper & (reduced < -FEAS_TOL))
        )
        eligible = np.flatnonzero(candidates)
        if eligible.size == 0:
            break
        if bland:
            enter = int(eligible[0])
        else:
            enter = int(eligible[np.argmax(np.abs(reduced[eligible]))])

        direction = -1.0 if at_upper[enter] else 1.0
        delta = -direction * tab[:, enter]

        leave_row = -1
        leave_to_upper = False
        best_ratio = np.inf
        best_tie = None
        for r in range(n_rows):
            d = delta[r]
            if d < -PIVOT_TOL:
                ratio = max(beta[r], 0.0) / -d
                to_upper = False
            elif d > PIVOT_TOL and np.isfinite(upper[basis[r]]):
                ratio = max(upper[basis[r]] - beta[r], 0.0) / d
                to_upper = True
            else:
                continue
            # ties: Bland takes the lowest variable index, otherwise the largest pivot
            tie = basis[r] if bland else -abs(d)
            if ratio < best_ratio - FEAS_TOL or (ratio <= best_ratio + FEAS_TOL and tie < best_tie):
                best_ratio, best_tie = min(ratio, best_ratio), tie
                leave_row, leave_to_upper = r, to_upper

        step = upper[enter]
        if leave_row >= 0 and best_ratio <= step:
            step = best_ratio
        else:
            leave_row = -1

        pivots += 1
        if pivots > max_pivots:
            raise PivotLimitExceeded(f"no optimum after {max_pivots} pivots")

        if leave_row < 0:
            # bound flip of the entering variable
            beta += step * delta
            at_upper[enter] = not at_upper[enter]
            continue

        beta += step * delta
        entering_value = step if direction > 0 else upper[enter] - step
        leaving = basis[leave_row]
        is_basic[leaving] = False
        at_upper[leaving] = leave_to_upper

        row = tab[leave_row] / tab[leave_row, enter]
        col = tab[:, enter].copy()
        tab -= np.outer(col, row)
        tab[leave_row] = row
        reduced -= reduced[enter] * row

        basis[leave_row] = enter
        is_basic[enter] = True
        at_upper[enter] = False
        beta[leave_row] = entering_value

        if step <= FEAS_TOL:
            degenerate += 1
            if degenerate > degeneracy_threshold:
                bland = True

    x = np.where(at_upper, upper, 0.0)
    x[is_basic] = 0.0
    x[basis] = beta
    xs = np.clip(x[:n_cols], 0.0, 1.0)
    return LPResult(float(c @ xs), xs, pivots)
