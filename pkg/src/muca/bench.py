"""Batch experiments over generated auctions, written out as CSV."""

from __future__ import annotations

import csv
import io
import itertools
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

from .instances import GenParams, gen_random
from .model import format_price
from .rng import splitmix64
from .search import SolveConfig, solve

CSV_HEADER = (
    "goods,bids,trial,seed,opt_value,proven_optimal,nodes_visited,node_fraction,"
    "time_ms,time_to_best_ms,nodes_to_best,avg_calls,avg_ms,proj_calls,proj_ms,lp_calls,lp_ms"
).split(",")
TIME_COLUMNS = ("time_ms", "time_to_best_ms", "avg_ms", "proj_ms", "lp_ms")
SUMMARY_TRIAL = "mean"


@dataclass(frozen=True)
class BenchConfig:
    goods_list: tuple[int, ...]
    bids_list: tuple[int, ...]
    trials: int = 10
    base_seed: int = 0
    solver: SolveConfig = field(default_factory=SolveConfig)
    time_limit: float | None = None
    # extra GenParams fields (cap_range, req_prob, qty_range, ...)
    gen_options: dict = field(default_factory=dict)
    jobs: int = 1

    def __post_init__(self):
        object.__setattr__(self, "goods_list", tuple(self.goods_list))
        object.__setattr__(self, "bids_list", tuple(self.bids_list))
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.goods_list or not self.bids_list:
            raise ValueError("goods_list and bids_list must be nonempty")

    def cells(self):
        for index, (goods, bids, trial) in enumerate(
            itertools.product(self.goods_list, self.bids_list, range(self.trials))
        ):
            yield index, goods, bids, trial


@dataclass
class BenchRow:
    goods: int
    bids: int
    trial: int | str
    seed: int | str
    opt_value: str
    proven_optimal: bool
    nodes_visited: float
    node_fraction: float
    time_ms: float
    time_to_best_ms: float
    nodes_to_best: float
    avg_calls: float = 0
    avg_ms: float = 0.0
    proj_calls: float = 0
    proj_ms: float = 0.0
    lp_calls: float = 0
    lp_ms: float = 0.0
    flagged: bool = False

    @property
    def is_summary(self) -> bool:
        return self.trial == SUMMARY_TRIAL


def _run_cell(args) -> BenchRow:
    cfg, index, goods, bids, trial = args
    seed = splitmix64(cfg.base_seed, index)
    inst = gen_random(GenParams(goods=goods, bids=bids, seed=seed, **cfg.gen_options))
    solver = cfg.solver
    if cfg.time_limit is not None:
        solver = replace(solver, time_limit=cfg.time_limit)
    res = solve(inst, solver)
    row = BenchRow(
        goods=goods,
        bids=bids,
        trial=trial,
        seed=seed,
        opt_value=format_price(res.best.value, inst.scale),
        proven_optimal=res.proven_optimal,
        nodes_visited=res.nodes_visited,
        node_fraction=res.node_fraction,
        time_ms=res.time_total * 1e3,
        time_to_best_ms=res.time_to_best * 1e3,
        nodes_to_best=res.nodes_to_best,
        flagged=not res.proven_optimal,
    )
    for name in ("avg", "proj", "lp"):
        setattr(row, f"{name}_calls", res.bound_calls.get(name, 0))
        setattr(row, f"{name}_ms", res.bound_time.get(name, 0.0) * 1e3)
    return row


def _summary(goods: int, bids: int, rows: list[BenchRow]) -> BenchRow:
    def mean(attr):
        return statistics.fmean(float(getattr(r, attr)) for r in rows)

    return BenchRow(
        goods=goods,
        bids=bids,
        trial=SUMMARY_TRIAL,
        seed="",
        opt_value=repr(statistics.fmean(float(r.opt_value) for r in rows)),
        proven_optimal=all(r.proven_optimal for r in rows),
        nodes_visited=mean("nodes_visited"),
        node_fraction=mean("node_fraction"),
        time_ms=mean("time_ms"),
        time_to_best_ms=mean("time_to_best_ms"),
        nodes_to_best=mean("nodes_to_best"),
        avg_calls=mean("avg_calls"),
        avg_ms=mean("avg_ms"),
        proj_calls=mean("proj_calls"),
        proj_ms=mean("proj_ms"),
        lp_calls=mean("lp_calls"),
        lp_ms=mean("lp_ms"),
        flagged=any(r.flagged for r in rows),
    )


def run_bench(cfg: BenchConfig) -> list[BenchRow]:
    """One row per (goods, bids, trial), then one mean row per (goods, bids)."""
    tasks = [(cfg, *cell) for cell in cfg.cells()]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            rows = list(pool.map(_run_cell, tasks))
    else:
        rows = [_run_cell(t) for t in tasks]
    summaries = []
    for goods, bids in itertools.product(cfg.goods_list, cfg.bids_list):
        group = [r for r in rows if r.goods == goods and r.bids == bids]
        summaries.append(_summary(goods, bids, group))
    return rows + summaries


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def emit_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(CSV_HEADER)
    for r in rows:
        out = []
        for col in CSV_HEADER:
            value = getattr(r, col)
            if col in TIME_COLUMNS:
                out.append(f"{value:.3f}")
            else:
                out.append(_fmt(value))
        writer.writerow(out)
    return buf.getvalue()


def strip_time_columns(text: str) -> list[list[str]]:
    """Parse emitted CSV and drop the wall-clock columns (for determinism checks)."""
    reader = csv.reader(io.StringIO(text))
    table = list(reader)
    keep = [i for i, name in enumerate(table[0]) if name not in TIME_COLUMNS] if table else []
    return [[row[i] for i in keep] for row in table]
