"""Temporal k-core enumeration over every subinterval of a query window.

The schedule is triangular: rows anchor the start time ts ascending, and
within a row the end time te walks from the window's right edge down to ts,
so each cell's core is induced decrementally from an enclosing core that is
already in hand.  `run_tcd` visits every cell; `run_otcd` additionally skips
cells whose core is already known, driven by each induced core's tightest
time interval (TTI):

  PoR   the core's TTI ends early, so shrinking te down to that end
        changes nothing in the current row;
  PoU   the core's TTI starts late, so rows up to that start repeat the
        current row's results column for column;
  PoL   both, covering a block of later rows beyond the TTI's end;
  empty an empty core empties every subinterval inside it.

Both engines produce the same catalog of distinct nonempty cores keyed by
TTI, with visit/prune/decomposition counters for reporting.
"""

from __future__ import annotations

import time
from bisect import bisect_right
from dataclasses import dataclass, field

from .graph import CoreSnapshot, TemporalGraph, TimeInterval
from .tel import TEL

Cell = TimeInterval  # row = ts, column = te

PRUNE_RULES = ("PoR", "PoU", "PoL", "Rule4", "Empty")


class PruneTable:
    """Per-row bookkeeping of pruned columns as disjoint merged intervals.

    Adjacent runs are coalesced on insert, so the column immediately left
    of any stored run is guaranteed unpruned and `next_unpruned` needs a
    single lookup.
    """

    def __init__(self, window: TimeInterval):
        self.window = window
        self._rows: dict[int, list[TimeInterval]] = {}
        self.trigger_counts = {rule: 0 for rule in PRUNE_RULES}
        self.pruned_by_rule = {rule: 0 for rule in PRUNE_RULES}

    @property
    def cells_pruned(self) -> int:
        return sum(self.pruned_by_rule.values())

    def _find(self, runs, col):
        """Index of the run containing col, or None."""
        i = bisect_right(runs, col, key=lambda run: run.ts) - 1
        if i >= 0 and runs[i].te >= col:
            return i
        return None

    def mark(self, row: int, lo: int, hi: int) -> int:
        """Mark columns [lo, hi] of `row` pruned; returns how many were new."""
        if lo > hi:
            return 0
        runs = self._rows.setdefault(row, [])
        i = bisect_right(runs, lo, key=lambda run: run.ts)
        if i > 0 and runs[i - 1].te >= lo - 1:
            i -= 1
        j = i
        covered = 0
        new_lo, new_hi = lo, hi
        while j < len(runs) and runs[j].ts <= hi + 1:
            overlap = min(hi, runs[j].te) - max(lo, runs[j].ts) + 1
            if overlap > 0:
                covered += overlap
            new_lo = min(new_lo, runs[j].ts)
            new_hi = max(new_hi, runs[j].te)
            j += 1
        runs[i:j] = [TimeInterval(new_lo, new_hi)]
        return (hi - lo + 1) - covered

    def mark_rule(self, row: int, lo: int, hi: int, rule: str) -> int:
        new = self.mark(row, lo, hi)
        self.pruned_by_rule[rule] += new
        return new

    def is_pruned(self, row: int, col: int) -> bool:
        runs = self._rows.get(row)
        return bool(runs) and self._find(runs, col) is not None

    def next_unpruned(self, row: int, col: int) -> int:
        """Greatest column <= col not marked in `row` (may fall below row)."""
        runs = self._rows.get(row)
        if not runs:
            return col
        i = self._find(runs, col)
        return col if i is None else runs[i].ts - 1


def apply_pruning(table: PruneTable, cell: Cell, tti: TimeInterval) -> None:
    """Mark the cells whose cores are fully determined by inducing `cell`'s
    core with tightest interval `tti`.  Rules fire independently."""
    ts, te = cell
    s, e = tti
    if e < te:
        table.trigger_counts["PoR"] += 1
        table.mark_rule(ts, e, te - 1, "PoR")
    if s > ts:
        table.trigger_counts["PoU"] += 1
        for row in range(ts + 1, s + 1):
            table.mark_rule(row, row, te, "PoU")
    if s > ts and e < te:
        table.trigger_counts["PoL"] += 1
        for row in range(s + 1, e + 1):
            table.mark_rule(row, e + 1, te, "PoL")


def rectangle_prune(table: PruneTable, cell: Cell, tti: TimeInterval) -> None:
    """Mark every other cell of the rectangle spanned by `cell` (loosest
    corner) and `tti` (tightest corner): all of them induce this same core."""
    ts, te = cell
    s, e = tti
    table.trigger_counts["Rule4"] += 1
    table.mark_rule(ts, e, te - 1, "Rule4")  # own row, excluding the cell itself
    for row in range(ts + 1, s + 1):
        table.mark_rule(row, e, te, "Rule4")


def empty_prune(table: PruneTable, cell: Cell) -> None:
    """An empty core at `cell` empties every subinterval inside it; mark the
    whole triangle.  The visited cell itself is marked but not counted."""
    ts, te = cell
    table.trigger_counts["Empty"] += 1
    for row in range(ts, te + 1):
        new = table.mark(row, row, te)
        if row == ts:
            new -= 1  # the trigger cell was visited, not pruned
        table.pruned_by_rule["Empty"] += new


@dataclass
class EngineStats:
    algorithm: str
    cells_total: int = 0
    cells_visited: int = 0
    decompositions: int = 0
    nonempty_inductions: int = 0
    trigger_counts: dict = field(default_factory=lambda: {r: 0 for r in PRUNE_RULES})
    pruned_by_rule: dict = field(default_factory=lambda: {r: 0 for r in PRUNE_RULES})
    distinct_cores: int = 0
    wall_ms: float = 0.0
    visit_trace: list = field(default_factory=list)

    @property
    def cells_pruned(self) -> int:
        return sum(self.pruned_by_rule.values())

    def pruned_pct_per_rule(self) -> dict:
        total = self.cells_total or 1
        return {rule: 100.0 * n / total for rule, n in self.pruned_by_rule.items()}

    def absorb_table(self, table: PruneTable) -> None:
        self.trigger_counts = dict(table.trigger_counts)
        self.pruned_by_rule = dict(table.pruned_by_rule)

    def to_dict(self) -> dict:
        return {
            "cells_total": self.cells_total,
            "cells_visited": self.cells_visited,
            "cells_pruned": self.cells_pruned,
            "trigger_counts": dict(self.trigger_counts),
            "pruned_pct_per_rule": self.pruned_pct_per_rule(),
            "decompositions": self.decompositions,
            "distinct_cores": self.distinct_cores,
        }


@dataclass
class CoreCatalog:
    """Distinct nonempty cores of a query, keyed by their TTI."""

    window: TimeInterval | None
    cores: dict[TimeInterval, CoreSnapshot]
    stats: EngineStats

    def __len__(self):
        return len(self.cores)

    def __contains__(self, tti):
        return TimeInterval(*tti) in self.cores

    def __getitem__(self, tti) -> CoreSnapshot:
        return self.cores[TimeInterval(*tti)]

    def ttis(self) -> list[TimeInterval]:
        return sorted(self.cores)

    def items(self):
        return ((tti, self.cores[tti]) for tti in self.ttis())


def clamp_window(g: TemporalGraph, window) -> TimeInterval | None:
    """Clip `window` to the graph's timestamp range; None when nothing is left."""
    if g.edge_count == 0:
        return None
    w = TimeInterval(*window)
    lo, hi = max(w.ts, g.min_t), min(w.te, g.max_t)
    return TimeInterval(lo, hi) if lo <= hi else None


def _empty_catalog(algorithm: str) -> CoreCatalog:
    return CoreCatalog(None, {}, EngineStats(algorithm=algorithm))


def run_tcd(g: TemporalGraph, k: int, window) -> CoreCatalog:
    """Exhaustive decremental enumeration: every cell of the triangular
    schedule is visited and decomposed."""
    started = time.perf_counter()
    w = clamp_window(g, window)
    if w is None:
        return _empty_catalog("tcd")
    stats = EngineStats(algorithm="tcd")
    m = w.duration
    stats.cells_total = m * (m + 1) // 2
    cores: dict[TimeInterval, CoreSnapshot] = {}

    def visit(cell: Cell, tel: TEL):
        stats.cells_visited += 1
        stats.visit_trace.append(cell)
        if tel.edge_count:
            stats.nonempty_inductions += 1
            tti = tel.tti()
            if tti not in cores:
                cores[tti] = tel.snapshot()

    row_head = TEL.from_graph(g)
    row_head.tcd(k, w)
    stats.decompositions += 1
    for ts in range(w.ts, w.te + 1):
        if ts > w.ts:
            row_head.tcd(k, (ts, w.te))
            stats.decompositions += 1
        visit(Cell(ts, w.te), row_head)
        walker = row_head.clone()
        for te in range(w.te - 1, ts - 1, -1):
            walker.tcd(k, (ts, te))
            stats.decompositions += 1
            visit(Cell(ts, te), walker)
    stats.distinct_cores = len(cores)
    stats.wall_ms = (time.perf_counter() - started) * 1000.0
    return CoreCatalog(w, cores, stats)


def run_otcd(g: TemporalGraph, k: int, window, *, debug: bool = False) -> CoreCatalog:
    """Optimized enumeration: identical catalog to `run_tcd`, but cells whose
    cores are implied by an already-induced core are skipped via the three
    TTI rules plus the empty-triangle rule."""
    catalog = _run_pruned(g, k, window, algorithm="otcd", debug=debug)
    return catalog


def _run_pruned(
    g: TemporalGraph,
    k: int,
    window,
    *,
    algorithm: str,
    debug: bool = False,
    on_nonempty=None,
) -> CoreCatalog:
    """Shared schedule walker for the rule-based engines.

    `on_nonempty(table, cell, tti, tel)` is called for every visited
    nonempty cell and decides which cells to prune; when None, the three
    TTI rules apply (plain optimized enumeration).
    """
    started = time.perf_counter()
    w = clamp_window(g, window)
    if w is None:
        return _empty_catalog(algorithm)
    stats = EngineStats(algorithm=algorithm)
    m = w.duration
    stats.cells_total = m * (m + 1) // 2
    cores: dict[TimeInterval, CoreSnapshot] = {}
    table = PruneTable(w)

    row_head = TEL.from_graph(g)
    row_head.tcd(k, w)
    stats.decompositions += 1
    for ts in range(w.ts, w.te + 1):
        te = table.next_unpruned(ts, w.te)
        if te < ts:
            continue  # row fully pruned; the row head core stays stale but enclosing
        walker = None
        while te >= ts:
            cell = Cell(ts, te)
            if walker is None and te == w.te:
                # serve the row head cell from the head itself; a walker
                # copy is only made if a second cell of the row survives
                if ts > w.ts:
                    row_head.tcd(k, (ts, w.te))
                    stats.decompositions += 1
                current = row_head
            else:
                if walker is None:
                    walker = row_head.clone(window=cell)
                walker.tcd(k, cell)
                stats.decompositions += 1
                current = walker
            stats.cells_visited += 1
            stats.visit_trace.append(cell)
            if current.edge_count == 0:
                empty_prune(table, cell)
            else:
                stats.nonempty_inductions += 1
                tti = current.tti()
                if tti not in cores:
                    cores[tti] = current.snapshot()
                elif debug and cores[tti].edges != tuple(
                    sorted(current.iter_edges(), key=lambda e: (e.t, e.u, e.v))
                ):
                    raise AssertionError(f"two distinct cores share the key {tti}")
                if on_nonempty is not None:
                    on_nonempty(table, cell, tti, current)
                else:
                    apply_pruning(table, cell, tti)
            nxt = table.next_unpruned(ts, te - 1)
            te = nxt
    stats.absorb_table(table)
    stats.distinct_cores = len(cores)
    stats.wall_ms = (time.perf_counter() - started) * 1000.0
    return CoreCatalog(w, cores, stats)
