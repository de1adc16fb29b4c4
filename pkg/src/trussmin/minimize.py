"""Budgeted edge-deletion solvers over one k-truss.

Five strategies behind one dispatcher: exhaustive subset search, a
minimum-support heuristic, the full greedy scan, greedy over the reduced
candidate set, and greedy with upper-bound ordered early-stopping.  The
three greedy variants share a single tie-break rule (smallest edge id
among all edges achieving the maximum follower count) so their chosen
edges and per-iteration counts are bit-identical.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

from .cascade import simulate_followers
from .errors import EnumerationCapExceeded
from .graph import Graph
from .groups import SupportGroup, build_truss_group_index, find_support_groups, \
    refresh_index
from .truss import TrussnessMap, TrussSubgraph, k_truss, truss_decompose, \
    update_after_deletion

ALGORITHMS = ("exact", "support", "baseline", "gp_edge", "up_edge")

DEFAULT_EXACT_CAP = 2_000_000


@dataclass(frozen=True)
class SolverConfig:
    """What to solve: truss level, deletion budget, strategy, knobs.

    Every algorithm is deterministic; there is no seed anywhere.
    """

    k: int
    b: int
    algorithm: str = "up_edge"
    threads: int = 1
    exact_cap: int = DEFAULT_EXACT_CAP
    rebuild_index: bool = False

    def __post_init__(self):
        if self.k < 3:
            raise ValueError("k must be >= 3")
        if self.b < 1:
            raise ValueError("budget b must be >= 1")
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")


@dataclass
class IterationRecord:
    edge: tuple[int, int]          # endpoints in original input labels
    eid: int
    followers: int
    candidates_total: int
    candidates_evaluated: int
    time_ms: float


@dataclass
class MinimizationReport:
    k: int
    b: int
    algorithm: str
    iterations: list[IterationRecord] = field(default_factory=list)
    initial_truss_edges: int = 0
    final_truss_edges: int = 0
    followers_total: int = 0
    b_effective: int = 0
    warnings: list[str] = field(default_factory=list)
    time_ms_total: float = 0.0

    def to_dict(self) -> dict:
        return {
            "config": {"k": self.k, "b": self.b, "algorithm": self.algorithm},
            "iterations": [
                {
                    "edge": list(r.edge),
                    "followers": r.followers,
                    "candidates_total": r.candidates_total,
                    "candidates_evaluated": r.candidates_evaluated,
                    "time_ms": r.time_ms,
                }
                for r in self.iterations
            ],
            "totals": {
                "followers_total": self.followers_total,
                "initial_truss_edges": self.initial_truss_edges,
                "final_truss_edges": self.final_truss_edges,
                "b_effective": self.b_effective,
                "timing": {"time_ms_total": self.time_ms_total},
            },
            "warnings": list(self.warnings),
        }


# -- shared helpers -----------------------------------------------------------

def _commit(t: TrussSubgraph, eid: int) -> int:
    """Apply one deletion for real; returns its follower count."""
    dead = t.cascade([eid])
    return len(dead) - 1


def _choose_from_ties(t: TrussSubgraph, best_f: int, ties: list[int],
                      rep_group: dict[int, SupportGroup]) -> int:
    """Shared tie-break: smallest edge id among every maximizer.

    A tying group representative stands for its whole group and for the
    over-threshold edges the group certainly drags down; all of those tie
    it exactly, so they join the pool.  When nothing has followers the
    smallest alive edge is chosen, matching the unpruned reference scan.
    """
    if best_f <= 0:
        e = t.min_alive_edge()
        assert e is not None
        return e
    pool: list[int] = []
    for c in ties:
        pool.append(c)
        grp = rep_group.get(c)
        if grp is not None:
            pool.extend(grp.members)
            pool.extend(grp.pruned_followers)
    return min(pool)


# -- parallel candidate evaluation --------------------------------------------

_PARALLEL_MIN = 64
_EVAL_STATE: Optional[TrussSubgraph] = None


def _eval_batch(eids: list[int]) -> list[tuple[int, int]]:
    t = _EVAL_STATE
    assert t is not None
    return [(e, len(simulate_followers(t, e))) for e in eids]


def _follower_counts(t: TrussSubgraph, eids: list[int], threads: int) -> dict[int, int]:
    """Follower counts for many edges, optionally fanned out over processes.

    Workers inherit the snapshot by fork, evaluate over private scratch,
    and return counts only; the merge is order-independent.
    """
    if threads <= 1 or len(eids) < _PARALLEL_MIN:
        return {e: len(simulate_followers(t, e)) for e in eids}
    import concurrent.futures
    import multiprocessing
    global _EVAL_STATE
    try:
        ctx = multiprocessing.get_context("fork")
    except ValueError:
        return {e: len(simulate_followers(t, e)) for e in eids}
    _EVAL_STATE = t
    try:
        chunk = max(1, len(eids) // (threads * 4))
        batches = [eids[i:i + chunk] for i in range(0, len(eids), chunk)]
        counts: dict[int, int] = {}
        with concurrent.futures.ProcessPoolExecutor(max_workers=threads,
                                                    mp_context=ctx) as ex:
            for batch in ex.map(_eval_batch, batches):
                counts.update(batch)
        return counts
    finally:
        _EVAL_STATE = None


# -- solvers --------------------------------------------------------------------

def solve_baseline(t: TrussSubgraph, b: int,
                   threads: int = 1) -> tuple[list[int], list[IterationRecord]]:
    """Greedy reference: evaluate every alive edge each iteration."""
    chosen: list[int] = []
    records: list[IterationRecord] = []
    while len(chosen) < b and t.edge_count > 0:
        start = time.perf_counter()
        alive = t.alive_edge_ids()
        best_f, best_e = -1, -1
        if threads > 1 and len(alive) >= _PARALLEL_MIN:
            counts = _follower_counts(t, alive, threads)
            for e in alive:
                if counts[e] > best_f:
                    best_f, best_e = counts[e], e
        else:
            for e in alive:
                f = len(simulate_followers(t, e))
                if f > best_f:
                    best_f, best_e = f, e
        followers = _commit(t, best_e)
        assert followers == best_f
        chosen.append(best_e)
        records.append(IterationRecord(
            edge=t.graph.original_pair(best_e), eid=best_e, followers=followers,
            candidates_total=len(alive), candidates_evaluated=len(alive),
            time_ms=(time.perf_counter() - start) * 1000.0))
    return chosen, records


def solve_support(t: TrussSubgraph, b: int) -> tuple[list[int], list[IterationRecord]]:
    """Heuristic: delete the weakest triangle partner of the weakest edge."""
    tris, edge_tris = t.graph.triangle_index()
    chosen: list[int] = []
    records: list[IterationRecord] = []
    while len(chosen) < b and t.edge_count > 0:
        start = time.perf_counter()
        alive = t.alive_edge_ids()
        e_min = min(alive, key=lambda e: (t.sup[e], e))
        partners: set[int] = set()
        for ti in edge_tris[e_min]:
            if t.tri_alive[ti]:
                partners.update(o for o in tris[ti] if o != e_min and t.alive[o])
        # inside a truss with k >= 3 every edge sits in a triangle
        assert partners, "minimum-support edge has no alive triangle"
        e_star = min(partners, key=lambda e: (t.sup[e], e))
        followers = _commit(t, e_star)
        chosen.append(e_star)
        records.append(IterationRecord(
            edge=t.graph.original_pair(e_star), eid=e_star, followers=followers,
            candidates_total=len(alive), candidates_evaluated=0,
            time_ms=(time.perf_counter() - start) * 1000.0))
    return chosen, records


def solve_exact(t: TrussSubgraph, b: int,
                cap: int = DEFAULT_EXACT_CAP) -> tuple[list[int], list[IterationRecord]]:
    """Enumerate every b-subset jointly and keep the best.

    Ties resolve to the lexicographically smallest edge-id sequence, which
    is the first one enumerated.  Refuses to run past `cap` combinations.
    """
    alive = t.alive_edge_ids()
    bb = min(b, len(alive))
    ncomb = math.comb(len(alive), bb)
    if ncomb > cap:
        raise EnumerationCapExceeded(
            f"C({len(alive)}, {bb}) = {ncomb} subsets exceeds the cap of {cap}; "
            f"use one of the heuristic algorithms instead")
    start = time.perf_counter()
    best_f, best_set = -1, None
    for combo in combinations(alive, bb):
        log: list = []
        dead = t.cascade(combo, log)
        f = len(dead) - len(combo)
        t.rollback(log, len(dead))
        if f > best_f:
            best_f, best_set = f, combo
    assert best_set is not None
    elapsed_ms = (time.perf_counter() - start) * 1000.0
    # Commit the winning set one edge at a time so the report carries
    # per-edge records; marginal followers exclude the chosen set itself,
    # so they sum to the joint follower count.
    chosen_set = set(best_set)
    records: list[IterationRecord] = []
    for i, e in enumerate(best_set):
        dead = t.cascade([e])
        marginal = len([x for x in dead if x not in chosen_set])
        records.append(IterationRecord(
            edge=t.graph.original_pair(e), eid=e, followers=marginal,
            candidates_total=ncomb, candidates_evaluated=ncomb if i == 0 else 0,
            time_ms=elapsed_ms if i == 0 else 0.0))
    assert sum(r.followers for r in records) == best_f
    return list(best_set), records


def _fallback_iteration(t: TrussSubgraph, records: list[IterationRecord],
                        chosen: list[int], candidates_total: int, start: float) -> int:
    """No edge can have followers: delete the smallest alive edge anyway."""
    e_star = t.min_alive_edge()
    assert e_star is not None
    followers = _commit(t, e_star)
    assert followers == 0
    chosen.append(e_star)
    records.append(IterationRecord(
        edge=t.graph.original_pair(e_star), eid=e_star, followers=0,
        candidates_total=candidates_total, candidates_evaluated=0,
        time_ms=(time.perf_counter() - start) * 1000.0))
    return e_star


def solve_gp_edge(t: TrussSubgraph, b: int,
                  threads: int = 1) -> tuple[list[int], list[IterationRecord]]:
    """Greedy over the reduced candidate set.

    Candidates are evaluated in ascending edge-id order; anything that
    shows up in an evaluated candidate's follower set is skipped, since it
    cannot do strictly better than its remover.  Skipped candidates whose
    remover holds the maximum are re-evaluated once at the end: they may
    tie it exactly, and ties decide the chosen edge.
    """
    chosen: list[int] = []
    records: list[IterationRecord] = []
    while len(chosen) < b and t.edge_count > 0:
        start = time.perf_counter()
        groups, candidates = find_support_groups(t)
        if not candidates:
            _fallback_iteration(t, records, chosen, 0, start)
            continue
        rep_group = {grp.representative: grp for grp in groups}
        fvals: dict[int, int] = {}
        best_f = -1
        ties: list[int] = []
        evaluated = 0
        if threads > 1 and len(candidates) >= _PARALLEL_MIN:
            # Parallel mode cannot apply the follower-set skip; it may
            # over-evaluate but returns the identical argmax.
            fvals = _follower_counts(t, candidates, threads)
            evaluated = len(candidates)
            best_f = max(fvals.values())
            ties = [c for c in candidates if fvals[c] == best_f]
        else:
            removed_by: dict[int, int] = {}
            for c in candidates:
                if c in removed_by:
                    continue
                fl = simulate_followers(t, c)
                f = len(fl)
                fvals[c] = f
                evaluated += 1
                if f > best_f:
                    best_f, ties = f, [c]
                elif f == best_f:
                    ties.append(c)
                for x in fl:
                    removed_by.setdefault(x, c)
            for c in candidates:
                if c in fvals or c not in removed_by:
                    continue
                if fvals[removed_by[c]] != best_f:
                    continue
                f = len(simulate_followers(t, c))
                fvals[c] = f
                evaluated += 1
                if f == best_f:
                    ties.append(c)
        e_star = _choose_from_ties(t, best_f, ties, rep_group)
        followers = _commit(t, e_star)
        assert followers == max(best_f, 0)
        chosen.append(e_star)
        records.append(IterationRecord(
            edge=t.graph.original_pair(e_star), eid=e_star, followers=followers,
            candidates_total=len(candidates), candidates_evaluated=evaluated,
            time_ms=(time.perf_counter() - start) * 1000.0))
    return chosen, records


def _two_level_tau(t: TrussSubgraph) -> TrussnessMap:
    """Trussness capped at k+1 over the truss region.

    The bound index only asks whether an edge sits exactly at level k or
    anywhere above it, so one extra peel to the (k+1)-truss replaces a
    full decomposition.  The cap is stable under single-edge maintenance:
    an edge stored as k+1 drops to k exactly when it leaves the (k+1)-truss
    of the reduced graph, which is also how a true map capped afterward
    would move.
    """
    g = t.graph
    upper = t.clone()
    upper.k = t.k + 1
    seeds = [e for e in upper.alive_edge_ids() if upper.sup[e] < t.k - 1]
    upper.cascade(seeds)
    values = [2] * g.m
    alive = bytearray(g.m)
    for e in t.alive_edge_ids():
        alive[e] = 1
        values[e] = t.k + 1 if upper.alive[e] else t.k
    return TrussnessMap(g, values, alive)


def solve_up_edge(t: TrussSubgraph, b: int, rebuild_index: bool = False
                  ) -> tuple[list[int], list[IterationRecord]]:
    """Greedy with bound-ordered scanning and early stopping.

    Candidates are scanned by descending upper bound (group-size sum).
    Once something beats a positive score, every candidate whose bound
    falls below it is skipped; bound-zero candidates are never evaluated.
    Equal-bound candidates are still evaluated so exact ties keep the
    shared smallest-edge-id break.  After each deletion the trussness map
    is repaired locally and the group index refreshed (or rebuilt when
    `rebuild_index` is set, for A/B validation).
    """
    g = t.graph
    k = t.k
    chosen: list[int] = []
    records: list[IterationRecord] = []
    tau = _two_level_tau(t)
    idx = build_truss_group_index(g, tau, k)
    tris, edge_tris = g.triangle_index()
    # Bounds survive across iterations: a deletion only perturbs its own
    # region, and surviving groups keep their exact member lists, so a
    # cached bound stays valid until an edge's triangle fan is touched or
    # one of the groups it summed over dissolves.
    ub_cache: dict[int, tuple[int, frozenset[int]]] = {}

    def advance(e_star: int, dead: list[int]) -> None:
        nonlocal tau, idx
        tau, changed = update_after_deletion(g, tau, g.edges[e_star])
        if rebuild_index:
            idx = build_truss_group_index(g, tau, k)
            ub_cache.clear()
            return
        idx = refresh_index(idx, changed, g, tau)
        for x in set(dead) | changed:
            for ti in edge_tris[x]:
                a, bb, c = tris[ti]
                ub_cache.pop(a, None)
                ub_cache.pop(bb, None)
                ub_cache.pop(c, None)
        dissolved = idx.last_dissolved
        if dissolved:
            for e in [e for e, (_, gids) in ub_cache.items() if gids & dissolved]:
                del ub_cache[e]

    while len(chosen) < b and t.edge_count > 0:
        start = time.perf_counter()
        groups, candidates = find_support_groups(t)
        if not candidates:
            e_star = _fallback_iteration(t, records, chosen, 0, start)
            advance(e_star, [e_star])
            continue
        rep_group = {grp.representative: grp for grp in groups}
        sizes = idx.group_sizes()
        ubs: dict[int, int] = {}
        for c in candidates:
            hit = ub_cache.get(c)
            if hit is None:
                gids = idx.adjacent_gids(c)
                hit = (sum(sizes[x] for x in gids), frozenset(gids))
                ub_cache[c] = hit
            ubs[c] = hit[0]
        order = sorted(candidates, key=lambda c: (-ubs[c], c))
        fvals: dict[int, int] = {}
        removed_by: dict[int, int] = {}
        best_f = -1
        ties: list[int] = []
        evaluated = 0
        for c in order:
            if ubs[c] == 0:
                break
            if best_f > 0 and ubs[c] < best_f:
                break
            if c in removed_by:
                continue
            fl = simulate_followers(t, c)
            f = len(fl)
            fvals[c] = f
            evaluated += 1
            if f > best_f:
                best_f, ties = f, [c]
            elif f == best_f:
                ties.append(c)
            for x in fl:
                if x in fvals or x in removed_by:
                    continue
                ub_x = ubs.get(x)
                if ub_x is None:
                    continue
                # Same-bound peers come later in the scan order, and a
                # bound below the remover's score cannot tie the maximum.
                if ub_x == ubs[c] or ub_x < f:
                    removed_by[x] = c
        for c in candidates:
            if c in fvals or c not in removed_by:
                continue
            if fvals[removed_by[c]] != best_f:
                continue
            f = len(simulate_followers(t, c))
            fvals[c] = f
            evaluated += 1
            if f == best_f:
                ties.append(c)
        e_star = _choose_from_ties(t, best_f, ties, rep_group)
        dead = t.cascade([e_star])
        followers = len(dead) - 1
        assert followers == max(best_f, 0)
        chosen.append(e_star)
        advance(e_star, dead)
        records.append(IterationRecord(
            edge=t.graph.original_pair(e_star), eid=e_star, followers=followers,
            candidates_total=len(candidates), candidates_evaluated=evaluated,
            time_ms=(time.perf_counter() - start) * 1000.0))
    return chosen, records


# -- dispatcher ---------------------------------------------------------------

def solve(g: Graph, cfg: SolverConfig) -> MinimizationReport:
    """Extract T_k once, run the configured solver, assemble the report."""
    start = time.perf_counter()
    t = k_truss(g, cfg.k)
    report = MinimizationReport(k=cfg.k, b=cfg.b, algorithm=cfg.algorithm,
                                initial_truss_edges=t.edge_count)
    if t.edge_count == 0:
        report.final_truss_edges = 0
        report.warnings.append(f"the {cfg.k}-truss is empty; nothing to delete")
        report.time_ms_total = (time.perf_counter() - start) * 1000.0
        return report

    if cfg.algorithm == "exact":
        chosen, records = solve_exact(t, cfg.b, cap=cfg.exact_cap)
    elif cfg.algorithm == "support":
        chosen, records = solve_support(t, cfg.b)
    elif cfg.algorithm == "baseline":
        chosen, records = solve_baseline(t, cfg.b, threads=cfg.threads)
    elif cfg.algorithm == "gp_edge":
        chosen, records = solve_gp_edge(t, cfg.b, threads=cfg.threads)
    else:
        chosen, records = solve_up_edge(t, cfg.b, rebuild_index=cfg.rebuild_index)

    report.iterations = records
    report.followers_total = sum(r.followers for r in records)
    report.final_truss_edges = t.edge_count
    report.b_effective = len(chosen)
    if report.b_effective < cfg.b:
        report.warnings.append(
            f"truss emptied after {report.b_effective} deletions; budget was {cfg.b}")
    report.time_ms_total = (time.perf_counter() - start) * 1000.0
    return report


def verify_equivalence(g: Graph, k: int, b: int) -> bool:
    """True iff the three greedy solvers agree edge-for-edge on this input."""
    outcomes = []
    for algorithm in ("baseline", "gp_edge", "up_edge"):
        rep = solve(g, SolverConfig(k=k, b=b, algorithm=algorithm))
        outcomes.append([(r.eid, r.followers) for r in rep.iterations])
    return outcomes[0] == outcomes[1] == outcomes[2]
