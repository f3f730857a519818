"""Branch-and-bound search for maximum non-sunflower (k+1,1)-SCIDs.

A SCID is a clique of the graph on k-spaces joined when they meet in exactly
one point.  Candidate sets and point sets are int bitmasks.  A clique of three
or more blocks is a sunflower iff its blocks share a point, so the running
AND of the blocks' point masks decides it incrementally.
"""

from __future__ import annotations

import multiprocessing as mp
import os
from dataclasses import dataclass

from .bounds import sunflower_bound_classical
from .errors import ScidForgeError
from .geom import Subspace, enumerate_subspaces, gaussian_binomial, point_mask, theta
from .gf import FieldCtx
from .scid import Scid, make_scid, verified

GRAPH_LIMIT = 10**5


class TooManySubspaces(ScidForgeError):
    pass


class BoundViolated(ScidForgeError):
    """A proven bound failed on a search result: an implementation bug."""


class _BudgetExceeded(Exception):
    pass


@dataclass
class IntersectionGraph:
    ctx: FieldCtx
    n: int
    k: int
    vertices: list[Subspace]
    adjacency: list[int]
    point_masks: list[int]

    def __len__(self):
        return len(self.vertices)

    def degree(self, v: int) -> int:
        return bin(self.adjacency[v]).count("1")


def build_intersection_graph(ctx: FieldCtx, n: int, k: int) -> IntersectionGraph:
    count = gaussian_binomial(n + 1, k + 1, ctx.q)
    if count > GRAPH_LIMIT:
        raise TooManySubspaces(f"{count} vertices exceed the graph limit {GRAPH_LIMIT}")
    vertices = list(enumerate_subspaces(ctx, n, k))
    masks = [point_mask(v) for v in vertices]
    adj = [0] * len(vertices)
    for i, mi in enumerate(masks):
        for j in range(i + 1, len(masks)):
            if bin(mi & masks[j]).count("1") == 1:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return IntersectionGraph(ctx, n, k, vertices, adj, masks)


@dataclass
class SearchResult:
    best_size: int
    best_scid: Scid | None
    exhaustive: bool
    nodes_explored: int
    classical_bound: int
    within_bounds: bool
    best_indices: tuple[int, ...] = ()

    def sidecar(self) -> dict:
        return {"best_size": self.best_size, "exhaustive": self.exhaustive,
                "nodes": self.nodes_explored}


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _color_bound(cand: int, adj: list[int]) -> list[tuple[int, int]]:
    """Greedy colouring of cand; returns (vertex, colour) in increasing colour."""
    out = []
    color = 0
    rest = cand
    while rest:
        color += 1
        avail = rest
        while avail:
            low = avail & -avail
            v = low.bit_length() - 1
            out.append((v, color))
            rest &= ~low
            avail &= ~low & ~adj[v]
    return out


class _Solver:
    """Works on a relabelled graph where position 0 has the largest degree."""

    def __init__(self, adj, masks, best, size_cap=None, node_budget=None, shared=None):
        self.adj = adj
        self.masks = masks
        self.through = _through_masks(masks)
        self.best = best
        self.best_clique: tuple[int, ...] = ()
        self.size_cap = size_cap
        self.node_budget = node_budget
        self.nodes = 0
        self.shared = shared
        self.capped = False

    def _current_best(self) -> int:
        if self.shared is not None and self.shared.value > self.best:
            return self.shared.value
        return self.best

    def _record(self, clique: list[int]):
        self.best = len(clique)
        self.best_clique = tuple(clique)
        if self.shared is not None:
            with self.shared.get_lock():
                if self.shared.value < self.best:
                    self.shared.value = self.best
        if self.size_cap is not None and self.best >= self.size_cap:
            self.capped = True
            raise _BudgetExceeded

    def expand(self, clique: list[int], common: int, cand: int):
        self.nodes += 1
        if self.node_budget is not None and self.nodes > self.node_budget:
            raise _BudgetExceeded
        adj, masks = self.adj, self.masks
        if len(clique) >= 2 and common and not cand & ~self.through[common.bit_length() - 1]:
            # every candidate passes through the common point: only sunflowers remain
            return
        for v, color in reversed(_color_bound(cand, adj)):
            if len(clique) + color <= self._current_best():
                return
            clique.append(v)
            new_common = common & masks[v]
            if len(clique) >= 3 and not new_common and len(clique) > self.best:
                self._record(clique)
            new_cand = cand & adj[v]
            if new_cand:
                self.expand(clique, new_common, new_cand)
            clique.pop()
            cand &= ~(1 << v)

    def branch(self, i: int):
        """All cliques whose largest position is i."""
        cand = self.adj[i] & ((1 << i) - 1)
        if 1 + bin(cand).count("1") <= self._current_best():
            return
        self.nodes += 1
        self.expand([i], self.masks[i], cand)


def _through_masks(masks: list[int]) -> dict[int, int]:
    """Point index -> bitmask of the vertices containing that point."""
    through: dict[int, int] = {}
    for v, m in enumerate(masks):
        for p in _bits(m):
            through[p] = through.get(p, 0) | (1 << v)
    return through


def _relabel(graph: IntersectionGraph):
    order = sorted(range(len(graph)), key=lambda v: (-graph.degree(v), v))
    pos = {v: i for i, v in enumerate(order)}
    adj = []
    for v in order:
        m = 0
        for u in _bits(graph.adjacency[v]):
            m |= 1 << pos[u]
        adj.append(m)
    masks = [graph.point_masks[v] for v in order]
    return order, adj, masks


_WORKER: dict = {}


def _init_worker(adj, masks, shared, size_cap, node_budget):
    _WORKER.update(adj=adj, masks=masks, shared=shared, size_cap=size_cap,
                   node_budget=node_budget)


def _run_branch(i: int):
    w = _WORKER
    solver = _Solver(w["adj"], w["masks"], max(2, w["shared"].value), w["size_cap"],
                     w["node_budget"], w["shared"])
    complete = True
    try:
        solver.branch(i)
    except _BudgetExceeded:
        complete = False
    return solver.best_clique, solver.nodes, complete


def _lex_smallest(graph: IntersectionGraph, size: int) -> tuple[int, ...] | None:
    """Lexicographically smallest non-sunflower clique of the given size."""
    adj, masks = graph.adjacency, graph.point_masks

    def rec(clique, common, cand):
        if len(clique) == size:
            return tuple(clique) if not common else None
        if len(clique) + bin(cand).count("1") < size:
            return None
        colors = _color_bound(cand, adj)
        if colors and len(clique) + colors[-1][1] < size:
            return None
        for v in _bits(cand):
            clique.append(v)
            found = rec(clique, common & masks[v], cand & adj[v] & ~((1 << (v + 1)) - 1))
            clique.pop()
            if found:
                return found
        return None

    # -1 has every bit set: the empty clique shares every point
    return rec([], -1, (1 << len(graph)) - 1)


def max_nonsunflower_clique(graph: IntersectionGraph, size_cap: int | None = None,
                            node_budget: int | None = None, jobs: int = 1) -> SearchResult:
    """Largest clique whose blocks do not all share a point.

    Sunflower cliques are still extended, since adding a block can destroy the
    common point; only non-sunflower cliques become the incumbent.  When the
    search completes, the reported clique is the lexicographically smallest one
    of the optimal size, so the result does not depend on the schedule.
    """
    order, adj, masks = _relabel(graph)
    nvert = len(order)
    exhaustive = True
    if jobs <= 1 or nvert < 2:
        solver = _Solver(adj, masks, 2, size_cap, node_budget)
        try:
            for i in range(nvert - 1, -1, -1):
                solver.branch(i)
        except _BudgetExceeded:
            exhaustive = False
        best, clique, nodes = solver.best, solver.best_clique, solver.nodes
    else:
        ctx = mp.get_context("fork") if "fork" in mp.get_all_start_methods() else mp.get_context()
        shared = ctx.Value("i", 2)
        best, clique, nodes = 2, (), 0
        with ctx.Pool(jobs, initializer=_init_worker,
                      initargs=(adj, masks, shared, size_cap, node_budget)) as pool:
            for found, n_nodes, complete in pool.imap(_run_branch, range(nvert - 1, -1, -1)):
                nodes += n_nodes
                exhaustive &= complete
                if len(found) > best:
                    best, clique = len(found), found
    if not clique:
        best = 0
    indices = tuple(sorted(order[p] for p in clique))
    if exhaustive and best:
        indices = _lex_smallest(graph, best)
    best_scid = None
    if indices:
        best_scid = verified(make_scid(graph.ctx, graph.n, graph.k,
                                       [graph.vertices[i] for i in indices]))
    classical = sunflower_bound_classical(graph.ctx.q, graph.k, 0)
    return SearchResult(best, best_scid, exhaustive, nodes, classical, best <= classical, indices)


def compare_to_bounds(result: SearchResult, report) -> dict:
    """Check a search result against the classical bound and, in range, F_q."""
    out = {"best_size": result.best_size, "classical": report.classical,
           "classical_margin": report.classical - result.best_size}
    if result.best_size > report.classical:
        raise BoundViolated(f"size {result.best_size} exceeds the classical bound {report.classical}")
    in_range = report.k >= 3 and report.q >= 7 and report.F_q is not None
    out["below_theorem_range"] = not in_range
    if in_range:
        limit = report.F_q * theta(report.k, report.q) ** 2
        out["F_q_limit"] = limit
        out["F_q_margin"] = limit - result.best_size
        if result.best_size > limit:
            raise BoundViolated(f"size {result.best_size} exceeds F_q theta_k^2 = {limit}")
    return out


def default_jobs() -> int:
    return int(os.environ.get("SCIDFORGE_JOBS", "1"))
