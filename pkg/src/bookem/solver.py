"""Exact page numbers: classical (pn), local (pn_local) and union (pn_union).

For a fixed spine the three problems are searched directly:

* pn: chromatic number of the crossing graph (DSATUR branch and bound);
* pn_local: backtracking over edges with per-vertex page budgets;
* pn_union: backtracking with a per-page union-find that is rolled back on
  undo, checking crossings only inside components.

Over all spines, orders are enumerated with vertex 0 first and each
reflection pair visited once.  Two spines that turn the graph into the same
set of position pairs are solved once.
"""

from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterator, Optional, Sequence

import numpy as np

from .bounds import lemma1_lower_bound
from .embedding import LinearEmbedding, SpineOrder, crossing_masks, locality_profile, verify
from .graphs import Graph, normalize_edge

ORACLE_MAX_N = 5


class Param(str, Enum):
    PN = "pn"
    PN_LOCAL = "pn_local"
    PN_UNION = "pn_union"

    @classmethod
    def parse(cls, text: str) -> "Param":
        aliases = {"pn": cls.PN, "pnl": cls.PN_LOCAL, "pn_local": cls.PN_LOCAL, "pnu": cls.PN_UNION, "pn_union": cls.PN_UNION}
        try:
            return aliases[text]
        except KeyError:
            raise ValueError(f"unknown parameter {text!r}") from None


class BudgetExhausted(Exception):
    pass


@dataclass
class Budget:
    time_limit: Optional[float] = None
    node_limit: Optional[int] = None
    nodes: int = 0
    started: float = field(default_factory=time.monotonic)

    def __post_init__(self):
        if self.time_limit is not None and self.time_limit <= 0:
            raise ValueError("time limit must be positive")
        if self.node_limit is not None and self.node_limit <= 0:
            raise ValueError("node limit must be positive")

    def tick(self) -> None:
        self.nodes += 1
        if self.node_limit is not None and self.nodes > self.node_limit:
            raise BudgetExhausted("node limit")
        if self.time_limit is not None and self.nodes & 1023 == 0 and self.elapsed() > self.time_limit:
            raise BudgetExhausted("time limit")

    def elapsed(self) -> float:
        return time.monotonic() - self.started


@dataclass
class SolveRequest:
    graph: Graph
    parameter: Param
    spine: Optional[SpineOrder] = None
    time_limit: Optional[float] = None
    node_limit: Optional[int] = None
    jobs: int = 1


@dataclass
class SolveResult:
    parameter: Param
    lower: int
    upper: int
    certificate: Optional[LinearEmbedding]
    nodes: int = 0
    spines: int = 0
    distinct_spines: int = 0
    elapsed: float = 0.0

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    @property
    def value(self) -> Optional[int]:
        return self.lower if self.exact else None

    def to_dict(self) -> dict:
        return {
            "parameter": self.parameter.value,
            "value": self.value,
            "lower": self.lower,
            "upper": self.upper,
            "exact": self.exact,
            "stats": {
                "nodes": self.nodes,
                "spines": self.spines,
                "distinct_spines": self.distinct_spines,
                "elapsed": round(self.elapsed, 6),
            },
        }


# fixed spine --------------------------------------------------------------


class FixedSpine:
    """Search state shared by the three decision procedures for one spine.

    Edges are re-indexed by descending crossing degree (ties by the
    lexicographic edge) and all sets of edges are int bitmasks.
    """

    def __init__(self, graph: Graph, spine: SpineOrder):
        self.graph = graph
        self.spine = spine
        masks = crossing_masks(graph, spine)
        deg = [mk.bit_count() for mk in masks]
        self.order = sorted(range(graph.m), key=lambda i: (-deg[i], graph.edges[i]))
        pos = {old: new for new, old in enumerate(self.order)}
        self.m = graph.m
        self.ends = [graph.edges[i] for i in self.order]
        self.cross = [0] * self.m
        for new, old in enumerate(self.order):
            mk = masks[old]
            out = 0
            while mk:
                low = mk & -mk
                out |= 1 << pos[low.bit_length() - 1]
                mk ^= low
            self.cross[new] = out
        self.deg = [graph.degree(v) for v in range(graph.n)]

    def key(self) -> frozenset:
        inv = self.spine.inverse
        return frozenset(normalize_edge(inv[u], inv[v]) for u, v in self.graph.edges)

    def embedding(self, pages: Sequence[int]) -> LinearEmbedding:
        """Turn a page list in search order back into an embedding."""
        assignment = [0] * self.m
        for new, old in enumerate(self.order):
            assignment[old] = pages[new]
        return LinearEmbedding.normalized(self.graph, self.spine, assignment)

    # pn -----------------------------------------------------------------

    def greedy_book(self) -> list[int]:
        """DSATUR greedy coloring of the crossing graph."""
        colors = [-1] * self.m
        forbid = [0] * self.m
        for _ in range(self.m):
            best, bkey = -1, None
            for e in range(self.m):
                if colors[e] == -1:
                    key = (forbid[e].bit_count(), self.cross[e].bit_count(), -e)
                    if bkey is None or key > bkey:
                        best, bkey = e, key
            c = 0
            while forbid[best] >> c & 1:
                c += 1
            colors[best] = c
            mk = self.cross[best]
            while mk:
                low = mk & -mk
                forbid[low.bit_length() - 1] |= 1 << c
                mk ^= low
        return colors

    def decide_book(self, k: int, budget: Budget) -> Optional[list[int]]:
        """A proper coloring of the crossing graph with at most k colors, or None."""
        if self.m == 0:
            return []
        if k <= 0:
            return None
        m = self.m
        colors = [-1] * m
        forbid = [0] * m
        cross = self.cross
        free_edges = [e for e in range(m) if cross[e] == 0]
        hard = [e for e in range(m) if cross[e] != 0]
        full = (1 << k) - 1

        def pick() -> int:
            best, bkey = -1, None
            for e in hard:
                if colors[e] == -1:
                    key = (forbid[e].bit_count(), cross[e].bit_count())
                    if bkey is None or key > bkey:
                        best, bkey = e, key
            return best

        def rec(done: int, used: int) -> bool:
            budget.tick()
            if done == len(hard):
                return True
            e = pick()
            if forbid[e] & full == full:
                return False
            for c in range(min(used + 1, k)):
                if forbid[e] >> c & 1:
                    continue
                colors[e] = c
                touched = []
                mk = cross[e]
                bit = 1 << c
                while mk:
                    low = mk & -mk
                    f = low.bit_length() - 1
                    if colors[f] == -1 and not forbid[f] & bit:
                        forbid[f] |= bit
                        touched.append(f)
                    mk ^= low
                if rec(done + 1, max(used, c + 1)):
                    return True
                for f in touched:
                    forbid[f] &= ~bit
                colors[e] = -1
            return False

        if not rec(0, 0):
            return None
        for e in free_edges:
            colors[e] = 0
        return colors

    # pn_local -----------------------------------------------------------

    def decide_local(self, k: int, budget: Budget, count_prune: bool = True) -> Optional[list[int]]:
        """Pages for every edge with every vertex on at most k pages, or None.

        ``count_prune=False`` drops the page-count cap derived from edge
        counting, leaving a plain search (slower, used as a cross-check).
        """
        if self.m == 0:
            return []
        if k <= 0:
            return None
        m = self.m
        n = self.graph.n
        # each page holds at most 2|V_P| - 3 edges and sum |V_P| <= sum min(k, deg)
        slots = sum(min(k, d) for d in self.deg)
        max_pages = (2 * slots - m) // 3 if count_prune else m
        if max_pages < 1:
            return None
        ends = self.ends
        cross = self.cross
        page_of = [-1] * m
        page_x: list[int] = []
        vp = [0] * n
        vcount = [0] * n
        unassigned = set(range(m))

        def options(e: int, limit: int) -> list[int]:
            u, v = ends[e]
            out = []
            pu, pv = vp[u], vp[v]
            room_u = vcount[u] < k
            room_v = vcount[v] < k
            # pages at both ends first, then at one end, then fresh
            both = pu & pv
            for p in _bits(both):
                if not page_x[p] >> e & 1:
                    out.append(p)
                    if len(out) >= limit:
                        return out
            one = []
            if room_v:
                one += list(_bits(pu & ~pv))
            if room_u:
                one += list(_bits(pv & ~pu))
            for p in sorted(one):
                if not page_x[p] >> e & 1:
                    out.append(p)
                    if len(out) >= limit:
                        return out
            if room_u and room_v:
                for p in range(len(page_x)):
                    if not (pu | pv) >> p & 1 and not page_x[p] >> e & 1:
                        out.append(p)
                        if len(out) >= limit:
                            return out
                if len(page_x) < max_pages:
                    out.append(len(page_x))
            return out

        def rec() -> bool:
            budget.tick()
            if not unassigned:
                return True
            best, best_opts = -1, None
            for e in sorted(unassigned):
                opts = options(e, 2)
                if not opts:
                    return False
                if best_opts is None or len(opts) < len(best_opts):
                    best, best_opts = e, opts
                    if len(opts) == 1:
                        break
            e = best
            u, v = ends[e]
            unassigned.discard(e)
            for p in options(e, m + 1):
                fresh = p == len(page_x)
                if fresh:
                    page_x.append(0)
                old_x = page_x[p]
                page_x[p] |= cross[e]
                bit = 1 << p
                added = []
                for x in (u, v):
                    if not vp[x] & bit:
                        vp[x] |= bit
                        vcount[x] += 1
                        added.append(x)
                page_of[e] = p
                if rec():
                    return True
                page_of[e] = -1
                for x in added:
                    vp[x] &= ~bit
                    vcount[x] -= 1
                page_x[p] = old_x
                if fresh:
                    page_x.pop()
            unassigned.add(e)
            return False

        if not rec():
            return None
        return page_of

    # pn_union -----------------------------------------------------------

    def decide_union(self, k: int, budget: Budget) -> Optional[list[int]]:
        """Pages (at most k) whose components are all crossing-free, or None."""
        if self.m == 0:
            return []
        if k <= 0:
            return None
        m = self.m
        n = self.graph.n
        ends = self.ends
        cross = self.cross
        parent = [list(range(n)) for _ in range(k)]
        size = [[1] * n for _ in range(k)]
        emask = [[0] * n for _ in range(k)]
        xmask = [[0] * n for _ in range(k)]
        page_of = [-1] * m

        def find(p: int, x: int) -> int:
            par = parent[p]
            while par[x] != x:
                x = par[x]
            return x

        def rec(e: int, used: int) -> bool:
            budget.tick()
            if e == m:
                return True
            u, v = ends[e]
            bit = 1 << e
            for p in range(min(used + 1, k)):
                ru, rv = find(p, u), find(p, v)
                em, xm = emask[p], xmask[p]
                if ru == rv:
                    if xm[ru] & bit:
                        continue
                    old = (ru, em[ru], xm[ru])
                    em[ru] |= bit
                    xm[ru] |= cross[e]
                    page_of[e] = p
                    if rec(e + 1, max(used, p + 1)):
                        return True
                    _, em[ru], xm[ru] = old
                    continue
                if (xm[ru] | xm[rv]) & bit or em[ru] & xm[rv]:
                    continue
                if size[p][ru] < size[p][rv]:
                    ru, rv = rv, ru
                saved = (em[ru], xm[ru])
                parent[p][rv] = ru
                size[p][ru] += size[p][rv]
                em[ru] |= em[rv] | bit
                xm[ru] |= xm[rv] | cross[e]
                page_of[e] = p
                if rec(e + 1, max(used, p + 1)):
                    return True
                em[ru], xm[ru] = saved
                size[p][ru] -= size[p][rv]
                parent[p][rv] = rv
            page_of[e] = -1
            return False

        if not rec(0, 0):
            return None
        return page_of

    def decide(self, param: Param, k: int, budget: Budget) -> Optional[list[int]]:
        if param is Param.PN:
            return self.decide_book(k, budget)
        if param is Param.PN_LOCAL:
            return self.decide_local(k, budget)
        return self.decide_union(k, budget)


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _value(param: Param, emb: LinearEmbedding) -> int:
    if param is Param.PN_LOCAL:
        return max(locality_profile(emb), default=0)
    return emb.page_count


def _improve(fs: FixedSpine, param: Param, lower: int, upper: int, budget: Budget) -> Optional[tuple[int, LinearEmbedding]]:
    """Best value below ``upper`` (down to ``lower``) on this spine, or None."""
    best = None
    while upper > lower:
        pages = fs.decide(param, upper - 1, budget)
        if pages is None:
            break
        emb = fs.embedding(pages)
        upper = _value(param, emb)
        best = (upper, emb)
    return best


def solve_fixed_spine(
    graph: Graph,
    spine: SpineOrder,
    parameter: Param,
    time_limit: float | None = None,
    node_limit: int | None = None,
) -> SolveResult:
    """Exact value of ``parameter`` when the spine order is fixed."""
    return solve(SolveRequest(graph, Param(parameter), spine, time_limit, node_limit))


# all spines ---------------------------------------------------------------


def canonical_spines(n: int) -> Iterator[tuple[int, ...]]:
    """Spine orders with vertex 0 first, one of each reflection pair.

    Reversing a spine and rotating 0 back to the front gives
    ``0, p[-1], ..., p[1]``; only the order with ``p[1] < p[-1]`` is kept.
    """
    if n <= 2:
        yield tuple(range(n))
        return
    for rest in itertools.permutations(range(1, n)):
        if rest[0] < rest[-1]:
            yield (0,) + rest


def canonical_spine_count(n: int) -> int:
    return 1 if n <= 2 else math.factorial(n - 1) // 2


def _initial_upper(graph: Graph, param: Param, spine: SpineOrder) -> tuple[int, LinearEmbedding]:
    from . import construct

    fs = FixedSpine(graph, spine)
    greedy = fs.embedding(fs.greedy_book())
    cands = [greedy]
    if param is not Param.PN:
        sfp = construct.star_forests_from_forests(construct.arboricity_partition(graph), graph)
        union = LinearEmbedding.from_pages(graph, spine, sfp.star_forests)
        if param is Param.PN_UNION:
            cands.append(union)
        else:
            stars = [edges for _, edges in construct.degeneracy_stars(graph)]
            cands.append(LinearEmbedding.from_pages(graph, spine, stars))
            from .embedding import split_components

            cands.append(split_components(union))
    best = min(cands, key=lambda e: _value(param, e))
    return _value(param, best), best


def _lower_bound(graph: Graph) -> int:
    return max(1, lemma1_lower_bound(graph))


def _batch_worker(args) -> tuple[list, int]:
    n, edges, param, spines, lower, upper, node_limit = args
    graph = Graph(n, tuple(edges))
    budget = Budget(node_limit=node_limit)
    out = []
    for order in spines:
        fs = FixedSpine(graph, SpineOrder(order))
        got = _improve(fs, param, lower, upper, budget)
        if got is not None:
            value, emb = got
            out.append((order, value, emb.assignment))
            upper = value
    return out, budget.nodes


def solve(request: SolveRequest) -> SolveResult:
    """Exact value over all spines (or the given one), or an interval when out of budget."""
    graph, param = request.graph, Param(request.parameter)
    budget = Budget(request.time_limit, request.node_limit)
    if graph.m == 0:
        spine = request.spine or SpineOrder.identity(graph.n)
        emb = LinearEmbedding(graph, spine, ())
        return SolveResult(param, 0, 0, emb, spines=1, distinct_spines=1)
    lower = _lower_bound(graph)
    start_spine = request.spine or SpineOrder.identity(graph.n)
    upper, cert = _initial_upper(graph, param, start_spine)
    result = SolveResult(param, lower, upper, cert)
    if request.spine is not None:
        spines: Iterator[tuple[int, ...]] = iter([request.spine.order])
    else:
        spines = canonical_spines(graph.n)
    seen: set[frozenset] = set()
    try:
        if request.jobs > 1 and request.spine is None:
            _solve_parallel(graph, param, spines, result, budget, request.jobs, seen)
        else:
            for order in spines:
                if result.upper <= result.lower:
                    break
                result.spines += 1
                fs = FixedSpine(graph, SpineOrder(order))
                key = fs.key()
                if key in seen:
                    continue
                seen.add(key)
                got = _improve(fs, param, result.lower, result.upper, budget)
                if got is not None:
                    result.upper, result.certificate = got
    except BudgetExhausted:
        pass
    else:
        # enumeration finished: the best found value is optimal
        result.lower = result.upper
    result.distinct_spines = len(seen)
    result.nodes = budget.nodes
    result.elapsed = budget.elapsed()
    _check_certificate(result)
    return result


def _solve_parallel(graph, param, spines, result, budget, jobs, seen, chunk=64) -> None:
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        while result.upper > result.lower:
            batches = []
            for _ in range(jobs):
                batch = []
                for order in spines:
                    result.spines += 1
                    fs_key = frozenset(
                        normalize_edge(order.index(u), order.index(v)) for u, v in graph.edges
                    )
                    if fs_key in seen:
                        continue
                    seen.add(fs_key)
                    batch.append(order)
                    if len(batch) >= chunk:
                        break
                if batch:
                    batches.append(batch)
            if not batches:
                return
            remaining = None
            if budget.node_limit is not None:
                remaining = max(1, budget.node_limit - budget.nodes)
            args = [(graph.n, graph.edges, param, b, result.lower, result.upper, remaining) for b in batches]
            for found, nodes in pool.map(_batch_worker, args):
                budget.nodes += nodes
                for order, value, assignment in found:
                    if value < result.upper:
                        result.upper = value
                        result.certificate = LinearEmbedding(graph, SpineOrder(order), assignment)
            if budget.node_limit is not None and budget.nodes > budget.node_limit:
                raise BudgetExhausted("node limit")
            if budget.time_limit is not None and budget.elapsed() > budget.time_limit:
                raise BudgetExhausted("time limit")


def _check_certificate(result: SolveResult) -> None:
    cert = result.certificate
    if cert is None:
        return
    report = verify(cert)
    ok = report.is_union if result.parameter is Param.PN_UNION else report.is_book
    if not ok or _value(result.parameter, cert) != result.upper:
        raise AssertionError(f"certificate does not realize {result.parameter.value} = {result.upper}")


def solve_all(graph: Graph, **kwargs) -> dict[Param, SolveResult]:
    return {p: solve(SolveRequest(graph, p, **kwargs)) for p in Param}


# brute-force oracle -------------------------------------------------------


@lru_cache(maxsize=None)
def set_partitions(m: int) -> np.ndarray:
    """All restricted growth strings of length m (one row per set partition)."""
    rows: list[list[int]] = []

    def rec(prefix: list[int], top: int) -> None:
        if len(prefix) == m:
            rows.append(prefix.copy())
            return
        for p in range(top + 2):
            prefix.append(p)
            rec(prefix, max(top, p))
            prefix.pop()

    if m == 0:
        return np.zeros((1, 0), dtype=np.int8)
    rec([0], 0)
    return np.asarray(rows, dtype=np.int8)


def _interleave(a: int, b: int, c: int, d: int) -> bool:
    return a < c < b < d or c < a < d < b


def oracle_all(graph: Graph, parameter: Param | str) -> int:
    """Naive value by trying every spine and every page assignment (n <= 5)."""
    if graph.n > ORACLE_MAX_N:
        raise ValueError(f"oracle is limited to {ORACLE_MAX_N} vertices")
    param = Param.parse(parameter) if isinstance(parameter, str) else parameter
    m = graph.m
    if m == 0:
        return 0
    rows = set_partitions(m)
    blocks = rows.max(axis=1).astype(np.int64) + 1
    popcount = np.array([bin(i).count("1") for i in range(1 << m)], dtype=np.int64)
    bits = np.left_shift(np.int64(1), rows.astype(np.int64))
    incident = [[i for i, e in enumerate(graph.edges) if v in e] for v in range(graph.n)]
    loc = np.zeros(len(rows), dtype=np.int64)
    for inc in incident:
        if inc:
            loc = np.maximum(loc, popcount[np.bitwise_or.reduce(bits[:, inc], axis=1)])
    best = None
    cache: dict[frozenset, int] = {}
    for perm in itertools.permutations(range(graph.n)):
        pos = {v: i for i, v in enumerate(perm)}
        key = frozenset(tuple(sorted((pos[u], pos[v]))) for u, v in graph.edges)
        if key in cache:
            value = cache[key]
        else:
            spans = [tuple(sorted((pos[u], pos[v]))) for u, v in graph.edges]
            pairs = [
                (i, j)
                for i in range(m)
                for j in range(i + 1, m)
                if _interleave(*spans[i], *spans[j])
            ]
            ok = np.ones(len(rows), dtype=bool)
            for i, j in pairs:
                ok &= rows[:, i] != rows[:, j]
            if param is Param.PN:
                value = int(blocks[ok].min())
            elif param is Param.PN_LOCAL:
                value = int(loc[ok].min())
            else:
                value = int(blocks[ok].min())
                for idx in np.argsort(blocks, kind="stable"):
                    if blocks[idx] >= value:
                        break
                    if _union_ok(graph, rows[idx], pairs):
                        value = int(blocks[idx])
                        break
            cache[key] = value
        best = value if best is None else min(best, value)
    return best


def _union_ok(graph: Graph, row, pairs) -> bool:
    """Same-page crossing pairs must lie in different components of their page."""
    for i, j in pairs:
        p = row[i]
        if row[j] != p:
            continue
        # connectivity of edge i and edge j inside page p
        page = [graph.edges[t] for t in range(len(row)) if row[t] == p]
        reach = {graph.edges[i][0]}
        grown = True
        while grown:
            grown = False
            for u, v in page:
                if (u in reach) != (v in reach):
                    reach |= {u, v}
                    grown = True
        if graph.edges[j][0] in reach:
            return False
    return True
