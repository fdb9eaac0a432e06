"""Density-based bounds and forest decompositions.

All density values are exact :class:`fractions.Fraction` objects.  The
general objective is ``|E(H)| / (w*|V(H)| - c)`` maximized over vertex
subsets ``H`` with a positive denominator:

* ``w=1, c=0`` gives half the maximum average degree;
* ``w=2, c=3`` gives the outerplanar density bound on the local page number;
* ``w=1, c=1`` gives the Nash-Williams arboricity ratio.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

from .graphs import Edge, Graph

BRUTE_FORCE_MAX_N = 15


class Target(str, Enum):
    PN_LOCAL = "pn_local"
    PN_UNION = "pn_union"
    PN_CLASSIC = "pn_classic"


@dataclass
class BoundReport:
    target: Target
    lower: int
    upper: Optional[int] = None
    provenance: list[tuple[int, str, str]] = field(default_factory=list)

    def add_lower(self, value: int, rule: str, witness: str = "") -> None:
        self.provenance.append((value, rule, witness))
        self.lower = max(self.lower, value)

    def add_upper(self, value: int, rule: str, witness: str = "") -> None:
        self.provenance.append((value, rule, witness))
        self.upper = value if self.upper is None else min(self.upper, value)

    def to_dict(self) -> dict:
        return {
            "target": self.target.value,
            "lower": self.lower,
            "upper": self.upper,
            "provenance": [{"value": v, "rule": r, "witness": w} for v, r, w in self.provenance],
        }


@dataclass(frozen=True)
class DensityReport:
    mad: Fraction
    mad_witness: tuple[int, ...]
    lemma1_value: Fraction
    lemma1_witness: tuple[int, ...]


@dataclass
class ForestPartition:
    forests: list[list[Edge]]

    @property
    def arboricity(self) -> int:
        return len(self.forests)


# densest subgraph ---------------------------------------------------------


def _max_density_brute(graph: Graph, w: int, c: int) -> tuple[Fraction, tuple[int, ...]]:
    n = graph.n
    masks = graph.adjacency_masks()
    # edge counts of all subsets by dynamic programming over the highest bit
    counts = [0] * (1 << n)
    best: Optional[Fraction] = None
    best_set = 0
    for s in range(1, 1 << n):
        hi = s.bit_length() - 1
        rest = s ^ (1 << hi)
        counts[s] = counts[rest] + (masks[hi] & rest).bit_count()
        den = w * s.bit_count() - c
        if den <= 0:
            continue
        val = Fraction(counts[s], den)
        if best is None or val > best or (val == best and s.bit_count() > best_set.bit_count()):
            best, best_set = val, s
    if best is None:
        raise ValueError("no vertex subset has a positive denominator")
    return best, tuple(v for v in range(n) if best_set >> v & 1)


def _max_weighted_closure(
    graph: Graph, mu: Fraction, forced: tuple[int, ...], excluded: tuple[int, ...] = ()
) -> tuple[Fraction, list[int]]:
    """max of |E(S)| - mu*|S| over S containing ``forced`` and avoiding ``excluded``, via one min cut."""
    n = graph.n
    num, den = mu.numerator, mu.denominator
    src, snk = n, n + 1
    # scaled by 2*den: vertex v in S costs 2*num - den*deg(v); each cut edge costs den
    big = 2 * den * (graph.m + 1) + 2 * num * n + 1
    rows, cols, caps = [], [], []
    for v in range(n):
        cost = 2 * num - den * graph.degree(v)
        if cost > 0:
            rows.append(v), cols.append(snk), caps.append(cost)
        elif cost < 0:
            rows.append(src), cols.append(v), caps.append(-cost)
    for v in forced:
        rows.append(src), cols.append(v), caps.append(big)
    for v in excluded:
        rows.append(v), cols.append(snk), caps.append(big)
    for u, v in graph.edges:
        rows += [u, v]
        cols += [v, u]
        caps += [den, den]
    if sum(caps) >= 2**31:
        raise OverflowError("flow capacities exceed int32")
    cap = csr_matrix((np.asarray(caps, dtype=np.int32), (rows, cols)), shape=(n + 2, n + 2))
    cap.sum_duplicates()
    res = maximum_flow(cap, src, snk)
    # scipy's flow matrix is antisymmetric, so cap - flow also carries reverse arcs
    residual = (cap - res.flow).tocsr()
    residual.eliminate_zeros()
    seen = [False] * (n + 2)
    seen[src] = True
    queue = deque([src])
    indptr, indices, data = residual.indptr, residual.indices, residual.data
    while queue:
        x = queue.popleft()
        for k in range(indptr[x], indptr[x + 1]):
            y = indices[k]
            if data[k] > 0 and not seen[y]:
                seen[y] = True
                queue.append(y)
    side = [v for v in range(n) if seen[v]]
    return Fraction(_edges_within(graph, side)) - mu * len(side), side


def _max_density_flow(graph: Graph, w: int, c: int) -> tuple[Fraction, tuple[int, ...]]:
    """Dinkelbach iteration; each step solves max-closure problems by min cut.

    With ``c > 0`` the maximizer must have a positive denominator, so the
    search is anchored: on each vertex when ``c <= w`` (a lone vertex never
    looks improving), otherwise on each edge.  A vertex anchor that finds
    nothing is excluded from the later anchors of the same round.
    """
    if c > 0 and 2 * w - c <= 0:
        raise ValueError("flow route needs 2*w - c > 0")
    if c > 0 and graph.m == 0:
        k = c // w + 1
        if k > graph.n:
            raise ValueError("no vertex subset has a positive denominator")
        return Fraction(0), tuple(range(k))
    if c == 0:
        best_set: tuple[int, ...] = tuple(range(graph.n))
    else:
        best_set = graph.edges[0]
    best = Fraction(_edges_within(graph, best_set), w * len(best_set) - c)
    while True:
        improved = False
        mu = best * w
        if c == 0:
            rounds = [((), ())]
        elif c <= w:
            rounds = [((v,), tuple(range(v))) for v in range(graph.n)]
        else:
            rounds = [(e, ()) for e in graph.edges]
        for forced, excluded in rounds:
            gain, side = _max_weighted_closure(graph, mu, forced, excluded)
            # gain + best*c > 0  <=>  |E(S)| - best*(w|S| - c) > 0
            if gain + best * c > 0 and w * len(side) - c > 0:
                cand = Fraction(_edges_within(graph, side), w * len(side) - c)
                if cand > best:
                    best, best_set = cand, tuple(side)
                    improved = True
                    break
        if not improved:
            return best, best_set


def _edges_within(graph: Graph, vertices) -> int:
    s = set(vertices)
    return sum(1 for u, v in graph.edges if u in s and v in s)


def max_density(graph: Graph, c: int = 0, w: int = 1, method: str = "auto") -> tuple[Fraction, tuple[int, ...]]:
    """Exact maximum of ``|E(H)| / (w*|V(H)| - c)`` over vertex sets with positive denominator.

    Returns the value and a maximizing vertex set.  ``method`` is
    ``"brute"``, ``"flow"`` or ``"auto"`` (brute force up to 15 vertices).
    """
    if w < 1 or c < 0:
        raise ValueError("need w >= 1 and c >= 0")
    if graph.n == 0:
        raise ValueError("empty graph")
    if method == "auto":
        method = "brute" if graph.n <= BRUTE_FORCE_MAX_N else "flow"
    if method == "brute":
        return _max_density_brute(graph, w, c)
    if method == "flow":
        return _max_density_flow(graph, w, c)
    raise ValueError(f"unknown method {method!r}")


def mad(graph: Graph, method: str = "auto") -> Fraction:
    """Maximum average degree."""
    value, _ = max_density(graph, 0, 1, method)
    return 2 * value


def density_report(graph: Graph, method: str = "auto") -> DensityReport:
    half, w1 = max_density(graph, 0, 1, method)
    if graph.n >= 2:
        l1, w2 = max_density(graph, 3, 2, method)
    else:
        l1, w2 = Fraction(0), ()
    return DensityReport(mad=2 * half, mad_witness=w1, lemma1_value=l1, lemma1_witness=w2)


def lemma1_value(graph: Graph, method: str = "auto") -> Fraction:
    """max |E(H)| / (2|V(H)| - 3) over subgraphs; 0 for edgeless graphs."""
    if graph.m == 0:
        return Fraction(0)
    value, _ = max_density(graph, 3, 2, method)
    return value


def lemma1_lower_bound(graph: Graph, method: str = "auto") -> int:
    """Outerplanar density lower bound on the local page number."""
    return math.ceil(lemma1_value(graph, method))


def refined_local_bound(graph: Graph, pn_lower: int) -> int:
    """Smallest k with ``m <= 2*k*n - 3*max(pn_lower, k)``.

    Every k-local book embedding has at least ``pn`` pages and each page
    holds at most ``2|V_P| - 3`` edges, so this k bounds the local page
    number from below given a lower bound on the classical page number.
    """
    n, m = graph.n, graph.m
    if m == 0:
        return 0
    k = 1
    while m > 2 * k * n - 3 * max(pn_lower, k):
        k += 1
    return k


def nash_williams(graph: Graph, method: str = "auto") -> int:
    if graph.m == 0:
        return 0
    value, _ = max_density(graph, 1, 1, method)
    return math.ceil(value)


def eq4_chain_check(graph: Graph, pnl: int, pnu: int, pn: int, mad_value: Fraction | None = None) -> bool:
    """``pn >= pn_u >= pn_l >= mad/4`` with exact arithmetic."""
    if mad_value is None:
        mad_value = mad(graph) if graph.n else Fraction(0)
    return pn >= pnu >= pnl and Fraction(pnl) >= mad_value / 4


# arboricity ---------------------------------------------------------------


def _forest_path(adj: dict[int, dict[int, int]], s: int, t: int) -> Optional[list[int]]:
    """Edge ids on the s-t path of a forest given as vertex -> {neighbor: edge id}."""
    if s == t:
        return []
    prev = {s: (None, None)}
    queue = deque([s])
    while queue:
        x = queue.popleft()
        for y, eid in adj.get(x, {}).items():
            if y not in prev:
                prev[y] = (x, eid)
                if y == t:
                    path = []
                    while prev[y][0] is not None:
                        path.append(prev[y][1])
                        y = prev[y][0]
                    return path
                queue.append(y)
    return None


def arboricity_partition(graph: Graph) -> ForestPartition:
    """Minimum partition of the edges into forests (matroid partition).

    Edges are inserted one at a time.  Each insertion searches, breadth
    first, the exchange graph whose arcs ``x -> y`` mean "put ``x`` into the
    forest of ``y`` and evict ``y``"; a shortest path to an edge that fits
    directly into some forest keeps every forest acyclic.  A new forest is
    opened only when no such path exists.
    """
    edges = graph.edges
    where: list[int] = [-1] * len(edges)
    forests: list[dict[int, dict[int, int]]] = []

    def add(f: int, eid: int) -> None:
        u, v = edges[eid]
        forests[f].setdefault(u, {})[v] = eid
        forests[f].setdefault(v, {})[u] = eid
        where[eid] = f

    def remove(f: int, eid: int) -> None:
        u, v = edges[eid]
        del forests[f][u][v]
        del forests[f][v][u]
        where[eid] = -1

    for e0 in range(len(edges)):
        parent: dict[int, tuple[int, int] | None] = {e0: None}
        queue = deque([e0])
        done = False
        while queue and not done:
            x = queue.popleft()
            u, v = edges[x]
            for f in range(len(forests)):
                if f == where[x]:
                    continue
                path = _forest_path(forests[f], u, v)
                if path is None:
                    # x fits into f; replay the exchange chain back to e0
                    moves = []
                    cur, target = x, f
                    while cur is not None:
                        moves.append((cur, target))
                        link = parent[cur]
                        if link is None:
                            break
                        prev, _ = link
                        target = where[cur]
                        cur = prev
                    for eid, tgt in moves:
                        if where[eid] != -1:
                            remove(where[eid], eid)
                        add(tgt, eid)
                    done = True
                    break
                for y in path:
                    if y not in parent:
                        parent[y] = (x, f)
                        queue.append(y)
        if not done:
            forests.append({})
            add(len(forests) - 1, e0)

    out: list[list[Edge]] = [[] for _ in forests]
    for eid, f in enumerate(where):
        out[f].append(edges[eid])
    return ForestPartition([sorted(f) for f in out])


def is_forest(n: int, edges: list[Edge]) -> bool:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


def bound_report(graph: Graph, target: Target, pn_lower: int | None = None) -> BoundReport:
    """Collect the density lower bounds and constructive upper bounds for ``target``."""
    from . import construct

    report = BoundReport(target=target, lower=0)
    if graph.m == 0:
        report.add_lower(0, "edgeless")
        report.add_upper(0, "edgeless")
        return report
    report.add_lower(1, "has an edge")
    dens = density_report(graph)
    report.add_lower(math.ceil(dens.mad / 4), "mad/4", f"mad={dens.mad} on {list(dens.mad_witness)}")
    report.add_lower(
        math.ceil(dens.lemma1_value),
        "outerplanar density",
        f"{dens.lemma1_value} on {list(dens.lemma1_witness)}",
    )
    if target is Target.PN_LOCAL and pn_lower is not None:
        report.add_lower(refined_local_bound(graph, pn_lower), "refined local count", f"pn >= {pn_lower}")
    if target is Target.PN_CLASSIC and pn_lower is not None:
        report.add_lower(pn_lower, "given pn lower bound")
    fp = arboricity_partition(graph)
    if target is Target.PN_UNION or target is Target.PN_LOCAL:
        sfp = construct.star_forests_from_forests(fp, graph)
        report.add_upper(len(sfp.star_forests), "star forests from forests", f"a={fp.arboricity}")
    if target is Target.PN_LOCAL:
        emb = construct.local_embedding_from_stars(graph)
        from .embedding import verify

        report.add_upper(verify(emb).locality, "degeneracy stars")
    if target is Target.PN_CLASSIC:
        report.add_upper(graph.m, "one edge per page")
    return report
