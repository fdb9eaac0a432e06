"""Constructive embeddings: star pipelines, zigzag pages for complete graphs,
cyclic template search, the k-tree color-pair partition and the k-tree
amplifier.

Every embedding returned here is checked with :func:`bookem.embedding.verify`
before it leaves the module.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .bounds import ForestPartition, arboricity_partition, is_forest
from .embedding import LinearEmbedding, SpineOrder, _crossing_pairs, crossing_masks, verify
from .graphs import (
    Edge,
    Family,
    Graph,
    GraphFamilyTag,
    gen_complete,
    is_k_tree,
    k_cliques,
    normalize_edge,
    _check_size,
)


class ConstructionError(RuntimeError):
    """A construction produced an embedding that failed verification."""


class TemplateSearchTimeout(RuntimeError):
    pass


def _checked(emb: LinearEmbedding, need: str) -> LinearEmbedding:
    report = verify(emb)
    ok = report.is_book if need == "book" else report.is_union
    if not ok:
        raise ConstructionError(f"construction is not a {need} embedding: {report.violations[:3]}")
    return emb


# star forests -------------------------------------------------------------


@dataclass
class StarForestPartition:
    """Edge partition into star forests.

    ``stars[i]`` maps each center of star forest ``i`` to the edges of its
    star.  Single-edge stars are keyed by their parent-side endpoint.
    """

    stars: list[dict[int, list[Edge]]]

    @property
    def star_forests(self) -> list[list[Edge]]:
        return [sorted(e for edges in forest.values() for e in edges) for forest in self.stars]

    def is_valid(self, graph: Graph) -> bool:
        seen: list[Edge] = []
        for forest in self.stars:
            touched: set[int] = set()
            for center, edges in forest.items():
                verts = {center}
                for u, v in edges:
                    if center not in (u, v):
                        return False
                    verts.add(u), verts.add(v)
                if touched & verts:
                    return False
                touched |= verts
                seen += edges
        return sorted(seen) == list(graph.edges)


def star_forests_from_forests(fp: ForestPartition, graph: Graph) -> StarForestPartition:
    """Split every forest into two star forests.

    Each tree is rooted at its smallest vertex; an edge goes to the first or
    second star forest according to the parity of its parent's depth.
    Empty star forests are dropped.
    """
    out: list[dict[int, list[Edge]]] = []
    for forest in fp.forests:
        adj: dict[int, list[int]] = {}
        for u, v in forest:
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)
        even: dict[int, list[Edge]] = {}
        odd: dict[int, list[Edge]] = {}
        depth: dict[int, int] = {}
        for root in sorted(adj):
            if root in depth:
                continue
            depth[root] = 0
            stack = [root]
            while stack:
                x = stack.pop()
                for y in sorted(adj[x]):
                    if y in depth:
                        continue
                    depth[y] = depth[x] + 1
                    target = even if depth[x] % 2 == 0 else odd
                    target.setdefault(x, []).append(normalize_edge(x, y))
                    stack.append(y)
        for part in (even, odd):
            if part:
                out.append({c: sorted(es) for c, es in sorted(part.items())})
    return StarForestPartition(out)


def union_embedding_from_star_forests(sfp: StarForestPartition, graph: Graph) -> LinearEmbedding:
    """Identity spine, one page per star forest; each page component is a star."""
    emb = LinearEmbedding.from_pages(graph, SpineOrder.identity(graph.n), sfp.star_forests)
    return _checked(emb, "union")


def pack_stars(sfp: StarForestPartition, graph: Graph, spine: SpineOrder | None = None) -> LinearEmbedding:
    """First-fit the individual stars, largest first, onto union pages.

    Stars sharing a page may touch; the page is accepted as long as each of
    its connected components stays crossing-free.
    """
    spine = spine or SpineOrder.identity(graph.n)
    stars = sorted((edges for forest in sfp.stars for edges in forest.values()), key=len, reverse=True)
    pages: list[list[Edge]] = []
    for star in stars:
        for page in pages:
            if _union_page_ok(graph.n, spine, page + star):
                page.extend(star)
                break
        else:
            pages.append(list(star))
    return _checked(LinearEmbedding.from_pages(graph, spine, pages), "union")


def _union_page_ok(n: int, spine: SpineOrder, page: list[Edge]) -> bool:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in page:
        parent[find(u)] = find(v)
    comps: dict[int, list[Edge]] = {}
    for e in page:
        comps.setdefault(find(e[0]), []).append(e)
    return not any(_crossing_pairs(spine, c, 1) for c in comps.values())


def union_embedding_from_arboricity(graph: Graph) -> LinearEmbedding:
    """Star forests of a minimum forest partition, repacked star by star; at most ``2 a(G)`` pages."""
    sfp = star_forests_from_forests(arboricity_partition(graph), graph)
    packed = pack_stars(sfp, graph)
    if packed.page_count <= len(sfp.star_forests):
        return packed
    return union_embedding_from_star_forests(sfp, graph)


def degeneracy_order(graph: Graph) -> list[int]:
    """Repeatedly remove a minimum-degree vertex (smallest index on ties)."""
    deg = [graph.degree(v) for v in range(graph.n)]
    alive = [True] * graph.n
    heap = [(d, v) for v, d in enumerate(deg)]
    heapq.heapify(heap)
    order = []
    while heap:
        d, v = heapq.heappop(heap)
        if not alive[v] or d != deg[v]:
            continue
        alive[v] = False
        order.append(v)
        for u in graph.neighbors(v):
            if alive[u]:
                deg[u] -= 1
                heapq.heappush(heap, (deg[u], u))
    return order


def degeneracy_stars(graph: Graph) -> list[tuple[int, list[Edge]]]:
    """Stars centered at each vertex, holding its edges to earlier-removed neighbors."""
    rank = {v: i for i, v in enumerate(degeneracy_order(graph))}
    stars: dict[int, list[Edge]] = {}
    for u, v in graph.edges:
        center = u if rank[u] > rank[v] else v
        stars.setdefault(center, []).append((u, v))
    return [(c, stars[c]) for c in sorted(stars)]


def _star_center(edges: Sequence[Edge]) -> Optional[int]:
    common = set(edges[0])
    for e in edges[1:]:
        common &= set(e)
    return min(common) if common else None


def local_embedding_from_stars(graph: Graph, stars: Iterable[Sequence[Edge]] | None = None) -> LinearEmbedding:
    """Identity spine with one page per star.

    Without ``stars``, uses :func:`degeneracy_stars`, whose locality is at
    most the degeneracy plus one.  This is a heuristic, not an optimal star
    partition.
    """
    if stars is None:
        parts = [edges for _, edges in degeneracy_stars(graph)]
    else:
        parts = [list(s) for s in stars]
    for part in parts:
        if not part or _star_center(part) is None:
            raise ValueError(f"part {part} is not a star")
    emb = LinearEmbedding.from_pages(graph, SpineOrder.identity(graph.n), parts)
    return _checked(emb, "book")


# complete graphs ----------------------------------------------------------


def zigzag_path(n: int, start: int) -> list[int]:
    """start, start+1, start-1, start+2, start-2, ... (mod n), n vertices long."""
    seq = [start % n]
    step = 1
    while len(seq) < n:
        seq.append((start + step) % n)
        if len(seq) < n:
            seq.append((start - step) % n)
        step += 1
    return seq


def kn_zigzag(n: int) -> LinearEmbedding:
    """Book embedding of ``K_n`` with ``ceil(n/2)`` zigzag pages on the cyclic order."""
    if n < 2:
        raise ValueError("need n >= 2")
    even = n + (n % 2)
    pages = []
    for i in range(even // 2):
        path = zigzag_path(even, i)
        pages.append([normalize_edge(a, b) for a, b in zip(path, path[1:]) if a < n and b < n])
    return _checked(LinearEmbedding.from_pages(gen_complete(n), SpineOrder.identity(n), pages), "book")


@dataclass(frozen=True)
class CyclicTemplate:
    """Pages of ``K_n`` generated by rotating template pages around the spine.

    Template ``i`` contributes the pages ``rotate(templates[i], r*step)`` for
    ``r = 0..shifts-1``.
    """

    n: int
    templates: tuple[tuple[Edge, ...], ...]
    shifts: int
    step: int = 1

    @property
    def chords(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per template, ``(start, cyclic length)`` pairs relative to rotation 0."""
        out = []
        for t in self.templates:
            out.append(tuple(sorted((a, min(b - a, self.n - (b - a))) for a, b in t)))
        return tuple(out)

    def pages(self) -> list[list[Edge]]:
        n = self.n
        return [
            sorted(normalize_edge((a + r * self.step) % n, (b + r * self.step) % n) for a, b in t)
            for t in self.templates
            for r in range(self.shifts)
        ]

    def embedding(self) -> LinearEmbedding:
        return _checked(LinearEmbedding.from_pages(gen_complete(self.n), SpineOrder.identity(self.n), self.pages()), "book")


def _canonical_templates(n: int, templates: list[list[Edge]]) -> tuple[tuple[Edge, ...], ...]:
    """Lexicographically smallest image of the template set under rotation and reflection."""
    best = None
    for r in range(n):
        for flip in (False, True):
            imgs = []
            for t in templates:
                img = []
                for a, b in t:
                    if flip:
                        a, b = -a, -b
                    img.append(normalize_edge((a + r) % n, (b + r) % n))
                imgs.append(tuple(sorted(img)))
            key = tuple(sorted(imgs))
            if best is None or key < best:
                best = key
    return best


def template_search(
    n: int,
    locality: int,
    num_templates: int = 1,
    shifts: int | None = None,
    step: int = 1,
    order: str = "lex",
    time_limit: float | None = None,
    node_limit: int | None = None,
) -> Optional[CyclicTemplate]:
    """Search for template pages whose rotated copies form a book embedding of ``K_n``.

    The copies must partition the edges of ``K_n``, every copy must be
    crossing-free, and no vertex may touch more than ``locality`` copies.
    Returns ``None`` when the exhaustive search finds nothing and raises
    :class:`TemplateSearchTimeout` if a limit is hit first.  ``order``
    (``"lex"`` or ``"reverse"``) picks which uncovered edge to branch on; it
    changes the certificate found, never the found / not-found outcome.
    """
    shifts = n if shifts is None else shifts
    if n < 2 or shifts < 1 or num_templates < 1:
        raise ValueError("need n >= 2, shifts >= 1, num_templates >= 1")
    total = n * (n - 1) // 2
    if total % shifts:
        return None
    kn = gen_complete(n)
    index = {e: i for i, e in enumerate(kn.edges)}
    cross = crossing_masks(kn, SpineOrder.identity(n))
    full = (1 << total) - 1

    def rot(e: Edge, r: int) -> Edge:
        return normalize_edge((e[0] + r) % n, (e[1] + r) % n)

    # orbit masks; None when the rotated copies of a chord collide
    orbit: list[Optional[int]] = []
    for e in kn.edges:
        mask = 0
        ok = True
        for r in range(shifts):
            bit = 1 << index[rot(e, r * step)]
            if mask & bit:
                ok = False
                break
            mask |= bit
        orbit.append(mask if ok else None)
    # rotating a template by one step permutes its copies exactly when the shifts wrap around
    closed = (shifts * step) % n == 0
    vertex_hits = [[(x + r * step) % n for r in range(shifts)] for x in range(n)]

    templates: list[list[int]] = [[] for _ in range(num_templates)]
    tverts = [0] * num_templates
    txing = [0] * num_templates
    loc = [0] * n
    started = time.monotonic()
    nodes = 0
    edge_order = list(range(total)) if order == "lex" else list(reversed(range(total)))

    def add_vertex(i: int, x: int, sign: int) -> None:
        tverts[i] ^= 1 << x
        for y in vertex_hits[x]:
            loc[y] += sign

    def fits(i: int, eid: int) -> bool:
        a, b = kn.edges[eid]
        extra = [x for x in (a, b) if not tverts[i] >> x & 1]
        if not extra:
            return True
        bump = [0] * n
        for x in extra:
            for y in vertex_hits[x]:
                bump[y] += 1
        return all(loc[y] + bump[y] <= locality for y in range(n) if bump[y])

    def dfs(covered: int, opened: int) -> bool:
        nonlocal nodes
        nodes += 1
        if node_limit is not None and nodes > node_limit:
            raise TemplateSearchTimeout(f"node limit {node_limit} reached")
        if time_limit is not None and nodes % 256 == 0 and time.monotonic() - started > time_limit:
            raise TemplateSearchTimeout(f"time limit {time_limit}s reached")
        if covered == full:
            return True
        target = next(e for e in edge_order if not covered >> e & 1)
        te = kn.edges[target]
        for i in range(min(opened + 1, num_templates)):
            new_template = i == opened
            rs = [0] if (new_template and closed) else range(shifts)
            tried = set()
            for r in rs:
                eid = index[rot(te, -r * step)]
                if eid in tried:
                    continue
                tried.add(eid)
                om = orbit[eid]
                if om is None or om & covered or txing[i] >> eid & 1:
                    continue
                if not fits(i, eid):
                    continue
                a, b = kn.edges[eid]
                added = [x for x in (a, b) if not tverts[i] >> x & 1]
                for x in added:
                    add_vertex(i, x, 1)
                old_x = txing[i]
                txing[i] |= cross[eid]
                templates[i].append(eid)
                if dfs(covered | om, max(opened, i + 1)):
                    return True
                templates[i].pop()
                txing[i] = old_x
                for x in added:
                    add_vertex(i, x, -1)
        return False

    if not dfs(0, 0):
        return None
    used = [[kn.edges[e] for e in t] for t in templates if t]
    result = CyclicTemplate(n, tuple(tuple(sorted(t)) for t in used), shifts, step)
    report = verify(result.embedding())
    if report.locality > locality:
        raise ConstructionError(f"template has locality {report.locality} > {locality}")
    return result


def canonical_template_key(template: CyclicTemplate) -> tuple:
    return _canonical_templates(template.n, [list(t) for t in template.templates])


# k-trees ------------------------------------------------------------------


@dataclass
class KTreeColoring:
    k: int
    colors: list[int]
    pair_trees: dict[tuple[int, int], list[Edge]] = field(default_factory=dict)

    def trees_at(self, v: int) -> int:
        return sum(1 for edges in self.pair_trees.values() if any(v in e for e in edges))


def _is_tree(edges: list[Edge]) -> bool:
    verts = sorted({x for e in edges for x in e})
    if len(edges) != len(verts) - 1:
        return False
    pos = {v: i for i, v in enumerate(verts)}
    return is_forest(len(verts), [(pos[u], pos[v]) for u, v in edges])


def ktree_color_partition(graph: Graph, k: int, order: Sequence[int] | None = None) -> KTreeColoring:
    """Proper (k+1)-coloring of a k-tree and its partition into color-pair trees.

    ``order`` is a construction order (default ``0..n-1``).  Every vertex
    added after the initial clique sees exactly k colors on its clique and
    takes the missing one.
    """
    order = list(range(graph.n)) if order is None else list(order)
    if not is_k_tree(graph, k, order):
        raise ValueError(f"input is not a {k}-tree with the given construction order")
    colors = [-1] * graph.n
    for i, v in enumerate(order[: k + 1]):
        colors[v] = i
    for v in order[k + 1:]:
        used = {colors[u] for u in graph.neighbors(v) if colors[u] != -1}
        (colors[v],) = set(range(k + 1)) - used
    pairs: dict[tuple[int, int], list[Edge]] = {}
    for u, v in graph.edges:
        a, b = sorted((colors[u], colors[v]))
        if a == b:
            raise ValueError("coloring is not proper")
        pairs.setdefault((a, b), []).append((u, v))
    for key, edges in pairs.items():
        if not _is_tree(edges):
            raise ValueError(f"color pair {key} does not induce a tree")
    return KTreeColoring(k, colors, dict(sorted(pairs.items())))


def ktree_color_embedding(coloring: KTreeColoring, graph: Graph, spine: SpineOrder | None = None) -> LinearEmbedding:
    """One page per color-pair tree (a forest embedding; not necessarily a book embedding)."""
    spine = spine or SpineOrder.identity(graph.n)
    return LinearEmbedding.from_pages(graph, spine, list(coloring.pair_trees.values()))


def lemma2_amplifier(graph: Graph, k: int, ell: int, cap: int | None = None) -> Graph:
    """One amplification round: ``3*k*k*ell`` new vertices on every k-clique.

    Each new vertex is adjacent to all of its clique, so a k-tree stays a
    k-tree.  The inner base case (k=1, G=K_2) is returned unchanged.
    """
    if k < 1 or ell < 1:
        raise ValueError("need k >= 1 and ell >= 1")
    if not is_k_tree(graph, k):
        raise ValueError(f"input is not a {k}-tree in vertex order")
    if k == 1 and graph.n == 2:
        return graph
    cliques = k_cliques(graph, k)
    per = 3 * k * k * ell
    n_out = graph.n + per * len(cliques)
    if cap is not None and n_out > cap:
        raise ValueError(f"amplified graph has {n_out} vertices, cap is {cap}")
    _check_size(n_out)
    edges = list(graph.edges)
    v = graph.n
    for clique in cliques:
        for _ in range(per):
            edges += [(c, v) for c in clique]
            v += 1
    return Graph.from_edges(n_out, edges, GraphFamilyTag(Family.K_TREE, (k, n_out)))
