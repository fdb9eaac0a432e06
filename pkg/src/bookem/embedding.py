"""Linear embeddings (spine order plus page partition) and their verification.

Three regimes are checked by :func:`verify`:

* book embedding: no two edges on the same page cross;
* union embedding: on each page, every connected component is crossing-free
  (edges in different components of a page may cross);
* locality: the number of distinct pages touching each vertex.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .graphs import Edge, Graph, GraphFormatError, normalize_edge

DEFAULT_WITNESS_CAP = 32
BITMATRIX_THRESHOLD = 4096


@dataclass(frozen=True)
class SpineOrder:
    """``order[i]`` is the vertex at position ``i``; ``inverse[v]`` its position."""

    order: tuple[int, ...]
    inverse: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        order = tuple(self.order)
        n = len(order)
        inv = [-1] * n
        for i, v in enumerate(order):
            if not (0 <= v < n) or inv[v] != -1:
                raise ValueError(f"spine is not a permutation of 0..{n - 1}: {list(order)}")
            inv[v] = i
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "inverse", tuple(inv))

    @classmethod
    def identity(cls, n: int) -> "SpineOrder":
        return cls(tuple(range(n)))

    def __len__(self):
        return len(self.order)

    def position(self, v: int) -> int:
        return self.inverse[v]

    def rotated(self, shift: int) -> "SpineOrder":
        n = len(self.order)
        if n == 0:
            return self
        shift %= n
        return SpineOrder(self.order[shift:] + self.order[:shift])

    def reversed(self) -> "SpineOrder":
        return SpineOrder(self.order[::-1])


def crosses(e1: Edge, e2: Edge, spine: SpineOrder) -> bool:
    """True iff the endpoints of ``e1`` and ``e2`` strictly interleave on the spine."""
    a, b = sorted((spine.inverse[e1[0]], spine.inverse[e1[1]]))
    c, d = sorted((spine.inverse[e2[0]], spine.inverse[e2[1]]))
    return a < c < b < d or c < a < d < b


def position_edges(graph: Graph, spine: SpineOrder) -> list[Edge]:
    """Edges of ``graph`` rewritten as sorted pairs of spine positions (same index order)."""
    inv = spine.inverse
    return [normalize_edge(inv[u], inv[v]) for u, v in graph.edges]


def crossing_masks(graph: Graph, spine: SpineOrder, edges: Sequence[int] | None = None) -> list[int]:
    """Per-edge bitmask of the edges it crosses (bit ``j`` set iff edge ``j`` crosses).

    ``edges`` restricts to a subset of edge indices; bits then refer to
    positions within that subset.
    """
    pos = position_edges(graph, spine)
    if edges is not None:
        pos = [pos[i] for i in edges]
    m = len(pos)
    if m == 0:
        return []
    if m > BITMATRIX_THRESHOLD:
        raise ValueError(f"{m} edges exceeds the bit-matrix threshold {BITMATRIX_THRESHOLD}")
    arr = np.asarray(pos, dtype=np.int64)
    a = arr[:, 0][:, None]
    b = arr[:, 1][:, None]
    c = arr[:, 0][None, :]
    d = arr[:, 1][None, :]
    mat = ((a < c) & (c < b) & (b < d)) | ((c < a) & (a < d) & (d < b))
    # little-endian bit order so that bit j of the int is column j
    packed = np.packbits(mat, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


@dataclass(frozen=True)
class LinearEmbedding:
    """A spine order plus a page id for every edge of the graph.

    ``assignment[i]`` is the page of ``graph.edges[i]``.  Page ids are
    contiguous ``0..page_count-1`` with no empty page.
    """

    graph: Graph
    spine: SpineOrder
    assignment: tuple[int, ...]

    def __post_init__(self):
        if len(self.spine) != self.graph.n:
            raise ValueError(f"spine has {len(self.spine)} vertices, graph has {self.graph.n}")
        if len(self.assignment) != self.graph.m:
            raise ValueError(f"{len(self.assignment)} page ids for {self.graph.m} edges")
        used = set(self.assignment)
        if used != set(range(len(used))):
            raise ValueError(f"page ids must be contiguous from 0, got {sorted(used)}")
        object.__setattr__(self, "assignment", tuple(self.assignment))

    @classmethod
    def normalized(cls, graph: Graph, spine: SpineOrder | Sequence[int], assignment: Sequence[int]) -> "LinearEmbedding":
        """Build from arbitrary page labels, compacting them in order of first use."""
        if not isinstance(spine, SpineOrder):
            spine = SpineOrder(tuple(spine))
        relabel: dict = {}
        compact = []
        for p in assignment:
            if p not in relabel:
                relabel[p] = len(relabel)
            compact.append(relabel[p])
        return cls(graph, spine, tuple(compact))

    @classmethod
    def from_pages(cls, graph: Graph, spine: SpineOrder | Sequence[int], pages: Iterable[Iterable[Edge]]) -> "LinearEmbedding":
        """Build from a list of edge lists; empty pages are dropped."""
        assignment = [-1] * graph.m
        for p, page in enumerate(pages):
            for u, v in page:
                i = graph.edge_index(u, v)
                if assignment[i] != -1:
                    raise ValueError(f"edge {u}-{v} assigned twice")
                assignment[i] = p
        missing = [graph.edges[i] for i, p in enumerate(assignment) if p == -1]
        if missing:
            u, v = missing[0]
            raise ValueError(f"edge {u}-{v} unassigned")
        return cls.normalized(graph, spine, assignment)

    @property
    def page_count(self) -> int:
        return max(self.assignment) + 1 if self.assignment else 0

    def pages(self) -> list[list[Edge]]:
        out: list[list[Edge]] = [[] for _ in range(self.page_count)]
        for e, p in zip(self.graph.edges, self.assignment):
            out[p].append(e)
        return out


@dataclass
class VerificationReport:
    is_book: bool
    is_union: bool
    page_count: int
    locality: int
    per_vertex_locality: list[int]
    violations: list[tuple[Edge, Edge, int, str]]

    def to_dict(self) -> dict:
        return {
            "is_book": self.is_book,
            "is_union": self.is_union,
            "page_count": self.page_count,
            "locality": self.locality,
            "per_vertex_locality": list(self.per_vertex_locality),
            "violations": [
                {"edge1": list(e), "edge2": list(f), "page": p, "kind": kind}
                for e, f, p, kind in self.violations
            ],
        }


def locality_profile(emb: LinearEmbedding) -> list[int]:
    """Number of distinct pages carrying an edge at each vertex."""
    seen: list[set[int]] = [set() for _ in range(emb.graph.n)]
    for (u, v), p in zip(emb.graph.edges, emb.assignment):
        seen[u].add(p)
        seen[v].add(p)
    return [len(s) for s in seen]


def _crossing_pairs(spine: SpineOrder, edges: list[Edge], limit: int) -> list[tuple[Edge, Edge]]:
    """Crossing pairs among ``edges`` found by a left-to-right sweep.

    Open edges are kept sorted by right end.  An edge ``(a, b)`` crosses
    exactly the open edges ending strictly inside ``(a, b)`` that started
    before ``a``.  Returns at most ``limit`` pairs and an empty list iff
    the edge set is crossing-free.
    """
    inv = spine.inverse
    spans = sorted(
        (min(inv[u], inv[v]), -max(inv[u], inv[v]), (u, v)) for u, v in edges
    )
    ends: list[int] = []
    open_edges: list[Edge] = []
    found: list[tuple[Edge, Edge]] = []
    for a, negb, e in spans:
        b = -negb
        k = bisect_right(ends, a)
        if k:
            del ends[:k], open_edges[:k]
        hi = bisect_left(ends, b)
        for i in range(hi):
            found.append((open_edges[i], e))
            if len(found) >= limit:
                return found
        i = bisect_left(ends, b)
        ends.insert(i, b)
        open_edges.insert(i, e)
    return found


class _DSU:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def page_components(emb: LinearEmbedding) -> list[list[list[Edge]]]:
    """For every page, the edge sets of the connected components of that page."""
    out = []
    for page in emb.pages():
        dsu = _DSU(emb.graph.n)
        for u, v in page:
            dsu.union(u, v)
        groups: dict[int, list[Edge]] = {}
        for e in page:
            groups.setdefault(dsu.find(e[0]), []).append(e)
        out.append([groups[r] for r in sorted(groups)])
    return out


def verify(emb: LinearEmbedding, witness_cap: int | None = DEFAULT_WITNESS_CAP) -> VerificationReport:
    """Classify ``emb`` as book / union embedding and compute its locality.

    Violations of kind ``"crossing"`` are same-page crossings inside one
    component, which break both properties.  Kind ``"book"`` marks
    crossings between different components of a page, which only break
    the book property.
    """
    cap = witness_cap if witness_cap is not None else 1 << 62
    violations: list[tuple[Edge, Edge, int, str]] = []
    is_book = True
    is_union = True
    for p, comps in enumerate(page_components(emb)):
        comp_of = {}
        for ci, comp in enumerate(comps):
            for e in comp:
                comp_of[e] = ci
        room = max(cap - len(violations), 1)
        pairs = _crossing_pairs(emb.spine, [e for c in comps for e in c], room)
        if not pairs:
            continue
        is_book = False
        if any(comp_of[e] == comp_of[f] for e, f in pairs):
            is_union = False
        elif is_union:
            for comp in comps:
                if _crossing_pairs(emb.spine, comp, 1):
                    is_union = False
                    break
        for e, f in pairs:
            if len(violations) >= cap:
                break
            kind = "crossing" if comp_of[e] == comp_of[f] else "book"
            violations.append((e, f, p, kind))
        if not is_union and len(violations) < cap:
            # make sure a union-breaking witness is listed
            if not any(k == "crossing" and pg == p for _, _, pg, k in violations):
                for comp in comps:
                    for e, f in _crossing_pairs(emb.spine, comp, 1):
                        violations.append((e, f, p, "crossing"))
                        break
    profile = locality_profile(emb)
    return VerificationReport(
        is_book=is_book,
        is_union=is_union,
        page_count=emb.page_count,
        locality=max(profile, default=0),
        per_vertex_locality=profile,
        violations=violations,
    )


def split_components(emb: LinearEmbedding) -> LinearEmbedding:
    """Put every connected component of every page onto its own page.

    A union embedding becomes a book embedding with the same locality.
    """
    pages = [comp for comps in page_components(emb) for comp in comps]
    return LinearEmbedding.from_pages(emb.graph, emb.spine, pages)


# text format --------------------------------------------------------------


def _parse_edge_token(tok: str, lineno: int) -> Edge:
    parts = tok.split("-")
    if len(parts) != 2:
        raise GraphFormatError(f"bad edge token {tok!r}", lineno)
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise GraphFormatError(f"bad edge token {tok!r}", lineno) from None


def parse_embedding(text: str, graph: Graph) -> LinearEmbedding:
    spine = None
    pages: dict[int, list[tuple[Edge, int]]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        if not sep:
            raise GraphFormatError(f"expected 'spine:' or 'page k:', got {line!r}", lineno)
        head = head.strip()
        if head == "spine":
            if spine is not None:
                raise GraphFormatError("second spine line", lineno)
            try:
                order = tuple(int(t) for t in rest.split())
            except ValueError:
                raise GraphFormatError("spine must list integers", lineno) from None
            try:
                spine = SpineOrder(order)
            except ValueError as exc:
                raise GraphFormatError(str(exc), lineno) from None
            if len(order) != graph.n:
                raise GraphFormatError(f"spine lists {len(order)} vertices, graph has {graph.n}", lineno)
        elif head.startswith("page"):
            try:
                k = int(head[4:])
            except ValueError:
                raise GraphFormatError(f"bad page header {head!r}", lineno) from None
            if k in pages:
                raise GraphFormatError(f"page {k} listed twice", lineno)
            pages[k] = [(_parse_edge_token(t, lineno), lineno) for t in rest.split()]
        else:
            raise GraphFormatError(f"unknown line {head!r}", lineno)
    if spine is None:
        raise GraphFormatError("missing spine line")
    if sorted(pages) != list(range(len(pages))):
        raise GraphFormatError(f"page numbers must be contiguous from 0, got {sorted(pages)}")
    assignment = [-1] * graph.m
    for k in sorted(pages):
        if not pages[k]:
            raise GraphFormatError(f"page {k} is empty")
        for (u, v), lineno in pages[k]:
            if not graph.has_edge(u, v):
                raise GraphFormatError(f"edge {u}-{v} not in graph", lineno)
            i = graph.edge_index(u, v)
            if assignment[i] != -1:
                raise GraphFormatError(f"edge {u}-{v} assigned twice", lineno)
            assignment[i] = k
    for i, p in enumerate(assignment):
        if p == -1:
            u, v = graph.edges[i]
            raise GraphFormatError(f"edge {u}-{v} unassigned")
    return LinearEmbedding(graph, spine, tuple(assignment))


def serialize_embedding(emb: LinearEmbedding) -> str:
    lines = ["spine: " + " ".join(map(str, emb.spine.order))]
    for k, page in enumerate(emb.pages()):
        lines.append(f"page {k}: " + " ".join(f"{u}-{v}" for u, v in page))
    return "\n".join(lines) + "\n"
