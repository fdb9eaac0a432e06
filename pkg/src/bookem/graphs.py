"""Simple undirected graphs, the generators used throughout the package, and
the plain-text graph file format.

Vertices are always the dense integers ``0..n-1``.  Edges are stored as
sorted ``(u, v)`` tuples with ``u < v``.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

Edge = tuple[int, int]

DEFAULT_LEVEL_CAP = 9
DEFAULT_MAX_VERTICES = 100_000

_MASK64 = (1 << 64) - 1


class GraphFormatError(ValueError):
    """Malformed graph or embedding text.  ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class Family(str, Enum):
    COMPLETE = "complete"
    COMPLETE_BIPARTITE = "complete-bipartite"
    STACKED_TRIANGULATION = "stacked-triangulation"
    K_TREE = "k-tree"
    PATH = "path"
    CYCLE = "cycle"
    CUSTOM = "custom"


@dataclass(frozen=True)
class GraphFamilyTag:
    family: Family
    params: tuple[int, ...] = ()

    def __post_init__(self):
        if any(p < 0 for p in self.params):
            raise ValueError(f"negative parameter for {self.family.value}: {self.params}")


def normalize_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph on vertices ``0..n-1``."""

    n: int
    edges: tuple[Edge, ...]
    tag: GraphFamilyTag = field(default=GraphFamilyTag(Family.CUSTOM), compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < v < self.n):
                raise ValueError(f"edge ({u}, {v}) is not normalized or out of range for n={self.n}")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
        if list(self.edges) != sorted(self.edges):
            object.__setattr__(self, "edges", tuple(sorted(self.edges)))
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        object.__setattr__(self, "_adj", tuple(tuple(sorted(a)) for a in adj))
        object.__setattr__(self, "_index", {e: i for i, e in enumerate(self.edges)})

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], tag: GraphFamilyTag | None = None) -> "Graph":
        norm = sorted({normalize_edge(u, v) for u, v in edges})
        return cls(n, tuple(norm), tag or GraphFamilyTag(Family.CUSTOM))

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        return self._adj  # type: ignore[attr-defined]

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]  # type: ignore[attr-defined]

    def degree(self, v: int) -> int:
        return len(self._adj[v])  # type: ignore[attr-defined]

    def has_edge(self, u: int, v: int) -> bool:
        return normalize_edge(u, v) in self._index  # type: ignore[attr-defined]

    def edge_index(self, u: int, v: int) -> int:
        return self._index[normalize_edge(u, v)]  # type: ignore[attr-defined]

    def adjacency_masks(self) -> list[int]:
        masks = [0] * self.n
        for u, v in self.edges:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        return masks

    def induced(self, vertices: Iterable[int]) -> "Graph":
        """Induced subgraph, relabelled to ``0..len(vertices)-1`` in sorted order."""
        vs = sorted(set(vertices))
        pos = {v: i for i, v in enumerate(vs)}
        return Graph.from_edges(len(vs), [(pos[u], pos[v]) for u, v in self.edges if u in pos and v in pos])

    def edge_subgraph(self, edges: Iterable[Edge]) -> "Graph":
        """Spanning subgraph keeping all ``n`` vertices."""
        return Graph.from_edges(self.n, edges)

    def relabel(self, perm: list[int] | tuple[int, ...]) -> "Graph":
        """Graph with vertex ``v`` renamed to ``perm[v]``."""
        return Graph.from_edges(self.n, [(perm[u], perm[v]) for u, v in self.edges])

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            stack, comp = [s], []
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in self._adj[x]:  # type: ignore[attr-defined]
                    if not seen[y]:
                        seen[y] = True
                        stack.append(y)
            comps.append(sorted(comp))
        return comps

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m}, family={self.tag.family.value}{list(self.tag.params)})"


# generators ---------------------------------------------------------------


def _vertex_cap() -> int:
    return int(os.environ.get("BOOKEM_MAX_VERTICES", DEFAULT_MAX_VERTICES))


def _check_size(n: int) -> None:
    cap = _vertex_cap()
    if n > cap:
        raise ValueError(f"{n} vertices exceeds the cap of {cap} (set BOOKEM_MAX_VERTICES to raise it)")


def gen_complete(n: int) -> Graph:
    if n < 1:
        raise ValueError("K_n needs n >= 1")
    _check_size(n)
    return Graph(n, tuple(itertools.combinations(range(n), 2)), GraphFamilyTag(Family.COMPLETE, (n,)))


def gen_complete_bipartite(a: int, b: int) -> Graph:
    """``K_{a,b}`` with parts ``0..a-1`` and ``a..a+b-1``."""
    if a < 1 or b < 1:
        raise ValueError("K_{a,b} needs a, b >= 1")
    _check_size(a + b)
    edges = tuple((u, a + j) for u in range(a) for j in range(b))
    return Graph(a + b, edges, GraphFamilyTag(Family.COMPLETE_BIPARTITE, (a, b)))


def gen_path(n: int) -> Graph:
    if n < 1:
        raise ValueError("path needs n >= 1")
    _check_size(n)
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)), GraphFamilyTag(Family.PATH, (n,)))


def gen_cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    _check_size(n)
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)], GraphFamilyTag(Family.CYCLE, (n,)))


def stacked_triangulation_faces(level: int) -> list[tuple[int, int, int]]:
    """Facial triangles of ``T_level`` in creation order."""
    _, faces = _stack(level)
    return faces


def _stack(level: int) -> tuple[list[Edge], list[tuple[int, int, int]]]:
    edges = [(0, 1), (0, 2), (1, 2)]
    # the triangle bounds two faces: inner and outer
    faces = [(0, 1, 2), (0, 1, 2)]
    n = 3
    for _ in range(level):
        new_faces = []
        for a, b, c in faces:
            v = n
            n += 1
            edges += [(a, v), (b, v), (c, v)]
            new_faces += [(a, b, v), (b, c, v), (a, c, v)]
        faces = new_faces
    return edges, faces


def gen_stacked_triangulation(level: int, cap: int = DEFAULT_LEVEL_CAP) -> Graph:
    """Stacked triangulation ``T_level`` with ``3**level + 2`` vertices.

    Vertices are numbered level by level; within a level, in the creation
    order of the faces they are stacked into.
    """
    if level < 0:
        raise ValueError("level must be >= 0")
    if level > cap:
        raise ValueError(f"level {level} exceeds cap {cap}")
    n = 3**level + 2
    _check_size(n)
    edges, _ = _stack(level)
    return Graph.from_edges(n, edges, GraphFamilyTag(Family.STACKED_TRIANGULATION, (level,)))


class XorShift64Star:
    """xorshift64* generator; the exact bit stream is part of the corpus contract."""

    def __init__(self, seed: int):
        self.state = (seed & _MASK64) or 0x9E3779B97F4A7C15

    def next(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & _MASK64
        x ^= x >> 27
        self.state = x
        return (x * 0x2545F4914F6CDD1D) & _MASK64

    def below(self, bound: int) -> int:
        return self.next() % bound


def gen_k_tree(k: int, n: int, seed: int = 0) -> Graph:
    """Random k-tree on ``n`` vertices.

    Vertex ``i`` is the ``i``-th vertex added, so ``0..n-1`` is a
    construction order: ``0..k`` form the initial clique and every later
    vertex is joined to a k-clique among its predecessors, chosen uniformly
    by :class:`XorShift64Star`.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if n < k + 1:
        raise ValueError(f"a {k}-tree needs at least {k + 1} vertices")
    _check_size(n)
    rng = XorShift64Star(seed)
    edges = list(itertools.combinations(range(k + 1), 2))
    cliques = [c for c in itertools.combinations(range(k + 1), k)]
    for v in range(k + 1, n):
        clique = cliques[rng.below(len(cliques))]
        edges += [(u, v) for u in clique]
        for drop in range(k):
            cliques.append(tuple(sorted(clique[:drop] + clique[drop + 1:] + (v,))))
    return Graph.from_edges(n, edges, GraphFamilyTag(Family.K_TREE, (k, n, seed)))


def gen_random_graph(n: int, p: float, seed: int = 0) -> Graph:
    """G(n, p) driven by the same xorshift64* stream as the k-tree generator."""
    rng = XorShift64Star(seed)
    threshold = int(p * (1 << 64))
    edges = [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.next() < threshold]
    return Graph.from_edges(n, edges)


def is_k_tree(graph: Graph, k: int, order: list[int] | None = None) -> bool:
    """Whether ``order`` (default ``0..n-1``) is a k-tree construction order."""
    order = list(range(graph.n)) if order is None else list(order)
    if sorted(order) != list(range(graph.n)) or graph.n < k + 1:
        return False
    pos = {v: i for i, v in enumerate(order)}
    for i, v in enumerate(order):
        earlier = [u for u in graph.neighbors(v) if pos[u] < i]
        need = min(i, k)
        if len(earlier) != need:
            return False
        for a, b in itertools.combinations(earlier, 2):
            if not graph.has_edge(a, b):
                return False
    return graph.m == k * graph.n - k * (k + 1) // 2


def k_cliques(graph: Graph, k: int) -> list[tuple[int, ...]]:
    """All cliques of exactly ``k`` vertices, as sorted tuples in lexicographic order."""
    if k <= 0:
        return [()]
    out = []
    adj = [set(a) for a in graph.adjacency]

    def extend(clique: list[int], cands: list[int]) -> None:
        if len(clique) == k:
            out.append(tuple(clique))
            return
        for i, v in enumerate(cands):
            clique.append(v)
            extend(clique, [w for w in cands[i + 1:] if w in adj[v]])
            clique.pop()

    extend([], list(range(graph.n)))
    return out


# file format --------------------------------------------------------------


def parse_graph(text: str) -> Graph:
    """Parse the ``n m`` header plus ``m`` edge lines format; '#' starts a comment line."""
    header = None
    edges: list[Edge] = []
    seen: set[Edge] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            nums = [int(p) for p in parts]
        except ValueError:
            raise GraphFormatError(f"expected integers, got {line!r}", lineno) from None
        if len(nums) != 2:
            raise GraphFormatError(f"expected two integers, got {len(nums)}", lineno)
        if header is None:
            if nums[0] < 0 or nums[1] < 0:
                raise GraphFormatError("negative count in header", lineno)
            header = (nums[0], nums[1])
            continue
        n = header[0]
        u, v = nums
        if u == v:
            raise GraphFormatError(f"self-loop at vertex {u}", lineno)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"vertex out of range in edge {u} {v} (n={n})", lineno)
        e = normalize_edge(u, v)
        if e in seen:
            raise GraphFormatError(f"duplicate edge {e[0]} {e[1]}", lineno)
        seen.add(e)
        edges.append(e)
    if header is None:
        raise GraphFormatError("missing 'n m' header")
    if len(edges) != header[1]:
        raise GraphFormatError(f"header announces {header[1]} edges, found {len(edges)}")
    return Graph.from_edges(header[0], edges)


def serialize_graph(graph: Graph) -> str:
    lines = [f"{graph.n} {graph.m}"]
    lines += [f"{u} {v}" for u, v in graph.edges]
    return "\n".join(lines) + "\n"
