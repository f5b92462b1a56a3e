"""Base graphs: construction, edge-list I/O and symmetry (automorphisms, orbit graphs).

Vertices are labelled ``1..n`` throughout.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .config import DEFAULT_LIMITS
from .exceptions import CapacityError, ContractError, ParseError, SizeError

__all__ = [
    "Graph",
    "VertexPermutation",
    "circ",
    "circ2",
    "star",
    "complete",
    "path",
    "tree",
    "generate",
    "parse_edge_list",
    "render_edge_list",
    "automorphisms",
    "orbit_graph",
    "graph_to_dot",
]


@dataclass(frozen=True)
class Graph:
    """Undirected graph on vertices ``1..n``.

    ``edges`` holds pairs ``(i, j)`` with ``i < j``, sorted. ``loops`` holds
    vertices carrying a self-loop; only orbit-graph quotients produce them.
    """

    n: int
    edges: tuple = ()
    loops: tuple = ()

    def __post_init__(self):
        if self.n < 0:
            raise ContractError("vertex count must be non-negative")
        canon = set()
        for e in self.edges:
            i, j = int(e[0]), int(e[1])
            if i == j:
                raise ContractError(f"self-loop at {i}: use the loops field")
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise ContractError(f"edge {e} outside 1..{self.n}")
            canon.add((min(i, j), max(i, j)))
        loops = set()
        for v in self.loops:
            if not 1 <= v <= self.n:
                raise ContractError(f"loop at {v} outside 1..{self.n}")
            loops.add(int(v))
        object.__setattr__(self, "edges", tuple(sorted(canon)))
        object.__setattr__(self, "loops", tuple(sorted(loops)))

    @classmethod
    def from_edges(cls, edges: Iterable[Sequence[int]], n: int | None = None) -> "Graph":
        edges = [tuple(e) for e in edges]
        if n is None:
            n = max((max(e) for e in edges), default=0)
        return cls(n, tuple(edges))

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def _adjacency(self) -> tuple:
        adj = [[] for _ in range(self.n + 1)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def _edge_set(self) -> frozenset:
        return frozenset(self.edges)

    def neighbors(self, v: int) -> tuple:
        """Open neighbourhood of ``v``, ascending."""
        return self._adjacency[v]

    def closed_neighborhood(self, v: int) -> tuple:
        return tuple(sorted(self._adjacency[v] + (v,)))

    def degree(self, v: int) -> int:
        return len(self._adjacency[v])

    def has_edge(self, i: int, j: int) -> bool:
        if i == j:
            return i in self.loops
        return (min(i, j), max(i, j)) in self._edge_set

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = {1}
        stack = [1]
        while stack:
            v = stack.pop()
            for w in self._adjacency[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def without_edge(self, edge) -> "Graph":
        edge = (min(edge), max(edge))
        return Graph(self.n, tuple(e for e in self.edges if e != edge), self.loops)


def _at_least(name, n, minimum):
    if n < minimum:
        raise SizeError(f"{name}(n) needs n >= {minimum}, got {n}")


def circ(n: int) -> Graph:
    _at_least("circ", n, 3)
    return Graph(n, tuple((i, i % n + 1) for i in range(1, n + 1)))


def circ2(n: int) -> Graph:
    """Circle graph with every vertex also joined to its distance-2 neighbours."""
    _at_least("circ2", n, 5)
    edges = [(i, i % n + 1) for i in range(1, n + 1)]
    edges += [(i, (i + 1) % n + 1) for i in range(1, n + 1)]
    return Graph(n, tuple(edges))


def star(n: int) -> Graph:
    """Star on ``n`` vertices with centre 1."""
    _at_least("star", n, 1)
    return Graph(n, tuple((1, j) for j in range(2, n + 1)))


def complete(n: int) -> Graph:
    _at_least("complete", n, 1)
    return Graph(n, tuple(itertools.combinations(range(1, n + 1), 2)))


def path(n: int) -> Graph:
    _at_least("path", n, 1)
    return Graph(n, tuple((i, i + 1) for i in range(1, n)))


def tree(edges: Iterable[Sequence[int]], n: int | None = None) -> Graph:
    g = Graph.from_edges(edges, n)
    if g.m != g.n - 1 or not g.is_connected():
        raise ContractError("edge list does not describe a tree")
    return g


_GENERATORS = {"circ": circ, "circ2": circ2, "star": star, "complete": complete, "path": path}


def generate(kind: str, n: int) -> Graph:
    try:
        return _GENERATORS[kind](n)
    except KeyError:
        raise ContractError(f"unknown graph kind {kind!r}; choose from {sorted(_GENERATORS)}") from None


def parse_edge_list(text: str) -> Graph:
    """Parse lines ``i j`` with an optional ``n <count>`` header.

    Blank lines and ``#`` comments are ignored; duplicate edges collapse.
    """
    n = None
    edges = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "n":
            if len(tokens) != 2 or n is not None or edges:
                raise ParseError(f"line {lineno}: bad header {raw!r}")
            n = _parse_label(tokens[1], lineno, raw, minimum=0)
            continue
        if len(tokens) != 2:
            raise ParseError(f"line {lineno}: expected 'i j', got {raw!r}")
        i, j = (_parse_label(t, lineno, raw) for t in tokens)
        if i == j:
            raise ParseError(f"line {lineno}: self-loop {raw!r}")
        edges.add((min(i, j), max(i, j)))
    top = max((j for _, j in edges), default=0)
    if n is None:
        n = top
    elif top > n:
        raise ParseError(f"vertex {top} exceeds header n {n}")
    return Graph(n, tuple(edges))


def _parse_label(token, lineno, raw, minimum=1):
    try:
        value = int(token)
    except ValueError:
        raise ParseError(f"line {lineno}: non-integer token {token!r} in {raw!r}") from None
    if value < minimum:
        raise ParseError(f"line {lineno}: label {value} below {minimum} in {raw!r}")
    return value


def render_edge_list(g: Graph) -> str:
    if g.loops:
        raise ContractError("edge-list format cannot carry loops")
    lines = [f"n {g.n}"] + [f"{i} {j}" for i, j in g.edges]
    return "\n".join(lines) + "\n"


def graph_to_dot(g: Graph, name: str = "Y") -> str:
    lines = [f"graph {name} {{"]
    lines += [f"  {v};" for v in g.vertices]
    lines += [f"  {v} -- {v};" for v in g.loops]
    lines += [f"  {i} -- {j};" for i, j in g.edges]
    lines.append("}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class VertexPermutation:
    """Bijection on ``1..n``; ``images[v - 1]`` is the image of ``v``."""

    images: tuple

    def __post_init__(self):
        images = tuple(int(v) for v in self.images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ContractError(f"{images} is not a permutation of 1..{len(images)}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, n: int) -> "VertexPermutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> "VertexPermutation":
        images = list(range(1, n + 1))
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + type(cyc)(cyc[:1])):
                images[a - 1] = b
        return cls(tuple(images))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, v: int) -> int:
        return self.images[v - 1]

    def __mul__(self, other: "VertexPermutation") -> "VertexPermutation":
        # (self * other)(v) == self(other(v))
        return VertexPermutation(tuple(self.images[w - 1] for w in other.images))

    def inverse(self) -> "VertexPermutation":
        inv = [0] * self.n
        for v, w in enumerate(self.images, 1):
            inv[w - 1] = v
        return VertexPermutation(tuple(inv))

    def is_identity(self) -> bool:
        return self.images == tuple(range(1, self.n + 1))

    def cycles(self) -> list:
        """Disjoint cycles, each starting at its smallest element, ordered by that element."""
        seen = set()
        out = []
        for v in range(1, self.n + 1):
            if v in seen:
                continue
            cyc = [v]
            seen.add(v)
            w = self(v)
            while w != v:
                cyc.append(w)
                seen.add(w)
                w = self(w)
            out.append(tuple(cyc))
        return out

    def apply_word(self, word: Sequence[int]) -> tuple:
        return tuple(self(v) for v in word)


def is_automorphism(g: Graph, gamma: VertexPermutation) -> bool:
    if gamma.n != g.n:
        return False
    if {gamma(v) for v in g.loops} != set(g.loops):
        return False
    mapped = {(min(gamma(i), gamma(j)), max(gamma(i), gamma(j))) for i, j in g.edges}
    return mapped == set(g.edges)


def automorphisms(g: Graph, limit: int | None = None) -> list:
    """All automorphisms of ``g``, identity first.

    Backtracking over vertex images in lexicographic order, pruned by degree,
    loop status and adjacency to already-placed vertices.
    """
    limit = DEFAULT_LIMITS.aut_vertices if limit is None else limit
    if g.n > limit:
        raise CapacityError(
            f"automorphism search on {g.n} vertices exceeds limit {limit} (raise aut_vertices)",
            "aut_vertices",
        )
    n = g.n
    loops = set(g.loops)
    deg = [0] + [g.degree(v) for v in g.vertices]
    found = []
    image = [0] * (n + 1)
    used = [False] * (n + 1)

    def extend(v):
        if v > n:
            found.append(VertexPermutation(tuple(image[1:])))
            return
        for w in range(1, n + 1):
            if used[w] or deg[w] != deg[v] or ((v in loops) != (w in loops)):
                continue
            if any(g.has_edge(u, v) != g.has_edge(image[u], w) for u in range(1, v)):
                continue
            image[v] = w
            used[w] = True
            extend(v + 1)
            used[w] = False

    extend(1)
    return found


def orbit_graph(g: Graph, gamma: VertexPermutation) -> Graph:
    """Quotient of ``g`` by the cyclic group generated by ``gamma``.

    Orbit vertices are numbered by their smallest member. An edge inside one
    orbit becomes a loop; parallel orbit edges are collapsed.
    """
    if not is_automorphism(g, gamma):
        raise ContractError(f"{gamma.images} is not an automorphism of the graph")
    orbit_of = {}
    orbits = gamma.cycles()
    for k, orb in enumerate(orbits, 1):
        for v in orb:
            orbit_of[v] = k
    edges = set()
    loops = {orbit_of[v] for v in g.loops}
    for i, j in g.edges:
        a, b = orbit_of[i], orbit_of[j]
        if a == b:
            loops.add(a)
        else:
            edges.add((min(a, b), max(a, b)))
    return Graph(len(orbits), tuple(edges), tuple(loops))
