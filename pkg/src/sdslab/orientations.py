"""Acyclic orientations and the counts built on them.

An orientation of a graph with edges ``e_0 < e_1 < ...`` (each ``e_k = (i, j)``
with ``i < j``) is stored as an integer: bit ``k`` clear means ``i -> j``,
bit ``k`` set means ``j -> i``. The integer doubles as the canonical encoding
used for ordering and class representatives.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .config import DEFAULT_LIMITS
from .exceptions import CapacityError, ContractError, DomainError, SDSError
from .graph import Graph, VertexPermutation, automorphisms, orbit_graph

__all__ = [
    "AcyclicOrientation",
    "OrientationClass",
    "CrossCheckError",
    "orientation_of",
    "linear_extensions",
    "enumerate_acyc",
    "tutte",
    "alpha",
    "kappa",
    "click",
    "kappa_classes",
    "kappa_transversal",
    "alpha_bar",
    "alpha_bar_classes",
    "kappa_bar",
    "kappa_bar_classes",
    "count_report",
    "orientation_to_dot",
]


class CrossCheckError(SDSError):
    """Two independent routes to the same quantity disagreed."""


@lru_cache(maxsize=256)
def _vertex_masks(g: Graph) -> tuple:
    # low[v]: edges where v is the smaller endpoint; high[v]: the larger one
    low = [0] * (g.n + 1)
    high = [0] * (g.n + 1)
    for k, (i, j) in enumerate(g.edges):
        low[i] |= 1 << k
        high[j] |= 1 << k
    return tuple(low), tuple(high)


@lru_cache(maxsize=256)
def _edge_index(g: Graph) -> dict:
    return {e: k for k, e in enumerate(g.edges)}


def _is_acyclic_bits(g: Graph, bits: int) -> bool:
    indeg = [0] * (g.n + 1)
    out = [[] for _ in range(g.n + 1)]
    for k, (i, j) in enumerate(g.edges):
        a, b = (j, i) if bits >> k & 1 else (i, j)
        out[a].append(b)
        indeg[b] += 1
    ready = [v for v in g.vertices if indeg[v] == 0]
    seen = 0
    while ready:
        v = ready.pop()
        seen += 1
        for w in out[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
    return seen == g.n


@dataclass(frozen=True)
class AcyclicOrientation:
    base: Graph
    bits: int

    def __post_init__(self):
        if self.base.loops:
            raise ContractError("a graph with a loop has no acyclic orientation")
        if not 0 <= self.bits < (1 << self.base.m):
            raise ContractError(f"orientation code {self.bits} out of range")
        if not _is_acyclic_bits(self.base, self.bits):
            raise ContractError(f"orientation code {self.bits} contains a directed cycle")

    @classmethod
    def from_arcs(cls, base: Graph, arcs) -> "AcyclicOrientation":
        index = _edge_index(base)
        bits = 0
        seen = set()
        for a, b in arcs:
            key = (min(a, b), max(a, b))
            if key not in index or key in seen:
                raise ContractError(f"arc {(a, b)} is not a (unique) base edge")
            seen.add(key)
            if a > b:
                bits |= 1 << index[key]
        if len(seen) != base.m:
            raise ContractError("every base edge needs exactly one direction")
        return cls(base, bits)

    @property
    def arcs(self) -> tuple:
        return tuple(
            (j, i) if self.bits >> k & 1 else (i, j) for k, (i, j) in enumerate(self.base.edges)
        )

    def is_source(self, v: int) -> bool:
        low, high = _vertex_masks(self.base)
        return (self.bits & low[v]) == 0 and (self.bits & high[v]) == high[v]

    def is_sink(self, v: int) -> bool:
        low, high = _vertex_masks(self.base)
        return (self.bits & low[v]) == low[v] and (self.bits & high[v]) == 0

    def sources(self) -> tuple:
        return tuple(v for v in self.base.vertices if self.is_source(v))

    def act(self, gamma: VertexPermutation) -> "AcyclicOrientation":
        """Image under a graph automorphism: arc ``a -> b`` becomes ``gamma(a) -> gamma(b)``."""
        return AcyclicOrientation.from_arcs(self.base, [(gamma(a), gamma(b)) for a, b in self.arcs])


@dataclass(frozen=True)
class OrientationClass:
    representative: AcyclicOrientation
    members: tuple
    relation: str

    @property
    def size(self) -> int:
        return len(self.members)


def _check_permutation(pi: Sequence[int], n: int) -> tuple:
    pi = tuple(int(v) for v in pi)
    if sorted(pi) != list(range(1, n + 1)):
        raise ContractError(f"{pi} is not a permutation of 1..{n}")
    return pi


def orientation_of(pi: Sequence[int], g: Graph) -> AcyclicOrientation:
    """Orient each edge from the endpoint that occurs first in ``pi``."""
    pi = _check_permutation(pi, g.n)
    pos = {v: k for k, v in enumerate(pi)}
    bits = 0
    for k, (i, j) in enumerate(g.edges):
        if pos[j] < pos[i]:
            bits |= 1 << k
    return AcyclicOrientation(g, bits)


def linear_extensions(o: AcyclicOrientation) -> list:
    """All permutations inducing ``o``, in lexicographic order."""
    g = o.base
    preds = [0] * (g.n + 1)
    succ = [[] for _ in range(g.n + 1)]
    for a, b in o.arcs:
        preds[b] += 1
        succ[a].append(b)
    out = []
    prefix = []
    placed = [False] * (g.n + 1)

    def extend():
        if len(prefix) == g.n:
            out.append(tuple(prefix))
            return
        for v in g.vertices:
            if placed[v] or preds[v]:
                continue
            placed[v] = True
            prefix.append(v)
            for w in succ[v]:
                preds[w] -= 1
            extend()
            for w in succ[v]:
                preds[w] += 1
            prefix.pop()
            placed[v] = False

    extend()
    return out


def one_linear_extension(o: AcyclicOrientation) -> tuple:
    """Lexicographically smallest linear extension."""
    g = o.base
    preds = [0] * (g.n + 1)
    succ = [[] for _ in range(g.n + 1)]
    for a, b in o.arcs:
        preds[b] += 1
        succ[a].append(b)
    order = []
    placed = [False] * (g.n + 1)
    for _ in range(g.n):
        v = next(v for v in g.vertices if not placed[v] and preds[v] == 0)
        placed[v] = True
        order.append(v)
        for w in succ[v]:
            preds[w] -= 1
    return tuple(order)


def enumerate_acyc(g: Graph, limit: int | None = None) -> list:
    """Every acyclic orientation of ``g`` exactly once, ordered by encoding.

    Edges are oriented one at a time, refusing any direction that would close
    a directed cycle. A partial acyclic orientation always extends, so every
    leaf of the search is a valid orientation.
    """
    limit = DEFAULT_LIMITS.edges if limit is None else limit
    if g.m > limit:
        raise CapacityError(f"{g.m} edges exceeds enumeration limit {limit} (raise edges)", "edges")
    if g.loops:
        return []
    out_arcs = [[] for _ in range(g.n + 1)]
    codes = []

    def reaches(src, dst):
        stack = [src]
        seen = {src}
        while stack:
            v = stack.pop()
            if v == dst:
                return True
            for w in out_arcs[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return False

    def assign(k, bits):
        if k == g.m:
            codes.append(bits)
            return
        i, j = g.edges[k]
        if not reaches(j, i):
            out_arcs[i].append(j)
            assign(k + 1, bits)
            out_arcs[i].pop()
        if not reaches(i, j):
            out_arcs[j].append(i)
            assign(k + 1, bits | 1 << k)
            out_arcs[j].pop()

    assign(0, 0)
    codes.sort()
    # bypass per-object revalidation: every code is acyclic by construction
    result = []
    for c in codes:
        o = object.__new__(AcyclicOrientation)
        object.__setattr__(o, "base", g)
        object.__setattr__(o, "bits", c)
        result.append(o)
    return result


def tutte(g: Graph, x: int, y: int) -> int:
    """Exact value of the Tutte polynomial ``T_g(x, y)`` at an integer point.

    Deletion-contraction on the lowest non-loop edge, memoised on the sorted
    edge multiset of each minor. Loops contribute a factor ``y``, bridges ``x``.
    """
    memo = {}

    def t(edges):
        if not edges:
            return 1
        hit = memo.get(edges)
        if hit is not None:
            return hit
        (u, v), rest = edges[0], edges[1:]
        loops = 0
        contracted = []
        for a, b in rest:
            a = u if a == v else a
            b = u if b == v else b
            if a == b:
                loops += 1
            else:
                contracted.append((min(a, b), max(a, b)))
        contracted = tuple(sorted(contracted))
        if _is_bridge(rest, u, v):
            value = x * y**loops * t(contracted)
        else:
            value = t(rest) + y**loops * t(contracted)
        memo[edges] = value
        return value

    return y ** len(g.loops) * t(tuple(g.edges))


def _is_bridge(rest, u, v) -> bool:
    adj = {}
    for a, b in rest:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    stack = [u]
    seen = {u}
    while stack:
        w = stack.pop()
        if w == v:
            return False
        for z in adj.get(w, ()):
            if z not in seen:
                seen.add(z)
                stack.append(z)
    return True


def alpha(g: Graph) -> int:
    """Number of acyclic orientations, ``T(2, 0)``."""
    return tutte(g, 2, 0)


def kappa(g: Graph) -> int:
    """Number of click classes of acyclic orientations, ``T(1, 0)``."""
    return tutte(g, 1, 0)


def click(o: AcyclicOrientation, v: int) -> AcyclicOrientation:
    """Reverse every edge at the source ``v``, turning it into a sink."""
    if not 1 <= v <= o.base.n:
        raise ContractError(f"vertex {v} outside 1..{o.base.n}")
    if not o.is_source(v):
        raise ContractError(f"vertex {v} is not a source")
    low, high = _vertex_masks(o.base)
    return _trusted(o.base, o.bits ^ (low[v] | high[v]))


def _trusted(g, bits):
    o = object.__new__(AcyclicOrientation)
    object.__setattr__(o, "base", g)
    object.__setattr__(o, "bits", bits)
    return o


def _click_neighbours(g: Graph, bits: int):
    low, high = _vertex_masks(g)
    for v in g.vertices:
        if (bits & low[v]) == 0 and (bits & high[v]) == high[v]:
            yield bits ^ (low[v] | high[v])


def kappa_classes(g: Graph, limit: int | None = None) -> list:
    """Partition of the acyclic orientations into click classes (BFS closure)."""
    orientations = enumerate_acyc(g, limit)
    seen = set()
    classes = []
    for o in orientations:
        if o.bits in seen:
            continue
        seen.add(o.bits)
        members = [o.bits]
        frontier = [o.bits]
        while frontier:
            nxt = []
            for b in frontier:
                for c in _click_neighbours(g, b):
                    if c not in seen:
                        seen.add(c)
                        members.append(c)
                        nxt.append(c)
            frontier = nxt
        members.sort()
        classes.append(_make_class(g, members, "kappa"))
    classes.sort(key=lambda c: c.representative.bits)
    return classes


def _make_class(g, codes, relation):
    members = tuple(_trusted(g, b) for b in sorted(codes))
    return OrientationClass(members[0], members, relation)


def kappa_transversal(g: Graph, v: int, limit: int | None = None) -> list:
    """Acyclic orientations in which ``v`` is the unique source."""
    if not 1 <= v <= g.n:
        raise ContractError(f"vertex {v} outside 1..{g.n}")
    if not g.is_connected():
        raise DomainError(
            "graph is disconnected: every component needs its own source, "
            "so no orientation has a unique source"
        )
    return [o for o in enumerate_acyc(g, limit) if o.sources() == (v,)]


def _aut_action_table(g, codes, group):
    index = {b: k for k, b in enumerate(codes)}
    images = []
    for gamma in group:
        row = []
        for b in codes:
            row.append(index[_trusted(g, b).act(gamma).bits])
        images.append(row)
    return images


def _orbits(size, images):
    parent = list(range(size))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for row in images:
        for a, b in enumerate(row):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups = {}
    for a in range(size):
        groups.setdefault(find(a), []).append(a)
    return [groups[r] for r in sorted(groups)]


def _burnside_alpha_bar(g: Graph, group) -> int:
    total = sum(alpha(orbit_graph(g, gamma)) for gamma in group)
    quotient, remainder = divmod(total, len(group))
    if remainder:
        raise CrossCheckError(f"Burnside sum {total} not divisible by |Aut| = {len(group)}")
    return quotient


def alpha_bar_classes(g: Graph, limits=None) -> list:
    """Orbits of the automorphism group on the acyclic orientations."""
    limits = limits or DEFAULT_LIMITS
    group = automorphisms(g, limits.aut_vertices)
    codes = [o.bits for o in enumerate_acyc(g, limits.edges)]
    orbits = _orbits(len(codes), _aut_action_table(g, codes, group))
    return [_make_class(g, [codes[k] for k in orb], "alpha-bar") for orb in orbits]


def alpha_bar(g: Graph, limits=None, cross_check: bool = True) -> int:
    """Orbit count of ``Aut(g)`` on acyclic orientations via Burnside's lemma.

    Each automorphism contributes the acyclic-orientation count of its orbit
    graph. With ``cross_check`` the orbits are also counted directly and any
    disagreement raises :class:`CrossCheckError`.
    """
    limits = limits or DEFAULT_LIMITS
    group = automorphisms(g, limits.aut_vertices)
    value = _burnside_alpha_bar(g, group)
    if cross_check and g.m <= limits.edges:
        direct = len(alpha_bar_classes(g, limits))
        if direct != value:
            raise CrossCheckError(f"Burnside gives {value} but direct orbit count is {direct}")
    return value


def kappa_bar_classes(g: Graph, limits=None) -> list:
    """Orbits of ``Aut(g)`` on click classes, merged into orientation classes."""
    limits = limits or DEFAULT_LIMITS
    group = automorphisms(g, limits.aut_vertices)
    classes = kappa_classes(g, limits.edges)
    class_of = {}
    for k, cls in enumerate(classes):
        for o in cls.members:
            class_of[o.bits] = k
    rows = []
    for gamma in group:
        row = []
        for cls in classes:
            targets = {class_of[o.act(gamma).bits] for o in cls.members}
            if len(targets) != 1:
                raise CrossCheckError("automorphism action on click classes is not well defined")
            row.append(targets.pop())
        rows.append(row)
    orbits = _orbits(len(classes), rows)
    merged = []
    for orb in orbits:
        codes = [o.bits for k in orb for o in classes[k].members]
        merged.append(_make_class(g, codes, "kappa-bar"))
    return merged


def kappa_bar(g: Graph, limits=None) -> int:
    return len(kappa_bar_classes(g, limits))


def count_report(g: Graph, limits=None) -> dict:
    """All four counts plus the agreement status of the independent routes."""
    limits = limits or DEFAULT_LIMITS
    a, k = alpha(g), kappa(g)
    orientations = enumerate_acyc(g, limits.edges)
    kclasses = kappa_classes(g, limits.edges)
    group = automorphisms(g, limits.aut_vertices)
    burnside = _burnside_alpha_bar(g, group)
    aclasses = alpha_bar_classes(g, limits)
    kbar = kappa_bar_classes(g, limits)
    checks = {
        "alpha_tutte_vs_enumeration": a == len(orientations),
        "kappa_tutte_vs_click_classes": k == len(kclasses),
        "alpha_bar_burnside_vs_orbits": burnside == len(aclasses),
        "kappa_bar_le_kappa": len(kbar) <= k,
    }
    return {
        "alpha": a,
        "kappa": k,
        "alpha_bar": burnside,
        "kappa_bar": len(kbar),
        "aut_order": len(group),
        "class_sizes": {
            "kappa": [c.size for c in kclasses],
            "alpha_bar": [c.size for c in aclasses],
            "kappa_bar": [c.size for c in kbar],
        },
        "cross_checks": checks,
    }


def orientation_to_dot(o: AcyclicOrientation, name: str = "O") -> str:
    lines = [f"digraph {name} {{"]
    lines += [f"  {v};" for v in o.base.vertices]
    lines += [f"  {a} -> {b};" for a, b in o.arcs]
    lines.append("}")
    return "\n".join(lines) + "\n"
