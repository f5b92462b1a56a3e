"""Phase spaces of finite maps and the three equivalence relations on them."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .config import DEFAULT_LIMITS
from .engine import FunctionSequence, build_map
from .exceptions import CapacityError, ContractError
from .orientations import orientation_of

__all__ = [
    "PhaseSpace",
    "EquivalenceClass",
    "RELATIONS",
    "build_phase_space",
    "functionally_equal",
    "dynamically_equivalent",
    "canonical_form",
    "cycle_type",
    "cycle_equivalent",
    "classify",
    "classification_report",
    "phase_space_to_dot",
]

RELATIONS = ("functional", "dynamical", "cycle")


@dataclass(eq=False)
class PhaseSpace:
    """Functional graph of a map table.

    Attributes
    ----------
    table : ndarray
        ``table[x]`` is the image of state ``x``.
    periodic : tuple
        Sorted indices of states lying on cycles.
    cycles : tuple
        Each cycle as an index sequence in map order, rotated to start at its
        smallest state; cycles are ordered by that first state.
    depth : ndarray
        Number of steps from each state to the periodic set.
    attractor : ndarray
        Position in ``cycles`` of the cycle each state eventually enters.
    """

    table: np.ndarray
    periodic: tuple
    cycles: tuple
    depth: np.ndarray
    attractor: np.ndarray
    _canonical: bytes | None = field(default=None, repr=False)

    @property
    def size(self) -> int:
        return len(self.table)

    @property
    def periodic_set(self) -> frozenset:
        return frozenset(self.periodic)

    @property
    def fixed_points(self) -> tuple:
        return tuple(c[0] for c in self.cycles if len(c) == 1)


def _as_table(table) -> np.ndarray:
    t = np.asarray(table, dtype=np.int64)
    if t.ndim != 1:
        raise ContractError("map table must be one-dimensional")
    if len(t) and (t.min() < 0 or t.max() >= len(t)):
        raise ContractError("map table entries must index the state space")
    return t


def build_phase_space(table, limit: int | None = None) -> PhaseSpace:
    limit = DEFAULT_LIMITS.states if limit is None else limit
    t = _as_table(table)
    size = len(t)
    if size > limit:
        raise CapacityError(f"phase space of {size} states exceeds limit {limit} (raise states)", "states")

    # peel states of in-degree zero until only cycles remain
    indeg = np.bincount(t, minlength=size)
    alive = np.ones(size, dtype=bool)
    frontier = np.flatnonzero(indeg == 0)
    while frontier.size:
        alive[frontier] = False
        targets = t[frontier]
        np.subtract.at(indeg, targets, 1)
        targets = np.unique(targets)
        frontier = targets[(indeg[targets] == 0) & alive[targets]]
    periodic = np.flatnonzero(alive)

    cycles = []
    attractor = np.full(size, -1, dtype=np.int64)
    for s in periodic.tolist():
        if attractor[s] >= 0:
            continue
        cyc = [s]
        attractor[s] = len(cycles)
        x = int(t[s])
        while x != s:
            cyc.append(x)
            attractor[x] = len(cycles)
            x = int(t[x])
        cycles.append(tuple(cyc))  # starts at its smallest state: periodic is ascending

    depth = np.zeros(size, dtype=np.int64)
    known = alive.copy()
    level = 0
    while not known.all():
        level += 1
        step = ~known & known[t]
        idx = np.flatnonzero(step)
        depth[idx] = level
        attractor[idx] = attractor[t[idx]]
        known[idx] = True
    return PhaseSpace(t, tuple(periodic.tolist()), tuple(cycles), depth, attractor)


def _phase(obj) -> PhaseSpace:
    return obj if isinstance(obj, PhaseSpace) else build_phase_space(obj)


def functionally_equal(a, b) -> bool:
    ta = a.table if isinstance(a, PhaseSpace) else _as_table(a)
    tb = b.table if isinstance(b, PhaseSpace) else _as_table(b)
    if len(ta) != len(tb):
        raise ContractError(f"state spaces differ in size: {len(ta)} vs {len(tb)}")
    return bool(np.array_equal(ta, tb))


def _least_rotation(seq: Sequence[int]) -> int:
    """Start index of the lexicographically least rotation (Booth)."""
    s = list(seq) * 2
    n = len(seq)
    fail = [-1] * len(s)
    k = 0
    for j in range(1, len(s)):
        sj = s[j]
        i = fail[j - k - 1]
        while i != -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j - i - 1
            i = fail[i]
        if sj != s[k + i + 1]:
            if sj < s[k]:
                k = j
            fail[j - k] = -1
        else:
            fail[j - k] = i + 1
    return k % n if n else 0


def canonical_form(p) -> bytes:
    """Isomorphism-invariant encoding of a phase space.

    Transient trees hanging off each periodic state are encoded as nested
    parentheses with children sorted; each cycle lists its tree encodings in
    map order starting from the least rotation; cycles are sorted by
    ``(length, encoding)`` and concatenated. Two maps get equal encodings
    exactly when their phase spaces are isomorphic.
    """
    p = _phase(p)
    if p._canonical is not None:
        return p._canonical
    t = p.table
    children: dict = {}
    transient = np.flatnonzero(p.depth > 0)
    for x in transient.tolist():
        children.setdefault(int(t[x]), []).append(x)
    enc = {}
    order = transient[np.argsort(-p.depth[transient], kind="stable")].tolist()
    for x in order + list(p.periodic):
        kids = children.get(x)
        enc[x] = "(" + "".join(sorted(enc[c] for c in kids)) + ")" if kids else "()"
    ranks = {s: r for r, s in enumerate(sorted(set(enc[c] for c in p.periodic)))}
    parts = []
    for cyc in p.cycles:
        start = _least_rotation([ranks[enc[c]] for c in cyc])
        rotated = cyc[start:] + cyc[:start]
        parts.append((len(cyc), "[" + "".join(enc[c] for c in rotated) + "]"))
    parts.sort()
    p._canonical = "".join(s for _, s in parts).encode("ascii")
    return p._canonical


def dynamically_equivalent(a, b) -> bool:
    return canonical_form(a) == canonical_form(b)


def cycle_type(p) -> tuple:
    """Cycle lengths of the periodic part, sorted descending."""
    return tuple(sorted((len(c) for c in _phase(p).cycles), reverse=True))


def cycle_equivalent(a, b) -> bool:
    """Periodic restrictions are permutations, conjugate iff their cycle types agree."""
    return cycle_type(a) == cycle_type(b)


@dataclass
class EquivalenceClass:
    relation: str
    representative: tuple
    members: list
    cycle_type: tuple
    orientation: tuple | None = None

    @property
    def size(self) -> int:
        return len(self.members)

    def as_dict(self) -> dict:
        return {
            "representative_word": list(self.representative),
            "orientation": [list(a) for a in self.orientation] if self.orientation is not None else None,
            "cycle_type": list(self.cycle_type),
            "size": self.size,
        }


def _key(relation, phase):
    if relation == "functional":
        return phase.table.tobytes()
    if relation == "dynamical":
        return canonical_form(phase)
    return cycle_type(phase)


def phase_spaces(F: FunctionSequence, words, jobs: int = 1, limit: int | None = None) -> list:
    """Phase space per word, in input order regardless of ``jobs``."""

    def one(word):
        return build_phase_space(build_map(F, word, limit), limit)

    if jobs <= 1 or len(words) < 2:
        return [one(w) for w in words]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(one, words))


def classify(F: FunctionSequence, words, relation: str = "functional", jobs: int = 1, limit: int | None = None) -> list:
    """Group update words by the chosen equivalence of their SDS maps.

    Classes appear in order of their first member in ``words``; that member
    is the representative.
    """
    if relation not in RELATIONS:
        raise ContractError(f"relation must be one of {RELATIONS}, got {relation!r}")
    words = [tuple(w) for w in words]
    if not words:
        raise ContractError("need at least one update word")
    phases = phase_spaces(F, words, jobs, limit)
    groups: dict = {}
    for w, ph in zip(words, phases):
        groups.setdefault(_key(relation, ph), []).append((w, ph))
    classes = []
    for members in groups.values():
        rep, ph = members[0]
        orient = None
        if sorted(rep) == list(range(1, F.n + 1)):
            orient = orientation_of(rep, F.base).arcs
        classes.append(EquivalenceClass(relation, rep, [w for w, _ in members], cycle_type(ph), orient))
    return classes


def classification_report(F: FunctionSequence, words, relation: str, jobs: int = 1, limit: int | None = None) -> dict:
    classes = classify(F, words, relation, jobs, limit)
    return {
        "relation": relation,
        "class_count": len(classes),
        "classes": [c.as_dict() for c in classes],
    }


def phase_space_to_dot(p, n: int, radix: int = 2, name: str = "Gamma") -> str:
    """Directed graph of ``x -> phi(x)``; nodes labelled by digit strings, vertex 1 first."""
    p = _phase(p)

    def label(idx):
        digits = []
        for _ in range(n):
            idx, d = divmod(idx, radix)
            digits.append(str(d))
        return '"' + "".join(digits) + '"'

    lines = [f"digraph {name} {{"]
    lines += [f"  {label(x)};" for x in range(p.size)]
    lines += [f"  {label(x)} -> {label(int(y))};" for x, y in enumerate(p.table)]
    lines.append("}")
    return "\n".join(lines) + "\n"
