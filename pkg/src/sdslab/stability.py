"""Update-order stability measures: limit-set reachability, word independence, rho."""

from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .engine import (
    FunctionSequence,
    all_permutations,
    build_map,
    eca_vertex_functions,
    permutation_transversal,
    sample_complete_words,
    threshold_functions,
)
from .exceptions import ContractError
from .graph import star
from .phase_space import phase_spaces

__all__ = [
    "OmegaReport",
    "WordPolicy",
    "WordIndependenceReport",
    "ScanRow",
    "periodic_states",
    "omega_limit",
    "omega_union",
    "omega_report",
    "omega_max",
    "word_independent",
    "rho",
    "periodic_set_bounds",
    "eca_scan",
    "scan_to_csv",
    "star_convention",
]


def periodic_states(table) -> np.ndarray:
    """Sorted periodic states: the image of ``t^(2^k)`` with ``2^k >= |states|``."""
    t = np.asarray(table, dtype=np.int64)
    steps = 1
    while steps < len(t):
        t = t[t]
        steps *= 2
    return np.unique(t)


def omega_limit(table, x: int) -> tuple:
    """Periodic states of the cycle eventually entered from ``x``."""
    t = np.asarray(table)
    seen = {}
    path = []
    while x not in seen:
        seen[x] = len(path)
        path.append(x)
        x = int(t[x])
    return tuple(sorted(path[seen[x]:]))


def _family(F: FunctionSequence, words):
    if words is None:
        return permutation_transversal(F.base)
    words = [tuple(w) for w in words]
    if not words:
        raise ContractError("sequence family must be non-empty")
    return words


def omega_union(F: FunctionSequence, x: int, words=None) -> tuple:
    """Union over ``words`` of the limit sets reached from state ``x``.

    ``words`` defaults to one permutation per acyclic orientation, which gives
    the same union as all permutations.
    """
    out = set()
    for w in _family(F, words):
        out.update(omega_limit(build_map(F, w), x))
    return tuple(sorted(out))


@dataclass
class OmegaReport:
    per_state: dict
    omega_max: int
    argmax: tuple
    family_size: int

    def as_dict(self) -> dict:
        return {
            "per_state": {str(k): list(v) for k, v in self.per_state.items()},
            "omega_max": self.omega_max,
            "argmax": list(self.argmax),
            "family_size": self.family_size,
        }


def omega_report(F: FunctionSequence, words=None, jobs: int = 1) -> OmegaReport:
    words = _family(F, words)
    masks = [0] * F.num_states
    for ph in phase_spaces(F, words, jobs):
        cyc_masks = []
        for cyc in ph.cycles:
            m = 0
            for s in cyc:
                m |= 1 << s
            cyc_masks.append(m)
        for x, a in enumerate(ph.attractor.tolist()):
            masks[x] |= cyc_masks[a]
    per_state = {x: tuple(_bits(m)) for x, m in enumerate(masks)}
    sizes = [bin(m).count("1") for m in masks]
    best = max(sizes)
    argmax = tuple(x for x, s in enumerate(sizes) if s == best)
    return OmegaReport(per_state, best, argmax, len(words))


def _bits(m):
    k = 0
    while m:
        if m & 1:
            yield k
        m >>= 1
        k += 1


def omega_max(F: FunctionSequence, words=None, jobs: int = 1) -> tuple:
    """``(value, argmax states)``: the largest number of periodic states reachable from one state."""
    rep = omega_report(F, words, jobs)
    return rep.omega_max, rep.argmax


def star_convention(n: int, jobs: int = 1) -> dict:
    """Decide which star reading matches ``2^n - n`` for 2-threshold functions.

    ``"vertices"`` counts the centre among the ``n``; ``"leaves"`` means ``n``
    leaves plus a centre. Both are brute-forced.
    """
    target = 2**n - n
    as_vertices = omega_max(threshold_functions(star(n), 2), jobs=jobs)[0]
    as_leaves = omega_max(threshold_functions(star(n + 1), 2), jobs=jobs)[0]
    matches = [name for name, v in (("vertices", as_vertices), ("leaves", as_leaves)) if v == target]
    return {"n": n, "expected": target, "vertices": as_vertices, "leaves": as_leaves, "matches": matches}


@dataclass(frozen=True)
class WordPolicy:
    """Which update words to test.

    ``transversal`` uses one permutation per acyclic orientation,
    ``permutations`` all of them, ``sampled`` the transversal plus ``count``
    seeded random complete words of length at most ``max_length``, and
    ``explicit`` exactly ``words``.
    """

    kind: str = "transversal"
    count: int = 200
    max_length: int | None = None
    seed: int = 0
    words: tuple = ()

    def resolve(self, F: FunctionSequence) -> list:
        if self.kind == "transversal":
            return permutation_transversal(F.base)
        if self.kind == "permutations":
            return all_permutations(F.n)
        if self.kind == "sampled":
            return permutation_transversal(F.base) + sample_complete_words(
                F.n, self.count, self.max_length, self.seed
            )
        if self.kind == "explicit":
            if not self.words:
                raise ContractError("explicit policy needs words")
            return [tuple(w) for w in self.words]
        raise ContractError(f"unknown word policy {self.kind!r}")

    def describe(self, n: int) -> str:
        if self.kind == "sampled":
            length = 2 * n if self.max_length is None else self.max_length
            return f"sampled:count={self.count},max_length={length},seed={self.seed}+transversal"
        if self.kind == "explicit":
            return f"explicit:{len(self.words)}"
        return self.kind


@dataclass
class WordIndependenceReport:
    verdict: str
    policy: str
    words_tested: int
    periodic_sizes: list
    witness: tuple | None = None
    periodic_union: int = 0
    periodic_common: int = 0

    @property
    def independent(self) -> bool:
        return self.verdict == "independent-over-tested-words"

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "policy": self.policy,
            "words_tested": self.words_tested,
            "periodic_sizes": self.periodic_sizes,
            "witness": [list(w) for w in self.witness] if self.witness else None,
            "periodic_union": self.periodic_union,
            "periodic_common": self.periodic_common,
        }


def _periodic_sets(F, words, jobs=1):
    def one(w):
        return frozenset(periodic_states(build_map(F, w)).tolist())

    if jobs <= 1:
        return [one(w) for w in words]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(one, words))


def word_independent(F: FunctionSequence, policy: WordPolicy | None = None, jobs: int = 1) -> WordIndependenceReport:
    """Compare periodic-state sets over the words selected by ``policy``.

    A positive verdict only covers the tested words; it is a necessary
    condition for independence over all complete words.
    """
    policy = policy or WordPolicy()
    words = policy.resolve(F)
    sets = _periodic_sets(F, words, jobs)
    witness = None
    for w, s in zip(words, sets):
        if s != sets[0]:
            witness = (words[0], w)
            break
    union = frozenset().union(*sets)
    common = frozenset.intersection(*sets)
    return WordIndependenceReport(
        verdict="dependent" if witness else "independent-over-tested-words",
        policy=policy.describe(F.n),
        words_tested=len(words),
        periodic_sizes=[len(s) for s in sets],
        witness=witness,
        periodic_union=len(union),
        periodic_common=len(common),
    )


def rho(F: FunctionSequence, words=None, jobs: int = 1) -> Fraction:
    """States periodic under every permutation over those periodic under some permutation."""
    sets = _periodic_sets(F, _family(F, words), jobs)
    return Fraction(len(frozenset.intersection(*sets)), len(frozenset().union(*sets)))


def periodic_set_bounds(F: FunctionSequence, words=None) -> tuple:
    sets = _periodic_sets(F, _family(F, words))
    return min(map(len, sets)), max(map(len, sets))


@dataclass(frozen=True)
class ScanRow:
    rule: int
    n: int
    verdict: str
    rho: Fraction
    per_size_min: int
    per_size_max: int

    @property
    def passed(self) -> bool:
        return self.verdict == "independent-over-tested-words"


@dataclass
class ScanResult:
    rows: list
    ns: tuple
    pass_counts: dict = field(default_factory=dict)
    pass_all: tuple = ()

    def as_dict(self) -> dict:
        return {
            "ns": list(self.ns),
            "pass_counts": {str(n): c for n, c in self.pass_counts.items()},
            "pass_all_count": len(self.pass_all),
            "pass_all": list(self.pass_all),
        }


def _scan_rule(rule, n, words):
    F = eca_vertex_functions(rule, n)
    sets = _periodic_sets(F, words)
    common = frozenset.intersection(*sets)
    union = frozenset().union(*sets)
    sizes = [len(s) for s in sets]
    verdict = "independent-over-tested-words" if len(common) == len(union) else "dependent"
    return ScanRow(rule, n, verdict, Fraction(len(common), len(union)), min(sizes), max(sizes))


def eca_scan(ns=(4, 5, 6), jobs: int = 1, rules=range(256)) -> ScanResult:
    """Permutation-independence verdict and rho for every ECA rule on ``circ(n)``."""
    ns = tuple(ns)
    rules = list(rules)
    for n in ns:
        if not 4 <= n <= 8:
            raise ContractError(f"scan sizes must lie in 4..8, got {n}")
    rows = []
    for n in ns:
        words = permutation_transversal(eca_vertex_functions(0, n).base)
        if jobs <= 1:
            rows += [_scan_rule(r, n, words) for r in rules]
        else:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                rows += list(pool.map(lambda r: _scan_rule(r, n, words), rules))
    counts = {n: sum(r.passed for r in rows if r.n == n) for n in ns}
    passing = set(rules)
    for r in rows:
        if not r.passed:
            passing.discard(r.rule)
    return ScanResult(rows, ns, counts, tuple(sorted(passing)))


def scan_to_csv(result: ScanResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["rule", "n", "verdict", "rho", "per_size_min", "per_size_max"])
    for r in result.rows:
        writer.writerow([r.rule, r.n, r.verdict, f"{r.rho.numerator}/{r.rho.denominator}", r.per_size_min, r.per_size_max])
    return buf.getvalue()
