"""Vertex functions, Y-local maps and SDS map composition.

States are tuples of alphabet values. A state of ``n`` vertices is indexed
little-endian in mixed radix: vertex 1 is the least significant digit, digit
``d`` of a vertex standing for ``alphabet[d]``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from .config import DEFAULT_LIMITS
from .exceptions import CapacityError, ContractError, ParseError
from .graph import Graph, circ
from .orientations import enumerate_acyc, one_linear_extension

__all__ = [
    "BOOLEAN",
    "FLN_ALPHABET",
    "VertexFunction",
    "FunctionSequence",
    "UpdateWord",
    "state_index",
    "state_values",
    "tabulate",
    "symmetric_functions",
    "threshold_functions",
    "eca_vertex_functions",
    "fln_vertex_functions",
    "parse_rule",
    "parse_weights",
    "local_apply",
    "sds_apply",
    "build_map",
    "permutation_transversal",
    "all_permutations",
    "sample_complete_words",
]

BOOLEAN = (0, 1)
FLN_ALPHABET = (-1, 0, 1)


@dataclass(frozen=True)
class VertexFunction:
    """Lookup-table vertex function.

    ``table[k]`` is the output digit for the argument digits of ``args`` encoded
    little-endian in base ``radix`` (``args[0]`` least significant).
    """

    vertex: int
    args: tuple
    table: tuple
    radix: int = 2
    family: str = "table"
    params: tuple = ()

    def __post_init__(self):
        if len(self.table) != self.radix ** len(self.args):
            raise ContractError(
                f"vertex {self.vertex}: table has {len(self.table)} entries, "
                f"expected {self.radix ** len(self.args)}"
            )
        if self.vertex not in self.args:
            raise ContractError(f"vertex {self.vertex} must read its own state")

    def evaluate(self, digits: Sequence[int]) -> int:
        code = 0
        for d in reversed(digits):
            code = code * self.radix + d
        return self.table[code]


@dataclass(frozen=True)
class FunctionSequence:
    base: Graph
    functions: tuple
    alphabet: tuple = BOOLEAN
    name: str = field(default="custom", compare=False)

    def __post_init__(self):
        if len(self.functions) != self.base.n:
            raise ContractError("need exactly one vertex function per vertex")
        for v, f in enumerate(self.functions, 1):
            if f.vertex != v:
                raise ContractError(f"function {v} is attached to vertex {f.vertex}")
            if f.radix != len(self.alphabet):
                raise ContractError(f"vertex {v}: radix {f.radix} does not match alphabet size")
            if not set(f.args) <= set(self.base.closed_neighborhood(v)):
                raise ContractError(f"vertex {v} reads outside its closed neighbourhood")

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def radix(self) -> int:
        return len(self.alphabet)

    @property
    def num_states(self) -> int:
        return self.radix**self.n

    def __getitem__(self, v: int) -> VertexFunction:
        return self.functions[v - 1]

    @cached_property
    def _digit_of(self) -> dict:
        return {a: d for d, a in enumerate(self.alphabet)}

    @cached_property
    def _tables(self) -> tuple:
        out = []
        for f in self.functions:
            cols = np.array([a - 1 for a in f.args], dtype=np.intp)
            weights = self.radix ** np.arange(len(f.args), dtype=np.int64)
            out.append((cols, weights, np.array(f.table, dtype=np.int8)))
        return tuple(out)

    def digits(self, x: Sequence) -> list:
        try:
            return [self._digit_of[v] for v in x]
        except KeyError as exc:
            raise ContractError(f"state value {exc.args[0]!r} not in alphabet {self.alphabet}") from None


def state_index(x: Sequence, alphabet: Sequence = BOOLEAN) -> int:
    digit = {a: d for d, a in enumerate(alphabet)}
    r = len(alphabet)
    idx = 0
    for v in reversed(x):
        idx = idx * r + digit[v]
    return idx


def state_values(idx: int, n: int, alphabet: Sequence = BOOLEAN) -> tuple:
    r = len(alphabet)
    if not 0 <= idx < r**n:
        raise ContractError(f"state index {idx} outside 0..{r**n - 1}")
    out = []
    for _ in range(n):
        idx, d = divmod(idx, r)
        out.append(alphabet[d])
    return tuple(out)


def tabulate(
    vertex: int,
    args: Sequence[int],
    fn: Callable[[tuple], object],
    alphabet: Sequence = BOOLEAN,
    family: str = "table",
    params: tuple = (),
) -> VertexFunction:
    """Build a :class:`VertexFunction` from a callable on argument values."""
    alphabet = tuple(alphabet)
    digit = {a: d for d, a in enumerate(alphabet)}
    r = len(alphabet)
    table = []
    for code in range(r ** len(args)):
        vals = []
        for _ in args:
            code, d = divmod(code, r)
            vals.append(alphabet[d])
        table.append(digit[fn(tuple(vals))])
    return VertexFunction(vertex, tuple(args), tuple(table), r, family, params)


_SYMMETRIC = {
    "nor": lambda ones, k: int(ones == 0),
    "nand": lambda ones, k: int(ones < k),
    "and": lambda ones, k: int(ones == k),
    "or": lambda ones, k: int(ones > 0),
    "parity": lambda ones, k: ones % 2,
    "majority": lambda ones, k: int(2 * ones > k),
    "minority": lambda ones, k: int(2 * ones < k),
    "identity": None,
}


def symmetric_functions(g: Graph, rule: str) -> FunctionSequence:
    """Same Boolean symmetric rule at every vertex over its closed neighbourhood.

    ``nor`` outputs 1 only when every argument is 0.
    """
    if rule not in _SYMMETRIC:
        raise ParseError(f"unknown symmetric rule {rule!r}")
    funcs = []
    for v in g.vertices:
        args = g.closed_neighborhood(v)
        if rule == "identity":
            pos = args.index(v)
            fn = lambda vals, pos=pos: vals[pos]
        else:
            count = _SYMMETRIC[rule]
            fn = lambda vals, count=count: count(sum(vals), len(vals))
        funcs.append(tabulate(v, args, fn, BOOLEAN, "symmetric-table", (rule,)))
    return FunctionSequence(g, tuple(funcs), BOOLEAN, rule)


def threshold_functions(g: Graph, m: int) -> FunctionSequence:
    """Output 1 iff at least ``m`` closed-neighbourhood arguments are 1."""
    funcs = tuple(
        tabulate(v, g.closed_neighborhood(v), lambda vals: int(sum(vals) >= m), BOOLEAN, "threshold", (m,))
        for v in g.vertices
    )
    return FunctionSequence(g, funcs, BOOLEAN, f"threshold:{m}")


def eca_vertex_functions(rule: int, n: int) -> FunctionSequence:
    """Elementary CA rule (Wolfram numbering) at every vertex of ``circ(n)``.

    Vertex ``i`` reads ``(x_{i-1}, x_i, x_{i+1})`` cyclically and outputs bit
    ``4*x_{i-1} + 2*x_i + x_{i+1}`` of ``rule``.
    """
    if not 0 <= rule <= 255:
        raise ContractError(f"ECA rule {rule} outside 0..255")
    g = circ(n)
    funcs = []
    for i in g.vertices:
        left, right = (i - 2) % n + 1, i % n + 1
        fn = lambda vals: (rule >> (4 * vals[0] + 2 * vals[1] + vals[2])) & 1
        funcs.append(tabulate(i, (left, i, right), fn, BOOLEAN, "eca", (rule,)))
    return FunctionSequence(g, tuple(funcs), BOOLEAN, f"eca:{rule}")


def fln_vertex_functions(g: Graph, weights: dict, threshold, include_self: bool = False) -> FunctionSequence:
    """Weighted-threshold rule over states ``{1, -1, 0}``.

    Vertex ``i`` becomes 1 if the weighted sum of its neighbours' states is at
    least ``threshold`` and -1 otherwise. ``weights`` maps edges ``(i, j)`` to
    rationals; with ``include_self`` the key ``(i, i)`` gives the self weight
    (0 when absent).
    """
    threshold = Fraction(threshold)
    w = {}
    for (i, j), value in weights.items():
        w[(min(i, j), max(i, j))] = Fraction(value)
    for e in g.edges:
        if e not in w:
            raise ContractError(f"missing weight for edge {e}")
    funcs = []
    for v in g.vertices:
        args = g.closed_neighborhood(v)
        coeffs = []
        for a in args:
            if a == v:
                coeffs.append(w.get((v, v), Fraction(0)) if include_self else Fraction(0))
            else:
                coeffs.append(w[(min(a, v), max(a, v))])
        fn = lambda vals, coeffs=tuple(coeffs): 1 if sum(c * x for c, x in zip(coeffs, vals)) >= threshold else -1
        funcs.append(tabulate(v, args, fn, FLN_ALPHABET, "fln", (str(threshold),)))
    return FunctionSequence(g, tuple(funcs), FLN_ALPHABET, f"fln:{threshold}")


def parse_weights(text: str) -> dict:
    """Weights file: lines ``i j w`` with ``w`` an integer, decimal or ``p/q``."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) != 3:
            raise ParseError(f"line {lineno}: expected 'i j w', got {raw!r}")
        try:
            i, j, value = int(tokens[0]), int(tokens[1]), Fraction(tokens[2])
        except ValueError:
            raise ParseError(f"line {lineno}: cannot parse {raw!r}") from None
        out[(min(i, j), max(i, j))] = value
    return out


def parse_rule(spec: str, g: Graph, weights: dict | None = None) -> FunctionSequence:
    """Build a function sequence from the rule mini-language.

    ``nor``, ``nand``, ``and``, ``or``, ``parity``, ``majority``, ``minority``,
    ``identity``, ``threshold:m``, ``eca:R`` (base graph must be ``circ(n)``),
    ``fln:T`` (needs ``weights``; all-ones when omitted).
    """
    name, _, arg = spec.strip().partition(":")
    name = name.lower()
    if name in _SYMMETRIC:
        if arg:
            raise ParseError(f"rule {name!r} takes no argument")
        return symmetric_functions(g, name)
    try:
        if name == "threshold":
            return threshold_functions(g, int(arg))
        if name == "eca":
            rule = int(arg)
            if g.n < 3 or g != circ(g.n):
                raise ContractError("eca rules are defined over circ(n) only")
            return eca_vertex_functions(rule, g.n)
        if name == "fln":
            if weights is None:
                weights = {e: 1 for e in g.edges}
            return fln_vertex_functions(g, weights, Fraction(arg))
    except (ValueError, ArithmeticError) as exc:
        if isinstance(exc, ContractError):
            raise
        raise ParseError(f"bad rule argument in {spec!r}") from None
    raise ParseError(f"unknown rule {spec!r}")


@dataclass(frozen=True)
class UpdateWord:
    letters: tuple
    n: int

    def __post_init__(self):
        letters = tuple(int(v) for v in self.letters)
        if not letters:
            raise ContractError("update word must be non-empty")
        bad = [v for v in letters if not 1 <= v <= self.n]
        if bad:
            raise ContractError(f"letters {bad} outside 1..{self.n}")
        object.__setattr__(self, "letters", letters)

    @property
    def is_permutation(self) -> bool:
        return sorted(self.letters) == list(range(1, self.n + 1))

    @property
    def is_complete(self) -> bool:
        return set(self.letters) == set(range(1, self.n + 1))

    def __iter__(self):
        return iter(self.letters)

    def __len__(self):
        return len(self.letters)


def _letters(word, n):
    if isinstance(word, UpdateWord):
        return word.letters
    return UpdateWord(tuple(word), n).letters


def local_apply(F: FunctionSequence, i: int, x: Sequence) -> tuple:
    """Replace coordinate ``i`` of ``x`` by ``f_i`` of its arguments."""
    if not 1 <= i <= F.n:
        raise ContractError(f"vertex {i} outside 1..{F.n}")
    if len(x) != F.n:
        raise ContractError(f"state has length {len(x)}, expected {F.n}")
    digits = F.digits(x)
    f = F[i]
    out = list(x)
    out[i - 1] = F.alphabet[f.evaluate([digits[a - 1] for a in f.args])]
    return tuple(out)


def sds_apply(F: FunctionSequence, word, x: Sequence) -> tuple:
    """Apply the local maps along ``word``, first letter first."""
    for i in _letters(word, F.n):
        x = local_apply(F, i, x)
    return tuple(x)


def _check_states(F, limit):
    limit = DEFAULT_LIMITS.states if limit is None else limit
    if F.num_states > limit:
        raise CapacityError(
            f"state space of {F.num_states} exceeds limit {limit} (raise states)", "states"
        )


def all_digits(F: FunctionSequence) -> np.ndarray:
    """``(num_states, n)`` digit matrix, row ``k`` being state index ``k``."""
    idx = np.arange(F.num_states, dtype=np.int64)
    cols = [(idx // F.radix**v) % F.radix for v in range(F.n)]
    return np.stack(cols, axis=1).astype(np.int8) if cols else np.zeros((1, 0), np.int8)


def build_map(F: FunctionSequence, word, limit: int | None = None) -> np.ndarray:
    """Full map table ``t[idx(x)] = idx(sds_apply(F, word, x))`` as an int64 array."""
    _check_states(F, limit)
    letters = _letters(word, F.n)
    digits = all_digits(F)
    tables = F._tables
    for i in letters:
        cols, weights, table = tables[i - 1]
        code = digits[:, cols].astype(np.int64) @ weights
        digits[:, i - 1] = table[code]
    place = F.radix ** np.arange(F.n, dtype=np.int64)
    return digits.astype(np.int64) @ place


def permutation_transversal(g: Graph, limit: int | None = None) -> list:
    """One permutation per acyclic orientation (its smallest linear extension).

    Functionally equal maps arise from permutations sharing an orientation, so
    this family realises every permutation SDS map exactly once.
    """
    return [one_linear_extension(o) for o in enumerate_acyc(g, limit)]


def all_permutations(n: int, limit: int | None = None) -> list:
    limit = DEFAULT_LIMITS.perm_vertices if limit is None else limit
    if n > limit:
        raise CapacityError(f"{n}! permutations exceeds limit {limit} (raise perm_vertices)", "perm_vertices")
    return list(itertools.permutations(range(1, n + 1)))


def sample_complete_words(n: int, count: int = 200, max_length: int | None = None, seed: int = 0) -> list:
    """Deterministic sample of complete words (every vertex at least once)."""
    max_length = 2 * n if max_length is None else max_length
    if max_length < n:
        raise ContractError("max_length must be at least n for a complete word")
    rng = random.Random(seed)
    words = []
    for _ in range(count):
        length = rng.randint(n, max_length)
        letters = list(range(1, n + 1)) + [rng.randint(1, n) for _ in range(length - n)]
        rng.shuffle(letters)
        words.append(tuple(letters))
    return words
