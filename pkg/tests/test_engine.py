import itertools
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sdslab.exceptions import CapacityError, ContractError, ParseError
from sdslab.graph import Graph, automorphisms, circ, circ2, complete, path, star
from sdslab.engine import (
    FLN_ALPHABET,
    FunctionSequence,
    UpdateWord,
    build_map,
    eca_vertex_functions,
    fln_vertex_functions,
    local_apply,
    parse_rule,
    parse_weights,
    permutation_transversal,
    sample_complete_words,
    sds_apply,
    state_index,
    state_values,
    tabulate,
    threshold_functions,
)
from sdslab.orientations import linear_extensions, orientation_of

import oracles

FAMILIES = ["nor", "nand", "and", "or", "parity", "majority", "minority", "threshold:1", "threshold:2", "threshold:3"]


def test_state_index_is_little_endian():
    assert state_index((1, 0, 1, 0)) == 5
    assert state_values(5, 4) == (1, 0, 1, 0)
    assert all(state_index(state_values(k, 3, FLN_ALPHABET), FLN_ALPHABET) == k for k in range(27))


class TestLocalApply:
    def test_nor_all_zero(self):
        F = parse_rule("nor", circ(4))
        assert local_apply(F, 1, (0, 0, 0, 0)) == (1, 0, 0, 0)

    def test_threshold_star_center(self):
        F = threshold_functions(star(4), 2)
        assert local_apply(F, 1, (0, 1, 1, 0)) == (1, 1, 1, 0)

    def test_threshold_matches_table_oracle(self):
        g = star(4)
        F = threshold_functions(g, 2)
        rule = oracles.threshold_rule(g.n, g.edges, 2)
        for x in oracles.states(4):
            for v in g.vertices:
                assert local_apply(F, v, x)[v - 1] == rule(v, x)

    def test_identity_rule(self):
        F = parse_rule("identity", circ(5))
        for x in oracles.states(5):
            assert local_apply(F, 3, x) == x

    def test_vertex_out_of_range(self):
        with pytest.raises(ContractError):
            local_apply(parse_rule("nor", circ(4)), 5, (0, 0, 0, 0))

    @pytest.mark.parametrize("rule", FAMILIES + ["eca:30", "eca:110"])
    def test_changes_only_coordinate_i(self, rule):
        F = parse_rule(rule, circ(5))
        rng = random.Random(rule)
        for _ in range(100):
            x = tuple(rng.randint(0, 1) for _ in range(5))
            i = rng.randint(1, 5)
            y = local_apply(F, i, x)
            assert y[: i - 1] == x[: i - 1] and y[i:] == x[i:]

    def test_fln_changes_only_coordinate_i(self):
        g = circ(4)
        F = fln_vertex_functions(g, {e: Fraction(1, 2) for e in g.edges}, Fraction(1, 3))
        for x in oracles.states(4, FLN_ALPHABET):
            for i in g.vertices:
                y = local_apply(F, i, x)
                assert all(y[k] == x[k] for k in range(4) if k != i - 1)


class TestSdsApply:
    def test_nor_circ4_identity_word(self):
        F = parse_rule("nor", circ(4))
        assert sds_apply(F, (1, 2, 3, 4), (0, 0, 0, 0)) == (1, 0, 1, 0)

    def test_single_letter_is_local_apply(self):
        F = parse_rule("majority", circ(5))
        for x in oracles.states(5):
            assert sds_apply(F, (3,), x) == local_apply(F, 3, x)

    def test_word_concatenation_is_composition(self):
        F = parse_rule("nor", circ(5))
        pi = (2, 5, 1, 4, 3)
        for x in oracles.states(5):
            assert sds_apply(F, pi + pi, x) == sds_apply(F, pi, sds_apply(F, pi, x))

    def test_empty_word_rejected(self):
        with pytest.raises(ContractError):
            sds_apply(parse_rule("nor", circ(4)), (), (0, 0, 0, 0))


class TestBuildMap:
    def test_negation_on_one_vertex(self):
        g = Graph(1)
        F = FunctionSequence(g, (tabulate(1, (1,), lambda v: 1 - v[0]),))
        assert build_map(F, (1,)).tolist() == [1, 0]

    def test_nor_circ4(self):
        t = build_map(parse_rule("nor", circ(4)), (1, 2, 3, 4))
        assert len(t) == 16 and t[0] == state_index((1, 0, 1, 0))

    def test_identity_rule_gives_identity_table(self):
        F = parse_rule("identity", circ2(5))
        assert build_map(F, (3, 1, 1, 5, 2, 4)).tolist() == list(range(32))

    @pytest.mark.parametrize("rule", ["nor", "parity", "majority", "eca:110", "eca:30"])
    @pytest.mark.parametrize("word", [(1, 2, 3, 4, 5), (3, 5, 1, 2, 4), (1, 1, 2, 5, 3, 4, 2)])
    def test_matches_state_by_state_oracle(self, rule, word):
        F = parse_rule(rule, circ(5))
        if rule.startswith("eca"):
            ref = oracles.eca_rule(int(rule[4:]), 5)
        else:
            ref = {"nor": oracles.nor_rule_circ(5), "parity": oracles.eca_rule(150, 5), "majority": oracles.eca_rule(232, 5)}[rule]
        assert build_map(F, word).tolist() == oracles.sds_table(5, ref, word)

    def test_fln_matches_sds_apply(self):
        g = star(4)
        F = fln_vertex_functions(g, {(1, 2): 1, (1, 3): 2, (1, 4): -1}, 1)
        t = build_map(F, (2, 1, 4, 3))
        for k, x in enumerate(oracles.states(4, FLN_ALPHABET)):
            assert t[k] == state_index(sds_apply(F, (2, 1, 4, 3), x), FLN_ALPHABET)

    def test_capacity(self):
        with pytest.raises(CapacityError, match="states"):
            build_map(parse_rule("nor", circ(12)), range(1, 13), limit=1000)


class TestEca:
    def test_rule1_is_nor(self):
        assert build_map(eca_vertex_functions(1, 5), (1, 2, 3, 4, 5)).tolist() == build_map(
            parse_rule("nor", circ(5)), (1, 2, 3, 4, 5)
        ).tolist()

    @pytest.mark.parametrize("rule,name", [(1, "nor"), (150, "parity"), (232, "majority"), (23, "minority"), (128, "and"), (254, "or"), (127, "nand")])
    def test_symmetric_rules_agree_with_named(self, rule, name):
        for word in [(1, 2, 3, 4, 5), (5, 3, 1, 4, 2)]:
            assert np.array_equal(
                build_map(eca_vertex_functions(rule, 5), word), build_map(parse_rule(name, circ(5)), word)
            )

    @pytest.mark.parametrize("rule", [1, 128, 254, 127, 150, 232, 23])
    def test_left_right_symmetric(self, rule):
        for l, c, r in itertools.product((0, 1), repeat=3):
            assert (rule >> (4 * l + 2 * c + r)) & 1 == (rule >> (4 * r + 2 * c + l)) & 1

    def test_reads_left_self_right(self):
        F = eca_vertex_functions(110, 6)
        assert F[1].args == (6, 1, 2)
        assert F[6].args == (5, 6, 1)

    def test_rule_range(self):
        with pytest.raises(ContractError):
            eca_vertex_functions(256, 4)

    def test_eca_needs_circle(self):
        with pytest.raises(ContractError):
            parse_rule("eca:30", path(4))


class TestFln:
    def test_star_center_sum(self):
        g = star(4)
        F = fln_vertex_functions(g, {e: 1 for e in g.edges}, 1)
        assert local_apply(F, 1, (0, 1, 1, -1))[0] == 1

    @pytest.mark.parametrize("threshold,expected", [(0, 1), (Fraction(1, 10), -1), (-3, 1)])
    def test_zero_neighbours(self, threshold, expected):
        g = star(4)
        F = fln_vertex_functions(g, {e: 1 for e in g.edges}, threshold)
        assert local_apply(F, 1, (1, 0, 0, 0))[0] == expected

    @pytest.mark.parametrize("threshold,expected", [(0, 1), (1, -1)])
    def test_isolated_vertex(self, threshold, expected):
        F = fln_vertex_functions(Graph(2), {}, threshold)
        assert local_apply(F, 1, (0, 1))[0] == expected

    def test_self_weight_opt_in(self):
        g = path(2)
        F = fln_vertex_functions(g, {(1, 2): 1, (1, 1): 5}, 2, include_self=True)
        assert local_apply(F, 1, (1, -1))[0] == 1
        G = fln_vertex_functions(g, {(1, 2): 1}, 2)
        assert local_apply(G, 1, (1, -1))[0] == -1

    def test_exact_rational_threshold(self):
        g = path(2)
        F = fln_vertex_functions(g, {(1, 2): Fraction(1, 3)}, Fraction(1, 3))
        assert local_apply(F, 1, (0, 1))[0] == 1
        F = fln_vertex_functions(g, {(1, 2): Fraction(1, 3)}, Fraction(1, 3) + Fraction(1, 10**12))
        assert local_apply(F, 1, (0, 1))[0] == -1

    def test_missing_weight(self):
        with pytest.raises(ContractError, match="missing weight"):
            fln_vertex_functions(path(3), {(1, 2): 1}, 0)

    def test_weights_file(self):
        w = parse_weights("1 2 1/2\n# note\n3 2 -0.25\n")
        assert w == {(1, 2): Fraction(1, 2), (2, 3): Fraction(-1, 4)}
        with pytest.raises(ParseError):
            parse_weights("1 2")


class TestParseRule:
    @pytest.mark.parametrize("spec", FAMILIES + ["eca:0", "eca:255", "fln:1", "fln:-1/2", "identity"])
    def test_accepts(self, spec):
        F = parse_rule(spec, circ(4))
        assert F.n == 4

    @pytest.mark.parametrize("spec", ["xor", "threshold:x", "eca:", "nor:2", "fln:abc"])
    def test_rejects(self, spec):
        with pytest.raises((ParseError, ContractError)):
            parse_rule(spec, circ(4))


def test_update_word_flags():
    assert UpdateWord((2, 1, 3), 3).is_permutation
    w = UpdateWord((1, 2, 2, 3), 3)
    assert w.is_complete and not w.is_permutation
    assert not UpdateWord((1, 1), 3).is_complete
    with pytest.raises(ContractError):
        UpdateWord((4,), 3)


def test_sampled_words_are_complete_and_seeded():
    a = sample_complete_words(5, 50, 9, seed=3)
    assert a == sample_complete_words(5, 50, 9, seed=3)
    assert a != sample_complete_words(5, 50, 9, seed=4)
    assert all(set(w) == set(range(1, 6)) and 5 <= len(w) <= 9 for w in a)


@pytest.mark.parametrize("g", [circ(4), circ(5), star(5), circ2(5), path(5), complete(4)], ids=repr)
@pytest.mark.parametrize("rule", ["nor", "parity", "majority", "threshold:2"])
def test_linear_extensions_give_equal_maps(g, rule):
    F = parse_rule(rule, g)
    for pi in itertools.permutations(g.vertices):
        ref = build_map(F, pi)
        for sigma in linear_extensions(orientation_of(pi, g)):
            assert np.array_equal(build_map(F, sigma), ref)


def _act_on_state_index(gamma, idx, n):
    # sigma(x)_v = x_{sigma^{-1}(v)}
    x = state_values(idx, n)
    inv = gamma.inverse()
    return state_index(tuple(x[inv(v) - 1] for v in range(1, n + 1)))


@pytest.mark.parametrize("n", [4, 5, 6])
@pytest.mark.parametrize("rule", ["nor", "parity", "majority", "minority", "threshold:2", "eca:1", "eca:150"])
def test_automorphism_conjugation(n, rule):
    F = parse_rule(rule, circ(n))
    N = F.num_states
    rng = random.Random(n)
    perms = list(itertools.permutations(range(1, n + 1)))
    for gamma in automorphisms(circ(n)):
        act = np.array([_act_on_state_index(gamma, k, n) for k in range(N)])
        inv = np.argsort(act)
        for pi in rng.sample(perms, 10):
            lhs = act[build_map(F, pi)[inv]]
            rhs = build_map(F, gamma.apply_word(pi))
            assert np.array_equal(lhs, rhs)


@given(st.permutations(range(1, 6)), st.integers(0, 31))
@settings(max_examples=200, deadline=None)
def test_transversal_word_realises_every_orientation(pi, x):
    g = circ(5)
    words = permutation_transversal(g)
    F = parse_rule("nor", g)
    o = orientation_of(pi, g)
    rep = next(w for w in words if orientation_of(w, g) == o)
    assert build_map(F, rep)[x] == build_map(F, pi)[x]
