import itertools
import random

import pytest

import _oracle as oracle
from weldmag.arrows import insert_self_tree, leaf, node, realize_sorted, sorted_presentation, surgery
from weldmag.gauss import closure, parse, serialize, stack
from weldmag.invariants import (
    InvariantError,
    KReducedAction,
    action,
    action_apply,
    action_compose,
    action_invert,
    identity_action,
    k_equal,
    k_equal_witness,
    link_vanishing,
    milnor,
    milnor_table,
    r_index,
)
from weldmag.magnus import TruncationPolicy, expand, one_plus_x, series_mul
from weldmag.words import commutator, empty, generator, invert, multiply, parse_word, word_from_letters

SINGLE = parse("1: U1+ / 2: O1+")
TRIVIAL2 = parse("1: / 2:")
TRIVIAL3 = parse("1: / 2: / 3:")


def comm223():
    g = lambda i: generator(3, i)
    return realize_sorted([commutator(g(2), commutator(g(2), g(3))), empty(3), empty(3)])


def random_realized(rng, n, max_len=6):
    ws = [
        word_from_letters(n, oracle.random_reduced_letters(rng, n, rng.randint(0, max_len)))
        for _ in range(n)
    ]
    return realize_sorted(ws)


def test_r_index():
    assert r_index((2, 3, 1)) == 1
    assert r_index((2, 2, 3)) == 2
    assert r_index((1,)) == 1


def test_milnor_basics():
    assert milnor(TRIVIAL2, (2, 1)) == 0
    assert milnor(TRIVIAL2, (1,)) == 0
    assert milnor(SINGLE, (2, 1)) == 1
    assert milnor(SINGLE, (1, 2)) == 0
    assert milnor(SINGLE, (1,)) == 0


def test_milnor_on_realized_commutator():
    g = lambda i: generator(3, i)
    code = realize_sorted([commutator(g(2), g(3)), empty(3), empty(3)])
    assert milnor(code, (3, 2, 1)) == 1
    assert milnor(code, (2, 3, 1)) == -1
    assert milnor(code, (2, 1)) == 0


def test_milnor_index_validation():
    with pytest.raises(InvariantError):
        milnor(SINGLE, ())
    with pytest.raises(InvariantError):
        milnor(SINGLE, (3, 1))
    with pytest.raises(InvariantError):
        milnor(SINGLE, (0, 1))


def test_table_trivial_and_single():
    assert milnor_table(TRIVIAL2, 2).is_zero()
    t = milnor_table(SINGLE, 1)
    assert t.entries == {(2, 1): 1}
    assert t.format_lines() == ["mu(2,1) = 1"]
    assert t.to_json_obj() == [{"I": [2, 1], "mu": 1}]


def test_table_filters_and_ordering():
    rng = random.Random(5)
    for _ in range(5):
        code = random_realized(rng, 2)
        t = milnor_table(code, 2)
        for I in t.entries:
            assert r_index(I) <= 2
            assert 2 <= len(I) <= 4
            assert len(set(I)) > 1  # pure powers never appear
        lens = [(len(I), I) for I, _ in t.items_sorted()]
        assert lens == sorted(lens)


def test_table_max_len_and_degree_do_not_change_entries():
    code = comm223()
    t = milnor_table(code, 2)
    capped = milnor_table(code, 2, max_len=3)
    assert capped.entries == {I: v for I, v in t.entries.items() if len(I) <= 3}
    assert milnor_table(code, 1, degree=4).entries == milnor_table(code, 1).entries
    with pytest.raises(InvariantError):
        milnor_table(code, 0)


def test_k_equal_modes_on_named_pairs():
    code = comm223()
    for mode in ("table", "longitude", "action"):
        assert k_equal(code, code, 2, mode=mode)
        assert k_equal(code, TRIVIAL3, 1, mode=mode)
        assert not k_equal(code, TRIVIAL3, 2, mode=mode)
        assert not k_equal(SINGLE, TRIVIAL2, 1, mode=mode)


def test_k_equal_validation():
    with pytest.raises(InvariantError, match="component counts differ"):
        k_equal(SINGLE, TRIVIAL3, 1)
    with pytest.raises(InvariantError, match="unknown mode"):
        k_equal(SINGLE, TRIVIAL2, 1, mode="fast")
    with pytest.raises(InvariantError, match="k must be"):
        k_equal(SINGLE, TRIVIAL2, 0)


def test_k_equal_modes_agree_on_random_pairs():
    rng = random.Random(31)
    for _ in range(12):
        n = rng.randint(2, 3)
        k = rng.randint(1, 2)
        L, M = random_realized(rng, n, 4), random_realized(rng, n, 4)
        answers = {mode: k_equal(L, M, k, mode=mode) for mode in ("table", "longitude", "action")}
        assert len(set(answers.values())) == 1, answers


def test_k_equal_witness():
    assert k_equal_witness(SINGLE, TRIVIAL2, 1) == (2, 1)
    assert k_equal_witness(SINGLE, SINGLE, 2) is None
    code = comm223()
    w = k_equal_witness(code, TRIVIAL3, 2)
    assert w is not None and milnor(code, w) != 0


def test_identity_action_and_action_of_trivial():
    ident = identity_action(2, 2)
    assert action(TRIVIAL2, 2) == ident
    for c in ident.conjugators:
        assert c.is_one
    pol = ident.policy
    assert ident.images == tuple(one_plus_x(pol, i) for i in (1, 2))


def test_action_of_single_crossing():
    phi = action(SINGLE, 2)
    pol = phi.policy
    assert phi.images[0] == expand(parse_word("A2 a1 a2", 2), pol)
    assert phi.images[1] == one_plus_x(pol, 2)
    assert phi != identity_action(2, 2)
    with pytest.raises(InvariantError):
        action(SINGLE, 0)


def test_action_apply():
    phi = action(SINGLE, 2)
    assert action_apply(phi, empty(2)).is_one
    w = parse_word("a1 a2", 2)
    lhs = action_apply(phi, w)
    rhs = series_mul(action_apply(phi, generator(2, 1)), action_apply(phi, generator(2, 2)))
    assert lhs == rhs
    ident = identity_action(2, 2)
    assert action_apply(ident, w) == expand(w, ident.policy)
    with pytest.raises(InvariantError, match="rank"):
        action_apply(phi, generator(3, 1))


def test_action_compose_identity_and_homomorphism():
    ident = identity_action(2, 1)
    phi = action(SINGLE, 1)
    assert action_compose(phi, ident) == phi
    assert action_compose(ident, phi) == phi

    rng = random.Random(41)
    for _ in range(6):
        n = rng.randint(2, 3)
        k = rng.randint(1, 2)
        L, M = random_realized(rng, n, 4), random_realized(rng, n, 4)
        lhs = action_compose(action(L, k), action(M, k))
        rhs = action(stack(L, M), k)
        assert lhs == rhs
        assert lhs.images == rhs.images


def test_action_compose_associative():
    rng = random.Random(43)
    acts = [action(random_realized(rng, 2, 4), 2) for _ in range(3)]
    a, b, c = acts
    assert action_compose(action_compose(a, b), c) == action_compose(a, action_compose(b, c))


def test_action_compose_validation():
    with pytest.raises(InvariantError, match="parameters differ"):
        action_compose(identity_action(2, 1), identity_action(2, 2))
    with pytest.raises(InvariantError, match="parameters differ"):
        action_compose(identity_action(2, 1), identity_action(3, 1))


def test_action_invert():
    rng = random.Random(47)
    ident2 = identity_action(2, 2)
    for L in [SINGLE, random_realized(rng, 2, 5), random_realized(rng, 2, 5)]:
        phi = action(L, 2)
        psi = action_invert(phi)
        assert action_compose(phi, psi) == ident2
        assert action_compose(psi, phi).images == ident2.images
    assert action_invert(ident2) == ident2


def test_action_ignores_degree_k_self_trees():
    g = lambda i: generator(2, i)
    base = sorted_presentation([commutator(g(2), g(1)), empty(2)])
    t = node(leaf(1, conjugator=g(2)), leaf(1))
    bumped = insert_self_tree(base, 1, t, position=0)
    assert action(surgery(base), 2) == action(surgery(bumped), 2)


def test_link_vanishing_named_links():
    unlink = parse("1: / 2:", closed=True)
    for k in (1, 2, 3):
        assert link_vanishing(unlink, k)
    hopf = parse("1: U1+ / 2: O1+", closed=True)
    assert not link_vanishing(hopf, 1)
    closed = closure(comm223())
    assert link_vanishing(closed, 1)
    assert not link_vanishing(closed, 2)
    with pytest.raises(InvariantError):
        link_vanishing(unlink, 0)


def test_link_vanishing_is_basepoint_independent():
    rng = random.Random(53)
    links = [closure(comm223())]
    links += [closure(random_realized(rng, 2, 4)) for _ in range(2)]
    for link in links:
        for k in (1, 2):
            ranges = [range(max(1, len(c))) for c in link.components]
            answers = {link_vanishing(link, k, bp) for bp in itertools.product(*ranges)}
            assert len(answers) == 1, (serialize(link), k)

