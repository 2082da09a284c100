import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dualgalois.partitions import Partition, symmetric_order, thickest_sym_partition
from dualgalois.permgroup import (
    NotAMemberError,
    PermGroup,
    Permutation,
    WordBudgetError,
    check_lemma_conditions,
    check_prop_conditions,
    compose,
    cycle_factorization,
    evaluate_word,
    fixed_point_partitions,
    is_product_of_symmetric,
    word_for,
)
from helpers import closure


def cyc(d, *cycles):
    return Permutation.from_cycles(d, *cycles)


def P(d, *blocks):
    return Partition(d, tuple(blocks))


perms = st.integers(1, 6).flatmap(lambda d: st.permutations(list(range(1, d + 1)))).map(Permutation)


def test_composition_is_right_to_left():
    a, b = cyc(3, (1, 2)), cyc(3, (2, 3))
    ab = compose(a, b)
    assert ab.images() == [2, 3, 1]
    assert ab == cyc(3, (1, 2, 3))
    assert a * b * a == cyc(3, (1, 3))


@given(perms)
def test_inverse(sigma):
    assert (sigma * sigma.inverse()).is_identity()
    assert sigma ** -1 == sigma.inverse()


def test_cycle_factorization_examples():
    assert cycle_factorization(Permutation.identity(4)).length == 0
    cf = cycle_factorization(cyc(6, (1, 2, 3), (4, 5)))
    assert cf.cycles == ((1, 2, 3), (4, 5)) and cf.length == 2
    assert cycle_factorization(cyc(2, (1, 2))).length == 1


def test_permutation_rejects_bad_input():
    with pytest.raises(ValueError):
        Permutation([1, 1, 2])
    with pytest.raises(ValueError):
        Permutation(list(range(1, 66)))
    with pytest.raises(ValueError):
        compose(Permutation.identity(2), Permutation.identity(3))


def test_generate_examples():
    S3 = PermGroup([cyc(3, (1, 2)), cyc(3, (2, 3))])
    assert S3.order() == 6
    C3 = PermGroup([cyc(3, (1, 2, 3))])
    assert C3.order() == 3 and not C3.contains(cyc(3, (1, 2)))
    V = PermGroup([cyc(4, (1, 2)), cyc(4, (3, 4))])
    assert V.order() == 4 and V.orbits() == P(4, (1, 2), (3, 4))


def test_random_groups_match_brute_force():
    rng = random.Random(11)
    for _ in range(200):
        d = rng.randint(1, 6)
        gens = []
        for _ in range(rng.randint(1, 3)):
            img = list(range(1, d + 1))
            rng.shuffle(img)
            gens.append(Permutation(img))
        G = PermGroup(gens, degree=d)
        elems = closure(gens, d)
        assert G.order() == len(elems)
        for _ in range(5):
            img = list(range(1, d + 1))
            rng.shuffle(img)
            assert G.contains(Permutation(img)) == (tuple(img) in elems)
        orbit_of = {i: {x[i - 1] for x in elems} for i in range(1, d + 1)}
        assert {tuple(sorted(o)) for o in orbit_of.values()} == set(G.orbits().blocks)


def test_word_for_examples():
    G = PermGroup([cyc(3, (1, 2)), cyc(3, (2, 3))])
    w = word_for(G, cyc(3, (1, 3)))
    assert len(w) == 3 and evaluate_word(w, G.generators) == cyc(3, (1, 3))
    assert word_for(G, Permutation.identity(3)) == []
    assert word_for(G, cyc(3, (1, 2))) == [1]
    with pytest.raises(NotAMemberError, match="not a member"):
        word_for(PermGroup([cyc(3, (1, 2, 3))]), cyc(3, (1, 2)))
    with pytest.raises(WordBudgetError, match="word length budget exceeded"):
        word_for(PermGroup([cyc(6, (1, 2)), cyc(6, (1, 2, 3, 4, 5, 6))]), cyc(6, (3, 4)), max_len=1)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6).flatmap(
    lambda d: st.tuples(st.lists(st.permutations(list(range(1, d + 1))), min_size=1, max_size=3),
                        st.integers(0, 10 ** 6))))
def test_word_for_reevaluates(data):
    imgs, pick = data
    gens = [Permutation(p) for p in imgs]
    G = PermGroup(gens)
    elems = sorted(closure(gens, gens[0].degree))
    target = Permutation(elems[pick % len(elems)])
    w = word_for(G, target)
    assert evaluate_word(w, gens, degree=target.degree) == target


def test_is_product_of_symmetric_examples():
    assert is_product_of_symmetric(PermGroup([cyc(4, (1, 2)), cyc(4, (3, 4))]), P(4, (1, 2), (3, 4)))
    assert not is_product_of_symmetric(PermGroup([cyc(3, (1, 2, 3))]), Partition.full(3))
    assert not is_product_of_symmetric(PermGroup([cyc(3, (1, 2)), cyc(3, (2, 3))]), P(3, (1, 2), (3,)))


def test_lemma_example_all_conditions_hold():
    rep = check_lemma_conditions([cyc(3, (2, 3))], cyc(3, (1, 2)), [Partition.full(3)])
    c = rep.cycles[0]
    assert c.single_cycle_per_block and c.acts_on_block_and_shorter and c.transitive_on_block
    assert rep.passed and rep.conclusion_holds and rep.group_order == 6


def test_lemma_example_flags_cycle_as_long_as_block():
    J = P(4, (1, 2), (3, 4))
    rep = check_lemma_conditions([], cyc(4, (1, 2), (3, 4)), [J, J])
    assert not rep.passed
    assert all(not c.acts_on_block_and_shorter for c in rep.cycles)


def test_lemma_identity_is_vacuous():
    rep = check_lemma_conditions([cyc(3, (1, 2))], Permutation.identity(3), [])
    assert rep.passed and rep.cycles == []


def test_lemma_partition_count_mismatch():
    with pytest.raises(ValueError):
        check_lemma_conditions([], cyc(4, (1, 2), (3, 4)), [Partition.full(4)])


def test_prop_single_sigma_reduces_to_lemma():
    ts, s = [cyc(3, (2, 3))], cyc(3, (1, 2, 3))
    fam = [Partition.full(3)]
    prop = check_prop_conditions(ts, [s], [fam])
    lem = check_lemma_conditions(ts, s, fam)
    assert prop.lemma_reports[0].to_dict() == lem.to_dict()
    assert prop.passed == lem.passed


def test_prop_absorbed_sigma():
    J = P(4, (1, 2), (3, 4))
    rep = check_prop_conditions([cyc(4, (1, 2)), cyc(4, (3, 4))], [cyc(4, (1, 2), (3, 4))], [None], candidate=J)
    assert rep.passed and rep.group_order == 4 and rep.candidate_is_thickest


def test_prop_four_cycle_without_transpositions_fails():
    s = cyc(4, (1, 2, 3, 4))
    rep = check_prop_conditions([], [s], [[Partition.full(4)]], candidate=Partition.full(4))
    assert not rep.passed
    c = rep.lemma_reports[0].cycles[0]
    assert not c.transposition_link
    assert rep.group_order == 4


def test_fixed_point_partitions_are_invariant():
    s = cyc(5, (1, 2), (4, 5))
    comps = Partition.full(5)
    fam = fixed_point_partitions(s, comps)
    assert fam[0] == P(5, (1, 2, 3), (4, 5))
    assert fam[1] == P(5, (1, 2), (3, 4, 5))


def test_lemma_soundness_on_random_instances():
    """Whenever the conditions hold, the enumerated group is Sym(J_H)."""
    rng = random.Random(5)
    checked = 0
    for _ in range(600):
        d = rng.randint(2, 7)
        ts = []
        for _ in range(rng.randint(0, 3)):
            i, j = rng.sample(range(1, d + 1), 2)
            ts.append(Permutation.transposition(d, i, j))
        img = list(range(1, d + 1))
        rng.shuffle(img)
        sigma = Permutation(img)
        n = cycle_factorization(sigma).length
        orbits = [set(c) for c in cycle_factorization(sigma).cycles]
        orbits += [{i} for i in range(1, d + 1) if sigma(i) == i]
        parts = []
        for _ in range(n):
            # random unions of sigma-orbits are sigma-invariant
            labels = [0] * d
            for orb in orbits:
                lab = rng.randint(0, 2)
                for i in orb:
                    labels[i - 1] = lab
            parts.append(Partition.from_labels(labels))
        rep = check_lemma_conditions(ts, sigma, parts)
        if rep.passed and n:
            H = closure(ts + [sigma], d)
            JH = thickest_sym_partition(PermGroup(ts + [sigma], degree=d))
            assert len(H) == symmetric_order(JH)
            checked += 1
    assert checked >= 20
