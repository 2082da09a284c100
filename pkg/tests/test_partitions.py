import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dualgalois.partitions import Partition, invariant_under, join, refines, symmetric_order, thickest_sym_partition
from dualgalois.permgroup import PermGroup, Permutation
from helpers import all_set_partitions, closure


def P(d, *blocks):
    return Partition(d, tuple(blocks))


def partitions_of(d):
    @st.composite
    def build(draw):
        labels = draw(st.lists(st.integers(0, d - 1), min_size=d, max_size=d))
        return Partition.from_labels(labels)
    return build()


def test_canonical_form():
    assert P(3, (3,), (2, 1)) == P(3, (1, 2), (3,))
    assert P(3, (3,), (2, 1)).blocks == ((1, 2), (3,))
    with pytest.raises(ValueError):
        P(3, (1, 2))
    with pytest.raises(ValueError):
        P(3, (1, 2), (2, 3))


def test_refines_examples():
    assert refines(Partition.discrete(3), P(3, (1, 2), (3,)))
    assert not refines(P(3, (1, 2), (3,)), Partition.discrete(3))
    J = P(3, (1, 2), (3,))
    assert refines(J, J)
    with pytest.raises(ValueError):
        refines(Partition.discrete(2), Partition.discrete(3))


def test_join_examples():
    assert join(P(4, (1, 2), (3,), (4,)), P(4, (1,), (2, 3), (4,))) == P(4, (1, 2, 3), (4,))
    J = P(4, (1, 3), (2, 4))
    assert join(J, J) == J
    assert join(P(2, (1,), (2,)), P(2, (1, 2))) == P(2, (1, 2))
    with pytest.raises(ValueError):
        join(Partition.discrete(2), Partition.discrete(3))


def test_invariance_examples():
    J = P(3, (1, 2), (3,))
    assert invariant_under(J, Permutation.from_cycles(3, (1, 2)))
    assert not invariant_under(J, Permutation.from_cycles(3, (2, 3)))
    assert invariant_under(J, Permutation.identity(3))


def test_thickest_examples():
    d = 3
    assert thickest_sym_partition(PermGroup([Permutation.from_cycles(3, (1, 2)),
                                             Permutation.from_cycles(3, (2, 3))])) == Partition.full(d)
    assert thickest_sym_partition(PermGroup([Permutation.from_cycles(3, (1, 2, 3))])) == Partition.discrete(3)
    assert thickest_sym_partition(PermGroup([Permutation.from_cycles(4, (1, 2))])) == P(4, (1, 2), (3,), (4,))


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 8).flatmap(lambda d: st.tuples(partitions_of(d), partitions_of(d), partitions_of(d))))
def test_join_lattice_laws(triple):
    a, b, c = triple
    assert join(a, b) == join(b, a)
    assert join(join(a, b), c) == join(a, join(b, c))
    assert join(a, a) == a
    assert refines(a, join(a, b)) and refines(b, join(a, b))


def internal_transpositions(J):
    for b in J.blocks:
        for i, j in itertools.combinations(b, 2):
            yield Permutation.transposition(J.d, i, j)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6).flatmap(
    lambda d: st.tuples(st.just(d), st.lists(st.tuples(st.integers(1, d), st.integers(1, d)), max_size=4),
                        partitions_of(d), partitions_of(d))))
def test_join_of_contained_symmetric_groups_is_contained(data):
    d, pairs, j1, j2 = data
    gens = [Permutation.transposition(d, i, j) for i, j in pairs if i != j]
    G = PermGroup(gens, degree=d)
    if all(G.contains(t) for t in internal_transpositions(j1)) and \
            all(G.contains(t) for t in internal_transpositions(j2)):
        assert all(G.contains(t) for t in internal_transpositions(join(j1, j2)))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5).flatmap(
    lambda d: st.tuples(st.just(d), st.lists(st.permutations(list(range(1, d + 1))), min_size=1, max_size=3))))
def test_thickest_matches_brute_force(data):
    d, imgs = data
    gens = [Permutation(p) for p in imgs]
    G = PermGroup(gens, degree=d)
    elems = closure(gens, d)

    def contained(blocks):
        for perm in itertools.product(*(itertools.permutations(b) for b in blocks)):
            img = [0] * d
            for b, pb in zip(blocks, perm):
                for x, y in zip(b, pb):
                    img[x - 1] = y
            if tuple(img) not in elems:
                return False
        return True

    good = [Partition(d, tuple(map(tuple, bl))) for bl in all_set_partitions(list(range(1, d + 1)))
            if contained(bl)]
    thickest = [J for J in good if all(refines(K, J) for K in good)]
    assert thickest == [thickest_sym_partition(G)]
    JG = thickest[0]
    # maximality: merging two blocks breaks containment
    for a, b in itertools.combinations(JG.blocks, 2):
        merged = [list(a) + list(b)] + [list(c) for c in JG.blocks if c not in (a, b)]
        assert not contained(merged)


def test_symmetric_order():
    assert symmetric_order(P(5, (1, 2, 3), (4, 5))) == 12
