"""Permutations, pairings, set partitions, Moebius weights."""

import math

import pytest

from haarlab.combinat import (Pairing, Permutation, SetPartition, catalan,
                              count_cycles, enumerate_alpha_pairings,
                              enumerate_nc_pair_partitions,
                              enumerate_nc_partitions, enumerate_pairings,
                              enumerate_partitions, is_noncrossing, join,
                              leader, moebius_cycle_type,
                              moebius_partition_to_top, pi_epsilon,
                              pq_cycle_pairs)


def test_leader_prefers_small_magnitude_then_positive():
    assert leader({3, -1, 2}) == -1
    assert leader({1, -1, 2}) == 1
    assert leader({-2, 2, 5}) == 2


def test_permutation_composition_convention():
    # (s * t)(k) = s(t(k))
    s = Permutation.from_cycles(3, [(1, 2)])
    t = Permutation.from_cycles(3, [(2, 3)])
    st = s * t
    assert st(2) == s(t(2)) == s(3) == 3
    assert st(3) == 1
    assert (s * s.inverse())(1) == 1


def test_permutation_cycle_type_and_count():
    p = Permutation.from_cycles(5, [(1, 2, 3), (4, 5)])
    assert p.cycle_type() == (3, 2)
    assert count_cycles(p) == 2
    assert Permutation.identity(4).cycle_type() == (1, 1, 1, 1)


def test_unsigned_permutation_fixes_negatives():
    p = Permutation.from_cycles(3, [(1, 2)], signed=False)
    assert p(-1) == -1
    assert p(-2) == -2


def test_delta_negates():
    d = Permutation.delta(3)
    assert d(2) == -2
    assert d(-3) == 3
    assert (d * d)(1) == 1


def test_pairing_partner_lookup_and_blocks():
    p = Pairing([(1, -2), (-1, 2)])
    assert p.signed
    assert p(1) == -2
    assert p(-2) == 1
    assert set(map(frozenset, map(set, p.pairs()))) \
        == {frozenset({1, -2}), frozenset({-1, 2})}


def test_pairing_rejects_bad_blocks():
    with pytest.raises(ValueError):
        Pairing([(1, 2, 3)])
    with pytest.raises(ValueError):
        Pairing([(1, 2), (2, 3)])


def test_unsigned_pairing_counts():
    # matchings of [2k]: (2k-1)!!, odd point count: none
    assert sum(1 for _ in enumerate_pairings(4)) == 3
    assert sum(1 for _ in enumerate_pairings(6)) == 15
    assert list(enumerate_pairings(3)) == []


@pytest.mark.parametrize("n", [1, 2, 3])
def test_signed_pairing_count_is_double_factorial(n):
    # pairings of the 2n signed points: (2n-1)!!
    got = sum(1 for _ in enumerate_pairings(n, signed=True))
    assert got == math.prod(range(1, 2 * n, 2))


def test_alpha_pairings():
    # balanced alpha: pairings matching +1 positions to -1 positions
    assert sum(1 for _ in enumerate_alpha_pairings((1, -1, 1, -1))) == 2
    assert list(enumerate_alpha_pairings((1, 1, -1))) == []
    for p in enumerate_alpha_pairings((1, -1, -1, 1)):
        for a, b in p.pairs():
            assert {a, b} & {1, 4} and {a, b} & {2, 3}


@pytest.mark.parametrize("n,bell", [(1, 1), (2, 2), (3, 5), (4, 15), (5, 52)])
def test_partition_count_is_bell(n, bell):
    assert sum(1 for _ in enumerate_partitions(n)) == bell


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_nc_partition_count_is_catalan(n):
    got = sum(1 for _ in enumerate_nc_partitions(n))
    assert got == catalan(n)


def test_nc_pair_partitions_even_only():
    assert sum(1 for _ in enumerate_nc_pair_partitions(6)) == catalan(3)
    assert list(enumerate_nc_pair_partitions(5)) == []


def test_is_noncrossing():
    assert is_noncrossing(SetPartition([(1, 4), (2, 3)]))
    assert not is_noncrossing(SetPartition([(1, 3), (2, 4)]))


def test_join_of_partitions():
    a = SetPartition([(1, 2), (3,), (4,)])
    b = SetPartition([(2, 3), (1,), (4,)])
    assert join(a, b) == SetPartition([(1, 2, 3), (4,)])


def test_moebius_cycle_type_is_free_moebius():
    # per cycle of length l: (-1)^(l-1) Catalan(l-1)
    assert moebius_cycle_type((1,)) == 1
    assert moebius_cycle_type((2,)) == -1
    assert moebius_cycle_type((3,)) == 2
    assert moebius_cycle_type((4,)) == -5
    assert moebius_cycle_type((2, 2)) == 1


def test_moebius_partition_to_top():
    # mu(pi, 1) on the partition lattice: (-1)^(b-1) (b-1)!
    one_block = SetPartition([(1, 2, 3, 4)])
    singletons = SetPartition([(1,), (2,), (3,), (4,)])
    assert moebius_partition_to_top(one_block) == 1
    assert moebius_partition_to_top(singletons) == -6
    assert moebius_partition_to_top(SetPartition([(1, 2, 3), (4, 5)])) == -1
    assert moebius_partition_to_top(3) == 2


def test_pq_cycle_pairs_mate_law():
    p = Pairing([(1, -2), (2, -3), (3, -1)])
    q = Pairing.delta(3)
    pairs = pq_cycle_pairs(p, q)
    prod = p.as_permutation() * q.as_permutation()
    qperm = q.as_permutation()
    for rep, mate in pairs:
        # the mate is q c^{-1} q applied to the representative cycle
        expect = tuple(qperm(x) for x in reversed(rep))
        rotations = {tuple(expect[i:] + expect[:i])
                     for i in range(len(expect))}
        assert mate in rotations
        for x, y in zip(rep, rep[1:] + rep[:1]):
            assert prod(x) == y


def test_pi_epsilon_covers_every_magnitude_once():
    for p in enumerate_pairings(3, signed=True):
        pi, eps = pi_epsilon(p)
        assert len(eps) == 3
        assert all(e in (1, -1) for e in eps)
        assert sum(pi.cycle_type()) == 3


def test_pi_epsilon_of_delta():
    # p = delta gives pq = identity; each (k, -k) orbit pair collapses
    # to a fixed point with positive sign
    pi, eps = pi_epsilon(Pairing.delta(4))
    assert pi == Permutation.identity(4)
    assert eps == (1, 1, 1, 1)


def test_pi_epsilon_rejects_unsigned():
    with pytest.raises(ValueError):
        pi_epsilon(Pairing([(1, 2), (3, 4)]))
