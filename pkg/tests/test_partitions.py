import random

import pytest
from hypothesis import given, settings, strategies as st

from strata.partitions import (
    NotSubpartition,
    Partition,
    TooLarge,
    complement,
    distinct_permutations,
    h_bar,
    h_bar_coarsening,
    h_bar_naive,
    is_coarsening,
    is_subpartition,
    jump_data,
    orbit_size,
    partitions_of,
    shift,
    subpartitions,
)

P = Partition


def mu_d(d):
    return P([2 * d + 1, d, d, d, d])


def test_parse_and_canonical_form():
    assert P.parse("3,2^4").parts == (3, 2, 2, 2, 2)
    assert P.parse("2,5,3").parts == (5, 3, 2)
    assert P.parse("3,2^4").short() == "3,2^4"
    assert P([1, 2]).d == 3 and P([1, 2]).r == 2


@pytest.mark.parametrize("bad", ["", "3,,2", "a", "0", "3,-1", "2^x"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        P.parse(bad)


def test_jump_data_examples():
    jd = jump_data(P([5, 3]))
    assert sorted(jd.jumps) == [2, 3] and jd.h == 2
    jd = jump_data(P([2, 2]))
    assert sorted(jd.jumps) == [2] and jd.h == 2
    for d in range(1, 8):
        jd = jump_data(mu_d(d))
        assert set(jd.jumps) == {d + 1, d} and jd.h == d


def test_h_bar_examples():
    assert h_bar(mu_d(3)) == 1
    assert h_bar(P([2, 2])) == 2
    assert h_bar(P([1])) == 1


def test_h_bar_guard():
    with pytest.raises(TooLarge):
        h_bar(P([1] * 25))


def test_h_bar_matches_naive():
    rng = random.Random(1)
    for _ in range(500):
        r = rng.randint(1, 10)
        mu = P([rng.randint(1, 60) for _ in range(r)])
        assert h_bar(mu) == h_bar_naive(mu)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(1, 40), min_size=1, max_size=8))
def test_h_bar_at_most_h(parts):
    mu = P(parts)
    assert h_bar(mu) <= jump_data(mu).h


def test_h_bar_coarsening_not_below_subset_version():
    rng = random.Random(4)
    for _ in range(100):
        mu = P([rng.randint(1, 12) for _ in range(rng.randint(1, 6))])
        assert h_bar(mu) <= h_bar_coarsening(mu)


def test_coarsening_examples():
    assert is_coarsening(P([7, 6, 6]), P([7, 3, 3, 3, 3]))
    assert is_coarsening(P([9]), P([4, 3, 2]))
    assert not is_coarsening(P([3, 1]), P([2, 2]))


def test_coarsening_properties():
    rng = random.Random(2)
    for _ in range(100):
        mu = P([rng.randint(1, 6) for _ in range(rng.randint(1, 6))])
        assert is_coarsening(mu, mu)
        assert is_coarsening(P([mu.d]), mu)
        # merge two random parts
        if mu.r >= 2:
            parts = list(mu.parts)
            a = parts.pop(rng.randrange(len(parts)))
            b = parts.pop(rng.randrange(len(parts)))
            coarse = P(parts + [a + b])
            assert is_coarsening(coarse, mu)
            assert coarse.d == mu.d and coarse.r < mu.r
            assert h_bar(coarse) >= h_bar(mu)


def test_shift():
    assert shift(P([5, 3]), 2) == P([7, 5])
    assert shift(P([4, 1]), 0) == P([4, 1])
    assert shift(P([2, 2]), 1) == P([3, 3])


def test_subpartitions_and_complement():
    mu = P([3, 2, 2])
    subs = list(subpartitions(mu))
    assert subs[0] == mu
    assert P([2, 2]) in subs and P([3, 2]) in subs
    assert len(subs) == len(set(subs))
    assert is_subpartition(P([2, 2]), mu)
    assert complement(mu, P([2, 2])) == (3,)
    with pytest.raises(NotSubpartition):
        complement(mu, P([3, 3]))


def test_distinct_permutations_and_orbit_size():
    assert distinct_permutations(P([2, 1])) == [(1, 2), (2, 1)]
    assert distinct_permutations(P([1, 1])) == [(1, 1)]
    assert len(distinct_permutations(P([2, 1, 1]))) == 3 == orbit_size(P([2, 1, 1]))
    assert orbit_size(P([3, 2, 1])) == 6


def test_partitions_of_counts():
    # p(n) for n = 1..10
    assert [sum(1 for _ in partitions_of(n)) for n in range(1, 11)] == [1, 2, 3, 5, 7, 11, 15, 22, 30, 42]
