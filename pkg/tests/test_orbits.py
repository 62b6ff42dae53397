import random
from fractions import Fraction

import pytest

from strata.exactalg import QQ
from strata.forms import expand, radical
from strata.partitions import Partition, orbit_size
from strata.orbits import (
    DuplicateRoots,
    classify_index,
    count_permutations_geq,
    count_permutations_naive,
    find_circuit,
    find_common_radical_relation,
    orbit_matrix,
    orbit_rank,
    parking_condition,
    parking_search,
    strongly_stabilising_3parts,
    wronskian_grid_bound,
)
from strata.relations import verify_relation

P = Partition


def test_orbit_matrix_two_one():
    om = orbit_matrix(P([2, 1]), [0, 1])
    assert om.size == 2
    # arrangements (1,2) then (2,1): x (x-y)^2 and x^2 (x-y), constant (y^3) first
    assert [list(map(int, (c.coeffs[0] for c in row))) for row in om.matrix] == [[0, 1, -2, 1], [0, 0, -1, 1]]
    assert orbit_rank(om) == 2


def test_orbit_sizes():
    assert orbit_matrix(P([1, 1]), [0, 1]).size == 1
    assert orbit_matrix(P([2, 1, 1]), [0, 1, -1]).size == 3
    assert orbit_rank(orbit_matrix(P([1, 1]), [3, 7])) == 1


def test_orbit_rank_deficient():
    assert orbit_rank(orbit_matrix(P([2, 1, 1]), [0, 1, -1])) == 2


def test_duplicate_roots():
    with pytest.raises(DuplicateRoots):
        orbit_matrix(P([2, 1]), [1, 1])


def test_common_radical_relation_examples():
    rel = find_common_radical_relation(P([2, 1, 1]), [0, 1, -1], 3)
    assert rel is not None and len(rel) == 3 and verify_relation(rel)[0]
    assert sorted(abs(c.coeffs[0]) for c in rel.coeffs) == [1, 1, 2]
    assert find_common_radical_relation(P([2, 1]), [0, 1], 2) is None
    rel = find_common_radical_relation(P([3, 2, 2]), [0, 1, -1], 3)
    assert rel is not None and len(rel) == 3 and verify_relation(rel)[0]
    rads = {frozenset(radical(f).assignment()) for f in rel.forms}
    assert len(rads) == 1


def test_find_circuit_minimal():
    vecs = [[1, 0, 0], [0, 1, 0], [1, 1, 0], [0, 0, 1]]
    vecs = [[Fraction(x) for x in v] for v in vecs]
    assert find_circuit(vecs, 3) == (0, 1, 2)
    assert find_circuit(vecs[:2] + vecs[3:], 3) is None


def test_orbit_rank_moebius_invariant():
    rng = random.Random(5)
    mu = P([3, 2, 1])
    for _ in range(50):
        roots = rng.sample(range(-9, 10), 3)
        a, b, c, d = [rng.randint(-5, 5) for _ in range(4)]
        if a * d - b * c == 0 or any(c * x + d == 0 for x in roots):
            continue
        moved = [Fraction(a * x + b, c * x + d) for x in roots]
        if len(set(moved)) < 3:
            continue
        assert orbit_rank(orbit_matrix(mu, roots)) == orbit_rank(orbit_matrix(mu, moved))


@pytest.mark.parametrize("abc,expected", [((2, 2, 3), True), ((1, 2, 3), True), ((1, 2, 5), False),
                                          ((1, 2, 4), True), ((3, 3, 3), False), ((1, 1, 3), False)])
def test_strongly_stabilising_examples(abc, expected):
    assert strongly_stabilising_3parts(*abc) is expected


def test_wronskian_rule_agrees_with_orbit_rank():
    # cross-check the two deficiency detectors on small triples
    for c in range(1, 5):
        for b in range(1, c + 1):
            for a in range(1, b + 1):
                if a == b == c:
                    continue
                mu = P([a, b, c])
                ranks = [orbit_rank(orbit_matrix(mu, roots)) for roots in ([0, 1, -1], [0, 2, 7], [1, 3, -5])]
                deficient = all(rk < orbit_size(mu) for rk in ranks)
                assert strongly_stabilising_3parts(a, b, c) == deficient, (a, b, c)


def test_grid_bound():
    assert wronskian_grid_bound(1, 2, 3) == 6 * 6
    assert wronskian_grid_bound(2, 2, 3) == 3 * 7


def test_classify_examples():
    cls = classify_index(P([5, 3]))
    assert cls.verdict == "Growing" and cls.rule == "two-part rule"
    cls = classify_index(P([3, 2, 2]))
    assert cls.verdict == "Stabilising" and len(cls.certificate) == 3
    assert verify_relation(cls.certificate)[0]
    cls = classify_index(P([5, 2, 1]))
    assert cls.verdict == "Growing" and "Wronskian" in cls.rule


def test_classify_factorial_jump():
    cls = classify_index(P([110, 73, 36]))  # all jumps >= 36 = (3!)^2
    assert cls.verdict == "Growing" and cls.rule == "factorial-jump rule"


def test_classify_four_parts_stabilising_has_certificate():
    cls = classify_index(P([3, 2, 2, 2]))
    assert cls.verdict == "Stabilising"
    rel = cls.certificate
    assert verify_relation(rel)[0]
    assert len({frozenset(radical(f).assignment()) for f in rel.forms}) == 1


def test_count_permutations_examples():
    assert count_permutations_geq(P([3, 2, 2]), (2, 2, 2)) == 3
    assert count_permutations_geq(P([3, 1]), (1, 1)) == 2
    assert count_permutations_geq(P([4, 2, 2, 1]), (1, 1, 1, 1)) == orbit_size(P([4, 2, 2, 1]))


def test_count_permutations_matches_naive():
    rng = random.Random(6)
    for _ in range(200):
        r = rng.randint(1, 6)
        mu = P([rng.randint(1, 5) for _ in range(r)])
        a = [rng.randint(1, 5) for _ in range(r)]
        assert count_permutations_geq(mu, a) == count_permutations_naive(mu, a)


def test_parking_condition_examples():
    assert parking_condition(P([3, 2, 2]), (2, 2, 2))
    assert not parking_condition(P([3, 1]), (1, 1))
    for t in range(1, 4):
        for i in range(1, 4):
            assert parking_condition(P([t + i] + [t] * (i + 1)), (t,) * (i + 2))


def test_parking_search_examples():
    assert parking_search(P([3, 2, 2])) == ((2, 2, 2), 3)
    assert parking_search(P([3, 1])) is None
    for t in range(1, 6):
        for i in range(1, 6):
            a, bound = parking_search(P([t + i] + [t] * (i + 1)))
            assert bound == i + 2


def test_parking_implies_relation_at_random_roots():
    rng = random.Random(13)
    mu = P([3, 2, 2])
    a, bound = parking_search(mu)
    for _ in range(5):
        roots = rng.sample(range(-30, 30), mu.r)
        rel = find_common_radical_relation(mu, roots, bound)
        assert rel is not None and len(rel) <= bound and verify_relation(rel)[0]
