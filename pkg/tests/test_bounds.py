import random

import pytest

from strata.bounds import (
    BoundsBracket,
    Inconsistent,
    SinglePart,
    bracket,
    certified_lower,
    common_radical_threshold,
    lower_bound_closure,
    lower_bound_index,
    printed_lower,
    upper_bound_candidates,
    upper_bound_index,
)
from strata.partitions import Partition, h_bar, subpartitions
from strata.relations import CertificateLibrary, builtin_library

P = Partition


def test_lower_bound_examples():
    assert lower_bound_index(P([2, 2])) == (3, 4)
    assert lower_bound_index(P([2 * 99 + 1, 99, 99, 99, 99]))[0] == 12
    assert lower_bound_index(P([5, 4, 4]))[0] == 3


def test_lower_scans_are_tight():
    for h in range(1, 400):
        ell = certified_lower(h)
        assert ell * (ell - 2) > h and (ell == 3 or (ell - 1) * (ell - 3) <= h)
        pl = printed_lower(h)
        assert (pl - 1) * (pl - 2) > h and (pl == 3 or (pl - 2) * (pl - 3) <= h)
        assert ell <= pl


def test_lower_bound_closure_examples():
    assert lower_bound_closure(P([7, 3, 3, 3, 3])) == 3
    assert lower_bound_closure(P([2, 2])) == 3
    for d in range(1, 30):
        assert lower_bound_closure(P([d])) == certified_lower(d)


def test_upper_bound_examples():
    up = upper_bound_index(P([9, 8, 8]))
    assert (up.upper, up.rule[:2]) == (3, "R2")
    up = upper_bound_index(P([5, 4, 3, 2]))
    assert (up.upper, up.rule[:2]) == (4, "R3")
    assert upper_bound_index(P([5, 3])).upper == 5
    up = upper_bound_index(P([5, 3]), builtin_library())
    assert (up.upper, up.rule[:2]) == (4, "R5")


def test_upper_bound_unit_last_part():
    up = upper_bound_index(P([6, 4, 1]))
    assert up.upper == 3


def test_bracket_examples():
    assert bracket(P([2, 2]), builtin_library()).to_json() == {
        "lower": 3, "upper": 3, "lower_cert": "jump bound: l(l-2) > h",
        "upper_cert": "R5: certificate 2^2 [classical (2,2) identity]", "paper_stated_lower": 4,
    }
    br = bracket(P([4]))
    assert (br.lower, br.upper) == (6, 6) and br.upper_cert.startswith("R0")
    for d in range(1, 11):
        br = bracket(P([2 * d + 1, 2 * d, 2 * d]))
        assert (br.lower, br.upper) == (3, 3)


def test_single_part_bracket():
    for d in range(1, 9):
        br = bracket(P([d]))
        assert br.lower == br.upper == d + 2


def test_bracket_invariants_random():
    rng = random.Random(17)
    lib = builtin_library()
    for _ in range(500):
        mu = P([rng.randint(1, 12) for _ in range(rng.randint(1, 5))])
        br = bracket(mu, lib)
        assert 3 <= br.lower <= br.upper <= mu.parts[-1] + 2 <= mu.d + 2
        assert lower_bound_closure(mu) <= lower_bound_index(mu)[0]


def test_upper_bound_monotone_under_subpartitions():
    rng = random.Random(18)
    lib = builtin_library()
    for _ in range(60):
        mu = P([rng.randint(1, 9) for _ in range(rng.randint(2, 4))])
        top = upper_bound_index(mu, lib).upper
        for nu in subpartitions(mu, min_size=2):
            assert top <= upper_bound_index(nu, lib).upper


def test_inconsistent_raised_for_false_certificate(monkeypatch):
    import strata.bounds as bounds

    monkeypatch.setattr(bounds, "lower_bound_index", lambda mu: (10, 10))
    with pytest.raises(Inconsistent):
        bounds.bracket(P([3, 3]))


def test_certificates_reverified():
    lib = builtin_library()
    cands = upper_bound_candidates(P([4, 3]), lib)
    r5 = [c for c in cands if c.rule.startswith("R5")]
    assert r5 and r5[0].upper == 4 and r5[0].relation is not None


def test_common_radical_threshold():
    assert common_radical_threshold(P([50, 50])) == 8
    assert common_radical_threshold(P([2, 2])) == 2
    assert common_radical_threshold(P([101, 100, 100])) == 8
    with pytest.raises(SinglePart):
        common_radical_threshold(P([5]))


def test_bracket_json():
    br = bracket(P([9, 8, 8]))
    assert isinstance(br, BoundsBracket)
    assert set(br.to_json()) == {"lower", "upper", "lower_cert", "upper_cert", "paper_stated_lower"}
