import json
import random
from fractions import Fraction

import pytest

from strata.exactalg import QQ, NumberField, quadratic_field
from strata.forms import FactoredForm, gcd_forms, radical
from strata.partitions import NotSubpartition, Partition
from strata.relations import (
    CertificateLibrary,
    DegenerateRoots,
    InvalidCertificate,
    SecantRelation,
    builtin_library,
    classical_two_two,
    construct_adjacent_unit_jumps,
    construct_separated_unit_jumps,
    default_library,
    invert_generator,
    lift_radical_power,
    lift_subpartition,
    octic_annihilates_fourth_root,
    printed_quartic_cubic_relation,
    rational_normal_relation,
    solve_quartic_cubic_constants,
    solve_two_part_quartic_cubic,
    verify_paper_53,
    verify_relation,
)

P = Partition


def distinct_rationals(rng, n):
    out = set()
    while len(out) < n:
        out.add(Fraction(rng.randint(-20, 20), rng.randint(1, 6)))
    return list(out)


def test_classical_relation_verifies():
    rel = classical_two_two()
    assert verify_relation(rel) == (True, "ok")
    assert len(rel) == 3 and rel.mu == P([2, 2])


def test_perturbed_coefficient_fails():
    rel = classical_two_two()
    terms = list(rel.terms)
    terms[0] = (rel.field(2) * terms[0][0], terms[0][1])
    ok, diag = verify_relation(SecantRelation(rel.field, rel.mu, terms))
    assert not ok and diag == "nonzero sum"


def test_proportional_terms_fail():
    rel = classical_two_two()
    terms = list(rel.terms) + [rel.terms[0]]
    ok, diag = verify_relation(SecantRelation(rel.field, rel.mu, terms))
    assert not ok and "proportional" in diag


def test_wrong_stratum_fails():
    rel = classical_two_two()
    ok, diag = verify_relation(SecantRelation(rel.field, P([3, 1]), rel.terms))
    assert not ok and "multiplicities" in diag


def test_adjacent_unit_jumps_coefficients():
    for k in (1, 2, 3):
        rel = construct_adjacent_unit_jumps(k, 0, 1, 2)
        assert verify_relation(rel)[0]
        assert rel.mu == P([k + 2, k + 1, k])
        assert [int(c.coeffs[0]) for c in rel.coeffs] == [2, 1, -4, 1]


def test_adjacent_unit_jumps_random():
    rng = random.Random(21)
    for _ in range(100):
        k = rng.randint(1, 4)
        p, q, r = distinct_rationals(rng, 3)
        rel = construct_adjacent_unit_jumps(k, p, q, r)
        assert verify_relation(rel)[0]


def test_adjacent_gcd_reduces_to_quadratics():
    rel = construct_adjacent_unit_jumps(2, 0, 1, 2)
    g = gcd_forms(rel.forms)
    reduced = [f.exact_divide(g) for f in rel.forms]
    assert all(f.degree == 2 for f in reduced)


def test_separated_unit_jumps():
    rel = construct_separated_unit_jumps(2, 1, 0, 1, 2, 3)
    assert verify_relation(rel)[0] and rel.mu == P([3, 2, 2, 1])
    rel = construct_separated_unit_jumps(1, 1, 0, 1, 2, 3)
    assert [int(c.coeffs[0]) for c in rel.coeffs] == [2, -3, -1, 2]


def test_separated_unit_jumps_random():
    rng = random.Random(22)
    for _ in range(100):
        k2 = rng.randint(1, 3)
        k1 = rng.randint(k2, 4)
        p, q, r, s = distinct_rationals(rng, 4)
        assert verify_relation(construct_separated_unit_jumps(k1, k2, p, q, r, s))[0]


def test_constructions_reject_repeated_roots():
    with pytest.raises(DegenerateRoots):
        construct_adjacent_unit_jumps(1, 0, 0, 2)
    with pytest.raises(DegenerateRoots):
        construct_separated_unit_jumps(1, 1, 0, 1, 1, 3)


def test_rational_normal_relation():
    for d in range(1, 6):
        rel = rational_normal_relation(d)
        assert verify_relation(rel)[0] and len(rel) == d + 2


def test_lift_subpartition():
    from strata.orbits import find_common_radical_relation

    base = find_common_radical_relation(P([2, 1, 1]), [0, 1, -1], 3)
    lifted = lift_subpartition(base, P([3, 2, 1, 1]))
    assert verify_relation(lifted)[0] and len(lifted) == 3
    assert lift_subpartition(base, base.mu).terms == base.terms
    lifted = lift_subpartition(classical_two_two(), P([3, 2, 2]))
    assert verify_relation(lifted)[0] and len(lifted) == 3
    with pytest.raises(NotSubpartition):
        lift_subpartition(classical_two_two(), P([3, 2]))


def test_lift_radical_power():
    rel = lift_radical_power(classical_two_two(), 1)
    assert rel.mu == P([3, 3, 1, 1, 1, 1]) and len(rel) == 3 and verify_relation(rel)[0]
    rel = lift_radical_power(classical_two_two(), 2)
    assert rel.mu == P([4, 4, 2, 2, 2, 2]) and verify_relation(rel)[0]


def test_lift_radical_power_adds_fresh_roots():
    base = construct_adjacent_unit_jumps(1, 0, 1, 2)  # radical degree 3 < r * l = 12
    rel = lift_radical_power(base, 1)
    assert len(rel) == len(base) and verify_relation(rel)[0]
    assert rel.mu == P([4, 3, 2] + [1] * 9)


def test_quartic_cubic_constants():
    sol = solve_quartic_cubic_constants()
    assert sol.e1 == 1 and sol.e2 == Fraction(1, 6)
    assert sol.a + sol.b == sol.field.one
    assert sol.a * sol.b == sol.field(Fraction(1, 6))
    assert sol.alpha == sol.field(2) and sol.beta == sol.field(2)
    assert sol.field == quadratic_field(3)


def test_quartic_cubic_relation_and_printed_constants():
    rel = solve_two_part_quartic_cubic()
    assert verify_relation(rel) == (True, "ok")
    assert len(rel) == 4 and rel.mu == P([4, 3])
    ok, diag = verify_relation(printed_quartic_cubic_relation())
    assert not ok and diag == "nonzero sum"


def test_octic_annihilates_fourth_root():
    assert octic_annihilates_fourth_root() == 0


def test_five_three_identity():
    check = verify_paper_53()
    assert check.is_zero
    assert verify_relation(check.relation)[0]
    assert check.relation.mu == P([5, 3]) and len(check.relation) == 4


def test_53_inversion_symmetry():
    # c -> 1/c swaps f1 with f3 and f2 with f4
    check = verify_paper_53()
    K = check.field
    forms = check.relation.forms
    swapped = []
    for f in forms:
        roots = [(invert_generator(r.alpha), m) for r, m in f.factors]
        swapped.append(FactoredForm.from_roots(roots, field=K))
    # the images of f1, f2 carry the roots of f3, f4 up to the scaling of the linear factor
    assert {frozenset(s.assignment().items()) for s in swapped[:2]} == {
        frozenset(f.assignment().items()) for f in forms[2:]
    }


def test_library_round_trip(tmp_path):
    lib = builtin_library()
    text = lib.dumps()
    again = CertificateLibrary.from_json(json.loads(text))
    assert again.dumps() == text
    path = tmp_path / "certs.json"
    lib.save(path)
    assert CertificateLibrary.load(path).dumps() == text


def test_library_rejects_invalid():
    lib = CertificateLibrary()
    with pytest.raises(InvalidCertificate):
        lib.add(printed_quartic_cubic_relation())


def test_library_best_for_uses_subpartitions():
    lib = builtin_library()
    rel = lib.best_for(P([5, 3, 1]))
    assert rel is not None and len(rel) == 4
    assert lib.best_for(P([7, 1])) is None
    assert len(lib.best_for(P([3, 2, 2]))) == 3


def test_default_library_reads_env(tmp_path, monkeypatch):
    extra = CertificateLibrary([construct_adjacent_unit_jumps(1, 0, 1, 2)])
    path = tmp_path / "extra.json"
    extra.save(path)
    monkeypatch.setenv("STRATA_CERTS", str(path))
    lib = default_library()
    assert lib.get(P([3, 2, 1]))


def test_relation_json_round_trip():
    rel = solve_two_part_quartic_cubic()
    again = SecantRelation.from_json(json.loads(json.dumps(rel.to_json())))
    assert verify_relation(again)[0]
    assert again.to_json() == rel.to_json()


def test_classical_relation_radicals():
    rel = classical_two_two()
    assert all(f.multiplicities() == (2, 2) for f in rel.forms)
    assert {len(radical(f).factors) for f in rel.forms} == {2}
