"""Sym_r-orbits of a form: orbit matrices and ranks, common-radical relations,
the growing/stabilising classification and the parking condition.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import permutations
from math import comb, factorial, log2
from typing import Sequence

from .exactalg import QQ, FieldElement, NumberField, det_int, exact_nullspace, matrix_rank, poly_divmod
from .forms import FactoredForm, ProjRoot, expand, gcd_forms, _common_field
from .partitions import Partition, distinct_permutations, jump_data, orbit_size
from .relations import SecantRelation, _relation_from_forms, verify_relation


class DuplicateRoots(ValueError):
    pass


def _as_roots(roots, field: NumberField | None = None) -> list[ProjRoot]:
    if field is None:
        field = _common_field(
            [r.alpha if isinstance(r, ProjRoot) else r for r in roots if r is not None]
        )
    out = []
    for r in roots:
        if r is None:
            out.append(ProjRoot.infinity(field))
        elif isinstance(r, ProjRoot):
            out.append(r.to_field(field))
        else:
            out.append(ProjRoot.at(r, field))
    if len(set(out)) != len(out):
        raise DuplicateRoots("roots must be pairwise distinct")
    return out


@dataclass
class OrbitMatrix:
    mu: Partition
    roots: list[ProjRoot]
    arrangements: list[tuple[int, ...]]
    forms: list[FactoredForm]
    matrix: list[tuple]

    @property
    def field(self) -> NumberField:
        return self.roots[0].field

    @property
    def size(self) -> int:
        return len(self.arrangements)


def orbit_matrix(mu: Partition, roots) -> OrbitMatrix:
    """Rows are the expansions of every distinct assignment of ``mu`` to ``roots``.

    Arrangements are in lexicographic order of their multiplicity sequences.
    """
    roots = _as_roots(roots)
    if len(roots) != mu.r:
        raise ValueError(f"need {mu.r} roots, got {len(roots)}")
    field = roots[0].field
    arrangements = distinct_permutations(mu)
    forms = [FactoredForm(field.one, zip(roots, arr)) for arr in arrangements]
    rows = [expand(f).coeffs for f in forms]
    return OrbitMatrix(mu, roots, arrangements, forms, rows)


def orbit_rank(om: OrbitMatrix) -> int:
    return matrix_rank([list(r) for r in om.matrix], om.mu.d + 1)


def _reduced_rows(om: OrbitMatrix) -> list[list]:
    # dividing every form by their gcd keeps linear (in)dependence and shrinks the rows
    g = gcd_forms(om.forms)
    return [list(expand(f.exact_divide(g)).coeffs) for f in om.forms]


def _reduce(vec: list, basis: list) -> list:
    for p, b in basis:
        c = vec[p]
        if c:
            f = c / b[p]
            vec = [x - f * y for x, y in zip(vec, b)]
    return vec


def _first_nonzero(vec) -> int | None:
    return next((i for i, x in enumerate(vec) if x), None)


def find_circuit(vectors: Sequence[list], max_len: int, budget: int = 20_000) -> tuple[int, ...] | None:
    """Smallest index set (size >= 3) of minimally dependent vectors.

    Enumerates subsets by increasing size, sharing elimination work along the
    depth-first prefix; when ``budget`` reductions are exhausted, falls back to
    the smallest fundamental circuit of a reduced echelon form.
    """
    n = len(vectors)
    if n < 3:
        return None
    ncols = len(vectors[0])
    cols = [[vectors[j][i] for j in range(n)] for i in range(ncols)]
    rank = matrix_rank(cols, n)
    if rank == n:
        return None
    spent = 0
    for k in range(3, min(max_len, rank + 1) + 1):
        found, spent = _circuit_of_size(vectors, k, spent, budget)
        if found is not None:
            return found
        if spent >= budget:
            break
    else:
        return None
    return _fundamental_circuit(cols, n, max_len)


def _circuit_of_size(vectors, k, spent, budget):
    n = len(vectors)

    def rec(start, chosen, basis, spent):
        if len(chosen) == k - 1:
            for j in range(start, n):
                spent += 1
                if not any(_reduce(list(vectors[j]), basis)):
                    return tuple(chosen) + (j,), spent
                if spent >= budget:
                    return None, spent
            return None, spent
        for j in range(start, n - (k - 1 - len(chosen)) + 1):
            spent += 1
            v = _reduce(list(vectors[j]), basis)
            p = _first_nonzero(v)
            if p is None:
                continue  # cannot happen below the minimal circuit size
            found, spent = rec(j + 1, chosen + [j], basis + [(p, v)], spent)
            if found is not None or spent >= budget:
                return found, spent
        return None, spent

    return rec(0, [], [], spent)


def _fundamental_circuit(cols, n, max_len):
    best = None
    for v in exact_nullspace(cols, n):
        support = tuple(i for i, x in enumerate(v) if x)
        if len(support) >= 3 and (best is None or len(support) < len(best)):
            best = support
    if best is not None and len(best) <= max_len:
        return best
    return None


def find_common_radical_relation(mu: Partition, roots, max_len: int, budget: int = 20_000):
    """A minimal-length relation among orbit forms at ``roots``, or None.

    All terms share the radical ``prod (beta x - alpha y)`` over ``roots``.
    """
    om = orbit_matrix(mu, roots)
    if om.size < 3:
        return None
    rows = _reduced_rows(om)
    circuit = find_circuit(rows, max_len, budget)
    if circuit is None:
        return None
    forms = [om.forms[i] for i in circuit]
    rel = _relation_from_forms(om.field, mu, forms, f"common radical relation at roots {[str(r) for r in om.roots]}")
    return rel


# --- three parts: Wronskian identity test ----------------------------------

def _low_coeffs(exps: Sequence[int], xs: Sequence[int], k: int) -> list[int]:
    """First ``k`` coefficients in ``t`` of ``prod (t - x_i)**e_i``."""
    acc = [1] + [0] * (k - 1)
    for e, x in zip(exps, xs):
        ser = [comb(e, i) * (-x) ** (e - i) if i <= e else 0 for i in range(k)]
        acc = [sum(acc[i] * ser[j - i] for i in range(j + 1)) for j in range(k)]
    return acc


def wronskian_grid_bound(a: int, b: int, c: int) -> int:
    """Total-degree bound ``k (a + b + c)`` for the orbit Wronskian."""
    k = len(set(permutations((a, b, c))))
    return k * (a + b + c)


def strongly_stabilising_3parts(a: int, b: int, c: int) -> bool:
    """Whether the Wronskian of the full orbit of ``(t-x1)^a (t-x2)^b (t-x3)^c``
    vanishes identically in ``(t, x1, x2, x3)``.

    The Wronskian ``W`` is invariant under a common translation of ``t`` and
    the ``x_i`` and is homogeneous, so ``W == 0`` iff ``W(0, x1, x2, 1) == 0``.
    That polynomial has total degree at most ``k (a+b+c)`` (``k`` = orbit
    size), so vanishing on a grid with one more point per axis proves it is
    zero. At ``t = 0`` the Wronski matrix is the matrix of the first ``k``
    Taylor coefficients, up to the nonzero factor ``prod i!``.
    """
    a, b, c = sorted((a, b, c))
    orbit = sorted(set(permutations((a, b, c))))
    k = len(orbit)
    if k == 1:
        return False
    D = wronskian_grid_bound(a, b, c)
    for x1 in range(D + 1):
        for x2 in range(D + 1):
            xs = (x1, x2, 1)
            M = [_low_coeffs(arr, xs, k) for arr in orbit]
            if det_int(M) != 0:
                return False
    return True


# --- classification ---------------------------------------------------------

@dataclass
class Classification:
    verdict: str  # "Growing" | "Stabilising" | "Unknown"
    rule: str = ""
    certificate: SecantRelation | None = None
    report: dict = dc_field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"verdict": self.verdict, "rule": self.rule}
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        if self.report:
            out["report"] = self.report
        return out


def cyclotomic_poly(n: int) -> tuple:
    """Phi_n over Q, constant-term first."""
    from fractions import Fraction

    num = tuple([Fraction(-1)] + [Fraction(0)] * (n - 1) + [Fraction(1)])
    for d in range(1, n):
        if n % d == 0:
            num, rem = poly_divmod(num, cyclotomic_poly(d))
            assert not rem
    return num


def structured_root_sets(r: int) -> list[list]:
    """Symmetric configurations tried before random ones."""
    sym = [0]
    k = 1
    while len(sym) < r:
        sym.extend([k, -k])
        k += 1
    sets = [sym[:r], [None] + sym[: r - 1], list(range(r))]
    if r >= 3:
        K = NumberField(cyclotomic_poly(r)) if r > 2 else QQ
        z = K.gen
        sets.append([z**j for j in range(r)])
    return sets


def _rel_cert_or_none(mu, roots, max_len, budget):
    rel = find_common_radical_relation(mu, roots, max_len, budget)
    if rel is not None and verify_relation(rel)[0]:
        return rel
    return None


def classify_index(mu: Partition, budget: int = 20, seed: int = 0) -> Classification:
    """Growing / Stabilising / Unknown verdict for ``mu``.

    Growing is only emitted by the two-part, factorial-jump and 3-part
    Wronskian rules; for four or more parts, a deficient orbit found at some
    root configuration (structured first, then ``budget`` random integer ones)
    certifies Stabilising, and failing that the verdict is Unknown.
    """
    r = mu.r
    if r <= 2:
        return Classification("Growing", "two-part rule",
                              report={"orbit_size": orbit_size(mu)})
    h = jump_data(mu).h
    if h >= factorial(r) ** 2:
        return Classification("Growing", "factorial-jump rule", report={"h": h, "r_factorial_sq": factorial(r) ** 2})
    N = orbit_size(mu)
    if r == 3:
        a, b, c = sorted(mu.parts)
        if strongly_stabilising_3parts(a, b, c):
            rel = _rel_cert_or_none(mu, [0, 1, -1], N, 10**6)
            return Classification("Stabilising", "3-part Wronskian rule", rel,
                                  {"roots": ["0", "1", "-1"], "length": len(rel) if rel else None})
        return Classification("Growing", "3-part Wronskian rule")

    parked = parking_search(mu)
    trials = 0
    witness = None
    root_sets = structured_root_sets(r)
    rng = random.Random(seed)
    span = max(3 * r, 10)
    for _ in range(budget):
        root_sets.append(rng.sample(range(-span, span + 1), r))
    max_len = parked[1] if parked else N
    for roots in root_sets:
        trials += 1
        om = orbit_matrix(mu, roots)
        rank = orbit_rank(om)
        if rank < om.size:
            rel = _rel_cert_or_none(mu, roots, max_len if parked else N, 20_000)
            if rel is None and parked:
                rel = _rel_cert_or_none(mu, roots, N, 20_000)
            if rel is not None:
                return Classification(
                    "Stabilising",
                    "deficient orbit" + (" (parking condition holds)" if parked else ""),
                    rel,
                    {"roots": [str(x) for x in om.roots], "orbit_size": om.size, "rank": rank, "trials": trials,
                     "parking": {"a": list(parked[0]), "bound": parked[1]} if parked else None},
                )
        elif witness is None:
            witness = {"roots": [str(x) for x in om.roots], "rank": rank}
    return Classification("Unknown", "search budget exhausted", None,
                          {"trials": trials, "orbit_size": N, "full_rank_witness": witness})


# --- parking condition -------------------------------------------------------

def count_permutations_geq(mu: Partition, a: Sequence[int]) -> int:
    """Distinct arrangements ``pi`` of the parts with ``pi_i >= a_i`` for every i."""
    if len(a) != mu.r:
        raise ValueError("a must have one entry per part")
    values = tuple(sorted(mu.counts))
    a = tuple(a)

    @lru_cache(maxsize=None)
    def go(i: int, left: tuple) -> int:
        if i == len(a):
            return 1
        total = 0
        for j, v in enumerate(values):
            if left[j] and v >= a[i]:
                total += go(i + 1, left[:j] + (left[j] - 1,) + left[j + 1 :])
        return total

    return go(0, tuple(mu.counts[v] for v in values))


def count_permutations_naive(mu: Partition, a: Sequence[int]) -> int:
    return sum(1 for p in set(permutations(mu.parts)) if all(x >= y for x, y in zip(p, a)))


def parking_condition(mu: Partition, a: Sequence[int]) -> bool:
    """``count_permutations_geq(mu, a) >= |mu| - sum(a) + 2``, for a size of at least 3."""
    if len(a) != mu.r or any(x < 1 for x in a):
        raise ValueError("a must be a positive tuple with one entry per part")
    size = mu.d - sum(a) + 2
    return size >= 3 and count_permutations_geq(mu, a) >= size


def small_jumps_schedule(mu: Partition, cap: int) -> tuple[int, ...] | None:
    """The constructive ``a`` for partitions with many jumps of size <= cap.

    Applies when ``cap > 45`` and there are at least
    ``2 (log cap + log log cap + 2)`` such jumps (binary logs): every second
    qualifying jump position ``j`` gets ``a_j = mu_{j+1}``, all others ``a_i = mu_i``.
    """
    p = mu.parts
    positions = [j for j in range(mu.r - 1) if 0 < p[j] - p[j + 1] <= cap]
    if cap <= 45 or len(positions) < 2 * (log2(cap) + log2(log2(cap)) + 2):
        return None
    chosen = set(positions[::2])
    return tuple(p[j + 1] if j in chosen else p[j] for j in range(mu.r))


def parking_search(mu: Partition, budget: int = 1_000_000):
    """``(a, bound)`` minimising ``bound = |mu| - sum(a) + 2`` over parking tuples, or None.

    Only part values are tried for each ``a_i``: raising ``a_i`` to the next
    part value keeps the count and lowers the bound. Ties go to the
    lexicographically smallest ``a``.
    """
    d, r = mu.d, mu.r
    values = sorted(mu.counts)
    lo, hi = values[0], values[-1]
    best: list = [None, None]  # (a, bound)

    for cap in sorted(set(jump_data(mu).jumps)):
        a = small_jumps_schedule(mu, cap)
        if a is not None and parking_condition(mu, a):
            bound = d - sum(a) + 2
            if best[1] is None or bound < best[1]:
                best[:] = [a, bound]

    nodes = 0
    cur: list[int] = []

    def rec(i: int, partial_sum: int) -> None:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            return
        if i == r:
            bound = d - partial_sum + 2
            if bound >= 3 and count_permutations_geq(mu, cur) >= bound:
                if best[1] is None or bound < best[1] or (bound == best[1] and tuple(cur) < best[0]):
                    best[:] = [tuple(cur), bound]
            return
        max_sum = partial_sum + (r - i) * hi
        min_bound = max(d - max_sum + 2, 3)
        if best[1] is not None and min_bound > best[1]:
            return
        upper = count_permutations_geq(mu, cur + [lo] * (r - i))
        if upper < min_bound:
            return
        for v in values:
            cur.append(v)
            rec(i + 1, partial_sum + v)
            cur.pop()

    rec(0, 0)
    if best[1] is None:
        return None
    return best[0], best[1]
