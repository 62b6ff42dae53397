"""Certified lower and upper bounds on the secant degeneracy index.

Every threshold is found by an integer scan; no square roots are taken.
"""
from __future__ import annotations

from dataclasses import dataclass, asdict

from .orbits import parking_search
from .partitions import Partition, h_bar, jump_data
from .relations import CertificateLibrary, SecantRelation, verify_relation

LOWER_RULE = "jump bound: l(l-2) > h"
SINGLE_PART_RULE = "R0: rational normal curve"

# preference among rules giving the same value; the generic mu_r + 2 bound goes last
_RULE_ORDER = ("R0", "R2", "R3", "R4", "R5", "R1")


class Inconsistent(RuntimeError):
    """Lower bound above upper bound: a bug or a false certificate."""


class SinglePart(ValueError):
    pass


def _scan(pred) -> int:
    ell = 3
    while not pred(ell):
        ell += 1
    return ell


def certified_lower(h: int) -> int:
    """Smallest ``l >= 3`` with ``l (l - 2) > h``."""
    return _scan(lambda l: l * (l - 2) > h)


def printed_lower(h: int) -> int:
    """Smallest ``l >= 3`` with ``(l - 1)(l - 2) > h``, the strict form as printed."""
    return _scan(lambda l: (l - 1) * (l - 2) > h)


def lower_bound_index(mu: Partition) -> tuple[int, int]:
    """``(certified, printed)`` lower bounds from the minimal jump ``h``."""
    h = jump_data(mu).h
    return certified_lower(h), printed_lower(h)


def lower_bound_closure(mu: Partition) -> int:
    """Lower bound for the closure of the stratum, driven by :func:`h_bar`."""
    return certified_lower(h_bar(mu))


@dataclass
class UpperBound:
    upper: int
    rule: str
    relation: SecantRelation | None = None

    def __iter__(self):
        yield self.upper
        yield self.rule


def _unit_jump_count(mu: Partition) -> int:
    p = mu.parts
    return sum(1 for a, b in zip(p, p[1:]) if a - b == 1)


def _radical_power_pattern(mu: Partition) -> tuple[int, int, int] | None:
    """Smallest ``i`` with ``(t+i, t repeated i+1 times)`` inside ``mu``, as ``(i, t, i+2)``."""
    best = None
    for t, k in mu.counts.items():
        for i in range(1, k):
            if mu.counts.get(t + i, 0) and (best is None or i < best[0]):
                best = (i, t, i + 2)
    return best


def upper_bound_candidates(mu: Partition, certs: CertificateLibrary | None = None,
                           parking_budget: int = 200_000) -> list[UpperBound]:
    out = []
    if mu.r == 1:
        out.append(UpperBound(mu.d + 2, SINGLE_PART_RULE))
    out.append(UpperBound(mu.parts[-1] + 2, "R1: mu_r + 2"))
    pat = _radical_power_pattern(mu)
    if pat is not None:
        i, t, val = pat
        out.append(UpperBound(val, f"R2: subpartition ({t + i},{t}^{i + 1})"))
    if _unit_jump_count(mu) >= 2:
        out.append(UpperBound(4, "R3: two unit jumps"))
    parked = parking_search(mu, parking_budget)
    if parked is not None:
        a, bound = parked
        out.append(UpperBound(bound, f"R4: parking a=({','.join(map(str, a))})"))
    if certs is not None:
        rel = certs.best_for(mu)
        if rel is not None and verify_relation(rel)[0]:
            out.append(UpperBound(len(rel), f"R5: certificate {rel.mu.short()} [{rel.provenance}]", rel))
    return out


def upper_bound_index(mu: Partition, certs: CertificateLibrary | None = None,
                      parking_budget: int = 200_000) -> UpperBound:
    """Minimum over the applicable rules (see :func:`upper_bound_candidates`)."""
    cands = upper_bound_candidates(mu, certs, parking_budget)
    return min(cands, key=lambda u: (u.upper, _RULE_ORDER.index(u.rule[:2])))


@dataclass
class BoundsBracket:
    lower: int
    upper: int
    lower_cert: str
    upper_cert: str
    paper_stated_lower: int

    def to_json(self) -> dict:
        return asdict(self)


def bracket(mu: Partition, certs: CertificateLibrary | None = None) -> BoundsBracket:
    lower, printed = lower_bound_index(mu)
    lower_cert = LOWER_RULE
    if mu.r == 1:
        lower, lower_cert = mu.d + 2, SINGLE_PART_RULE
    up = upper_bound_index(mu, certs)
    if lower > up.upper:
        raise Inconsistent(f"{mu}: lower {lower} ({lower_cert}) > upper {up.upper} ({up.rule})")
    return BoundsBracket(lower, up.upper, lower_cert, up.rule, printed)


def common_radical_threshold(mu: Partition) -> int:
    """Largest ``m`` with ``(m - 1)**2 (r - 1) <= mu_r``.

    Any vanishing sum of at most that many pairwise non-proportional forms of
    the stratum has all its terms sharing one radical.
    """
    if mu.r == 1:
        raise SinglePart("needs at least two parts")
    r, last = mu.r, mu.parts[-1]
    m = 1
    while m * m * (r - 1) <= last:  # (m+1-1)^2 (r-1) <= mu_r
        m += 1
    return m
