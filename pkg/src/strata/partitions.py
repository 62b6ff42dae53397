"""Integer partitions: jumps, signed subset differences, coarsening and subpartitions."""
from __future__ import annotations

import re
from bisect import bisect_left
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterator, Sequence

H_BAR_MAX_PARTS = 24


class TooLarge(ValueError):
    pass


class NotSubpartition(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple[int, ...]

    def __init__(self, parts: Sequence[int]):
        parts = tuple(int(p) for p in parts)
        if not parts:
            raise ValueError("a partition needs at least one part")
        if any(p <= 0 for p in parts):
            raise ValueError("parts must be positive")
        object.__setattr__(self, "parts", tuple(sorted(parts, reverse=True)))

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Parse ``"5,3"`` or the exponent shorthand ``"3,2^4"``."""
        parts = []
        for chunk in text.replace(" ", "").split(","):
            m = re.fullmatch(r"(\d+)(?:\^(\d+))?", chunk)
            if not m:
                raise ValueError(f"bad partition syntax: {text!r}")
            parts.extend([int(m.group(1))] * int(m.group(2) or 1))
        return cls(parts)

    @property
    def d(self) -> int:
        return sum(self.parts)

    @property
    def r(self) -> int:
        return len(self.parts)

    @cached_property
    def counts(self) -> Counter:
        return Counter(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def __str__(self):
        return ",".join(map(str, self.parts))

    def short(self) -> str:
        out = []
        for value in sorted(self.counts, reverse=True):
            k = self.counts[value]
            out.append(f"{value}^{k}" if k > 1 else str(value))
        return ",".join(out)

    def to_json(self) -> list[int]:
        return list(self.parts)


@dataclass(frozen=True)
class JumpData:
    jumps: tuple[int, ...]
    h: int


def jump_data(mu: Partition) -> JumpData:
    """Positive consecutive differences plus the last part, and their minimum."""
    p = mu.parts
    jumps = tuple(a - b for a, b in zip(p, p[1:]) if a != b) + (p[-1],)
    return JumpData(tuple(sorted(jumps)), min(jumps))


def _signed_sums(values: Sequence[int]) -> set[int]:
    sums = {0}
    for v in values:
        sums = {s + e for s in sums for e in (v, 0, -v)}
    return sums


def h_bar(mu: Partition) -> int:
    """Smallest nonzero ``|sum_A mu - sum_B mu|`` over disjoint index sets A, B.

    Meet in the middle over {-1, 0, +1} sign assignments of the two halves.
    """
    if mu.r > H_BAR_MAX_PARTS:
        raise TooLarge(f"h_bar supports at most {H_BAR_MAX_PARTS} parts, got {mu.r}")
    parts = mu.parts
    half = len(parts) // 2
    left = _signed_sums(parts[:half])
    right = sorted(_signed_sums(parts[half:]))
    best = None
    for s in left:
        i = bisect_left(right, -s)
        for j in (i - 1, i, i + 1):
            if 0 <= j < len(right):
                v = abs(s + right[j])
                if v and (best is None or v < best):
                    best = v
    return best


def h_bar_naive(mu: Partition) -> int:
    """Direct 3**r enumeration; the oracle for :func:`h_bar`."""
    vals = [abs(s) for s in _signed_sums(mu.parts) if s]
    return min(vals)


def _set_partitions(items: list) -> Iterator[list[list]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]


def h_bar_coarsening(mu: Partition, max_parts: int = 10) -> int:
    """Minimum jump over all coarsenings of ``mu`` (the definitional closure jump).

    Enumerates set partitions of the parts, so it is limited to small ``r``.
    """
    if mu.r > max_parts:
        raise TooLarge(f"coarsening enumeration limited to {max_parts} parts")
    best = None
    seen = set()
    for blocks in _set_partitions(list(mu.parts)):
        coarse = tuple(sorted((sum(b) for b in blocks), reverse=True))
        if coarse in seen:
            continue
        seen.add(coarse)
        h = jump_data(Partition(coarse)).h
        best = h if best is None else min(best, h)
    return best


def is_coarsening(mu_prime: Partition, mu: Partition) -> bool:
    """True iff the parts of ``mu`` can be grouped so the group sums are ``mu_prime``."""
    if mu_prime.d != mu.d or mu_prime.r > mu.r:
        return False
    targets = list(mu_prime.parts)
    items = list(mu.parts)  # decreasing: place big parts first

    def place(idx: int, remaining: list[int]) -> bool:
        if idx == len(items):
            return all(t == 0 for t in remaining)
        v = items[idx]
        tried = set()
        for j, room in enumerate(remaining):
            if room >= v and room not in tried:
                tried.add(room)
                remaining[j] -= v
                if place(idx + 1, remaining):
                    return True
                remaining[j] += v
        return False

    return place(0, targets)


def shift(mu: Partition, t: int) -> Partition:
    if t < 0:
        raise ValueError("shift must be nonnegative")
    return Partition([p + t for p in mu.parts])


def is_subpartition(nu: Partition, mu: Partition) -> bool:
    need = nu.counts
    have = mu.counts
    return all(have[v] >= k for v, k in need.items())


def complement(mu: Partition, nu: Partition) -> tuple[int, ...]:
    """Parts of ``mu`` left after removing ``nu`` (multiset difference)."""
    if not is_subpartition(nu, mu):
        raise NotSubpartition(f"{nu} is not a subpartition of {mu}")
    left = mu.counts - nu.counts
    return tuple(sorted(left.elements(), reverse=True))


def subpartitions(mu: Partition, min_size: int = 1) -> Iterator[Partition]:
    """Distinct subpartitions, largest first (``mu`` itself comes first)."""
    seen = set()
    for size in range(mu.r, min_size - 1, -1):
        for idx in combinations(range(mu.r), size):
            parts = tuple(mu.parts[i] for i in idx)
            if parts not in seen:
                seen.add(parts)
                yield Partition(parts)


def distinct_permutations(mu: Partition) -> list[tuple[int, ...]]:
    """All distinct arrangements of the parts, in lexicographic order."""
    values = sorted(mu.counts)
    counts = [mu.counts[v] for v in values]
    out = []
    cur = []

    def rec():
        if len(cur) == mu.r:
            out.append(tuple(cur))
            return
        for i, v in enumerate(values):
            if counts[i]:
                counts[i] -= 1
                cur.append(v)
                rec()
                cur.pop()
                counts[i] += 1

    rec()
    return out


def orbit_size(mu: Partition) -> int:
    from math import factorial

    n = factorial(mu.r)
    for k in mu.counts.values():
        n //= factorial(k)
    return n


def partitions_of(n: int, max_part: int | None = None) -> Iterator[Partition]:
    """Partitions of ``n`` in reverse lexicographic order (``(n)`` first)."""
    if n < 1:
        raise ValueError("n must be positive")

    def rec(left: int, cap: int, cur: list):
        if left == 0:
            yield Partition(cur)
            return
        for p in range(min(left, cap), 0, -1):
            cur.append(p)
            yield from rec(left - p, p, cur)
            cur.pop()

    yield from rec(n, max_part or n, [])
