"""Parking tuples give an upper bound; a circuit search at random roots realises it."""
import random

from strata.orbits import find_common_radical_relation, parking_search
from strata.partitions import Partition
from strata.relations import verify_relation

rng = random.Random(0)
for t, i in [(1, 1), (2, 3), (3, 2)]:
    mu = Partition([t + i] + [t] * (i + 1))
    a, bound = parking_search(mu)
    roots = rng.sample(range(-100, 100), mu.r)
    rel = find_common_radical_relation(mu, roots, mu.d - sum(a) + 2)
    print(f"{mu.short()}: parking tuple {a}, bound {bound}, relation of length {len(rel)}, "
          f"verified {verify_relation(rel)[0]}")
