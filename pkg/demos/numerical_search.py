"""Numerical search: find a (4,3) relation with one root pinned at infinity, then exactify it."""
from strata.numsearch import exactify, search_relation
from strata.partitions import Partition
from strata.relations import verify_relation

res = search_relation(Partition([4, 3]), 4, budget=400, seed=0, pin_infinity=True)
cand = res.candidate
print("accepted:", cand is not None, " best residual %.2e" % res.best.residual)
if cand is not None:
    rel = exactify(cand)
    if rel is None:
        print("candidate did not snap to an exact relation")
    else:
        print("exact relation over", rel.field, "->", verify_relation(rel))

res = search_relation(Partition([3, 2]), 3, budget=200, seed=0)
print("(3,2) length 3: accepted", res.candidate is not None,
      " best gauge-robust residual %.2e" % res.best.score)
