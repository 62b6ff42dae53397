"""Walk through the exact identities: solve, verify, and compare with the printed constants."""
from strata.bounds import bracket
from strata.partitions import Partition
from strata.relations import (
    builtin_library,
    classical_two_two,
    printed_quartic_cubic_relation,
    solve_quartic_cubic_constants,
    solve_two_part_quartic_cubic,
    verify_paper_53,
    verify_relation,
)

rel = classical_two_two()
print("(2,2) relation of length", len(rel), "->", verify_relation(rel))

sol = solve_quartic_cubic_constants()
print("(4,3) constants over", sol.field, ": a =", sol.a, " b =", sol.b)
rel = solve_two_part_quartic_cubic()
print("(4,3) relation of length", len(rel), "->", verify_relation(rel))
print("printed (4,3) constants ->", verify_relation(printed_quartic_cubic_relation()))

check = verify_paper_53()
print("(5,3) identity over the octic field, residual zero:", check.is_zero)

lib = builtin_library()
for mu in ("2,2", "4,3", "5,3", "3,2,2"):
    br = bracket(Partition.parse(mu), lib)
    print(f"bracket {mu}: [{br.lower}, {br.upper}]")
