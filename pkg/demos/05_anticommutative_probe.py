"""
Three-dimensional anticommutative algebras
==========================================

Every such algebra has a one-dimensional group of symmetries (derivations),
so no covariant square Q(A) can be invertible and no frame exists.  The probe
records how far the contraction ranks get and the dimension count that
replaces the stated transcendence degree 0.
"""

import json

from algcanon.invariants import assumption_probe

rep = assumption_probe(3, "anticommutative", seed=0)
print("outcome:", rep["outcome"])
print(rep["message"])
for a in rep["build"]["attempts"]:
    print(f"  k={a['k']}: {a['distinct_rows']} distinct rows, rank {a['max_rank']} of {a['needed_rows']}")
print(json.dumps(rep["orbit"], indent=1, sort_keys=True))
