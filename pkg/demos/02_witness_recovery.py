"""
Recovering the basis change between two presentations
=====================================================

Hide a random g in B = g.A over the rationals and get it back exactly.
"""

from algcanon import QQ, act, default_profile, iso_test, random_basis_change, random_tensor

prof = default_profile(3, "general")
print("m=3 general profile: k =", prof.k, "frame columns", [c + 1 for c in prof.frame_columns])

A = random_tensor(3, "general", QQ, seed=2024)
g = random_basis_change(3, QQ, seed=7)
B = act(g, A)
print("g =", g)

res = iso_test(prof, A, B)
print("equivalent:", res.equivalent)
print("witness  =", res.witness)
print("witness == g:", res.witness == g)

# both canonical forms coincide; entries grow, but stay exact
C = res.certificates[0].canonical
print("largest denominator in C(A):", max(x.denominator for x in C.flat()))
