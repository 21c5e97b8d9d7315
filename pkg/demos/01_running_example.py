"""
A two-dimensional algebra, step by step
=======================================

Structure constants, traces, the frame P(A), the canonical form and an
isomorphism test for the small example A^1 = (1,1,0,0), A^2 = (0,1,1,1).
"""

from algcanon import QQ, StructureTensor, canonical_form, default_profile, iso_test, p_matrix, q_matrix
from algcanon.structure import trace

A = StructureTensor.from_rows(QQ, [[1, 1, 0, 0], [0, 1, 1, 1]])
print(A)

# e1*e1 = e1, e1*e2 = e1 + e2, e2*e1 = e2, e2*e2 = e2
print("Tr1 =", trace(A, 1), " Tr2 =", trace(A, 2))

prof = default_profile(2, "general")   # k = 1: Q is just [Tr1; Tr2]
print("Q(A) =", q_matrix(prof, A))
P = p_matrix(prof, A)
print("P(A) =", P, "det", P.det())

cert = canonical_form(prof, A)
print("C(A) =", cert.canonical.matrix)
print("profile hash", cert.profile_hash[:16], "...")

# bump one constant and ask again
B = StructureTensor.from_rows(QQ, [[2, 1, 0, 0], [0, 1, 1, 1]])
res = iso_test(prof, A, B)
print("A ~ B ?", res.equivalent)
