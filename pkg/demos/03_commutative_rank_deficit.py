"""
Two-dimensional commutative algebras: a Q that cannot be square
===============================================================

At k = 3 there are 120 contractions.  On commutative tensors their rows span
a 7-dimensional space, one short of 8, so no choice of 8 rows is invertible.
The frame survives because the rows of M(A) = A (x) Tr(A) lie in that span:
P(A)^-1 is read off the unique X with X Q(A) = M(A).
"""

from algcanon import GF, QQ, Matrix, default_profile, enumerate_schemes, random_tensor
from algcanon.canonical import frame_source_matrix, p_matrix
from algcanon.contraction import scheme_rows
from algcanon.exactla import nullspace

# exact, over the rationals
A = random_tensor(2, "commutative", QQ, seed=3)
R = scheme_rows(enumerate_schemes(3), A)
print("rank of the 120 x 8 row stack:", R.rank())
v = nullspace(R)[0]
print("every row is orthogonal to", v.T)   # columns ordered (v1, v2, v3) over free slots

M = frame_source_matrix(A, 3)
print("rank after appending M(A):", Matrix(QQ, R.tolist() + M.tolist()).rank())

prof = default_profile(2, "commutative")
print("the shipped profile keeps", len(prof.q_schemes), "rows at k =", prof.k)
print("P(A) =", p_matrix(prof, A))

# the same deficit at a random point mod 2^61 - 1
F = GF(2**61 - 1)
print("rank mod p:", scheme_rows(enumerate_schemes(3), random_tensor(2, "commutative", F, seed=1)).rank())
