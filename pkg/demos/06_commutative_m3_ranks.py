"""
Three-dimensional commutative algebras, k up to 6
=================================================

How close do contraction rows get to a square Q?  This uses a plain int64
kernel modulo a 28-bit prime (fast, not exact over the big field the library
uses), with commutative slot symmetry folded in before evaluation.  Runs in
about a minute; k = 6 evaluates 29520 schemes.
"""

import itertools
import random
import sys
import time

import numpy as np

from algcanon.contraction import ContractionScheme, commutative_normal_form
from algcanon.exactla import is_prime

m = 3
p = next(q for q in range(2**28 - 1, 0, -2) if is_prime(q))   # products stay below 2^56
rng = random.Random(5)
A = np.zeros((m, m, m), dtype=np.int64)
for i in range(m):
    for j in range(m):
        for k in range(j, m):
            A[i, j, k] = A[i, k, j] = rng.randrange(p)
tr = np.einsum("jji->i", A) % p


def contract(subscripts):
    # pairwise, reducing after each step so nothing overflows
    ins, out = subscripts.split("->")
    cur = [(A, t) for t in ins.split(",")]
    while len(cur) > 1:
        (X, xs), (Y, ys) = cur[0], cur[1]
        rest = "".join(s for _, s in cur[2:]) + out
        keep = "".join(dict.fromkeys(c for c in xs + ys if c in rest))
        cur = [(np.einsum(f"{xs},{ys}->{keep}", X, Y) % p, keep)] + cur[2:]
    X, xs = cur[0]
    return np.einsum(f"{xs}->{out}", X).reshape(-1) % p


def rank_mod_p(rows):
    M = np.array(rows, dtype=np.int64) % p
    r = 0
    for c in range(M.shape[1]):
        nz = np.nonzero(M[r:, c])[0]
        if len(nz) == 0:
            continue
        piv = r + nz[0]
        M[[r, piv]] = M[[piv, r]]
        M[r] = M[r] * pow(int(M[r, c]), -1, p) % p
        f = M[:, c].copy()
        f[r] = 0
        idx = np.nonzero(f)[0]
        M[idx] = (M[idx] - f[idx, None] * M[r][None, :] % p) % p
        r += 1
        if r == len(M):
            break
    return r


k_top = int(sys.argv[1]) if len(sys.argv) > 1 else 6
for k in range(1, k_top + 1):
    t = time.time()
    slots = [(f, s) for f in range(k) for s in (0, 1)]
    normal = dict.fromkeys(commutative_normal_form(ContractionScheme(a))
                           for a in itertools.permutations(slots, k))
    rows = {}
    for S in normal:
        r = contract(S.subscripts)
        rows.setdefault(r.tobytes(), r)
    rows = list(rows.values())
    rk = rank_mod_p(rows)
    line = f"k={k}: {len(normal)} schemes, {len(rows)} distinct rows, rank {rk} of {m**k}"
    if k >= 2:
        M = A.reshape(m, m * m)
        for _ in range(k - 2):
            M = np.einsum("ab,c->abc", M, tr).reshape(m, -1) % p
        line += f", M(A) in span: {rank_mod_p(rows + list(M)) == rk}"
    print(line, f"({time.time() - t:.1f}s)", flush=True)
