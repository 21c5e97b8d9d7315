"""Independent brute-force oracles shared by the test modules."""

import itertools

import numpy as np


def gl2_matrices(q: int) -> np.ndarray:
    """All invertible 2x2 matrices over F_q, shape (N, 2, 2)."""
    allm = np.array(list(itertools.product(range(q), repeat=4)), dtype=np.int64).reshape(-1, 2, 2)
    det = (allm[:, 0, 0] * allm[:, 1, 1] - allm[:, 0, 1] * allm[:, 1, 0]) % q
    return allm[det != 0]


def exhaustive_witnesses(A_rows, B_rows, q: int) -> list:
    """Every g in GL(2, F_q) with g A = B (g (x) g), i.e. B = g A (g^-1 (x) g^-1)."""
    G = gl2_matrices(q)
    A = np.array(A_rows, dtype=np.int64) % q
    B = np.array(B_rows, dtype=np.int64) % q
    gA = np.einsum("nij,jk->nik", G, A) % q
    gg = np.einsum("nab,ncd->nacbd", G, G).reshape(-1, 4, 4)
    Bgg = np.einsum("ij,njk->nik", B, gg) % q
    hit = np.all((gA == Bgg).reshape(len(G), -1), axis=1)
    return [G[i].tolist() for i in np.nonzero(hit)[0]]
