import random
from fractions import Fraction

import numpy as np
import pytest

from algcanon.errors import DimensionMismatch, SingularMatrix, SymmetryViolation, UnsupportedField
from algcanon.exactla import GF, QQ, Matrix
from algcanon.structure import (
    StructureTensor,
    SymmetryClass,
    act,
    column,
    free_parameter_count,
    multiply_vectors,
    random_basis_change,
    random_tensor,
    stabilizer_dimension,
    trace,
    validate_symmetry,
)

FP = GF(2**31 - 1)
CLASSES = list(SymmetryClass)


def act_oracle(g: Matrix, A: StructureTensor):
    """B^i_{jk} = sum g_{ia} A^a_{bc} (g^-1)_{bj} (g^-1)_{ck}, by explicit loops."""
    F = A.field
    m = A.m
    gi = g.inverse().tolist()
    gl = g.tolist()
    a3 = A.array3
    out = [[F.zero] * (m * m) for _ in range(m)]
    for i in range(m):
        for j in range(m):
            for k in range(m):
                s = F.zero
                for a in range(m):
                    for b in range(m):
                        for c in range(m):
                            s = F.norm(s + gl[i][a] * a3[a, b, c] * gi[b][j] * gi[c][k])
                out[i][j * m + k] = s
    return out


def test_running_example_valid(running_example):
    rep = validate_symmetry(running_example)
    assert rep.sym is SymmetryClass.GENERAL and rep.rank == 2 and rep.full_rank


def test_zero_commutative_not_full_rank():
    rep = validate_symmetry(StructureTensor.zero(QQ, 2, "commutative"))
    assert rep.rank == 0 and not rep.full_rank


def test_symmetry_violation_location():
    rows = [[0, 1, 0, 0], [0, 0, 0, 0]]
    with pytest.raises(SymmetryViolation) as exc:
        StructureTensor.from_rows(QQ, rows, "commutative")
    assert exc.value.index == (1, 1, 2)


def test_anticommutative_rejected_in_char_two_and_diagonal_checked():
    with pytest.raises(UnsupportedField):
        GF(2)
    with pytest.raises(SymmetryViolation):
        StructureTensor.from_rows(QQ, [[1, 0, 0, 0], [0, 0, 0, 0]], "anticommutative")


def test_shape_checked():
    with pytest.raises(DimensionMismatch):
        StructureTensor(2, SymmetryClass.GENERAL, Matrix.zeros(QQ, 2, 3))


def test_entry_layout_matches_kron():
    # e_j * e_k reads column (j-1)m + k
    A = random_tensor(3, "general", QQ, 1)
    for j in range(3):
        for k in range(3):
            u = column(QQ, [1 if r == j else 0 for r in range(3)])
            v = column(QQ, [1 if r == k else 0 for r in range(3)])
            prod = multiply_vectors(A, u, v).flat()
            assert prod == tuple(A.entry(i + 1, j + 1, k + 1) for i in range(3))


def test_single_entry_action_example():
    A = StructureTensor.from_rows(QQ, [[0, 0, 0, 1], [0, 0, 0, 0]])
    B = act(Matrix.diag(QQ, [1, 2]), A)
    assert B.matrix == Matrix(QQ, [[0, 0, 0, Fraction(1, 4)], [0, 0, 0, 0]])


def test_identity_action(running_example):
    assert act(Matrix.identity(QQ, 2), running_example).matrix == running_example.matrix


def test_singular_g_rejected(running_example):
    with pytest.raises(SingularMatrix):
        act(Matrix(QQ, [[1, 1], [1, 1]]), running_example)


@pytest.mark.parametrize("sym", CLASSES, ids=lambda s: s.value)
@pytest.mark.parametrize("field", [QQ, FP], ids=["QQ", "Fp31"])
def test_act_matches_loop_oracle(sym, field):
    rng = random.Random(f"{sym}{field}")
    for _ in range(5):
        A = random_tensor(3, sym, field, rng)
        g = random_basis_change(3, field, rng)
        B = act(g, A)
        assert B.matrix.tolist() == act_oracle(g, A)
        assert B.sym is sym
        validate_symmetry(B)


@pytest.mark.parametrize("sym", CLASSES, ids=lambda s: s.value)
def test_action_law_and_trace_covariance(sym):
    rng = random.Random(f"law{sym}")
    for m in (2, 3):
        for _ in range(100 if m == 2 else 30):
            A = random_tensor(m, sym, FP, rng)
            g1 = random_basis_change(m, FP, rng)
            g2 = random_basis_change(m, FP, rng)
            assert act(g1, act(g2, A)).matrix == act(g1 @ g2, A).matrix
            gi = g1.inverse()
            B = act(g1, A)
            for slot in (1, 2):
                assert trace(B, slot) == trace(A, slot) @ gi


def test_products_follow_basis_change():
    rng = random.Random(9)
    for sym in CLASSES:
        A = random_tensor(3, sym, FP, rng)
        g = random_basis_change(3, FP, rng)
        u = column(FP, [FP.random_element(rng) for _ in range(3)])
        v = column(FP, [FP.random_element(rng) for _ in range(3)])
        assert multiply_vectors(act(g, A), g @ u, g @ v) == g @ multiply_vectors(A, u, v)


def test_traces_running_example(running_example):
    assert trace(running_example, 1).flat() == (2, 2)
    assert trace(running_example, 2).flat() == (2, 1)


def test_trace_identities_by_class():
    rng = random.Random(10)
    for _ in range(10):
        C = random_tensor(3, "commutative", FP, rng)
        assert trace(C, 1) == trace(C, 2)
        N = random_tensor(3, "anticommutative", FP, rng)
        assert trace(N, 1) == trace(N, 2).scale(FP.norm(-1))


def test_commutative_product_symmetric():
    rng = random.Random(11)
    A = random_tensor(3, "commutative", FP, rng)
    for _ in range(10):
        u = column(FP, [FP.random_element(rng) for _ in range(3)])
        v = column(FP, [FP.random_element(rng) for _ in range(3)])
        assert multiply_vectors(A, u, v) == multiply_vectors(A, v, u)


def test_bilinearity(running_example):
    u, u2, v = column(QQ, [1, 2]), column(QQ, [3, -1]), column(QQ, [5, 7])
    A = running_example
    assert multiply_vectors(A, u + u2, v) == multiply_vectors(A, u, v) + multiply_vectors(A, u2, v)
    e1 = column(QQ, [1, 0])
    assert multiply_vectors(A, e1, e1).flat() == (1, 0)


def test_random_tensor_determinism_and_draw_count():
    a = random_tensor(3, "commutative", QQ, 42)
    b = random_tensor(3, "commutative", QQ, 42)
    assert a.matrix == b.matrix
    rng = random.Random(7)
    random_tensor(3, "commutative", FP, rng)
    ref = random.Random(7)
    for _ in range(18):
        ref.randrange(FP.p)
    assert rng.random() == ref.random()
    N = random_tensor(4, "anticommutative", QQ, 3)
    assert all(N.entry(i, j, j) == 0 for i in range(1, 5) for j in range(1, 5))
    assert all(-9 <= x <= 9 for x in a.flat())


def test_parameter_counts():
    assert [free_parameter_count(3, s) for s in CLASSES] == [27, 18, 9]
    assert free_parameter_count(2, "commutative") == 6


def test_stabilizer_dimension():
    rng = random.Random(12)
    assert stabilizer_dimension(random_tensor(3, "general", FP, rng)) == 0
    assert stabilizer_dimension(random_tensor(3, "commutative", FP, rng)) == 0
    # generic 3-dim anticommutative algebras carry a 1-dim stabilizer
    assert stabilizer_dimension(random_tensor(3, "anticommutative", FP, rng)) == 1
    # every derivation of the zero algebra
    assert stabilizer_dimension(StructureTensor.zero(FP, 2)) == 4


def test_array3_readonly():
    A = random_tensor(2, "general", QQ, 0)
    assert isinstance(A.array3, np.ndarray)
    with pytest.raises(ValueError):
        A.array3[0, 0, 0] = 1
