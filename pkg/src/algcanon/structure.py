"""Structure tensors of finite-dimensional algebras and the basis-change action.

A tensor over a field is stored as the ``m x m**2`` matrix whose entry in row
``i`` and column ``j*m + k`` (0-based) is the structural constant
``A^i_{j,k}``, i.e. ``e_j * e_k = sum_i A^i_{j,k} e_i``.  With this layout the
product of coordinate vectors is ``A @ kron(u, v)`` and a change of basis by
``g`` is the matrix identity ``B = g A kron(g^-1, g^-1)``.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, KindMismatch, SymmetryViolation, UnsupportedField
from .exactla import Matrix, kron


class SymmetryClass(str, enum.Enum):
    GENERAL = "general"
    COMMUTATIVE = "commutative"
    ANTICOMMUTATIVE = "anticommutative"

    @classmethod
    def parse(cls, value) -> SymmetryClass:
        if isinstance(value, cls):
            return value
        aliases = {"comm": "commutative", "anti": "anticommutative", "gen": "general"}
        try:
            return cls(aliases.get(value, value))
        except ValueError:
            raise ValueError(f"unknown symmetry class {value!r}") from None


def free_parameter_count(m: int, sym) -> int:
    """Dimension of the space of tensors of the class: m^3, m^2(m+1)/2 or m^2(m-1)/2."""
    sym = SymmetryClass.parse(sym)
    if sym is SymmetryClass.GENERAL:
        return m**3
    if sym is SymmetryClass.COMMUTATIVE:
        return m * m * (m + 1) // 2
    return m * m * (m - 1) // 2


def free_positions(m: int, sym) -> list[tuple[int, int, int]]:
    """0-based (i, j, k) of the free entries, in the order random draws fill them."""
    sym = SymmetryClass.parse(sym)
    out = []
    for i in range(m):
        for j in range(m):
            for k in range(m):
                if sym is SymmetryClass.GENERAL:
                    out.append((i, j, k))
                elif sym is SymmetryClass.COMMUTATIVE and j <= k:
                    out.append((i, j, k))
                elif sym is SymmetryClass.ANTICOMMUTATIVE and j < k:
                    out.append((i, j, k))
    return out


def _first_violation(arr: np.ndarray, sym: SymmetryClass, field):
    m = arr.shape[0]
    if sym is SymmetryClass.GENERAL:
        return None
    for i in range(m):
        for j in range(m):
            for k in range(j, m):
                a, b = arr[i, j, k], arr[i, k, j]
                if sym is SymmetryClass.COMMUTATIVE:
                    if a != b:
                        return (i, j, k)
                elif j == k:
                    if a != field.zero:
                        return (i, j, k)
                elif a != field.norm(-b):
                    return (i, j, k)
    return None


@dataclass(frozen=True)
class StructureTensor:
    """Structural constants of an ``m``-dimensional algebra of a given class.

    Construction checks the symmetry class and raises SymmetryViolation.
    """

    m: int
    sym: SymmetryClass
    matrix: Matrix

    def __post_init__(self):
        sym = SymmetryClass.parse(self.sym)
        object.__setattr__(self, "sym", sym)
        if self.m < 2:
            raise DimensionMismatch(f"algebra dimension must be >= 2, got {self.m}")
        if self.matrix.shape != (self.m, self.m * self.m):
            raise DimensionMismatch(
                f"expected {self.m}x{self.m * self.m} structural matrix, got {self.matrix.shape}")
        if sym is SymmetryClass.ANTICOMMUTATIVE and self.field.characteristic == 2:
            raise UnsupportedField("anticommutative tensors need characteristic != 2")
        bad = _first_violation(self.array3, sym, self.field)
        if bad is not None:
            i, j, k = (x + 1 for x in bad)
            raise SymmetryViolation(
                f"A^{i}_{{{j},{k}}} breaks the {sym.value} symmetry", index=(i, j, k))

    @classmethod
    def from_rows(cls, field, rows, sym="general") -> StructureTensor:
        mat = Matrix(field, rows)
        return cls(mat.rows, SymmetryClass.parse(sym), mat)

    @classmethod
    def from_array(cls, field, arr, sym="general") -> StructureTensor:
        """Build from a nested ``[i][j][k]`` array of constants."""
        arr = np.array(arr, dtype=object)
        m = arr.shape[0]
        return cls.from_rows(field, arr.reshape(m, m * m), sym)

    @classmethod
    def zero(cls, field, m: int, sym="general") -> StructureTensor:
        return cls(m, SymmetryClass.parse(sym), Matrix.zeros(field, m, m * m))

    @property
    def field(self):
        return self.matrix.field

    @property
    def array3(self) -> np.ndarray:
        """Read-only ``(m, m, m)`` view with ``[i, j, k] = A^i_{j,k}``."""
        return self.matrix.array.reshape(self.m, self.m, self.m)

    def entry(self, i: int, j: int, k: int):
        """``A^i_{j,k}`` with 1-based indices."""
        return self.matrix.array[i - 1, (j - 1) * self.m + (k - 1)]

    def flat(self) -> tuple:
        return self.matrix.flat()

    def parameters(self) -> tuple:
        return tuple(self.array3[pos] for pos in free_positions(self.m, self.sym))

    def with_field(self, field, convert=None) -> StructureTensor:
        convert = convert or field
        return StructureTensor(self.m, self.sym, self.matrix.map(convert, field))

    def __repr__(self):
        return f"StructureTensor(m={self.m}, sym={self.sym.value}, {self.matrix!r})"


@dataclass(frozen=True)
class SymmetryReport:
    sym: SymmetryClass
    rank: int
    full_rank: bool


def validate_symmetry(A: StructureTensor) -> SymmetryReport:
    """Re-check the declared class and report whether rank(A) = m.

    The class itself is also enforced at construction.
    """
    bad = _first_violation(A.array3, A.sym, A.field)
    if bad is not None:
        i, j, k = (x + 1 for x in bad)
        raise SymmetryViolation(f"A^{i}_{{{j},{k}}} breaks the {A.sym.value} symmetry",
                                index=(i, j, k))
    r = _value_matrix(A.matrix).rank()
    return SymmetryReport(A.sym, r, r == A.m)


def _value_matrix(M: Matrix) -> Matrix:
    if M.field.kind == "dual":
        return M.map(lambda x: x.value, M.field.base)
    return M


def tensor_from_parameters(m: int, sym, field, params) -> StructureTensor:
    """Fill the free entries (see :func:`free_positions`) and mirror the rest."""
    sym = SymmetryClass.parse(sym)
    positions = free_positions(m, sym)
    params = list(params)
    if len(params) != len(positions):
        raise DimensionMismatch(f"{sym.value} m={m} takes {len(positions)} parameters, got {len(params)}")
    arr = np.full((m, m, m), field.zero, dtype=object)
    for (i, j, k), v in zip(positions, params):
        v = field(v)
        arr[i, j, k] = v
        if sym is SymmetryClass.COMMUTATIVE:
            arr[i, k, j] = v
        elif sym is SymmetryClass.ANTICOMMUTATIVE:
            arr[i, k, j] = field.norm(-v)
    return StructureTensor(m, sym, Matrix._wrap(field, arr.reshape(m, m * m)))


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def random_tensor(m: int, sym, field, seed) -> StructureTensor:
    """Seeded random tensor of the class; draws exactly one value per free entry.

    Rationals are integers in [-9, 9]; residues are uniform in [0, p).
    ``seed`` may be any value accepted by ``random.Random`` or a Random instance.
    """
    rng = _rng(seed)
    d = free_parameter_count(m, sym)
    return tensor_from_parameters(m, sym, field, [field.random_element(rng) for _ in range(d)])


def random_basis_change(m: int, field, seed) -> Matrix:
    """Seeded random invertible m x m matrix (redraws singular candidates)."""
    rng = _rng(seed)
    while True:
        g = Matrix(field, [[field.random_element(rng) for _ in range(m)] for _ in range(m)])
        if g.det() != field.zero:
            return g


def _check_g(g: Matrix, A: StructureTensor):
    if g.shape != (A.m, A.m):
        raise DimensionMismatch(f"basis change of shape {g.shape} for m={A.m}")
    if g.field != A.field:
        raise KindMismatch(f"basis change over {g.field}, tensor over {A.field}")


def act(g: Matrix, A: StructureTensor, g_inv: Matrix | None = None) -> StructureTensor:
    """Change of basis: ``B = g A kron(g^-1, g^-1)``.

    Raises SingularMatrix when g is not invertible.  Pass ``g_inv`` to skip
    the inversion when it is already known.
    """
    _check_g(g, A)
    gi = g.inverse() if g_inv is None else g_inv
    B = g @ A.matrix @ kron(gi, gi)
    return StructureTensor(A.m, A.sym, B)


def trace(A: StructureTensor, slot: int) -> Matrix:
    """Row of length m.  slot 1: ``sum_j A^j_{j,i}``; slot 2: ``sum_j A^j_{i,j}``."""
    t = A.array3
    if slot == 1:
        row = np.einsum("jji->i", t)
    elif slot == 2:
        row = np.einsum("jij->i", t)
    else:
        raise ValueError(f"trace slot must be 1 or 2, got {slot}")
    return Matrix._wrap(A.field, A.field.reduce(np.asarray(row, dtype=object).reshape(1, -1)))


def multiply_vectors(A: StructureTensor, u: Matrix, v: Matrix) -> Matrix:
    """Coordinates of the product of the elements with coordinates ``u``, ``v``."""
    for w in (u, v):
        if w.shape != (A.m, 1):
            raise DimensionMismatch(f"expected a column of length {A.m}, got {w.shape}")
    return A.matrix @ kron(u, v)


def column(field, values) -> Matrix:
    return Matrix(field, [[x] for x in values])


def stabilizer_dimension(A: StructureTensor) -> int:
    """Dimension of the infinitesimal stabilizer ``{X : X A = A (X (x) I + I (x) X)}``.

    A positive value means a positive-dimensional stabilizer at A.
    """
    field = A.field
    m = A.m
    eye = Matrix.identity(field, m)
    cols = []
    for a in range(m):
        for b in range(m):
            X = Matrix._wrap(field, np.array(
                [[field.one if (r, c) == (a, b) else field.zero for c in range(m)] for r in range(m)],
                dtype=object))
            D = X @ A.matrix - A.matrix @ (kron(X, eye) + kron(eye, X))
            cols.append(D.flat())
    J = Matrix._wrap(field, np.array(cols, dtype=object).T.copy())
    return m * m - J.rank()
