"""Exact scalars and dense matrices over Q, F_p and dual numbers over either.

Scalars are plain Python values interpreted by a field object:

* :data:`QQ` holds :class:`fractions.Fraction` values (always in lowest terms,
  positive denominator).
* :func:`GF` ``(p)`` holds ``int`` residues in ``[0, p)``.
* :class:`DualField` ``(base)`` holds :class:`Dual` values ``a + b*eps`` with
  ``eps**2 = 0``; they carry their base field and reduce themselves.

:class:`Matrix` wraps a read-only numpy object array together with its
field.  Matrix products go through numpy (which calls the Python scalar
operators) followed by a field reduction, so the same code path serves all
three kinds.
"""

from __future__ import annotations

import functools
import math
from fractions import Fraction

import numpy as np

from .errors import (
    DimensionMismatch,
    DivisionByZero,
    KindMismatch,
    NonInvertibleDual,
    SingularMatrix,
    UnsupportedField,
)

MERSENNE_31 = 2**31 - 1
MERSENNE_61 = 2**61 - 1

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Miller-Rabin; deterministic for n < 3.3e24, which covers every default prime."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# ---------------------------------------------------------------- fields


class RationalField:
    """The field of rational numbers, backed by ``fractions.Fraction``."""

    kind = "rational"
    name = "rational"
    characteristic = 0
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, x) -> Fraction:
        if isinstance(x, Dual):
            raise KindMismatch("cannot coerce a dual number to a rational")
        try:
            if isinstance(x, str):
                num, _, den = x.strip().partition("/")
                return Fraction(int(num), int(den) if den else 1)
            return Fraction(x)
        except ZeroDivisionError as exc:
            raise DivisionByZero(str(exc)) from None

    def norm(self, x):
        return x

    def reduce(self, arr):
        return arr

    def inv(self, x) -> Fraction:
        if x == 0:
            raise DivisionByZero("division by zero in the rationals")
        return 1 / Fraction(x)

    def is_unit(self, x) -> bool:
        return x != 0

    def random_element(self, rng) -> Fraction:
        return Fraction(rng.randint(-9, 9))

    def format(self, x) -> str:
        return str(Fraction(x))

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("rational")

    def __repr__(self):
        return "QQ"


class PrimeField:
    """Integers modulo an odd prime ``p``; elements are ints in ``[0, p)``."""

    kind = "prime"

    def __init__(self, p: int):
        p = int(p)
        if p <= 2:
            raise UnsupportedField(f"prime fields need p > 2, got {p}")
        if not is_prime(p):
            raise UnsupportedField(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.zero = 0
        self.one = 1

    @property
    def name(self) -> str:
        return f"fp:{self.p}"

    def __call__(self, x) -> int:
        if isinstance(x, Dual):
            raise KindMismatch("cannot coerce a dual number to a residue")
        if isinstance(x, str):
            x = QQ(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise DivisionByZero(f"denominator of {x} vanishes mod {self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def norm(self, x):
        return x % self.p

    def reduce(self, arr):
        return arr % self.p

    def inv(self, x) -> int:
        if x % self.p == 0:
            raise DivisionByZero(f"division by zero mod {self.p}")
        return pow(x, -1, self.p)

    def is_unit(self, x) -> bool:
        return x % self.p != 0

    def random_element(self, rng) -> int:
        return rng.randrange(self.p)

    def format(self, x) -> str:
        return str(int(x))

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("prime", self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = RationalField()


@functools.lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_name(name: str):
    """Parse ``"rational"`` or ``"fp:<p>"``."""
    if name == "rational":
        return QQ
    if name.startswith("fp:"):
        try:
            p = int(name[3:])
        except ValueError:
            raise UnsupportedField(f"bad prime in field spec {name!r}") from None
        return GF(p)
    raise UnsupportedField(f"unknown field {name!r}")


class Dual:
    """``value + deriv * eps`` over a base field, ``eps**2 = 0``."""

    __slots__ = ("value", "deriv", "base")

    def __init__(self, value, deriv, base):
        self.value = value
        self.deriv = deriv
        self.base = base

    def _coerce(self, other):
        if isinstance(other, Dual):
            if other.base != self.base:
                raise KindMismatch(f"dual numbers over {self.base} and {other.base}")
            return other
        return Dual(self.base(other), self.base.zero, self.base)

    def __add__(self, other):
        o = self._coerce(other)
        b = self.base
        return Dual(b.norm(self.value + o.value), b.norm(self.deriv + o.deriv), b)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        b = self.base
        return Dual(b.norm(self.value - o.value), b.norm(self.deriv - o.deriv), b)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        b = self.base
        return Dual(b.norm(-self.value), b.norm(-self.deriv), b)

    def __mul__(self, other):
        o = self._coerce(other)
        b = self.base
        return Dual(
            b.norm(self.value * o.value),
            b.norm(self.value * o.deriv + self.deriv * o.value),
            b,
        )

    __rmul__ = __mul__

    def inverse(self):
        if not self.base.is_unit(self.value):
            raise NonInvertibleDual("dual number with zero value part")
        b = self.base
        vi = b.inv(self.value)
        return Dual(vi, b.norm(-vi * vi * self.deriv), b)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __eq__(self, other):
        if isinstance(other, Dual):
            return (self.base == other.base and self.value == other.value
                    and self.deriv == other.deriv)
        try:
            o = self._coerce(other)
        except (KindMismatch, TypeError, ValueError):
            return NotImplemented
        return self.value == o.value and self.deriv == o.deriv

    def __hash__(self):
        return hash((self.value, self.deriv))

    def __repr__(self):
        return f"Dual({self.value}, {self.deriv})"


class DualField:
    """Dual numbers over ``base``; a unit is a dual with nonzero value part."""

    kind = "dual"

    def __init__(self, base):
        if isinstance(base, DualField):
            raise UnsupportedField("nested dual fields are not supported")
        self.base = base
        self.characteristic = base.characteristic
        self.zero = Dual(base.zero, base.zero, base)
        self.one = Dual(base.one, base.zero, base)

    @property
    def name(self) -> str:
        return f"dual:{self.base.name}"

    def __call__(self, x) -> Dual:
        if isinstance(x, Dual):
            if x.base != self.base:
                raise KindMismatch(f"dual over {x.base}, expected {self.base}")
            return x
        return Dual(self.base(x), self.base.zero, self.base)

    def lift(self, value, deriv=0) -> Dual:
        return Dual(self.base(value), self.base(deriv), self.base)

    def norm(self, x):
        return x

    def reduce(self, arr):
        return arr

    def inv(self, x) -> Dual:
        return self(x).inverse()

    def is_unit(self, x) -> bool:
        return self.base.is_unit(self(x).value)

    def format(self, x) -> str:
        x = self(x)
        return f"{self.base.format(x.value)}+{self.base.format(x.deriv)}e"

    def __eq__(self, other):
        return isinstance(other, DualField) and other.base == self.base

    def __hash__(self):
        return hash(("dual", self.base))

    def __repr__(self):
        return f"DualField({self.base!r})"


def scalar_arith(field, a, b, op: str):
    """Exact ``a <op> b`` in ``field`` for op in add, sub, mul, div."""
    a, b = field(a), field(b)
    if op == "add":
        return field.norm(a + b)
    if op == "sub":
        return field.norm(a - b)
    if op == "mul":
        return field.norm(a * b)
    if op == "div":
        return field.norm(a * field.inv(b))
    raise ValueError(f"unknown operation {op!r}")


def dual_arith(a: Dual, b: Dual, op: str) -> Dual:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


# ---------------------------------------------------------------- matrices


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


class Matrix:
    """Immutable dense matrix over one field.

    ``Matrix(field, rows)`` coerces every entry into ``field``.
    """

    __slots__ = ("field", "_a")

    def __init__(self, field, rows):
        arr = np.array(rows, dtype=object)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1)
        if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
            raise DimensionMismatch(f"expected a non-empty 2-d array, got shape {arr.shape}")
        out = np.empty(arr.shape, dtype=object)
        for idx, x in np.ndenumerate(arr):
            out[idx] = field(x)
        self.field = field
        self._a = _frozen(out)

    @classmethod
    def _wrap(cls, field, arr) -> Matrix:
        # Trusted constructor: entries are already normalized field elements.
        m = object.__new__(cls)
        m.field = field
        m._a = _frozen(np.asarray(arr, dtype=object))
        return m

    @classmethod
    def identity(cls, field, n: int) -> Matrix:
        a = np.full((n, n), field.zero, dtype=object)
        for i in range(n):
            a[i, i] = field.one
        return cls._wrap(field, a)

    @classmethod
    def zeros(cls, field, rows: int, cols: int) -> Matrix:
        return cls._wrap(field, np.full((rows, cols), field.zero, dtype=object))

    @classmethod
    def diag(cls, field, values) -> Matrix:
        values = [field(v) for v in values]
        a = np.full((len(values), len(values)), field.zero, dtype=object)
        for i, v in enumerate(values):
            a[i, i] = v
        return cls._wrap(field, a)

    @property
    def array(self) -> np.ndarray:
        """Read-only object array of entries."""
        return self._a

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    def __getitem__(self, idx):
        if not isinstance(idx, tuple):
            idx = (idx, slice(None))
        i, j = idx
        if isinstance(i, (int, np.integer)) and isinstance(j, (int, np.integer)):
            return self._a[i, j]
        if isinstance(i, (int, np.integer)):
            i = slice(i, i + 1) if i != -1 else slice(-1, None)
        if isinstance(j, (int, np.integer)):
            j = slice(j, j + 1) if j != -1 else slice(-1, None)
        return Matrix._wrap(self.field, self._a[i, j].copy())

    def select_columns(self, cols) -> Matrix:
        return Matrix._wrap(self.field, self._a[:, list(cols)].copy())

    def select_rows(self, rows) -> Matrix:
        return Matrix._wrap(self.field, self._a[list(rows), :].copy())

    def tolist(self) -> list[list]:
        return self._a.tolist()

    def flat(self) -> tuple:
        return tuple(self._a.reshape(-1).tolist())

    def transpose(self) -> Matrix:
        return Matrix._wrap(self.field, self._a.T.copy())

    T = property(transpose)

    def _check(self, other: Matrix):
        if not isinstance(other, Matrix):
            raise TypeError(f"expected Matrix, got {type(other).__name__}")
        if other.field != self.field:
            raise KindMismatch(f"matrices over {self.field} and {other.field}")

    def __matmul__(self, other: Matrix) -> Matrix:
        return mat_mul(self, other)

    def __add__(self, other: Matrix) -> Matrix:
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        return Matrix._wrap(self.field, self.field.reduce(self._a + other._a))

    def __sub__(self, other: Matrix) -> Matrix:
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} - {other.shape}")
        return Matrix._wrap(self.field, self.field.reduce(self._a - other._a))

    def scale(self, c) -> Matrix:
        c = self.field(c)
        return Matrix._wrap(self.field, self.field.reduce(self._a * c))

    def kron(self, other: Matrix) -> Matrix:
        return kron(self, other)

    def det(self):
        return det_exact(self)

    def inverse(self) -> Matrix:
        return mat_inverse(self)

    def rank(self) -> int:
        return mat_rank(self)

    def map(self, fn, field=None) -> Matrix:
        """Apply ``fn`` entrywise and coerce into ``field`` (default: same)."""
        field = field or self.field
        return Matrix(field, [[fn(x) for x in row] for row in self._a.tolist()])

    def is_zero(self) -> bool:
        return all(x == self.field.zero for x in self._a.flat)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.field == other.field and self.shape == other.shape
                and all(a == b for a, b in zip(self._a.flat, other._a.flat)))

    def __hash__(self):
        return hash((self.field, self.shape, self.flat()))

    def __repr__(self):
        body = "; ".join(" ".join(self.field.format(x) for x in row) for row in self._a.tolist())
        return f"Matrix({self.field!r}, [{body}])"


def mat_mul(X: Matrix, Y: Matrix) -> Matrix:
    X._check(Y)
    if X.cols != Y.rows:
        raise DimensionMismatch(f"cannot multiply {X.shape} by {Y.shape}")
    return Matrix._wrap(X.field, X.field.reduce(X._a.dot(Y._a)))


def kron(X: Matrix, Y: Matrix) -> Matrix:
    """Kronecker product; entry (i*Y.rows + r, j*Y.cols + c) = X[i,j]*Y[r,c]."""
    X._check(Y)
    return Matrix._wrap(X.field, X.field.reduce(np.kron(X._a, Y._a)))


def kron_power(X: Matrix, k: int) -> Matrix:
    out = X
    for _ in range(k - 1):
        out = kron(out, X)
    return out


# ------------------------------------------------------------- elimination


def _scaled_integer_rows(a: np.ndarray):
    """Clear denominators row by row; returns integer rows and row scales."""
    rows, scales = [], []
    for row in a.tolist():
        s = math.lcm(*(Fraction(x).denominator for x in row))
        rows.append([int(Fraction(x) * s) for x in row])
        scales.append(s)
    return rows, scales


def _bareiss(rows: list[list[int]], npiv: int):
    """Fraction-free forward elimination, in place, over the first npiv columns.

    Returns (pivot columns, sign of the row permutation).  After the call row
    r's pivot entry is the determinant of the leading r+1 pivot minor.
    """
    n = len(rows)
    ncols = len(rows[0])
    prev = 1
    sign = 1
    rk = 0
    pivots = []
    for c in range(npiv):
        if rk == n:
            break
        piv = next((r for r in range(rk, n) if rows[r][c] != 0), None)
        if piv is None:
            continue
        if piv != rk:
            rows[rk], rows[piv] = rows[piv], rows[rk]
            sign = -sign
        pr = rows[rk]
        pc = pr[c]
        for i in range(rk + 1, n):
            ri = rows[i]
            f = ri[c]
            if f == 0:
                if prev != 1:
                    rows[i] = ri = [x * pc // prev for x in ri]
                else:
                    rows[i] = ri = [x * pc for x in ri]
                continue
            rows[i] = [(ri[j] * pc - f * pr[j]) // prev if j > c else 0 for j in range(ncols)]
        # rows above rk are untouched; entries left of c in lower rows are zero
        prev = pc
        pivots.append(c)
        rk += 1
    return pivots, sign


def _gauss(field, rows: list[list], npiv: int, reduced: bool = False):
    """Field elimination in place over the first npiv columns.

    Returns (pivot columns, sign).  With ``reduced`` the pivot rows are
    normalized and cleared above as well (Gauss-Jordan).
    """
    n = len(rows)
    norm = field.norm
    sign = 1
    rk = 0
    pivots = []
    for c in range(npiv):
        if rk == n:
            break
        piv = next((r for r in range(rk, n) if field.is_unit(rows[r][c])), None)
        if piv is None:
            continue
        if piv != rk:
            rows[rk], rows[piv] = rows[piv], rows[rk]
            sign = -sign
        pr = rows[rk]
        if reduced:
            inv = field.inv(pr[c])
            pr = rows[rk] = [norm(x * inv) for x in pr]
            targets = [i for i in range(n) if i != rk]
        else:
            inv = field.inv(pr[c])
            targets = range(rk + 1, n)
        for i in targets:
            ri = rows[i]
            f = ri[c]
            if f == field.zero or (field.kind != "dual" and not field.is_unit(f)):
                continue
            if not reduced:
                f = norm(f * inv)
            rows[i] = [norm(x - f * y) for x, y in zip(ri, pr)]
        pivots.append(c)
        rk += 1
    return pivots, sign


def det_exact(X: Matrix):
    """Exact determinant: Bareiss over Q, Gaussian elimination otherwise."""
    n, m = X.shape
    if n != m:
        raise DimensionMismatch(f"determinant of non-square {X.shape}")
    field = X.field
    if field.kind == "rational":
        rows, scales = _scaled_integer_rows(X.array)
        pivots, sign = _bareiss(rows, n)
        if len(pivots) < n:
            return field.zero
        return Fraction(sign * rows[-1][-1], math.prod(scales))
    rows = X.array.tolist()
    pivots, sign = _gauss(field, rows, n)
    if len(pivots) < n:
        if field.kind == "dual":
            return _dual_det_fallback(X)
        return field.zero
    d = field.one if sign == 1 else field.norm(-field.one)
    for i in range(n):
        d = field.norm(d * rows[i][i])
    return d


def _dual_det_fallback(X: Matrix):
    # d/dt det(V + tD) = sum_i det(V with row i replaced by D's row i)
    base = X.field.base
    V = Matrix(base, [[x.value for x in row] for row in X.tolist()])
    D = [[x.deriv for x in row] for row in X.tolist()]
    v = det_exact(V)
    dv = base.zero
    for i in range(X.rows):
        rows = V.tolist()
        rows[i] = D[i]
        dv = base.norm(dv + det_exact(Matrix(base, rows)))
    return Dual(v, dv, base)


def mat_inverse(X: Matrix) -> Matrix:
    n, m = X.shape
    if n != m:
        raise DimensionMismatch(f"inverse of non-square {X.shape}")
    field = X.field
    if field.kind == "rational":
        return _rational_inverse(X)
    eye = Matrix.identity(field, n).array
    rows = [r + e for r, e in zip(X.array.tolist(), eye.tolist())]
    pivots, _ = _gauss(field, rows, n, reduced=True)
    if len(pivots) < n:
        raise SingularMatrix(f"{n}x{n} matrix is singular over {field!r}")
    return Matrix._wrap(field, np.array([r[n:] for r in rows], dtype=object))


def _rational_inverse(X: Matrix) -> Matrix:
    n = X.rows
    int_rows, scales = _scaled_integer_rows(X.array)
    # (S X)^{-1} S = X^{-1}, so solve (S X) Y = S with S = diag(scales)
    aug = [r + [scales[i] if j == i else 0 for j in range(n)] for i, r in enumerate(int_rows)]
    pivots, _ = _bareiss(aug, n)
    if len(pivots) < n:
        raise SingularMatrix(f"{n}x{n} rational matrix is singular")
    out = [[Fraction(0)] * n for _ in range(n)]
    for col in range(n):
        for i in range(n - 1, -1, -1):
            s = Fraction(aug[i][n + col])
            row = aug[i]
            for j in range(i + 1, n):
                if row[j]:
                    s -= row[j] * out[j][col]
            out[i][col] = s / row[i]
    return Matrix._wrap(QQ, np.array(out, dtype=object))


def mat_rank(X: Matrix) -> int:
    field = X.field
    if field.kind == "rational":
        rows, _ = _scaled_integer_rows(X.array)
        pivots, _ = _bareiss(rows, X.cols)
        return len(pivots)
    if field.kind == "dual":
        raise KindMismatch("rank is not defined over dual numbers; take the value part")
    rows = X.array.tolist()
    pivots, _ = _gauss(field, rows, X.cols)
    return len(pivots)


def nullspace(X: Matrix) -> list[Matrix]:
    """Basis of the right null space as column matrices (exact)."""
    field = X.field
    if field.kind == "dual":
        raise KindMismatch("null space over dual numbers is not supported")
    rows = X.array.tolist()
    pivots, _ = _gauss(field, rows, X.cols, reduced=True)
    free = [c for c in range(X.cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [field.zero] * X.cols
        v[fc] = field.one
        for r, pc in enumerate(pivots):
            v[pc] = field.norm(-rows[r][fc])
        basis.append(Matrix._wrap(field, np.array(v, dtype=object).reshape(-1, 1)))
    return basis


class IncrementalRank:
    """Row-by-row rank tracker over a field (reduced echelon basis).

    ``add(row)`` returns True when the row is independent of those kept.
    """

    def __init__(self, field, ncols: int):
        if field.kind == "dual":
            raise KindMismatch("rank tracking needs a field, not dual numbers")
        self.field = field
        self.ncols = ncols
        self._basis: dict[int, np.ndarray] = {}

    @property
    def rank(self) -> int:
        return len(self._basis)

    def reduce(self, row) -> np.ndarray:
        f = self.field
        v = np.array(list(row), dtype=object)
        for c, b in self._basis.items():
            if v[c] != f.zero:
                v = f.reduce(v - v[c] * b)
        return v

    def add(self, row) -> bool:
        f = self.field
        v = self.reduce(row)
        nz = [i for i, x in enumerate(v.tolist()) if x != f.zero]
        if not nz:
            return False
        c = nz[0]
        v = f.reduce(v * f.inv(v[c]))
        for c2, b in list(self._basis.items()):
            if b[c] != f.zero:
                self._basis[c2] = f.reduce(b - b[c] * v)
        self._basis[c] = v
        return True
