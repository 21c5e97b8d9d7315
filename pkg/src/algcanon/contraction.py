"""Full contractions of tensor powers of a structure tensor.

A scheme for ``A^{(x)k}`` sends the upper index of every factor ``t`` to a
distinct lower slot ``(f, s)`` (factor ``f``, slot ``s`` in {0, 1}).  The ``k``
lower slots left over are free; ordered factor-major then slot, they index the
``m**k`` columns of the resulting row.  Every such row transforms as
``row(g.A) = row(A) kron(g^-1, ..., g^-1)``.
"""

from __future__ import annotations

import functools
import itertools
import math
import random
import string
from dataclasses import dataclass

import numpy as np

from .exactla import GF, MERSENNE_61, Matrix
from .structure import StructureTensor, SymmetryClass, random_tensor

PROBE_PRIME = MERSENNE_61

_LABELS = string.ascii_letters


@dataclass(frozen=True, order=True)
class ContractionScheme:
    """``assignment[t] = (f, s)``: upper index of factor t goes to slot s of factor f (0-based)."""

    assignment: tuple[tuple[int, int], ...]

    def __post_init__(self):
        a = tuple((int(f), int(s)) for f, s in self.assignment)
        object.__setattr__(self, "assignment", a)
        k = len(a)
        if k == 0:
            raise ValueError("a scheme needs at least one factor")
        if len(set(a)) != k:
            raise ValueError(f"assignment {a} is not injective")
        for f, s in a:
            if not (0 <= f < k and s in (0, 1)):
                raise ValueError(f"slot {(f, s)} out of range for k={k}")

    @property
    def k(self) -> int:
        return len(self.assignment)

    @property
    def free_slots(self) -> tuple[tuple[int, int], ...]:
        used = set(self.assignment)
        return tuple((f, s) for f in range(self.k) for s in (0, 1) if (f, s) not in used)

    @functools.cached_property
    def subscripts(self) -> str:
        k = self.k
        if 3 * k > len(_LABELS):
            raise ValueError(f"k={k} is too large for einsum labels")
        upper = _LABELS[:k]
        lower = [[None, None] for _ in range(k)]
        for t, (f, s) in enumerate(self.assignment):
            lower[f][s] = upper[t]
        out = []
        for n, (f, s) in enumerate(self.free_slots):
            lower[f][s] = _LABELS[k + n]
            out.append(lower[f][s])
        terms = ",".join(upper[t] + lower[t][0] + lower[t][1] for t in range(k))
        return f"{terms}->{''.join(out)}"

    def to_json(self) -> list[list[int]]:
        """1-based ``[[f, s], ...]`` pairs."""
        return [[f + 1, s + 1] for f, s in self.assignment]

    @classmethod
    def from_json(cls, pairs) -> ContractionScheme:
        return cls(tuple((int(f) - 1, int(s) - 1) for f, s in pairs))

    def __str__(self):
        return "[" + ",".join(f"{f + 1}.{s + 1}" for f, s in self.assignment) + "]"


@dataclass(frozen=True)
class SchemeRow:
    scheme: ContractionScheme
    row: Matrix


def raw_scheme_count(k: int) -> int:
    """(2k)!/k! injective assignments."""
    return math.factorial(2 * k) // math.factorial(k)


@functools.lru_cache(maxsize=8)
def enumerate_schemes(k: int) -> tuple[ContractionScheme, ...]:
    """All injective assignments for power k, in lexicographic order."""
    if k < 1:
        raise ValueError("k must be >= 1")
    slots = [(f, s) for f in range(k) for s in (0, 1)]
    return tuple(ContractionScheme(a) for a in itertools.permutations(slots, k))


_PATHS: dict[tuple[str, int], list] = {}


def _contract(subscripts: str, t: np.ndarray, k: int) -> np.ndarray:
    key = (subscripts, t.shape[0])
    path = _PATHS.get(key)
    ops = [t] * k
    if path is None:
        if k > 2:
            path = np.einsum_path(subscripts, *ops, optimize="greedy")[0]
        else:
            path = False
        _PATHS[key] = path
    return np.asarray(np.einsum(subscripts, *ops, optimize=path), dtype=object)


def evaluate_scheme(S: ContractionScheme, A: StructureTensor) -> SchemeRow:
    """Exact row of length m**k for the scheme at A."""
    out = _contract(S.subscripts, A.array3, S.k).reshape(1, -1)
    return SchemeRow(S, Matrix._wrap(A.field, A.field.reduce(out)))


def scheme_rows(schemes, A: StructureTensor) -> Matrix:
    """Stack the rows of ``schemes`` at A (all schemes must share one k)."""
    rows = [_contract(S.subscripts, A.array3, S.k).reshape(-1) for S in schemes]
    return Matrix._wrap(A.field, A.field.reduce(np.array(rows, dtype=object)))


def probe_rng(seed, label: str, index: int) -> random.Random:
    """Deterministic RNG for probe point ``index`` of a build; platform independent."""
    return random.Random(f"algcanon:{label}:{seed}:{index}")


def probe_tensors(m: int, sym, seed, count: int = 2, prime: int = PROBE_PRIME):
    F = GF(prime)
    return [random_tensor(m, sym, F, probe_rng(seed, "probe", i)) for i in range(count)]


def _relabelings(S: ContractionScheme):
    """Factor permutations that keep the free-slot order of S.

    Such a relabeling yields a scheme with the identical row polynomial.
    """
    k = S.k
    with_free = sorted({f for f, _ in S.free_slots})
    rest = [f for f in range(k) if f not in with_free]
    for targets in itertools.combinations(range(k), len(with_free)):
        others = [t for t in range(k) if t not in targets]
        for perm in itertools.permutations(others):
            pi = [0] * k
            for f, t in zip(with_free, targets):
                pi[f] = t
            for f, t in zip(rest, perm):
                pi[f] = t
            yield pi


def structural_key(S: ContractionScheme) -> tuple:
    """Smallest relabeled assignment; equal keys imply identical rows for every A."""
    best = None
    for pi in _relabelings(S):
        new = [None] * S.k
        for t, (f, s) in enumerate(S.assignment):
            new[pi[t]] = (pi[f], s)
        new = tuple(new)
        if best is None or new < best:
            best = new
    return best


def commutative_normal_form(S: ContractionScheme) -> ContractionScheme:
    """Scheme with the same row on every commutative tensor, bound slots packed first.

    With ``A^i_{j,k} = A^i_{k,j}`` only the number of bound slots of a factor
    matters, not which slot holds which upper index.
    """
    bound = [0] * S.k
    for f, _ in S.assignment:
        bound[f] += 1
    fill = [0] * S.k
    out = []
    for f, _ in S.assignment:
        out.append((f, fill[f]))
        fill[f] += 1
    return ContractionScheme(tuple(out))


@functools.lru_cache(maxsize=16)
def structural_representatives(k: int, sym: SymmetryClass = SymmetryClass.GENERAL
                               ) -> tuple[ContractionScheme, ...]:
    """First scheme (in enumeration order) of every structural class.

    For the commutative class, schemes with the same commutative normal form
    are merged first, which leaves far fewer keys to compute.
    """
    sym = SymmetryClass.parse(sym)
    seen = set()
    normal_seen = set()
    out = []
    for S in enumerate_schemes(k):
        T = S
        if sym is SymmetryClass.COMMUTATIVE:
            T = commutative_normal_form(S)
            if T in normal_seen:
                continue
            normal_seen.add(T)
        key = structural_key(T)
        if key not in seen:
            seen.add(key)
            out.append(S)
    return tuple(out)


def distinct_with_probes(k: int, probes) -> list[tuple[ContractionScheme, list[tuple]]]:
    """Schemes whose rows differ, in enumeration order, with their rows at every probe.

    Schemes with identical rows for every tensor of the class are dropped first
    (exact).  Beyond that a scheme is merged into an earlier one only when the
    rows agree at all probes.
    """
    groups: dict[tuple, list[tuple]] = {}
    out = []
    for S in structural_representatives(k, probes[0].sym):
        rows = [tuple(evaluate_scheme(S, P).row.flat()) for P in probes]
        reps = groups.setdefault(rows[0], [])
        if any(rest == rows[1:] for rest in reps):
            continue
        reps.append(rows[1:])
        out.append((S, rows))
    return out


def distinct_rows(k: int, m: int, sym, seed=0, prime: int = PROBE_PRIME) -> list[SchemeRow]:
    """Rows of all schemes at a seeded probe tensor with exact duplicates removed.

    Duplicates are detected at the first probe point and confirmed at a
    second one.  Enumeration order is preserved.
    """
    probes = probe_tensors(m, sym, seed, 2, prime)
    F = probes[0].field
    return [SchemeRow(S, Matrix._wrap(F, np.array([rows[0]], dtype=object)))
            for S, rows in distinct_with_probes(k, probes)]
