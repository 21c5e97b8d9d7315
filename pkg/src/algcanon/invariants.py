"""Generating invariants and their transcendence degree.

The entries of ``C(A)`` are rational invariants of the action.  Their
transcendence degree is measured as the rank of the Jacobian of ``A -> C(A)``
at random points over a large prime field, using dual numbers for exact
directional derivatives.  The same machinery applied to ``A -> P(A)`` measures
the frame, whose rank should be ``dim GL(m) = m**2``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .canonical import CanonProfile, _analyse, build_profile
from .contraction import PROBE_PRIME
from .errors import AssumptionViolation, NonGenericInput, NonGenericProbe
from .exactla import GF, DualField, Matrix
from .structure import (
    StructureTensor,
    SymmetryClass,
    act,
    free_parameter_count,
    random_tensor,
    stabilizer_dimension,
    tensor_from_parameters,
)

MAPS = ("canonical", "frame")
MAX_PROBE_RETRIES = 8


def invariant_values(profile: CanonProfile, A: StructureTensor) -> tuple:
    """Entries of ``C(A)`` in row-major order (``m**3`` values)."""
    report, pp = _analyse(profile, A)
    if pp is None:
        raise NonGenericInput("input is not generic for this profile", [report])
    P, Pinv = pp
    return act(P, A, g_inv=Pinv).flat()


def expected_trdeg(m: int, sym) -> int | None:
    """Transcendence degree of the invariant field as stated for the class.

    None marks (3, anticommutative), where the stated value 0 contradicts a
    positive-dimensional generic stabilizer and is left unasserted.
    """
    sym = SymmetryClass.parse(sym)
    if sym is SymmetryClass.GENERAL:
        return m**3 - m**2
    if sym is SymmetryClass.COMMUTATIVE:
        return m * m * (m - 1) // 2
    if m <= 3:
        return None
    return m * m * (m - 3) // 2


@dataclass(frozen=True)
class RankReport:
    m: int
    sym: SymmetryClass
    map: str
    measured_rank: int
    expected_rank: int | None
    seeds: tuple[int, ...]
    per_seed: tuple[int, ...]
    prime: int
    free_parameters: int
    profile_hash: str

    @property
    def matches(self) -> bool | None:
        if self.expected_rank is None:
            return None
        return self.measured_rank == self.expected_rank

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "sym": self.sym.value,
            "map": self.map,
            "measured_rank": self.measured_rank,
            "expected_rank": "unasserted" if self.expected_rank is None else self.expected_rank,
            "matches": self.matches,
            "seeds": list(self.seeds),
            "per_seed": list(self.per_seed),
            "prime": self.prime,
            "free_parameters": self.free_parameters,
            "profile_hash": self.profile_hash,
        }


def _generic_point(profile: CanonProfile, F, seed: int) -> StructureTensor:
    for attempt in range(MAX_PROBE_RETRIES):
        A = random_tensor(profile.m, profile.sym, F, random.Random(f"algcanon:rank:{seed}:{attempt}"))
        if _analyse(profile, A)[0].generic:
            return A
    raise NonGenericProbe(f"no generic point in {MAX_PROBE_RETRIES} draws for seed {seed}")


def _map_outputs(profile: CanonProfile, A: StructureTensor, which: str) -> tuple:
    report, pp = _analyse(profile, A)
    if pp is None:
        raise NonGenericProbe("probe point left the generic set under perturbation")
    P, Pinv = pp
    if which == "frame":
        return P.flat()
    return act(P, A, g_inv=Pinv).flat()


def jacobian_at(profile: CanonProfile, A: StructureTensor, which: str = "canonical") -> Matrix:
    """Exact Jacobian of the chosen map w.r.t. the free parameters of the class.

    One forward pass over dual numbers per parameter; the mirrored entries of a
    (anti)commutative tensor move together, so every column stays in the class.
    """
    if which not in MAPS:
        raise ValueError(f"map must be one of {MAPS}, got {which!r}")
    F = A.field
    D = DualField(F)
    params = A.parameters()
    cols = []
    for t in range(len(params)):
        lifted = [D.lift(v, 1 if i == t else 0) for i, v in enumerate(params)]
        At = tensor_from_parameters(A.m, A.sym, D, lifted)
        cols.append([x.deriv for x in _map_outputs(profile, At, which)])
    return Matrix._wrap(F, np.array(cols, dtype=object).T.copy())


def jacobian_rank(profile: CanonProfile, which: str = "canonical", seeds=(0, 1, 2),
                  p: int = PROBE_PRIME) -> RankReport:
    """Generic rank of the canonical or frame map, maximised over ``seeds``.

    The rank at a random point never exceeds the generic rank, so the maximum
    over a few seeds is the estimate reported.
    """
    if p <= 2**60:
        raise ValueError("jacobian_rank needs a prime above 2**60")
    F = GF(p)
    seeds = tuple(int(s) for s in seeds)
    per_seed = tuple(jacobian_at(profile, _generic_point(profile, F, s), which).rank() for s in seeds)
    expected = expected_trdeg(profile.m, profile.sym) if which == "canonical" else profile.m**2
    return RankReport(profile.m, profile.sym, which, max(per_seed), expected, seeds, per_seed, p,
                      free_parameter_count(profile.m, profile.sym), profile.profile_hash)


def orbit_report(m: int, sym, seeds=(0, 1, 2), p: int = PROBE_PRIME) -> dict:
    """Dimension count for the invariant field of a class, independent of any profile.

    A generic orbit has dimension ``m**2 - s`` where ``s`` is the generic
    stabilizer dimension, so rational invariants separate generic orbits with
    transcendence degree ``d - (m**2 - s)`` (d free parameters).
    """
    sym = SymmetryClass.parse(sym)
    F = GF(p)
    stabs = [stabilizer_dimension(random_tensor(m, sym, F, random.Random(f"algcanon:orbit:{s}")))
             for s in seeds]
    s = min(stabs)
    d = free_parameter_count(m, sym)
    stated = expected_trdeg(m, sym)
    if stated is None and sym is SymmetryClass.ANTICOMMUTATIVE:
        stated = m * m * (m - 3) // 2
    trdeg = d - (m * m - s)
    return {
        "m": m,
        "sym": sym.value,
        "free_parameters": d,
        "stabilizer_dimensions": stabs,
        "generic_orbit_dimension": m * m - s,
        "trdeg_from_orbit_dimension": trdeg,
        "stated_trdeg": stated,
        "agrees": trdeg == stated,
        "prime": p,
        "seeds": list(seeds),
    }


def assumption_probe(m: int, sym, seed: int = 0, k_max: int | None = None) -> dict:
    """Try to build a profile for the class and compare against the stated count.

    Always returns a report; the build outcome is either ``"profile"`` (with
    the measured canonical rank) or ``"assumption_violation"`` (with the ranks
    reached per power).
    """
    sym = SymmetryClass.parse(sym)
    out = {"orbit": orbit_report(m, sym)}
    try:
        prof = build_profile(m, sym, seed=seed, k_max=k_max)
    except AssumptionViolation as exc:
        out["outcome"] = "assumption_violation"
        out["message"] = str(exc)
        out["build"] = exc.report
        return out
    out["outcome"] = "profile"
    out["profile"] = prof.to_json()
    out["rank"] = jacobian_rank(prof, "canonical").to_json()
    return out
