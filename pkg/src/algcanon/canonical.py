"""Moving-frame canonical forms of structure tensors.

A :class:`CanonProfile` freezes every arbitrary choice of the construction:
the power ``k``, the contraction rows stacked into ``Q(A)``, and which columns
of ``X(A)`` (the solution of ``X Q(A) = M(A)``, ``M(A) = A (x) Tr(A)^{(x)(k-2)}``)
form ``P(A)^-1``.  For every generic ``A`` and invertible ``g``::

    Q(g.A) = Q(A) kron(g^-1, ..., g^-1)
    P(g.A) = P(A) g^-1
    C(A)   = P(A).A          is constant on orbits and has P(C(A)) = I.

When ``Q`` has ``m**k`` independent rows ``X = M Q^-1``.  When the profile
keeps fewer rows, ``Q`` must have full row rank at the input; ``X`` is then
solved on the leftmost invertible column minor of that input (the solution
does not depend on the minor) and ``X Q = M`` is checked exactly.  Both tests
are unchanged by the action, so the generic set stays invariant.
"""

from __future__ import annotations

import functools
import hashlib
import json
from dataclasses import dataclass, field as dc_field
from importlib import resources

import numpy as np

from .contraction import (
    PROBE_PRIME,
    ContractionScheme,
    distinct_with_probes,
    probe_tensors,
    raw_scheme_count,
    scheme_rows,
    structural_representatives,
)
from .errors import (
    AssumptionViolation,
    DimensionMismatch,
    NonGenericInput,
    ProfileMismatch,
    WitnessVerificationFailure,
)
from .exactla import IncrementalRank, Matrix, kron
from .structure import (
    StructureTensor,
    SymmetryClass,
    act,
    free_parameter_count,
    stabilizer_dimension,
    trace,
    validate_symmetry,
)

FORMAT_VERSION = 1
DEFAULT_MAX_SCHEMES = 30240  # (2k)!/k! at k = 5


def _canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


@dataclass(frozen=True)
class CanonProfile:
    m: int
    sym: SymmetryClass
    k: int
    q_schemes: tuple[ContractionScheme, ...]
    frame_source: str
    frame_columns: tuple[int, ...]
    build_seed: int
    probe_prime: int = PROBE_PRIME
    format_version: int = FORMAT_VERSION
    profile_hash: str = dc_field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "sym", SymmetryClass.parse(self.sym))
        if not self.profile_hash:
            object.__setattr__(self, "profile_hash", self.compute_hash())

    @property
    def rank_deficient(self) -> bool:
        return len(self.q_schemes) < self.m**self.k

    def _body(self) -> dict:
        # frame_columns are 1-based in files, like the scheme slots
        return {
            "format_version": self.format_version,
            "m": self.m,
            "sym": self.sym.value,
            "k": self.k,
            "q_schemes": [S.to_json() for S in self.q_schemes],
            "frame_source": self.frame_source,
            "frame_columns": [c + 1 for c in self.frame_columns],
            "build_seed": self.build_seed,
            "probe_primes": [self.probe_prime],
        }

    def compute_hash(self) -> str:
        return hashlib.sha256(_canonical_json(self._body()).encode()).hexdigest()

    def to_json(self) -> dict:
        return {**self._body(), "profile_hash": self.profile_hash}

    @classmethod
    def from_json(cls, doc: dict) -> CanonProfile:
        if doc.get("format_version") != FORMAT_VERSION:
            raise ProfileMismatch(f"unsupported profile format {doc.get('format_version')!r}")
        prof = cls(
            m=int(doc["m"]),
            sym=SymmetryClass.parse(doc["sym"]),
            k=int(doc["k"]),
            q_schemes=tuple(ContractionScheme.from_json(p) for p in doc["q_schemes"]),
            frame_source=doc["frame_source"],
            frame_columns=tuple(int(c) - 1 for c in doc["frame_columns"]),
            build_seed=int(doc["build_seed"]),
            probe_prime=int(doc["probe_primes"][0]),
        )
        if "profile_hash" in doc and doc["profile_hash"] != prof.profile_hash:
            raise ProfileMismatch("profile_hash does not match the profile contents")
        return prof


@dataclass(frozen=True)
class GenericityReport:
    q_nonsingular: bool
    frame_nonsingular: bool
    full_rank: bool
    frame_consistent: bool = True
    trace_nonzero: bool = True

    @property
    def generic(self) -> bool:
        return (self.q_nonsingular and self.frame_nonsingular and self.full_rank
                and self.frame_consistent and self.trace_nonzero)

    def to_json(self) -> dict:
        return {
            "generic": self.generic,
            "q_nonsingular": self.q_nonsingular,
            "frame_nonsingular": self.frame_nonsingular,
            "full_rank": self.full_rank,
            "frame_consistent": self.frame_consistent,
            "trace_nonzero": self.trace_nonzero,
        }


@dataclass(frozen=True)
class CanonicalCertificate:
    canonical: StructureTensor
    frame: Matrix
    profile_hash: str
    genericity: GenericityReport


@dataclass(frozen=True)
class IsoResult:
    equivalent: bool
    witness: Matrix | None
    certificates: tuple[CanonicalCertificate, CanonicalCertificate]


# ------------------------------------------------------------------ frames


def frame_source_matrix(A: StructureTensor, k: int, source: str = "tr1") -> Matrix:
    """``M(A) = A (x) Tr(A)^{(x)(k-2)}``, an m x m**k matrix (k >= 2)."""
    if k < 2:
        raise ValueError("the frame source matrix needs k >= 2")
    M = A.matrix
    if k > 2:
        tr = trace(A, 1 if source == "tr1" else 2)
        for _ in range(k - 2):
            M = kron(M, tr)
    return M


def _check_matches(profile: CanonProfile, A: StructureTensor):
    # a general profile takes tensors of every class; the others need their own class
    if A.m != profile.m or (profile.sym is not SymmetryClass.GENERAL and A.sym != profile.sym):
        raise DimensionMismatch(
            f"tensor (m={A.m}, {A.sym.value}) does not match profile "
            f"(m={profile.m}, {profile.sym.value})")


def q_matrix(profile: CanonProfile, A: StructureTensor) -> Matrix:
    """Stack of the profile's contraction rows at A."""
    _check_matches(profile, A)
    return scheme_rows(profile.q_schemes, A)


def _value_part(M: Matrix) -> Matrix:
    if M.field.kind == "dual":
        return M.map(lambda x: x.value, M.field.base)
    return M


def _solve_frame_rows(Q: Matrix, M: Matrix):
    """X with ``X Q = M`` using the leftmost invertible minor of Q, or None.

    Returns None when Q lacks full row rank.
    """
    if Q.rows == Q.cols:
        if not Q.field.is_unit(Q.det()):
            return None
        return M @ Q.inverse()
    cols = _greedy_columns(_value_part(Q), Q.rows)
    if len(cols) < Q.rows:
        return None
    return M.select_columns(cols) @ Q.select_columns(cols).inverse()


def _analyse(profile: CanonProfile, A: StructureTensor):
    """Genericity report and, when generic, (P, P^-1)."""
    _check_matches(profile, A)
    F = A.field
    full_rank = validate_symmetry(A).full_rank
    Q = q_matrix(profile, A)
    trace_ok = True
    if profile.k >= 3:
        tr = trace(A, 1 if profile.frame_source == "tr1" else 2)
        trace_ok = any(F.is_unit(x) for x in tr.flat())
    if profile.k == 1:
        q_ok = F.is_unit(Q.det())
        report = GenericityReport(q_ok, q_ok, full_rank, True, trace_ok)
        return report, ((Q, Q.inverse()) if report.generic else None)
    M = frame_source_matrix(A, profile.k, profile.frame_source)
    X = _solve_frame_rows(Q, M)
    if X is None:
        return GenericityReport(False, False, full_rank, True, trace_ok), None
    consistent = (X @ Q) == M if profile.rank_deficient else True
    Pinv = X.select_columns(profile.frame_columns)
    frame_ok = F.is_unit(Pinv.det())
    report = GenericityReport(True, frame_ok, full_rank, consistent, trace_ok)
    if not report.generic:
        return report, None
    return report, (Pinv.inverse(), Pinv)


def is_generic(profile: CanonProfile, A: StructureTensor) -> GenericityReport:
    return _analyse(profile, A)[0]


def _frame(profile, A):
    report, pp = _analyse(profile, A)
    if pp is None:
        raise NonGenericInput("input is not generic for this profile", [report])
    return report, pp


def p_matrix(profile: CanonProfile, A: StructureTensor) -> Matrix:
    """Frame P(A) with ``P(g.A) = P(A) g^-1``.  Raises NonGenericInput off V0."""
    return _frame(profile, A)[1][0]


def canonical_form(profile: CanonProfile, A: StructureTensor) -> CanonicalCertificate:
    report, (P, Pinv) = _frame(profile, A)
    C = act(P, A, g_inv=Pinv)
    return CanonicalCertificate(C, P, profile.profile_hash, report)


def check_same_profile(*certs: CanonicalCertificate):
    hashes = {c.profile_hash for c in certs}
    if len(hashes) > 1:
        raise ProfileMismatch("certificates come from different profiles")


def iso_test(profile: CanonProfile, A: StructureTensor, B: StructureTensor) -> IsoResult:
    """Decide whether A and B are the same algebra; return a verified witness.

    The witness ``g`` satisfies ``B = act(g, A)``.
    """
    ra, pa = _analyse(profile, A)
    rb, pb = _analyse(profile, B)
    if pa is None or pb is None:
        bad = [r for r, p in ((ra, pa), (rb, pb)) if p is None]
        raise NonGenericInput("iso_test needs both inputs generic", bad)
    ca = CanonicalCertificate(act(pa[0], A, g_inv=pa[1]), pa[0], profile.profile_hash, ra)
    cb = CanonicalCertificate(act(pb[0], B, g_inv=pb[1]), pb[0], profile.profile_hash, rb)
    if ca.canonical.matrix != cb.canonical.matrix:
        return IsoResult(False, None, (ca, cb))
    g = pb[1] @ pa[0]
    if act(g, A).matrix != B.matrix:
        raise WitnessVerificationFailure("witness does not map A onto B")
    return IsoResult(True, g, (ca, cb))


def orbit_decompose(profile: CanonProfile, A: StructureTensor) -> tuple[Matrix, StructureTensor]:
    """Split A as ``act(g0, C)`` with C canonical; verified round trip."""
    _, (P, Pinv) = _frame(profile, A)
    C = act(P, A, g_inv=Pinv)
    if act(Pinv, C, g_inv=P).matrix != A.matrix:
        raise WitnessVerificationFailure("orbit decomposition does not round-trip")
    return Pinv, C


# ---------------------------------------------------------------- building


def _greedy_columns(M: Matrix, want: int) -> list[int]:
    """Leftmost columns of M that raise the rank, until ``want`` are found."""
    tracker = IncrementalRank(M.field, M.rows)
    cols = []
    arr = M.array
    for c in range(M.cols):
        if tracker.add(arr[:, c]):
            cols.append(c)
            if len(cols) == want:
                break
    return cols


def _try_frame(probes, rows, k, source, m):
    """Pick frame columns at probe 0 and confirm every choice at all probes."""
    fcols = None
    for P, Q in zip(probes, rows):
        M = frame_source_matrix(P, k, source)
        X = _solve_frame_rows(Q, M)
        if X is None or (X @ Q) != M:
            return None
        if fcols is None:
            fcols = _greedy_columns(X, m)
            if len(fcols) < m:
                return None
        elif X.select_columns(fcols).det() == P.field.zero:
            return None
    return fcols


def build_profile(m: int, sym, seed: int = 0, k_max: int | None = None,
                  max_schemes: int = DEFAULT_MAX_SCHEMES) -> CanonProfile:
    """Search for the smallest workable power k and freeze the choices.

    Raises AssumptionViolation (with a JSON-ready report) when no k up to
    ``k_max`` (default m + 3) works or the scheme budget runs out first.
    """
    sym = SymmetryClass.parse(sym)
    if m < 2:
        raise DimensionMismatch("m must be >= 2")
    k_max = m + 3 if k_max is None else k_max
    probes = probe_tensors(m, sym, seed, 2)
    stab = stabilizer_dimension(probes[0])
    attempts = []
    stop_reason = f"no k <= {k_max} gave a frame"
    for k in range(1, k_max + 1):
        need = m**k
        if raw_scheme_count(k) > max_schemes:
            stop_reason = f"scheme budget {max_schemes} exceeded at k={k} ({raw_scheme_count(k)} schemes)"
            break
        if stab > 0 and k > 3:
            stop_reason = (f"stabilizer of dimension {stab} at the probe point forces "
                           f"det Q = 0 for every k")
            break
        cands = distinct_with_probes(k, probes)
        tracker = IncrementalRank(probes[0].field, need)
        chosen = []
        for S, rows in cands:
            if tracker.add(rows[0]):
                chosen.append((S, rows))
                if tracker.rank == need:
                    break
        attempt = {"k": k, "needed_rows": need, "distinct_rows": len(cands),
                   "structural_classes": len(structural_representatives(k, sym)),
                   "max_rank": tracker.rank}
        attempts.append(attempt)
        if len(cands) < need:
            attempt["outcome"] = "too few distinct rows"
            continue
        schemes = tuple(S for S, _ in chosen)
        rows = [Matrix._wrap(P.field, _stack([r[i] for _, r in chosen])) for i, P in enumerate(probes)]
        r = tracker.rank
        if k == 1:
            if r == need and all(Q.det() != P.field.zero for P, Q in zip(probes, rows)):
                attempt["outcome"] = "ok"
                return CanonProfile(m, sym, 1, schemes, "tr1", (), seed)
            attempt["outcome"] = "Q singular"
            continue
        sources = ("tr1", "tr2") if k >= 3 else ("tr1",)
        for source in sources:
            fcols = _try_frame(probes, rows, k, source, m)
            if fcols is not None:
                attempt["outcome"] = "ok" if r == need else "ok (rank-deficient Q, frame in row span)"
                return CanonProfile(m, sym, k, schemes, source, tuple(fcols), seed)
        attempt["outcome"] = ("frame rows outside the span of Q" if r < need
                              else "no nonsingular frame minor")
    report = {
        "m": m,
        "sym": sym.value,
        "build_seed": seed,
        "k_max": k_max,
        "probe_prime": PROBE_PRIME,
        "free_parameters": free_parameter_count(m, sym),
        "stabilizer_dimension": stab,
        "attempts": attempts,
        "max_generic_rank": max((a["max_rank"] for a in attempts), default=0),
        "reason": stop_reason,
    }
    raise AssumptionViolation(
        f"no frame for (m={m}, {sym.value}): {stop_reason}", report)


def _stack(rows):
    return np.array(rows, dtype=object)


# --------------------------------------------------------------- shipped


SHIPPED = {
    (2, SymmetryClass.GENERAL): "m2-general.json",
    (3, SymmetryClass.GENERAL): "m3-general.json",
    (2, SymmetryClass.COMMUTATIVE): "m2-commutative.json",
}


def profile_filename(m: int, sym) -> str:
    return f"m{m}-{SymmetryClass.parse(sym).value}.json"


@functools.lru_cache(maxsize=None)
def default_profile(m: int, sym) -> CanonProfile:
    """Load the profile shipped with the package for (m, sym)."""
    sym = SymmetryClass.parse(sym)
    name = SHIPPED.get((m, sym))
    if name is None:
        raise ProfileMismatch(f"no shipped profile for (m={m}, {sym.value})")
    text = resources.files("algcanon.profiles").joinpath(name).read_text()
    return CanonProfile.from_json(json.loads(text))
