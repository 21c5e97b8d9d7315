"""Seeded property suite behind ``algcanon selftest``.

Each trial draws ``(A, g)`` from a string-seeded RNG, so any failure is
reproducible from the config name, the suite seed and the trial index alone.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

from .canonical import CanonProfile, _analyse, default_profile, iso_test, q_matrix
from .errors import AlgCanonError
from .exactla import GF, QQ, Matrix, kron_power
from .invariants import jacobian_rank
from .structure import SymmetryClass, act, random_basis_change, random_tensor, trace

SUITE_PRIME = 2**31 - 1
CHECKS = ("trace_covariance", "q_covariance", "p_equivariance", "c_invariance",
          "idempotence", "p_of_c_is_identity", "witness")


def parse_config(name: str) -> tuple[int, SymmetryClass]:
    """``"m2-general"`` -> (2, GENERAL)."""
    head, _, sym = name.partition("-")
    if not head.startswith("m") or not head[1:].isdigit() or not sym:
        raise ValueError(f"config must look like m<M>-<symmetry>, got {name!r}")
    return int(head[1:]), SymmetryClass.parse(sym)


@dataclass
class SuiteResult:
    config: str
    profile_hash: str
    trials: int = 0
    generic: int = 0
    rational_trials: int = 0
    rational_generic: int = 0
    failures: list = dc_field(default_factory=list)
    ranks: dict = dc_field(default_factory=dict)
    min_generic: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures and self.generic >= self.min_generic

    def to_json(self) -> dict:
        return {
            "config": self.config,
            "profile_hash": self.profile_hash,
            "trials": self.trials,
            "generic": self.generic,
            "min_generic": self.min_generic,
            "rational_trials": self.rational_trials,
            "rational_generic": self.rational_generic,
            "failures": self.failures,
            "ranks": self.ranks,
            "passed": self.passed,
        }


def trial_inputs(profile: CanonProfile, F, label: str, index: int):
    rng = random.Random(f"algcanon:selftest:{label}:{index}")
    A = random_tensor(profile.m, profile.sym, F, rng)
    g = random_basis_change(profile.m, F, rng)
    return A, g


def check_trial(profile: CanonProfile, A, g) -> tuple[bool, list[str]]:
    """Run every check on one (A, g).  Returns (generic, failed check names)."""
    F = A.field
    gi = g.inverse()
    B = act(g, A, g_inv=gi)
    failed = []
    for slot in (1, 2):
        if trace(B, slot) != trace(A, slot) @ gi:
            failed.append("trace_covariance")
            break
    if q_matrix(profile, B) != q_matrix(profile, A) @ kron_power(gi, profile.k):
        failed.append("q_covariance")
    ra, pa = _analyse(profile, A)
    rb, pb = _analyse(profile, B)
    if (pa is None) != (pb is None):
        failed.append("genericity_invariance")
        return False, failed
    if pa is None:
        return False, failed
    if pb[0] != pa[0] @ gi:
        failed.append("p_equivariance")
    C = act(pa[0], A, g_inv=pa[1])
    if act(pb[0], B, g_inv=pb[1]).matrix != C.matrix:
        failed.append("c_invariance")
    rc, pc = _analyse(profile, C)
    if pc is None or pc[0] != Matrix.identity(F, profile.m):
        failed.append("p_of_c_is_identity")
    elif act(pc[0], C, g_inv=pc[1]).matrix != C.matrix:
        failed.append("idempotence")
    try:
        res = iso_test(profile, A, B)
        if not res.equivalent or res.witness != g:
            failed.append("witness")
    except AlgCanonError:
        failed.append("witness")
    return True, failed


def run_suite(config: str, trials: int = 100, seed: int = 0, rational_trials: int | None = None,
              rank_seeds=None, profile: CanonProfile | None = None) -> SuiteResult:
    m, sym = parse_config(config)
    profile = profile or default_profile(m, sym)
    rational_trials = max(1, trials // 10) if rational_trials is None else rational_trials
    res = SuiteResult(config, profile.profile_hash, min_generic=-(-9 * trials // 10))
    for F, n, kind in ((GF(SUITE_PRIME), trials, "fp"), (QQ, rational_trials, "rational")):
        label = f"{config}:{seed}:{kind}"
        for i in range(n):
            A, g = trial_inputs(profile, F, label, i)
            generic, failed = check_trial(profile, A, g)
            if kind == "fp":
                res.trials += 1
                res.generic += generic
            else:
                res.rational_trials += 1
                res.rational_generic += generic
            for name in failed:
                res.failures.append({"invariant": name, "field": F.name, "trial": i,
                                     "seed": seed, "label": label})
    rank_seeds = (seed, seed + 1, seed + 2) if rank_seeds is None else rank_seeds
    for which in ("canonical", "frame"):
        rep = jacobian_rank(profile, which, rank_seeds)
        res.ranks[which] = rep.to_json()
        if rep.matches is False:
            res.failures.append({"invariant": f"{which}_rank", "seed": seed,
                                 "measured": rep.measured_rank, "expected": rep.expected_rank})
    return res
