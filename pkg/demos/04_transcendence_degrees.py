"""
Counting invariants with dual numbers
=====================================

The Jacobian of A -> C(A) at a random point, taken with forward-mode dual
numbers over F_p (p = 2^61 - 1), has the rank of the invariant field's
transcendence degree.  The frame map A -> P(A) should have rank m^2.
"""

from algcanon import default_profile, expected_trdeg, jacobian_rank
from algcanon.invariants import orbit_report

print(f"{'config':<16}{'canonical':>10}{'expected':>10}{'frame':>8}")
for m, sym in [(2, "general"), (3, "general"), (2, "commutative")]:
    prof = default_profile(m, sym)
    c = jacobian_rank(prof, "canonical", seeds=(0, 1, 2))
    f = jacobian_rank(prof, "frame", seeds=(0, 1, 2))
    print(f"m{m}-{sym:<13}{c.measured_rank:>10}{expected_trdeg(m, sym):>10}{f.measured_rank:>8}")

# the same numbers from the dimension of a generic orbit, no profile needed
for m, sym in [(3, "commutative"), (3, "anticommutative"), (4, "anticommutative")]:
    rep = orbit_report(m, sym)
    print(f"m{m}-{sym}: d - dim(orbit) = {rep['trdeg_from_orbit_dimension']}, stated {rep['stated_trdeg']}")
