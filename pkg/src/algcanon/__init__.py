"""Canonical forms, isomorphism tests and invariants for finite-dimensional algebras.

An algebra is given by its structure constants ``A^i_{j,k}`` over the
rationals or a prime field.  A frozen :class:`CanonProfile` turns every generic
tensor into a canonical representative of its basis-change orbit.
"""

__version__ = "0.1.0"

from .canonical import (
    CanonicalCertificate,
    CanonProfile,
    GenericityReport,
    IsoResult,
    build_profile,
    canonical_form,
    default_profile,
    is_generic,
    iso_test,
    orbit_decompose,
    p_matrix,
    q_matrix,
)
from .contraction import ContractionScheme, distinct_rows, enumerate_schemes, evaluate_scheme
from .errors import *  # noqa: F403
from .exactla import GF, QQ, DualField, Matrix, field_from_name
from .invariants import RankReport, expected_trdeg, invariant_values, jacobian_rank
from .structure import (
    StructureTensor,
    SymmetryClass,
    act,
    random_basis_change,
    random_tensor,
    trace,
    validate_symmetry,
)
