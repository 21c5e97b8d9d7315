"""Command-line interface and JSON document formats.

Every result is printed as canonical JSON (sorted keys, no whitespace) so
outputs can be diffed and hashed.  Exit codes:

    0   success / equivalent
    1   not equivalent (iso), failed suite (selftest)
    2   non-generic input
    3   no profile for the class (AssumptionViolation)
    64  usage error: bad arguments, malformed documents, profile mismatch
    70  internal invariant failure
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .canonical import (
    SHIPPED,
    CanonProfile,
    _canonical_json,
    build_profile,
    canonical_form,
    default_profile,
    iso_test,
)
from .errors import (
    AlgCanonError,
    AssumptionViolation,
    DimensionMismatch,
    NonGenericInput,
    ParseError,
    ProfileMismatch,
    SymmetryViolation,
    UnsupportedField,
    WitnessVerificationFailure,
)
from .exactla import Matrix, field_from_name
from .invariants import MAPS, jacobian_rank
from .selftest import run_suite
from .structure import StructureTensor, SymmetryClass, random_tensor

TENSOR_FORMAT = 1

EXIT_OK = 0
EXIT_NOT_EQUIVALENT = 1
EXIT_NON_GENERIC = 2
EXIT_ASSUMPTION = 3
EXIT_USAGE = 64
EXIT_INTERNAL = 70

_USAGE_ERRORS = (ParseError, SymmetryViolation, UnsupportedField, ProfileMismatch,
                 DimensionMismatch)


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- documents


def write_result(doc) -> bytes:
    """Canonical bytes: sorted keys, compact separators, one trailing newline."""
    return (_canonical_json(doc) + "\n").encode()


def matrix_strings(M: Matrix) -> list[list[str]]:
    fmt = M.field.format
    return [[fmt(x) for x in row] for row in M.tolist()]


def serialize_tensor(A: StructureTensor) -> dict:
    return {
        "format_version": TENSOR_FORMAT,
        "m": A.m,
        "symmetry": A.sym.value,
        "field": A.field.name,
        "entries": matrix_strings(A.matrix),
    }


def parse_tensor(doc) -> StructureTensor:
    """Validate a TensorDocument.  Entries are strings; column index (j-1)*m + k."""
    if not isinstance(doc, dict):
        raise ParseError("tensor document must be a JSON object")
    for key in ("m", "symmetry", "field", "entries"):
        if key not in doc:
            raise ParseError(f"missing field {key!r}")
    if doc.get("format_version", TENSOR_FORMAT) != TENSOR_FORMAT:
        raise ParseError(f"unsupported format_version {doc['format_version']!r}", "format_version")
    m = doc["m"]
    if not isinstance(m, int) or isinstance(m, bool) or m < 2:
        raise ParseError(f"m must be an integer >= 2, got {m!r}", "m")
    try:
        sym = SymmetryClass.parse(doc["symmetry"])
    except ValueError as exc:
        raise ParseError(str(exc), "symmetry") from None
    if not isinstance(doc["field"], str):
        raise ParseError("field must be a string", "field")
    F = field_from_name(doc["field"])
    entries = doc["entries"]
    if not isinstance(entries, list) or len(entries) != m:
        raise ParseError(f"entries must be {m} rows", "entries")
    n = sum(len(r) if isinstance(r, list) else 0 for r in entries)
    if n != m**3:
        raise ParseError(f"expected {m**3} entries ({m} rows of {m * m}), got {n}", "entries")
    rows = []
    for i, row in enumerate(entries):
        if len(row) != m * m:
            raise ParseError(f"row has {len(row)} entries, expected {m * m}", f"entries[{i}]")
        out = []
        for j, x in enumerate(row):
            if not isinstance(x, str):
                raise ParseError(f"entry must be a string, got {x!r}", f"entries[{i}][{j}]")
            try:
                out.append(F(x))
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(f"bad scalar {x!r} ({exc})", f"entries[{i}][{j}]") from None
        rows.append(out)
    return StructureTensor.from_rows(F, rows, sym)


def _read_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON ({exc.msg})", f"{path}:{exc.lineno}:{exc.colno}") from None


def load_profile(spec: str) -> CanonProfile:
    """A profile file, or the name of a shipped profile such as ``m2-general``."""
    if not Path(spec).exists():
        for (m, sym), name in SHIPPED.items():
            if spec in (name, name.removesuffix(".json")):
                return default_profile(m, sym)
        raise UsageError(f"no profile file or shipped profile named {spec!r}")
    doc = _read_json(spec)
    try:
        return CanonProfile.from_json(doc)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, AlgCanonError):
            raise
        raise ParseError(f"malformed profile ({exc!r})", spec) from None


def _load_input(path: str, profile: CanonProfile) -> StructureTensor:
    """A TensorDocument, or a ``canon`` result (its input tensor is used).

    A ``profile_hash`` carried by the document must match the profile.
    """
    doc = _read_json(path)
    if isinstance(doc, dict) and "certificate" in doc:
        h = doc.get("profile_hash")
        doc = doc.get("input")
    else:
        h = doc.get("profile_hash") if isinstance(doc, dict) else None
    if h is not None and h != profile.profile_hash:
        raise ProfileMismatch(f"{path} was produced under profile {h[:12]}..., "
                              f"not {profile.profile_hash[:12]}...")
    return parse_tensor(doc)


def certificate_json(cert) -> dict:
    return {
        "canonical": serialize_tensor(cert.canonical),
        "frame": matrix_strings(cert.frame),
        "genericity": cert.genericity.to_json(),
        "profile_hash": cert.profile_hash,
    }


def _non_generic(exc: NonGenericInput, command: dict) -> dict:
    return {
        "command": command,
        "error": "NonGenericInput",
        "message": str(exc),
        "diagnostics": [r.to_json() for r in exc.reports],
        "hint": "the input lies off the generic set of this profile; "
                "build another profile with a different --seed to decide it",
    }


# ---------------------------------------------------------------- commands


def cmd_profile(args, echo):
    try:
        prof = build_profile(args.m, args.sym, seed=args.seed, k_max=args.k_max)
    except AssumptionViolation as exc:
        return EXIT_ASSUMPTION, {"command": echo, "error": "AssumptionViolation",
                                 "message": str(exc), "report": exc.report}
    doc = prof.to_json()
    if args.out:
        Path(args.out).write_bytes(write_result(doc))
    return EXIT_OK, {"command": echo, "profile_hash": prof.profile_hash, "profile": doc}


def cmd_canon(args, echo):
    prof = load_profile(args.profile)
    A = _load_input(args.input, prof)
    try:
        cert = canonical_form(prof, A)
    except NonGenericInput as exc:
        return EXIT_NON_GENERIC, _non_generic(exc, echo)
    return EXIT_OK, {"command": echo, "profile_hash": prof.profile_hash,
                     "input": serialize_tensor(A), "certificate": certificate_json(cert)}


def cmd_iso(args, echo):
    prof = load_profile(args.profile)
    A = _load_input(args.a, prof)
    B = _load_input(args.b, prof)
    if A.field != B.field:
        raise UsageError(f"inputs over different fields ({A.field.name}, {B.field.name})")
    try:
        res = iso_test(prof, A, B)
    except NonGenericInput as exc:
        return EXIT_NON_GENERIC, _non_generic(exc, echo)
    doc = {
        "command": echo,
        "profile_hash": prof.profile_hash,
        "equivalent": res.equivalent,
        "witness": matrix_strings(res.witness) if res.witness is not None else None,
        "certificates": [certificate_json(c) for c in res.certificates],
    }
    return (EXIT_OK if res.equivalent else EXIT_NOT_EQUIVALENT), doc


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(s) for s in text.split(",") if s.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def cmd_rank(args, echo):
    prof = load_profile(args.profile)
    rep = jacobian_rank(prof, args.map, args.seeds)
    return EXIT_OK, {"command": echo, "profile_hash": prof.profile_hash, "rank": rep.to_json()}


def cmd_gen(args, echo):
    F = field_from_name(args.field)
    A = random_tensor(args.m, args.sym, F, args.seed)
    return EXIT_OK, serialize_tensor(A)


def cmd_selftest(args, echo):
    results = []
    for name in args.configs.split(","):
        try:
            res = run_suite(name, args.trials, args.seed)
            results.append(res.to_json())
        except ProfileMismatch as exc:
            results.append({"config": name, "passed": False, "error": str(exc)})
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    ok = all(r["passed"] for r in results)
    return (EXIT_OK if ok else 1), {"command": echo, "passed": ok, "results": results}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _sym(text: str) -> SymmetryClass:
    try:
        return SymmetryClass.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="algcanon", description="Canonical forms and isomorphism of algebras "
                "given by structure constants.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("profile", help="build a canonicalization profile")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--sym", type=_sym, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--k-max", type=int, default=None)
    s.add_argument("--out", help="write the profile document here")
    s.set_defaults(func=cmd_profile)

    s = sub.add_parser("canon", help="canonical form of one tensor")
    s.add_argument("--profile", required=True, help="profile file or shipped name (m2-general, ...)")
    s.add_argument("--in", dest="input", required=True)
    s.set_defaults(func=cmd_canon)

    s = sub.add_parser("iso", help="decide isomorphism of two tensors")
    s.add_argument("--profile", required=True)
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_iso)

    s = sub.add_parser("rank", help="Jacobian rank of the canonical or frame map")
    s.add_argument("--profile", required=True)
    s.add_argument("--map", choices=MAPS, default="canonical")
    s.add_argument("--seeds", type=_int_list, default=(0, 1, 2))
    s.set_defaults(func=cmd_rank)

    s = sub.add_parser("gen", help="seeded random tensor document")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--sym", type=_sym, required=True)
    s.add_argument("--field", default="fp:2147483647")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("selftest", help="seeded property suite over shipped profiles")
    s.add_argument("--configs", default="m2-general")
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_selftest)
    return p


def _echo(args) -> dict:
    out = {}
    for k, v in sorted(vars(args).items()):
        if k == "func":
            continue
        if isinstance(v, SymmetryClass):
            v = v.value
        elif isinstance(v, tuple):
            v = list(v)
        out[k] = v
    return out


def run_command(argv=None, stdout=None, stderr=None) -> int:
    """Run one command; the result document goes to stdout, diagnostics to stderr."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        code, doc = args.func(args, _echo(args))
    except (UsageError, *_USAGE_ERRORS) as exc:
        print(f"algcanon: usage error: {exc}", file=stderr)
        return EXIT_USAGE
    except WitnessVerificationFailure as exc:
        print(f"algcanon: internal invariant failed: {exc}", file=stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001 - report, never traceback
        print(f"algcanon: internal error: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_INTERNAL
    stdout.write(write_result(doc).decode())
    stdout.flush()
    return code


def main():
    sys.exit(run_command())
