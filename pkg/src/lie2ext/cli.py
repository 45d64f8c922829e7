"""Command-line front end.

Exit status: 0 when every check passes, 1 when a check fails (or a
precondition is violated), 2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import Callable, Optional

import numpy as np

from . import serialize as ser
from .deriv import build_der2, build_der3, derivation_space
from .ext import (
    Splitting,
    canonical_splitting,
    check_extension,
    check_extension_iso,
    extension_from_morphism,
    iso_to_witness,
    morphism_from_splitting,
    splitting_difference_witness,
    witness_to_iso,
)
from .fixtures import EXTENSION_FIXTURES, extension_fixture
from .lie2core import check_lie2_axioms, fixture
from .morph import check_equivalence_witness, check_morphism_to_der3, solve_equivalence_restricted
from .report import AxiomReport, PreconditionError, StructureError, UnsupportedCase

ALGEBRA_FIXTURES = {"a_ab_2_1": "A_ab(2,1)", "aff1": "AFF1", "sl2_skel": "SL2_SKEL", "d_id": "D_ID"}


class Outcome:
    """What a verb produced: text lines, a JSON mirror, an optional document to write, and pass/fail."""

    def __init__(self, ok: bool, lines: list[str], data: dict, document=None):
        self.ok = ok
        self.lines = lines
        self.data = data
        self.document = document


def _report_outcome(rep: AxiomReport, document=None) -> Outcome:
    return Outcome(rep.ok, rep.render().splitlines(), rep.to_json(), document)


def _doc_kind(doc) -> str:
    if isinstance(doc, dict):
        if "ghat" in doc:
            return "extension"
        if "f0" in doc:
            return "morphism"
        if "n0" in doc:
            return "algebra"
    raise ser.SchemaError("unrecognized document: expected an algebra, extension or morphism")


def cmd_verify(args) -> Outcome:
    doc = ser.read(args.input)
    kind = _doc_kind(doc)
    if kind == "algebra":
        return _report_outcome(check_lie2_axioms(ser.algebra_from_doc(doc)))
    if kind == "extension":
        return _report_outcome(check_extension(ser.extension_from_doc(doc)))
    g, h, f = ser.morphism_from_doc(doc)
    return _report_outcome(check_morphism_to_der3(g, h, f))


def cmd_derive(args) -> Outcome:
    L = ser.algebra_from_doc(ser.read(args.input))
    basis = derivation_space(L)
    doc = {"dimension": len(basis), "basis": [ser.derivation_to_doc(X) for X in basis]}
    lines = [f"Der^0 dimension {len(basis)}"]
    for k, X in enumerate(basis):
        lines.append(f"  basis[{k}]: " + json.dumps(ser.derivation_to_doc(X), sort_keys=True))
    return Outcome(True, lines, doc, doc)


def cmd_der2(args) -> Outcome:
    L = ser.algebra_from_doc(ser.read(args.input))
    S = build_der2(L)
    doc = {
        "algebra": ser.algebra_to_doc(S.algebra),
        "basis0": [ser.derivation_to_doc(X) for X in S.basis0],
        "basis1": [ser.dump_matrix(getattr(D, "D", D)) for D in S.basis1],
    }
    rep = check_lie2_axioms(S.algebra)
    lines = [f"Der(g): dimensions ({S.algebra.n0}, {S.algebra.n1})"] + rep.render().splitlines()
    return Outcome(rep.ok, lines, {"dimensions": [S.algebra.n0, S.algebra.n1], "report": rep.to_json()}, doc)


def cmd_der3(args) -> Outcome:
    from .lie2core import check_lie3_axioms

    L = ser.algebra_from_doc(ser.read(args.input))
    S = build_der3(L)
    T = S.algebra
    doc = {"algebra": ser.lie3_to_doc(T), "basis0": [ser.derivation_to_doc(X) for X in S.basis0]}
    rep = check_lie3_axioms(T)
    lines = [f"DER(g): dimensions ({T.m0}, {T.m1}, {T.m2})"] + rep.render().splitlines()
    return Outcome(rep.ok, lines, {"dimensions": [T.m0, T.m1, T.m2], "report": rep.to_json()}, doc)


def cmd_check_morphism(args) -> Outcome:
    g, h, f = ser.morphism_from_doc(ser.read(args.input))
    return _report_outcome(check_morphism_to_der3(g, h, f))


def cmd_check_equiv(args) -> Outcome:
    g, h, f = ser.morphism_from_doc(ser.read(args.morphism), "morphism")
    g2, h2, fp = ser.morphism_from_doc(ser.read(args.other), "other")
    if not (g == g2 and h == h2):
        raise ser.SchemaError("the two morphisms have different source or target algebras")
    if args.solve:
        cert = []
        w = solve_equivalence_restricted(g, h, f, fp, cert)
        c = cert[0]
        cert_line = f"rank {c.rank}, augmented rank {c.augmented_rank}, {c.unknowns} unknowns, {c.equations} equations"
        if w is None:
            return Outcome(False, ["not equivalent: " + cert_line], {"equivalent": False, "certificate": c.__dict__})
        rep = check_equivalence_witness(g, h, f, fp, w)
        lines = ["equivalent: " + cert_line] + rep.render().splitlines()
        data = {"equivalent": True, "certificate": c.__dict__, "report": rep.to_json()}
        return Outcome(rep.ok, lines, data, ser.witness_to_doc(w))
    if not args.witness:
        raise ser.SchemaError("check-equiv needs a witness file or --solve")
    w = ser.witness_from_doc(ser.read(args.witness), g, h)
    return _report_outcome(check_equivalence_witness(g, h, f, fp, w))


def cmd_extend(args) -> Outcome:
    g, h, f = ser.morphism_from_doc(ser.read(args.input))
    E = extension_from_morphism(g, h, f)
    rep = check_extension(E)
    return _report_outcome(rep, ser.extension_to_doc(E))


def cmd_extract(args) -> Outcome:
    E = ser.extension_from_doc(ser.read(args.input))
    s = ser.splitting_from_doc(ser.read(args.splitting), E) if args.splitting else canonical_splitting(E)
    f = morphism_from_splitting(E, s)
    rep = check_morphism_to_der3(E.g, E.h, f)
    return _report_outcome(rep, ser.morphism_to_doc(E.g, E.h, f))


def _default_shift(E) -> Splitting:
    """The splitting x -> x + (1, ..., 1), a -> a + (1, ..., 1) used for round trip B."""
    ones0 = np.full((E.h.n0, E.g.n0), 1, dtype=object)
    ones1 = np.full((E.h.n1, E.g.n1), 1, dtype=object)
    return Splitting.shifted(E, ones0, ones1)


def cmd_roundtrip(args) -> Outcome:
    if bool(args.morphism) == bool(args.extension):
        raise ser.SchemaError("roundtrip needs exactly one of --morphism or --extension")
    if args.morphism:
        g, h, f = ser.morphism_from_doc(ser.read(args.morphism))
        E = extension_from_morphism(g, h, f)
    else:
        E = ser.extension_from_doc(ser.read(args.extension))
        g, h = E.g, E.h
        f = morphism_from_splitting(E, canonical_splitting(E))
    results = {}
    # A: morphism -> extension -> morphism
    back = morphism_from_splitting(extension_from_morphism(g, h, f), canonical_splitting(E))
    results["A"] = back == f
    # B: two splittings give equivalent morphisms
    other = _default_shift(E)
    fp = morphism_from_splitting(E, other)
    w = splitting_difference_witness(E, canonical_splitting(E), other)
    results["B"] = check_equivalence_witness(g, h, f, fp, w).ok
    # C: witness -> iso -> witness
    E1, E2, F = witness_to_iso(g, h, f, fp, w)
    results["C"] = check_extension_iso(E1, E2, F).ok and iso_to_witness(E1, E2, F) == w
    text = {
        "A": ("exact equality", "components differ"),
        "B": ("witness verified", "witness rejected"),
        "C": ("iso verified", "iso rejected"),
    }
    line = "; ".join(f"{k}: {text[k][0] if v else text[k][1]}" for k, v in results.items())
    return Outcome(all(results.values()), [line], {k: bool(v) for k, v in results.items()})


def fixture_documents() -> dict:
    docs = {name: ser.algebra_to_doc(fixture(key)) for name, key in ALGEBRA_FIXTURES.items()}
    for name in EXTENSION_FIXTURES:
        E = extension_fixture(name).ext
        docs[name] = ser.morphism_to_doc(E.g, E.h, morphism_from_splitting(E))
        docs[f"{name}_ext"] = ser.extension_to_doc(E)
    return docs


def cmd_fixtures(args) -> Outcome:
    docs = fixture_documents()
    if args.fixture:
        if args.fixture not in docs:
            raise ser.SchemaError(f"unknown fixture {args.fixture!r}; known: {', '.join(sorted(docs))}")
        doc = docs[args.fixture]
        lines = [f"fixture {args.fixture}"] if args.out else ser.dumps(doc).splitlines()
        return Outcome(True, lines, {"fixtures": [args.fixture]}, doc)
    if not args.out:
        return Outcome(True, sorted(docs), {"fixtures": sorted(docs)})
    os.makedirs(args.out, exist_ok=True)
    for name in sorted(docs):
        ser.write(os.path.join(args.out, f"{name}.json"), docs[name])
    args.out = None  # already written
    return Outcome(True, [f"wrote {len(docs)} fixtures"], {"fixtures": sorted(docs)})


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lie2ext", description="Lie 2-algebras, derivations and non-abelian extensions over Q.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="verb", required=True)

    def verb(name: str, func: Callable, help_: str, input_: Optional[str] = "input"):
        sp = sub.add_parser(name, help=help_)
        if input_:
            sp.add_argument(input_)
        sp.add_argument("--json", action="store_true", help="print the machine-readable report")
        sp.add_argument("--out", help="write the produced document here")
        sp.set_defaults(func=func)
        return sp

    verb("verify", cmd_verify, "check the axioms of an algebra, extension or morphism file")
    verb("derive", cmd_derive, "basis of the degree-0 derivations")
    verb("der2", cmd_der2, "structure constants of Der(g)")
    verb("der3", cmd_der3, "structure constants of DER(g)")
    verb("check-morphism", cmd_check_morphism, "check a morphism g -> DER(h)")
    sp = verb("check-equiv", cmd_check_equiv, "check or find an equivalence of two morphisms", input_=None)
    sp.add_argument("morphism")
    sp.add_argument("other")
    sp.add_argument("witness", nargs="?")
    sp.add_argument("--solve", action="store_true", help="solve for a witness (h abelian)")
    verb("extend", cmd_extend, "build the extension of a morphism")
    sp = verb("extract", cmd_extract, "morphism induced by a splitting of an extension")
    sp.add_argument("--splitting", help="splitting file (default: block inclusion)")
    sp = verb("roundtrip", cmd_roundtrip, "round trips A, B and C", input_=None)
    sp.add_argument("--morphism")
    sp.add_argument("--extension")
    sp = verb("fixtures", cmd_fixtures, "write named fixture files", input_=None)
    sp.add_argument("--fixture", help="name of a single fixture")
    return p


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        out = args.func(args)
    except (StructureError, UnsupportedCase, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PreconditionError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        if exc.report is not None:
            print(exc.report.render(), file=sys.stderr)
        return 1
    if args.out and out.document is not None:
        ser.write(args.out, out.document)
    if args.json:
        sys.stdout.write(ser.dumps(out.data))
    else:
        for line in out.lines:
            print(line)
    return 0 if out.ok else 1


if __name__ == "__main__":
    sys.exit(main())
