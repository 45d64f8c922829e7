"""JSON documents for algebras, derivations, morphisms, witnesses and extensions.

Rationals are strings ``"p/q"`` (or ``"p"``), indices are 0-based, dense
matrices are lists of rows and tensors are sparse coordinate lists
``[i, j, ..., "p/q"]``.  Antisymmetric tensors are written with strictly
increasing argument indices only; on load every listed entry is closed
under the antisymmetry and a conflicting pair of entries is an error.
"""

from __future__ import annotations

import itertools
import json
from typing import Any

import numpy as np

from .deriv import DerOne, Derivation0
from .exactq import format_rational, q, zeros
from .ext import Extension, ExtensionIso, Splitting
from .lie2core import Lie2Algebra
from .morph import EquivalenceWitness, MorphismToDer3
from .report import StructureError


class SchemaError(StructureError):
    """A document does not match the expected layout; the message names the field."""


def _rat(value, where: str):
    if isinstance(value, bool) or isinstance(value, float):
        raise SchemaError(f"{where}: rationals must be strings or integers, got {value!r}")
    try:
        return q(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"{where}: {exc}") from None


def _field(doc: dict, key: str, where: str):
    if not isinstance(doc, dict):
        raise SchemaError(f"{where}: expected an object")
    if key not in doc:
        raise SchemaError(f"{where}: missing field {key!r}")
    return doc[key]


def _int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise SchemaError(f"{where}: expected a non-negative integer, got {value!r}")
    return value


# ---------------------------------------------------------------------------
# dense matrices and sparse tensors
# ---------------------------------------------------------------------------


def dump_matrix(m) -> list:
    m = np.asarray(m, dtype=object)
    return [[format_rational(v) for v in row] for row in m]


def load_matrix(data, shape: tuple, where: str) -> np.ndarray:
    rows, cols = shape
    if not isinstance(data, list) or len(data) != rows:
        raise SchemaError(f"{where}: expected {rows} rows")
    out = zeros(rows, cols)
    for r, row in enumerate(data):
        if not isinstance(row, list) or len(row) != cols:
            raise SchemaError(f"{where}[{r}]: expected {cols} entries")
        for c, v in enumerate(row):
            out[r, c] = _rat(v, f"{where}[{r}][{c}]")
    return out


def dump_vector(v) -> list:
    return [format_rational(x) for x in np.asarray(v, dtype=object).reshape(-1)]


def load_vector(data, n: int, where: str) -> np.ndarray:
    if not isinstance(data, list) or len(data) != n:
        raise SchemaError(f"{where}: expected {n} entries")
    out = zeros(n)
    for i, v in enumerate(data):
        out[i] = _rat(v, f"{where}[{i}]")
    return out


def dump_sparse(t, antisym: int = 0) -> list:
    """Nonzero entries in lexicographic order; the first ``antisym`` indices strictly increasing."""
    t = np.asarray(t, dtype=object)
    out = []
    for idx in np.ndindex(*t.shape):
        if t[idx] == 0:
            continue
        if antisym and any(idx[p] >= idx[p + 1] for p in range(antisym - 1)):
            continue
        out.append([int(i) for i in idx] + [format_rational(t[idx])])
    return out


def _perm_sign(perm) -> int:
    sign = 1
    perm = list(perm)
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def load_sparse(data, shape: tuple, where: str, antisym: int = 0) -> np.ndarray:
    if not isinstance(data, list):
        raise SchemaError(f"{where}: expected a list of [indices..., value] entries")
    out = zeros(*shape)
    seen = np.zeros(shape, dtype=bool)
    k = len(shape)
    for e, entry in enumerate(data):
        loc = f"{where}[{e}]"
        if not isinstance(entry, list) or len(entry) != k + 1:
            raise SchemaError(f"{loc}: expected {k} indices and a value")
        idx = []
        for p, (i, n) in enumerate(zip(entry[:k], shape)):
            if isinstance(i, bool) or not isinstance(i, int) or not 0 <= i < n:
                raise SchemaError(f"{loc}: index {p} = {i!r} out of range 0..{n - 1}")
            idx.append(i)
        value = _rat(entry[k], loc)
        head, tail = idx[:antisym], idx[antisym:]
        if antisym and len(set(head)) < len(head) and value != 0:
            raise SchemaError(f"{loc}: repeated antisymmetric index with nonzero value")
        perms = itertools.permutations(range(antisym)) if antisym else [()]
        for perm in perms:
            target = tuple([head[p] for p in perm] + tail)
            v = value * _perm_sign(perm) if antisym else value
            if seen[target] and out[target] != v:
                raise SchemaError(f"{loc}: conflicts with an earlier entry at {list(target)}")
            out[target] = v
            seen[target] = True
    return out


# ---------------------------------------------------------------------------
# documents
# ---------------------------------------------------------------------------


def algebra_to_doc(L: Lie2Algebra) -> dict:
    return {
        "n0": L.n0,
        "n1": L.n1,
        "d": dump_matrix(L.d),
        "b00": dump_sparse(L.b00, antisym=2),
        "b01": dump_sparse(L.b01),
        "l3": dump_sparse(L.l3, antisym=3),
    }


def algebra_from_doc(doc: dict, where: str = "algebra") -> Lie2Algebra:
    n0 = _int(_field(doc, "n0", where), f"{where}.n0")
    n1 = _int(_field(doc, "n1", where), f"{where}.n1")
    d = load_matrix(doc.get("d", [[0] * n1 for _ in range(n0)]), (n0, n1), f"{where}.d")
    b00 = load_sparse(doc.get("b00", []), (n0, n0, n0), f"{where}.b00", antisym=2)
    b01 = load_sparse(doc.get("b01", []), (n0, n1, n1), f"{where}.b01")
    l3 = load_sparse(doc.get("l3", []), (n0, n0, n0, n1), f"{where}.l3", antisym=3)
    try:
        return Lie2Algebra(n0, n1, d, b00, b01, l3)
    except StructureError as exc:
        raise SchemaError(f"{where}: {exc}") from None


def derivation_to_doc(X: Derivation0) -> dict:
    return {"X0": dump_matrix(X.X0), "X1": dump_matrix(X.X1), "lX": dump_sparse(X.lX, antisym=2)}


def derivation_from_doc(doc: dict, h: Lie2Algebra, where: str = "derivation") -> Derivation0:
    n0, n1 = h.n0, h.n1
    return Derivation0(
        load_matrix(_field(doc, "X0", where), (n0, n0), f"{where}.X0"),
        load_matrix(_field(doc, "X1", where), (n1, n1), f"{where}.X1"),
        load_sparse(doc.get("lX", []), (n0, n0, n1), f"{where}.lX", antisym=2),
    )


def _der1_flat(e: DerOne) -> np.ndarray:
    return np.concatenate([e.D.reshape(-1), e.x])


def morphism_to_doc(g: Lie2Algebra, h: Lie2Algebra, f: MorphismToDer3) -> dict:
    """f2_0 is sparse over (i, j, c) with c indexing D row-major followed by the h0 part."""
    width = h.n1 * h.n0 + h.n0
    f20 = zeros(g.n0, g.n0, width)
    for i, j in itertools.product(range(g.n0), repeat=2):
        f20[i, j] = _der1_flat(f.f2_0[i][j])
    return {
        "g": algebra_to_doc(g),
        "h": algebra_to_doc(h),
        "f0": [derivation_to_doc(X) for X in f.f0],
        "f1": {"D": [dump_matrix(e.D) for e in f.f1], "x0": [dump_vector(e.x) for e in f.f1]},
        "f2_0": dump_sparse(f20, antisym=2),
        "f2_1": dump_sparse(f.f2_1),
        "f3": dump_sparse(f.f3, antisym=3),
    }


def morphism_from_doc(doc: dict, where: str = "morphism"):
    """Returns (g, h, f)."""
    g = algebra_from_doc(_field(doc, "g", where), f"{where}.g")
    h = algebra_from_doc(_field(doc, "h", where), f"{where}.h")
    f0_doc = _field(doc, "f0", where)
    if not isinstance(f0_doc, list) or len(f0_doc) != g.n0:
        raise SchemaError(f"{where}.f0: expected {g.n0} derivations")
    f0 = [derivation_from_doc(x, h, f"{where}.f0[{i}]") for i, x in enumerate(f0_doc)]
    f1_doc = _field(doc, "f1", where)
    Ds, xs = _field(f1_doc, "D", f"{where}.f1"), _field(f1_doc, "x0", f"{where}.f1")
    if not isinstance(Ds, list) or not isinstance(xs, list) or len(Ds) != g.n1 or len(xs) != g.n1:
        raise SchemaError(f"{where}.f1: expected {g.n1} values in D and x0")
    f1 = [
        DerOne(load_matrix(Ds[a], (h.n1, h.n0), f"{where}.f1.D[{a}]"), load_vector(xs[a], h.n0, f"{where}.f1.x0[{a}]"))
        for a in range(g.n1)
    ]
    width = h.n1 * h.n0 + h.n0
    f20 = load_sparse(doc.get("f2_0", []), (g.n0, g.n0, width), f"{where}.f2_0", antisym=2)
    split = h.n1 * h.n0
    f2_0 = [
        [DerOne(f20[i, j, :split].reshape(h.n1, h.n0), f20[i, j, split:]) for j in range(g.n0)]
        for i in range(g.n0)
    ]
    f2_1 = load_sparse(doc.get("f2_1", []), (g.n0, g.n1, h.n1), f"{where}.f2_1")
    f3 = load_sparse(doc.get("f3", []), (g.n0, g.n0, g.n0, h.n1), f"{where}.f3", antisym=3)
    return g, h, MorphismToDer3(f0, f1, f2_0, f2_1, f3)


def witness_to_doc(w: EquivalenceWitness) -> dict:
    return {"b0": dump_matrix(w.b0), "b1": dump_matrix(w.b1), "b2": dump_sparse(w.b2, antisym=2)}


def witness_from_doc(doc: dict, g: Lie2Algebra, h: Lie2Algebra, where: str = "witness") -> EquivalenceWitness:
    return EquivalenceWitness(
        load_matrix(_field(doc, "b0", where), (h.n0, g.n0), f"{where}.b0"),
        load_matrix(_field(doc, "b1", where), (h.n1, g.n1), f"{where}.b1"),
        load_sparse(doc.get("b2", []), (g.n0, g.n0, h.n1), f"{where}.b2", antisym=2),
    )


def extension_to_doc(E: Extension) -> dict:
    return {
        "g": algebra_to_doc(E.g),
        "h": algebra_to_doc(E.h),
        "ghat": algebra_to_doc(E.ghat),
        "blocks": ["g", "h"],
    }


def extension_from_doc(doc: dict, where: str = "extension") -> Extension:
    blocks = doc.get("blocks", ["g", "h"])
    if blocks != ["g", "h"]:
        raise SchemaError(f"{where}.blocks: only the ordering [\"g\", \"h\"] is supported")
    g = algebra_from_doc(_field(doc, "g", where), f"{where}.g")
    h = algebra_from_doc(_field(doc, "h", where), f"{where}.h")
    ghat = algebra_from_doc(_field(doc, "ghat", where), f"{where}.ghat")
    try:
        return Extension(g, h, ghat)
    except StructureError as exc:
        raise SchemaError(f"{where}: {exc}") from None


def splitting_to_doc(s: Splitting) -> dict:
    return {"s0": dump_matrix(s.s0), "s1": dump_matrix(s.s1)}


def splitting_from_doc(doc: dict, E: Extension, where: str = "splitting") -> Splitting:
    return Splitting(
        load_matrix(_field(doc, "s0", where), (E.ghat.n0, E.g.n0), f"{where}.s0"),
        load_matrix(_field(doc, "s1", where), (E.ghat.n1, E.g.n1), f"{where}.s1"),
    )


def iso_to_doc(F: ExtensionIso) -> dict:
    return {"F0": dump_matrix(F.F0), "F1": dump_matrix(F.F1), "F2": dump_sparse(F.F2, antisym=2)}


def iso_from_doc(doc: dict, E: Extension, where: str = "iso") -> ExtensionIso:
    n0, n1 = E.ghat.n0, E.ghat.n1
    return ExtensionIso(
        load_matrix(_field(doc, "F0", where), (n0, n0), f"{where}.F0"),
        load_matrix(_field(doc, "F1", where), (n1, n1), f"{where}.F1"),
        load_sparse(doc.get("F2", []), (n0, n0, n1), f"{where}.F2", antisym=2),
    )


# ---------------------------------------------------------------------------
# text
# ---------------------------------------------------------------------------


def dumps(doc: Any) -> str:
    """Canonical text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def loads(text: str, source: str = "<input>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def read(path: str) -> Any:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read(), path)


def write(path: str, doc: Any) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(doc))


def lie3_to_doc(T) -> dict:
    return {
        "m0": T.m0,
        "m1": T.m1,
        "m2": T.m2,
        "l1_21": dump_matrix(T.l1_21),
        "l1_10": dump_matrix(T.l1_10),
        "c00": dump_sparse(T.c00, antisym=2),
        "c01": dump_sparse(T.c01),
        "c02": dump_sparse(T.c02),
        "c11": dump_sparse(T.c11),
    }


def lie3_from_doc(doc: dict, where: str = "lie3"):
    from .lie2core import Lie3Algebra

    m0 = _int(_field(doc, "m0", where), f"{where}.m0")
    m1 = _int(_field(doc, "m1", where), f"{where}.m1")
    m2 = _int(_field(doc, "m2", where), f"{where}.m2")
    try:
        return Lie3Algebra(
            m0,
            m1,
            m2,
            load_matrix(_field(doc, "l1_21", where), (m1, m2), f"{where}.l1_21"),
            load_matrix(_field(doc, "l1_10", where), (m0, m1), f"{where}.l1_10"),
            load_sparse(doc.get("c00", []), (m0, m0, m0), f"{where}.c00", antisym=2),
            load_sparse(doc.get("c01", []), (m0, m1, m1), f"{where}.c01"),
            load_sparse(doc.get("c02", []), (m0, m2, m2), f"{where}.c02"),
            load_sparse(doc.get("c11", []), (m1, m1, m2), f"{where}.c11"),
        )
    except StructureError as exc:
        raise SchemaError(f"{where}: {exc}") from None
