"""Morphisms of Lie 2-algebras, morphisms into DER(h), and their equivalence."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .deriv import (
    DerOne,
    DerTwo,
    Derivation0,
    der3_bracket,
    der3_d,
    derivation_check,
)
from .exactq import basis_vector, is_zero, normalize, rank, solve_linear, zeros
from .lie2core import Lie2Algebra, antisymmetry_defect, check_lie2_axioms
from .report import AxiomReport, PreconditionError, ReportBuilder, StructureError, UnsupportedCase

log = logging.getLogger(__name__)

LIE2_MORPHISM_EQUATIONS = (
    "chain: d' f1 = f0 d",
    "bracket: f0[x,y] - [f0x,f0y]' = d' f2(x,y)",
    "mixed: f1[x,a] - [f0x,f1a]' = f2(x,da)",
    "coherence with l3, l3'",
)

DER3_MORPHISM_EQUATIONS = (
    "(1) d' f1 = f0 d",
    "(2) f0[x,y] - [f0x,f0y]' = d' f2_0(x,y)",
    "(3) f1[x,a] - [f0x,f1a]' = f2_0(x,da) + d' f2_1(x,a)",
    "(4) [f1a,f1b]' = f2_1(a,db) - f2_1(da,b)",
    "(5) f2_0 / f1 l3 coherence",
    "(6) f2_1 / f3 coherence",
    "(7) f3 / l3 coherence",
)

EQUIVALENCE_EQUATIONS = (
    "f0 - f0' = d_D b0",
    "f1 - f1' = b0 d + d_D b1",
    "f2_0' - f2_0",
    "f2_1' - f2_1",
    "f3' - f3",
)


def _e(n: int, i: int) -> np.ndarray:
    return basis_vector(n, i)


def _sum(terms, zero):
    out = zero
    for t in terms:
        if t is not None:
            out = out + t
    return out


# ---------------------------------------------------------------------------
# Lie 2-algebra morphisms
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Lie2Morphism:
    """(f0, f1, f2) from L to L'; ``f2[i, j, a]`` is antisymmetric in (i, j)."""

    f0: np.ndarray
    f1: np.ndarray
    f2: np.ndarray

    def __post_init__(self):
        for name in ("f0", "f1", "f2"):
            object.__setattr__(self, name, normalize(getattr(self, name)))
        bad = antisymmetry_defect(self.f2, 2)
        if bad is not None:
            raise StructureError(f"f2 is not antisymmetric at {bad}")

    @classmethod
    def identity(cls, L: Lie2Algebra) -> "Lie2Morphism":
        from .exactq import identity

        return cls(identity(L.n0), identity(L.n1), zeros(L.n0, L.n0, L.n1))

    @classmethod
    def strict(cls, f0, f1, n0: int, n1_target: int) -> "Lie2Morphism":
        return cls(f0, f1, zeros(n0, n0, n1_target))


def check_lie2_morphism(L: Lie2Algebra, Lp: Lie2Algebra, f: Lie2Morphism) -> AxiomReport:
    """The four morphism equations on every basis tuple."""
    for name, shape in (
        ("f0", (Lp.n0, L.n0)),
        ("f1", (Lp.n1, L.n1)),
        ("f2", (L.n0, L.n0, Lp.n1)),
    ):
        if getattr(f, name).shape != shape:
            raise StructureError(f"{name} has shape {getattr(f, name).shape}, expected {shape}")
    ein = np.einsum
    f0, f1, f2 = f.f0, f.f1, f.f2
    rb = ReportBuilder("Lie 2-algebra morphism")

    chain = normalize(Lp.d @ f1 - f0 @ L.d).T
    rb.tensor(LIE2_MORPHISM_EQUATIONS[0], chain, ("a",))

    # [f0 x, f0 y]' for basis x, y
    brp = ein("px,qy,pqk->xyk", f0, f0, Lp.b00)
    bracket = ein("xym,km->xyk", L.b00, f0) - brp - ein("xya,ka->xyk", f2, Lp.d)
    rb.tensor(LIE2_MORPHISM_EQUATIONS[1], bracket, ("x", "y"))

    mixed = (
        ein("xab,cb->xac", L.b01, f1)
        - ein("px,ba,pbc->xac", f0, f1, Lp.b01)
        - ein("ma,xmc->xac", L.d, f2)
    )
    rb.tensor(LIE2_MORPHISM_EQUATIONS[2], mixed, ("x", "a"))

    # l2'(f0 x, f2(y,z)) + c.p. + l3'(f0x,f0y,f0z) - f2(l2(x,y),z) - c.p. - f1 l3(x,y,z)
    act = ein("px,yzb,pbc->xyzc", f0, f2, Lp.b01)
    pair = ein("xym,mzc->xyzc", L.b00, f2)
    lhs = act + np.transpose(act, (2, 0, 1, 3)) + np.transpose(act, (1, 2, 0, 3))
    lhs = lhs + ein("px,qy,rz,pqrc->xyzc", f0, f0, f0, Lp.l3)
    rhs = pair + np.transpose(pair, (2, 0, 1, 3)) + np.transpose(pair, (1, 2, 0, 3))
    rhs = rhs + ein("xyza,ca->xyzc", L.l3, f1)
    rb.tensor(LIE2_MORPHISM_EQUATIONS[3], lhs - rhs, ("x", "y", "z"))
    return rb.done()


# ---------------------------------------------------------------------------
# morphisms into DER(h)
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class MorphismToDer3:
    """A morphism from a Lie 2-algebra g into DER(h), given on basis vectors of g.

    ``f0[i]`` is a derivation of h, ``f1[a]`` and ``f2_0[i][j]`` are
    (D, u) pairs in Hom(h0, h1) + h0, ``f2_1[i, a, :]`` and
    ``f3[i, j, k, :]`` are vectors of h1.
    """

    f0: tuple
    f1: tuple
    f2_0: tuple
    f2_1: np.ndarray
    f3: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "f0", tuple(self.f0))
        object.__setattr__(self, "f1", tuple(self.f1))
        object.__setattr__(self, "f2_0", tuple(tuple(row) for row in self.f2_0))
        object.__setattr__(self, "f2_1", normalize(self.f2_1))
        object.__setattr__(self, "f3", normalize(self.f3))
        n = len(self.f0)
        for i in range(n):
            if not self.f2_0[i][i].is_zero():
                raise StructureError(f"f2_0 is not antisymmetric at ({i}, {i})")
            for j in range(i + 1, n):
                if not (self.f2_0[i][j] + self.f2_0[j][i]).is_zero():
                    raise StructureError(f"f2_0 is not antisymmetric at ({i}, {j})")
        bad = antisymmetry_defect(self.f3, 3)
        if bad is not None:
            raise StructureError(f"f3 is not totally antisymmetric at {bad}")

    @classmethod
    def zero(cls, g: Lie2Algebra, h: Lie2Algebra) -> "MorphismToDer3":
        return cls(
            [Derivation0.zero(h) for _ in range(g.n0)],
            [DerOne.zero(h) for _ in range(g.n1)],
            [[DerOne.zero(h) for _ in range(g.n0)] for _ in range(g.n0)],
            zeros(g.n0, g.n1, h.n1),
            zeros(g.n0, g.n0, g.n0, h.n1),
        )

    def check_shape(self, g: Lie2Algebra, h: Lie2Algebra) -> None:
        if len(self.f0) != g.n0 or len(self.f1) != g.n1 or len(self.f2_0) != g.n0:
            raise StructureError("morphism component counts do not match the source algebra")
        for X in self.f0:
            X.check_shape(h)
        for e in list(self.f1) + [e for row in self.f2_0 for e in row]:
            if e.D.shape != (h.n1, h.n0) or e.x.shape != (h.n0,):
                raise StructureError("degree-1 value has wrong shape for DER(h)")
        if self.f2_1.shape != (g.n0, g.n1, h.n1):
            raise StructureError(f"f2_1 has shape {self.f2_1.shape}, expected {(g.n0, g.n1, h.n1)}")
        if self.f3.shape != (g.n0, g.n0, g.n0, h.n1):
            raise StructureError(f"f3 has shape {self.f3.shape}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, MorphismToDer3):
            return NotImplemented
        return (
            len(self.f0) == len(other.f0)
            and len(self.f1) == len(other.f1)
            and all(a == b for a, b in zip(self.f0, other.f0))
            and all(a == b for a, b in zip(self.f1, other.f1))
            and all(a == b for r1, r2 in zip(self.f2_0, other.f2_0) for a, b in zip(r1, r2))
            and np.array_equal(self.f2_1, other.f2_1)
            and np.array_equal(self.f3, other.f3)
        )

    __hash__ = None

    # linear extensions to coordinate vectors of g
    def F0(self, x) -> Derivation0:
        return _combo(self.f0, x)

    def F1(self, a) -> DerOne:
        return _combo(self.f1, a)

    def F20(self, x, y) -> DerOne:
        x, y = normalize(x), normalize(y)
        terms = [self.f2_0[i][j] * (x[i] * y[j]) for i in range(len(x)) for j in range(len(y)) if x[i] * y[j] != 0]
        return _sum(terms, self.f2_0[0][0] * 0) if self.f2_0 else None

    def F21(self, x, a) -> DerTwo:
        return DerTwo(np.einsum("i,j,ijk->k", normalize(x), normalize(a), self.f2_1))

    def F3(self, x, y, z) -> DerTwo:
        return DerTwo(np.einsum("i,j,k,ijkl->l", normalize(x), normalize(y), normalize(z), self.f3))


def _combo(elems, coeffs):
    """Linear combination; None (an absorbing zero for additions) when there are no elements."""
    if not elems:
        return None
    coeffs = normalize(coeffs).reshape(-1)
    out = elems[0] * 0
    for c, e in zip(coeffs, elems):
        if c != 0:
            out = out + e * c
    return out


def _require_lie2(L: Lie2Algebra, what: str) -> None:
    rep = check_lie2_axioms(L)
    if not rep.ok:
        raise PreconditionError(f"{what} is not a Lie 2-algebra: {rep.summary()}", rep)


def check_morphism_to_der3(g: Lie2Algebra, h: Lie2Algebra, f: MorphismToDer3) -> AxiomReport:
    """The seven equations for a morphism g -> DER(h), evaluated on basis tuples.

    Elements of h0 enter DER^1(h) as (0, u) and elements of h1 are DER^2(h).
    In (6) f2_1 with its arguments reversed means -f2_1; in (7) the cyclic
    sums are the alternating sums over the four arguments.
    """
    f.check_shape(g, h)
    n0, n1 = g.n0, g.n1
    rb = ReportBuilder("morphism into DER(h)")
    for name in DER3_MORPHISM_EQUATIONS:
        rb.declare(name)
    br = lambda a, b: der3_bracket(h, a, b)  # noqa: E731
    dD = lambda e: der3_d(h, e)  # noqa: E731
    X = [_e(n0, i) for i in range(n0)]
    A = [_e(n1, a) for a in range(n1)]
    z0 = Derivation0.zero(h)
    z1 = DerOne.zero(h)
    z2 = DerTwo.zero(h)
    # f0 restricted to the basis, precomputed
    f0 = f.f0

    for a in range(n1):
        res = dD(f.f1[a]) - f.F0(g.dmap(A[a]))
        rb.element(DER3_MORPHISM_EQUATIONS[0], (a,), res.vec(), ("a",))

    for i, j in itertools.product(range(n0), repeat=2):
        res = f.F0(g.br00(X[i], X[j])) - br(f0[i], f0[j]) - dD(f.f2_0[i][j])
        rb.element(DER3_MORPHISM_EQUATIONS[1], (i, j), res.vec(), ("x", "y"))

    for i, a in itertools.product(range(n0), range(n1)):
        res = (
            f.F1(g.br01(X[i], A[a]))
            - br(f0[i], f.f1[a])
            - f.F20(X[i], g.dmap(A[a]))
            - dD(DerTwo(f.f2_1[i, a]))
        )
        rb.element(DER3_MORPHISM_EQUATIONS[2], (i, a), res.vec(), ("x", "a"))

    for a, b in itertools.product(range(n1), repeat=2):
        # f2_1(a, db) - f2_1(da, b) with f2_1(a, y) := -f2_1(y, a)
        res = br(f.f1[a], f.f1[b]) + f.F21(g.dmap(A[b]), A[a]) + f.F21(g.dmap(A[a]), A[b])
        rb.element(DER3_MORPHISM_EQUATIONS[3], (a, b), res.vec(), ("a", "b"))

    for i, j, k in itertools.product(range(n0), repeat=3):
        cyc = ((i, j, k), (j, k, i), (k, i, j))
        lhs = _sum((f.F20(g.br00(X[p], X[q]), X[r]) for p, q, r in cyc), z1)
        lhs = lhs + f.F1(g.jac(X[i], X[j], X[k]))
        rhs = _sum((br(f0[p], f.f2_0[q][r]) for p, q, r in cyc), z1)
        rhs = rhs + dD(DerTwo(f.f3[i, j, k]))
        rb.element(DER3_MORPHISM_EQUATIONS[4], (i, j, k), (lhs - rhs).vec(), ("x", "y", "z"))

    for i, j, a in itertools.product(range(n0), range(n0), range(n1)):
        x, y, av = X[i], X[j], A[a]
        lhs = (
            f.F21(g.br00(x, y), av)
            - f.F21(x, g.br01(y, av))  # f2_1([y,a], x)
            - f.F21(y, g.br01(x, av))  # f2_1([a,x], y)
            + DerTwo(g.dmap(av) @ f.f3[i, j])
        )
        rhs = _sum(
            (
                br(f0[i], DerTwo(f.f2_1[j, a])),
                -br(f0[j], DerTwo(f.f2_1[i, a])),  # l2'(f0 y, f2_1(a, x))
                -br(f.f1[a], f.f2_0[i][j]),
            ),
            z2,
        )
        rb.element(DER3_MORPHISM_EQUATIONS[5], (i, j, a), (lhs - rhs).vec(), ("x", "y", "a"))

    for idx in itertools.product(range(n0), repeat=4):
        xs = [X[t] for t in idx]
        lhs = z2
        for p in range(4):
            rest = [idx[t] for t in range(4) if t != p]
            sign = 1 if p % 2 == 0 else -1
            term = f.F21(xs[p], g.jac(*[X[t] for t in rest])) + br(f0[idx[p]], DerTwo(f.f3[tuple(rest)]))
            lhs = lhs + term * sign
        rhs = z2
        for p, r in itertools.combinations(range(4), 2):
            rest = [idx[t] for t in range(4) if t not in (p, r)]
            sign = (-1) ** ((p + 1) + (r + 1) + 1)
            rhs = rhs + f.F3(g.br00(xs[p], xs[r]), X[rest[0]], X[rest[1]]) * sign
        for (p, r), (s, t), sign in (((0, 1), (2, 3), 1), ((0, 2), (1, 3), -1), ((0, 3), (1, 2), 1)):
            rhs = rhs + br(f.f2_0[idx[p]][idx[r]], f.f2_0[idx[s]][idx[t]]) * sign
        rb.element(DER3_MORPHISM_EQUATIONS[6], idx, (lhs - rhs).vec(), ("x", "y", "z", "t"))
    del z0
    return rb.done()


def require_morphism(g: Lie2Algebra, h: Lie2Algebra, f: MorphismToDer3, what: str = "morphism") -> None:
    rep = check_morphism_to_der3(g, h, f)
    if not rep.ok:
        raise PreconditionError(f"{what} is not a morphism into DER(h): {rep.summary()}", rep)


# ---------------------------------------------------------------------------
# equivalence of morphisms
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class EquivalenceWitness:
    """(b0, b1, b2): b0 is h0 x g0, b1 is h1 x g1, ``b2[i, j, :]`` in h1 antisymmetric in (i, j)."""

    b0: np.ndarray
    b1: np.ndarray
    b2: np.ndarray

    def __post_init__(self):
        for name in ("b0", "b1", "b2"):
            object.__setattr__(self, name, normalize(getattr(self, name)))
        bad = antisymmetry_defect(self.b2, 2)
        if bad is not None:
            raise StructureError(f"b2 is not antisymmetric at {bad}")

    @classmethod
    def zero(cls, g: Lie2Algebra, h: Lie2Algebra) -> "EquivalenceWitness":
        return cls(zeros(h.n0, g.n0), zeros(h.n1, g.n1), zeros(g.n0, g.n0, h.n1))

    def check_shape(self, g: Lie2Algebra, h: Lie2Algebra) -> None:
        for name, shape in (("b0", (h.n0, g.n0)), ("b1", (h.n1, g.n1)), ("b2", (g.n0, g.n0, h.n1))):
            if getattr(self, name).shape != shape:
                raise StructureError(f"{name} has shape {getattr(self, name).shape}, expected {shape}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, EquivalenceWitness):
            return NotImplemented
        return all(np.array_equal(getattr(self, n), getattr(other, n)) for n in ("b0", "b1", "b2"))

    __hash__ = None

    def vec(self) -> np.ndarray:
        return normalize(np.concatenate([self.b0.reshape(-1), self.b1.reshape(-1), self.b2.reshape(-1)]))


def _witness_terms(g: Lie2Algebra, h: Lie2Algebra, fp: MorphismToDer3, w: EquivalenceWitness, f2_0p=None):
    """Right-hand sides of the three correction equations, given f' (= fp).

    Returns dicts keyed by basis index tuples: expected values of
    f2_0' - f2_0, f2_1' - f2_1 and f3' - f3.  ``f2_0p`` overrides fp.f2_0
    (used while f' is being constructed).
    """
    n0, n1 = g.n0, g.n1
    br = lambda a, b: der3_bracket(h, a, b)  # noqa: E731
    dD = lambda e: der3_d(h, e)  # noqa: E731
    X = [_e(n0, i) for i in range(n0)]
    A = [_e(n1, a) for a in range(n1)]
    f2_0p = fp.f2_0 if f2_0p is None else f2_0p

    def B0(x):
        return DerOne.of_vector(h, w.b0 @ normalize(x))

    def B1(a):
        return DerTwo(w.b1 @ normalize(a))

    def B2(x, y):
        return DerTwo(np.einsum("i,j,ijk->k", normalize(x), normalize(y), w.b2))

    def F20p(x, y):
        x, y = normalize(x), normalize(y)
        out = DerOne.zero(h)
        for i in range(n0):
            for j in range(n0):
                if x[i] * y[j] != 0:
                    out = out + f2_0p[i][j] * (x[i] * y[j])
        return out

    e3 = {}
    for i, j in itertools.product(range(n0), repeat=2):
        x, y = X[i], X[j]
        e3[(i, j)] = (
            br(fp.f0[i], B0(y))
            - br(fp.f0[j], B0(x))
            - B0(g.br00(x, y))
            + br(dD(B0(x)), B0(y))
            - dD(B2(x, y))
        )
    e4 = {}
    for i, a in itertools.product(range(n0), range(n1)):
        x, av = X[i], A[a]
        e4[(i, a)] = (
            br(fp.f0[i], B1(av))
            + br(fp.f1[a], B0(x))
            - B1(g.br01(x, av))
            + br(dD(B0(x)), B1(av))
            + B2(x, g.dmap(av))
        )
    e5 = {}
    for i, j, k in itertools.product(range(n0), repeat=3):
        out = DerTwo.zero(h)
        for p, r, s in ((i, j, k), (j, k, i), (k, i, j)):
            x, y, z = X[p], X[r], X[s]
            out = out + br(fp.f0[p], B2(y, z)) - B2(g.br00(x, y), z)
        for p, r, s in ((i, j, k), (j, k, i), (k, i, j)):
            x, y, z = X[p], X[r], X[s]
            bx, by, bz = w.b0 @ x, w.b0 @ y, w.b0 @ z
            out = out + br(F20p(x, y), B0(z)) + br(dD(B0(x)), B2(y, z)) + DerTwo(fp.f0[p].l(by, bz))
        out = out - B1(g.jac(X[i], X[j], X[k])) + DerTwo(h.jac(w.b0 @ X[i], w.b0 @ X[j], w.b0 @ X[k]))
        e5[(i, j, k)] = out
    return e3, e4, e5


def check_equivalence_witness(
    g: Lie2Algebra,
    h: Lie2Algebra,
    f: MorphismToDer3,
    fp: MorphismToDer3,
    w: EquivalenceWitness,
    check_preconditions: bool = True,
) -> AxiomReport:
    """Whether w exhibits f' (= fp) as equivalent to f."""
    w.check_shape(g, h)
    f.check_shape(g, h)
    fp.check_shape(g, h)
    rb = ReportBuilder("equivalence witness")
    if check_preconditions:
        for label, m in (("f", f), ("f'", fp)):
            rep = check_morphism_to_der3(g, h, m)
            rb.flag(f"precondition: {label} is a morphism into DER(h)", rep.ok, rep.summary(), kind="precondition")
    n0, n1 = g.n0, g.n1
    dD = lambda e: der3_d(h, e)  # noqa: E731
    for name in EQUIVALENCE_EQUATIONS:
        rb.declare(name)
    for i in range(n0):
        res = f.f0[i] - fp.f0[i] - dD(DerOne.of_vector(h, w.b0[:, i]))
        rb.element(EQUIVALENCE_EQUATIONS[0], (i,), res.vec(), ("x",))
    for a in range(n1):
        da = g.dmap(_e(n1, a))
        res = f.f1[a] - fp.f1[a] - DerOne.of_vector(h, w.b0 @ da) - dD(DerTwo(w.b1[:, a]))
        rb.element(EQUIVALENCE_EQUATIONS[1], (a,), res.vec(), ("a",))
    e3, e4, e5 = _witness_terms(g, h, fp, w)
    for (i, j), rhs in e3.items():
        res = fp.f2_0[i][j] - f.f2_0[i][j] - rhs
        rb.element(EQUIVALENCE_EQUATIONS[2], (i, j), res.vec(), ("x", "y"))
    for (i, a), rhs in e4.items():
        res = DerTwo(fp.f2_1[i, a] - f.f2_1[i, a]) - rhs
        rb.element(EQUIVALENCE_EQUATIONS[3], (i, a), res.vec(), ("x", "a"))
    for (i, j, k), rhs in e5.items():
        res = DerTwo(fp.f3[i, j, k] - f.f3[i, j, k]) - rhs
        rb.element(EQUIVALENCE_EQUATIONS[4], (i, j, k), res.vec(), ("x", "y", "z"))
    return rb.done()


def gauge_transform(g: Lie2Algebra, h: Lie2Algebra, f: MorphismToDer3, w: EquivalenceWitness) -> MorphismToDer3:
    """The unique f' that w makes equivalent to f.

    The equivalence equations determine f' one component at a time:
    f0', then f1', then f2_0' (needs f0'), f2_1' (needs f0', f1') and
    finally f3' (needs f0', f2_0').
    """
    w.check_shape(g, h)
    n0, n1 = g.n0, g.n1
    dD = lambda e: der3_d(h, e)  # noqa: E731
    f0p = [f.f0[i] - dD(DerOne.of_vector(h, w.b0[:, i])) for i in range(n0)]
    f1p = []
    for a in range(n1):
        da = g.dmap(_e(n1, a))
        f1p.append(f.f1[a] - DerOne.of_vector(h, w.b0 @ da) - dD(DerTwo(w.b1[:, a])))
    partial = MorphismToDer3(f0p, f1p, f.f2_0, f.f2_1, f.f3)
    e3, _, _ = _witness_terms(g, h, partial, w)
    f2_0p = [[f.f2_0[i][j] + e3[(i, j)] for j in range(n0)] for i in range(n0)]
    partial = MorphismToDer3(f0p, f1p, f2_0p, f.f2_1, f.f3)
    _, e4, e5 = _witness_terms(g, h, partial, w)
    f2_1p = zeros(n0, n1, h.n1)
    for (i, a), rhs in e4.items():
        f2_1p[i, a] = f.f2_1[i, a] + rhs.a
    f3p = zeros(n0, n0, n0, h.n1)
    for (i, j, k), rhs in e5.items():
        f3p[i, j, k] = f.f3[i, j, k] + rhs.a
    return MorphismToDer3(f0p, f1p, f2_0p, f2_1p, f3p)


def _witness_from_vec(g: Lie2Algebra, h: Lie2Algebra, v) -> EquivalenceWitness:
    v = normalize(v).reshape(-1)
    n_b0, n_b1 = h.n0 * g.n0, h.n1 * g.n1
    b0 = v[:n_b0].reshape(h.n0, g.n0)
    b1 = v[n_b0 : n_b0 + n_b1].reshape(h.n1, g.n1)
    b2 = zeros(g.n0, g.n0, h.n1)
    pos = n_b0 + n_b1
    for i, j in itertools.combinations(range(g.n0), 2):
        for m in range(h.n1):
            b2[i, j, m] = v[pos]
            b2[j, i, m] = -v[pos]
            pos += 1
    return EquivalenceWitness(b0, b1, b2)


def _residual_vector(g, h, f, fp, w) -> np.ndarray:
    rep_parts = []
    n0, n1 = g.n0, g.n1
    dD = lambda e: der3_d(h, e)  # noqa: E731
    for i in range(n0):
        rep_parts.append((f.f0[i] - fp.f0[i] - dD(DerOne.of_vector(h, w.b0[:, i]))).vec())
    for a in range(n1):
        da = g.dmap(_e(n1, a))
        rep_parts.append((f.f1[a] - fp.f1[a] - DerOne.of_vector(h, w.b0 @ da) - dD(DerTwo(w.b1[:, a]))).vec())
    e3, e4, e5 = _witness_terms(g, h, fp, w)
    for (i, j), rhs in e3.items():
        rep_parts.append((fp.f2_0[i][j] - f.f2_0[i][j] - rhs).vec())
    for (i, a), rhs in e4.items():
        rep_parts.append((DerTwo(fp.f2_1[i, a] - f.f2_1[i, a]) - rhs).vec())
    for (i, j, k), rhs in e5.items():
        rep_parts.append((DerTwo(fp.f3[i, j, k] - f.f3[i, j, k]) - rhs).vec())
    if not rep_parts:
        return zeros(0)
    return normalize(np.concatenate(rep_parts))


@dataclass
class SolveCertificate:
    """Ranks of the linear system A b = -c assembled by the restricted solver."""

    unknowns: int
    equations: int
    rank: int
    augmented_rank: int

    @property
    def solvable(self) -> bool:
        return self.rank == self.augmented_rank


def solve_equivalence_restricted(
    g: Lie2Algebra,
    h: Lie2Algebra,
    f: MorphismToDer3,
    fp: MorphismToDer3,
    certificate: Optional[list] = None,
) -> Optional[EquivalenceWitness]:
    """Decide equivalence of f' to f when h is abelian.

    With all brackets and the Jacobiator of h zero, every equation is affine
    in (b0, b1, b2) except the term l_{f0'(x)}(b0 y, b0 z); that term is
    required to vanish, i.e. the lX components of f0' must be zero.
    Returns a witness or None; the rank comparison is appended to
    ``certificate`` when a list is supplied.
    """
    if not h.is_abelian:
        raise UnsupportedCase("restricted equivalence solver needs h with zero brackets and zero l3")
    if any(not is_zero(X.lX) for X in fp.f0):
        raise UnsupportedCase("f0' has nonzero lX components; the witness equations are quadratic in b0")
    f.check_shape(g, h)
    fp.check_shape(g, h)
    nvar = h.n0 * g.n0 + h.n1 * g.n1 + (g.n0 * (g.n0 - 1) // 2) * h.n1
    c = _residual_vector(g, h, f, fp, _witness_from_vec(g, h, zeros(nvar)))
    cols = []
    for j in range(nvar):
        r = _residual_vector(g, h, f, fp, _witness_from_vec(g, h, basis_vector(nvar, j)))
        cols.append(r - c)
    A = normalize(np.stack(cols, axis=1)) if cols else zeros(len(c), 0)
    rk = rank(A)
    aug = np.concatenate([A, (-c).reshape(-1, 1)], axis=1) if len(c) else zeros(0, nvar + 1)
    cert = SolveCertificate(nvar, len(c), rk, rank(aug))
    log.info("restricted equivalence system: %d unknowns, %d equations, rank %d, augmented rank %d",
             cert.unknowns, cert.equations, cert.rank, cert.augmented_rank)
    if certificate is not None:
        certificate.append(cert)
    if not cert.solvable:
        return None
    sol = solve_linear(A, -c)
    if sol is None:
        return None
    return _witness_from_vec(g, h, sol[0])
