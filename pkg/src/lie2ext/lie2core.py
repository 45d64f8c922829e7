"""Lie 2-algebras and strict Lie 3-algebras given by structure constants.

Tensor conventions (all indices 0-based, last axis is the output):

* ``d[k, a]``           d(a_a) = sum_k d[k, a] x_k
* ``b00[i, j, k]``      [x_i, x_j] = sum_k b00[i, j, k] x_k
* ``b01[i, a, b]``      l2(x_i, a_a) = sum_b b01[i, a, b] a_b;  l2(a, x) := -l2(x, a)
* ``l3[i, j, k, a]``    l3(x_i, x_j, x_k) = sum_a l3[i, j, k, a] a_a
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .exactq import (
    asq,
    coordinates,
    is_zero,
    kernel_basis,
    normalize,
    q,
    zeros,
)
from .report import AxiomReport, PreconditionError, ReportBuilder, StructureError

LIE2_AXIOMS = (
    "chain: d l2(x,a) = l2(x,da)",
    "peiffer: l2(da,b) = l2(a,db)",
    "jacobi: [x,[y,z]] + c.p. = d l3(x,y,z)",
    "mixed jacobi: [x,[y,a]] + c.p. = l3(x,y,da)",
    "jacobiator identity",
)

LIE3_AXIOMS = (
    "(a) l1 l1 = 0",
    "(b) l1 is a graded derivation",
    "(c) graded Jacobi",
)


def _check_shape(name: str, arr: np.ndarray, shape: tuple) -> None:
    if arr.shape != shape:
        raise StructureError(f"{name} has shape {arr.shape}, expected {shape}")


def antisymmetry_defect(t: np.ndarray, nargs: int) -> Optional[tuple]:
    """First index tuple at which t fails total antisymmetry in its first nargs axes."""
    for perm in itertools.permutations(range(nargs)):
        sign = _perm_sign(perm)
        axes = list(perm) + list(range(nargs, t.ndim))
        diff = t - sign * np.transpose(t, axes)
        for idx, v in np.ndenumerate(diff):
            if v != 0:
                return idx
    return None


def _perm_sign(perm) -> int:
    sign = 1
    perm = list(perm)
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def place(t: np.ndarray, positions: tuple) -> np.ndarray:
    """Move the first len(positions) axes of t to the given output positions."""
    k = len(positions)
    order = [positions.index(p) for p in range(k)] + list(range(k, t.ndim))
    return np.transpose(t, order)


@dataclass(frozen=True, eq=False)
class Lie2Algebra:
    """A 2-term L-infinity algebra g1 --d--> g0 with brackets b00, b01 and Jacobiator l3.

    Values may fail the Lie 2-algebra axioms (that is what
    :func:`check_lie2_axioms` is for) but must be shape-consistent with
    antisymmetric b00 and totally antisymmetric l3.
    """

    n0: int
    n1: int
    d: np.ndarray
    b00: np.ndarray
    b01: np.ndarray
    l3: np.ndarray

    def __post_init__(self):
        n0, n1 = self.n0, self.n1
        if n0 < 0 or n1 < 0:
            raise StructureError("dimensions must be non-negative")
        for name, shape in (
            ("d", (n0, n1)),
            ("b00", (n0, n0, n0)),
            ("b01", (n0, n1, n1)),
            ("l3", (n0, n0, n0, n1)),
        ):
            arr = normalize(getattr(self, name))
            if arr.shape != shape and arr.size == 0 and int(np.prod(shape)) == 0:
                arr = zeros(*shape)
            _check_shape(name, arr, shape)
            object.__setattr__(self, name, arr)
        bad = antisymmetry_defect(self.b00, 2)
        if bad is not None:
            raise StructureError(f"b00 is not antisymmetric at index {bad}")
        bad = antisymmetry_defect(self.l3, 3)
        if bad is not None:
            raise StructureError(f"l3 is not totally antisymmetric at index {bad}")

    @classmethod
    def zero(cls, n0: int, n1: int) -> "Lie2Algebra":
        return cls(n0, n1, zeros(n0, n1), zeros(n0, n0, n0), zeros(n0, n1, n1), zeros(n0, n0, n0, n1))

    def replace(self, **changes) -> "Lie2Algebra":
        data = dict(n0=self.n0, n1=self.n1, d=self.d, b00=self.b00, b01=self.b01, l3=self.l3)
        data.update(changes)
        return Lie2Algebra(**data)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Lie2Algebra):
            return NotImplemented
        return (
            (self.n0, self.n1) == (other.n0, other.n1)
            and all(np.array_equal(getattr(self, f), getattr(other, f)) for f in ("d", "b00", "b01", "l3"))
        )

    __hash__ = None

    @property
    def is_strict(self) -> bool:
        return is_zero(self.l3)

    @property
    def is_abelian(self) -> bool:
        return is_zero(self.b00) and is_zero(self.b01) and is_zero(self.l3)

    # evaluation on coordinate vectors
    def dmap(self, a) -> np.ndarray:
        return normalize(self.d @ normalize(a))

    def br00(self, x, y) -> np.ndarray:
        return normalize(np.einsum("i,j,ijk->k", normalize(x), normalize(y), self.b00))

    def br01(self, x, a) -> np.ndarray:
        return normalize(np.einsum("i,j,ijk->k", normalize(x), normalize(a), self.b01))

    def br10(self, a, x) -> np.ndarray:
        return -self.br01(x, a)

    def jac(self, x, y, z) -> np.ndarray:
        return normalize(np.einsum("i,j,k,ijkl->l", normalize(x), normalize(y), normalize(z), self.l3))

    def ad0(self, x) -> np.ndarray:
        """Matrix of y -> [x, y] on g0."""
        return normalize(np.einsum("i,imk->km", normalize(x), self.b00))

    def ad1(self, x) -> np.ndarray:
        """Matrix of a -> l2(x, a) on g1."""
        return normalize(np.einsum("i,ibc->cb", normalize(x), self.b01))


def require_verified(L: Lie2Algebra, what: str = "algebra") -> None:
    rep = check_lie2_axioms(L)
    if not rep.ok:
        raise PreconditionError(f"{what} is not a Lie 2-algebra: {rep.summary()}", rep)


def check_lie2_axioms(L: Lie2Algebra) -> AxiomReport:
    """Evaluate the five Lie 2-algebra identities on every tuple of basis vectors."""
    B, M, T, d = L.b00, L.b01, L.l3, L.d
    rb = ReportBuilder("Lie 2-algebra axioms")
    ein = np.einsum

    chain = ein("iab,kb->iak", M, d) - ein("ma,imk->iak", d, B)
    rb.tensor(LIE2_AXIOMS[0], chain, ("x", "a"))

    peiffer = ein("ma,mbk->abk", d, M) + ein("mb,mak->abk", d, M)
    rb.tensor(LIE2_AXIOMS[1], peiffer, ("a", "b"))

    jac = (
        ein("yzm,xmk->xyzk", B, B)
        + ein("zxm,ymk->xyzk", B, B)
        + ein("xym,zmk->xyzk", B, B)
        - ein("xyza,ka->xyzk", T, d)
    )
    rb.tensor(LIE2_AXIOMS[2], jac, ("x", "y", "z"))

    mixed = (
        ein("yab,xbc->xyac", M, M)
        - ein("xab,ybc->xyac", M, M)
        - ein("xym,mac->xyac", B, M)
        - ein("ma,xymc->xyac", d, T)
    )
    rb.tensor(LIE2_AXIOMS[3], mixed, ("x", "y", "a"))

    rb.tensor(LIE2_AXIOMS[4], jacobiator_residual(L), ("x", "y", "z", "t"))
    return rb.done()


def jacobiator_residual(L: Lie2Algebra) -> np.ndarray:
    """l3(l2(x,y),z,t) + c.p. - (l2(l3(x,y,z),t) + c.p.), the c.p. being the alternating 4-term sums.

    Pair terms carry the sign (-1)^(i+j+1), action terms l2(l3(rest), x_i)
    the sign (-1)^i (positions 1-based), which is the Chevalley-Eilenberg
    cocycle condition for l3.
    """
    n0, n1 = L.n0, L.n1
    pair = np.einsum("abm,mcdk->abcdk", L.b00, L.l3)  # l3([a,b], c, d)
    act = np.einsum("bcda,xak->xbcdk", L.l3, L.b01)  # l2(x, l3(b,c,d))
    res = zeros(n0, n0, n0, n0, n1)
    for i, j in itertools.combinations(range(4), 2):
        rest = tuple(p for p in range(4) if p not in (i, j))
        sign = (-1) ** ((i + 1) + (j + 1) + 1)
        res = res + sign * place(pair, (i, j) + rest)
    for i in range(4):
        rest = tuple(p for p in range(4) if p != i)
        # l2(l3(rest), x_i) = -l2(x_i, l3(rest))
        sign = (-1) ** (i + 1)
        res = res + sign * place(act, (i,) + rest)
    return normalize(res)


# ---------------------------------------------------------------------------
# strict Lie 3-algebras
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GradedElement:
    degree: int
    coords: np.ndarray


@dataclass(frozen=True, eq=False)
class Lie3Algebra:
    """A strict Lie 3-algebra L2 --l1--> L1 --l1--> L0 with graded bracket l2.

    ``c00[i,j,k]``: (0,0)->0;  ``c01[i,a,b]``: (0,1)->1;  ``c02[i,m,n]``: (0,2)->2;
    ``c11[a,b,m]``: (1,1)->2 (symmetric in a, b).
    """

    m0: int
    m1: int
    m2: int
    l1_21: np.ndarray
    l1_10: np.ndarray
    c00: np.ndarray
    c01: np.ndarray
    c02: np.ndarray
    c11: np.ndarray

    def __post_init__(self):
        m0, m1, m2 = self.m0, self.m1, self.m2
        for name, shape in (
            ("l1_21", (m1, m2)),
            ("l1_10", (m0, m1)),
            ("c00", (m0, m0, m0)),
            ("c01", (m0, m1, m1)),
            ("c02", (m0, m2, m2)),
            ("c11", (m1, m1, m2)),
        ):
            arr = normalize(getattr(self, name))
            if arr.shape != shape and arr.size == 0 and int(np.prod(shape)) == 0:
                arr = zeros(*shape)
            _check_shape(name, arr, shape)
            object.__setattr__(self, name, arr)

    def dim(self, degree: int) -> int:
        return (self.m0, self.m1, self.m2)[degree]

    def basis(self, degree: int) -> list[GradedElement]:
        n = self.dim(degree)
        out = []
        for i in range(n):
            v = zeros(n)
            v[i] = Fraction(1)
            out.append(GradedElement(degree, v))
        return out

    def l1(self, e: GradedElement) -> Optional[GradedElement]:
        if e.degree == 0:
            return None
        mat = self.l1_10 if e.degree == 1 else self.l1_21
        return GradedElement(e.degree - 1, normalize(mat @ e.coords))

    def l2(self, a: GradedElement, b: GradedElement) -> Optional[GradedElement]:
        """Graded bracket; None when the target degree exceeds 2."""
        p, r = a.degree, b.degree
        if p + r > 2:
            return None
        if p > r:
            # l2(a, b) = -(-1)^{|a||b|} l2(b, a)
            res = self.l2(b, a)
            sign = -((-1) ** (p * r))
            return GradedElement(res.degree, normalize(sign * res.coords))
        table = {(0, 0): self.c00, (0, 1): self.c01, (0, 2): self.c02, (1, 1): self.c11}
        t = table[(p, r)]
        return GradedElement(p + r, normalize(np.einsum("i,j,ijk->k", a.coords, b.coords, t)))


def _add(*terms) -> Optional[np.ndarray]:
    vecs = [t.coords if isinstance(t, GradedElement) else t for t in terms if t is not None]
    if not vecs:
        return None
    out = vecs[0]
    for v in vecs[1:]:
        out = out + v
    return normalize(out)


def _scaled(sign: int, e: Optional[GradedElement]) -> Optional[GradedElement]:
    if e is None:
        return None
    return GradedElement(e.degree, normalize(sign * e.coords))


def check_lie3_axioms(T: Lie3Algebra) -> AxiomReport:
    """l1^2 = 0, l1 a graded derivation of l2, and graded Jacobi, on basis tuples."""
    rb = ReportBuilder("strict Lie 3-algebra axioms")

    sym = T.c11 - np.transpose(T.c11, (1, 0, 2))
    rb.tensor("graded symmetry: c00 antisymmetric, c11 symmetric", sym, ("a", "b"), kind="structure")
    anti = T.c00 + np.transpose(T.c00, (1, 0, 2))
    rb.tensor("graded symmetry: c00 antisymmetric, c11 symmetric", anti, ("x", "y"), kind="structure")

    sq = normalize(T.l1_10 @ T.l1_21)
    rb.tensor(LIE3_AXIOMS[0], sq.T.reshape(T.m2, T.m0), ("c",))

    for p in range(3):
        for r in range(3):
            target = p + r - 1
            if target < 0 or target > 2:
                continue
            for i, x in enumerate(T.basis(p)):
                for j, y in enumerate(T.basis(r)):
                    br = T.l2(x, y)
                    lhs = T.l1(br) if br is not None else None
                    t1 = T.l2(T.l1(x), y) if T.l1(x) is not None else None
                    t2 = T.l2(x, T.l1(y)) if T.l1(y) is not None else None
                    res = _add(lhs, _scaled(-1, t1), _scaled(-((-1) ** p), t2))
                    if res is None:
                        continue
                    rb.element(LIE3_AXIOMS[1], (p, i, r, j), res, ("deg x", "x", "deg y", "y"))
    rb.declare(LIE3_AXIOMS[1])

    for p, r, s in itertools.product(range(3), repeat=3):
        if p + r + s > 2:
            continue
        for i, x in enumerate(T.basis(p)):
            for j, y in enumerate(T.basis(r)):
                for k, z in enumerate(T.basis(s)):
                    res = _add(
                        _scaled((-1) ** (p * s), _br(T, T.l2(x, y), z)),
                        _scaled((-1) ** (p * r), _br(T, T.l2(y, z), x)),
                        _scaled((-1) ** (r * s), _br(T, T.l2(z, x), y)),
                    )
                    if res is None:
                        continue
                    rb.element(
                        LIE3_AXIOMS[2], (p, i, r, j, s, k), res, ("deg x", "x", "deg y", "y", "deg z", "z")
                    )
    rb.declare(LIE3_AXIOMS[2])
    return rb.done()


def _br(T: Lie3Algebra, a: Optional[GradedElement], b: GradedElement):
    if a is None:
        return None
    return T.l2(a, b)


# ---------------------------------------------------------------------------
# End(V)
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class EndComplex:
    """The strict Lie 2-algebra End(V) in computed bases.

    ``basis0`` holds the (X0, X1) pairs spanning End^0_d(V); ``basis1`` holds
    the elementary n1 x n0 matrices of Hom(V0, V1) in row-major order.
    """

    algebra: Lie2Algebra
    basis0: list
    basis1: list

    def coords0(self, X0, X1) -> np.ndarray:
        c = coordinates([_flat_pair(*b) for b in self.basis0], _flat_pair(X0, X1))
        if c is None:
            raise ValueError("pair is not a chain map")
        return c


def _flat_pair(X0, X1) -> np.ndarray:
    return normalize(np.concatenate([np.asarray(X0, dtype=object).reshape(-1), np.asarray(X1, dtype=object).reshape(-1)]))


def end_complex_lie2(n0: int, n1: int, d) -> EndComplex:
    d = normalize(asq(d, (n0, n1)) if not isinstance(d, np.ndarray) else d).reshape(n0, n1)
    nvar = n0 * n0 + n1 * n1
    # X0 d - d X1 = 0, unknowns X0 (row-major) then X1 (row-major)
    cons = zeros(n0 * n1, nvar)
    for r in range(n0):
        for c in range(n1):
            row = r * n1 + c
            for m in range(n0):
                cons[row, r * n0 + m] += d[m, c]
            for m in range(n1):
                cons[row, n0 * n0 + m * n1 + c] -= d[r, m]
    kb = kernel_basis(cons)
    basis0 = [(v[: n0 * n0].reshape(n0, n0), v[n0 * n0 :].reshape(n1, n1)) for v in kb]
    basis1 = []
    for i in range(n1):
        for j in range(n0):
            D = zeros(n1, n0)
            D[i, j] = Fraction(1)
            basis1.append(D)
    flat0 = [_flat_pair(*b) for b in basis0]
    e0, e1 = len(basis0), len(basis1)

    def c0(X0, X1):
        return coordinates(flat0, _flat_pair(X0, X1))

    b00 = zeros(e0, e0, e0)
    for p, (X0, X1) in enumerate(basis0):
        for r, (Y0, Y1) in enumerate(basis0):
            b00[p, r] = c0(X0 @ Y0 - Y0 @ X0, X1 @ Y1 - Y1 @ X1)
    b01 = zeros(e0, e1, e1)
    for p, (X0, X1) in enumerate(basis0):
        for j, D in enumerate(basis1):
            b01[p, j] = normalize(X1 @ D - D @ X0).reshape(-1)
    dd = zeros(e0, e1)
    for j, D in enumerate(basis1):
        dd[:, j] = c0(d @ D, D @ d)
    alg = Lie2Algebra(e0, e1, dd, b00, b01, zeros(e0, e0, e0, e1))
    return EndComplex(alg, basis0, basis1)


# ---------------------------------------------------------------------------
# fixtures
# ---------------------------------------------------------------------------

FIXTURE_NAMES = ("A_ab(n0,n1)", "AFF1", "SL2_SKEL", "D_ID")


def _antisym2(n: int, m: int, entries) -> np.ndarray:
    t = zeros(n, n, m)
    for i, j, k, v in entries:
        t[i, j, k] = q(v)
        t[j, i, k] = -q(v)
    return t


def fixture(name: str) -> Lie2Algebra:
    """Named test algebras: ``A_ab(n0,n1)``, ``AFF1``, ``SL2_SKEL``, ``D_ID``."""
    key = name.strip()
    m = re.fullmatch(r"(?i)a_ab[(_](\d+)[,_](\d+)\)?", key)
    if m:
        return Lie2Algebra.zero(int(m.group(1)), int(m.group(2)))
    key = key.upper()
    if key == "AFF1":
        # [e1, e2] = e2
        return Lie2Algebra.zero(2, 0).replace(b00=_antisym2(2, 2, [(0, 1, 1, 1)]))
    if key in ("SL2_SKEL", "SL2"):
        return _sl2_skeletal()
    if key == "D_ID":
        return Lie2Algebra.zero(1, 1).replace(d=asq([[1]]))
    raise KeyError(f"unknown fixture {name!r}; known: {', '.join(FIXTURE_NAMES)}")


def _sl2_skeletal() -> Lie2Algebra:
    h, e, f = 0, 1, 2
    b00 = _antisym2(3, 3, [(h, e, e, 2), (h, f, f, -2), (e, f, h, 1)])
    kill = zeros(3, 3)
    kill[h, h] = Fraction(8)
    kill[e, f] = kill[f, e] = Fraction(4)
    l3 = zeros(3, 3, 3, 1)
    for i, j, k in itertools.product(range(3), repeat=3):
        l3[i, j, k, 0] = sum((kill[i, m] * b00[j, k, m] for m in range(3)), Fraction(0))
    return Lie2Algebra(3, 1, zeros(3, 1), b00, zeros(3, 1, 1), l3)
