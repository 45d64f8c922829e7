"""Degree-0 derivations, the strict Lie 2-algebra Der(g) and the derivation Lie 3-algebra DER(g)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional, Union

import numpy as np

from .exactq import coordinates, is_zero, kernel_basis, normalize, zeros
from .lie2core import Lie2Algebra, Lie3Algebra, check_lie2_axioms
from .report import AxiomReport, PreconditionError, ReportBuilder, StructureError

DERIVATION_CONDITIONS = (
    "chain map: X0 d = d X1",
    "(a) X[x,y] - [Xx,y] - [x,Xy] = d lX(x,y)",
    "(b) X[x,a] - [Xx,a] - [x,Xa] = lX(x,da)",
    "(c) lX / l3 compatibility",
)


class _Linear:
    """Vector-space operations through a fixed tuple of component arrays."""

    _fields: tuple = ()

    def parts(self) -> tuple:
        return tuple(getattr(self, f) for f in self._fields)

    def _build(self, parts):
        return type(self)(*(normalize(p) for p in parts))

    def __add__(self, other):
        if other is None:
            return self
        if type(other) is not type(self):
            return NotImplemented
        return self._build(a + b for a, b in zip(self.parts(), other.parts()))

    __radd__ = __add__

    def __sub__(self, other):
        if other is None:
            return self
        return self + (-other)

    def __neg__(self):
        return self._build(-p for p in self.parts())

    def __mul__(self, c):
        return self._build(p * Fraction(c) for p in self.parts())

    __rmul__ = __mul__

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return all(np.array_equal(a, b) for a, b in zip(self.parts(), other.parts()))

    __hash__ = None

    def vec(self) -> np.ndarray:
        if not self._fields:
            return zeros(0)
        return normalize(np.concatenate([np.asarray(p, dtype=object).reshape(-1) for p in self.parts()]))

    def is_zero(self) -> bool:
        return is_zero(self.vec())


@dataclass(frozen=True, eq=False)
class Derivation0(_Linear):
    """(X0, X1, lX): a chain endomorphism with its antisymmetric correction lX[i, j, a]."""

    X0: np.ndarray
    X1: np.ndarray
    lX: np.ndarray
    _fields = ("X0", "X1", "lX")
    degree = 0

    def __post_init__(self):
        for f in self._fields:
            object.__setattr__(self, f, normalize(getattr(self, f)))

    @classmethod
    def zero(cls, L: Lie2Algebra) -> "Derivation0":
        return cls(zeros(L.n0, L.n0), zeros(L.n1, L.n1), zeros(L.n0, L.n0, L.n1))

    def check_shape(self, L: Lie2Algebra) -> None:
        n0, n1 = L.n0, L.n1
        for name, shape in (("X0", (n0, n0)), ("X1", (n1, n1)), ("lX", (n0, n0, n1))):
            if getattr(self, name).shape != shape:
                raise StructureError(f"{name} has shape {getattr(self, name).shape}, expected {shape}")
        if not is_zero(self.lX + np.transpose(self.lX, (1, 0, 2))):
            raise StructureError("lX is not antisymmetric")

    def l(self, x, y) -> np.ndarray:
        return normalize(np.einsum("i,j,ija->a", normalize(x), normalize(y), self.lX))

    def l_partial(self, x) -> np.ndarray:
        """lX(x, .) as an n1 x n0 matrix."""
        return normalize(np.einsum("i,iya->ay", normalize(x), self.lX))


@dataclass(frozen=True, eq=False)
class Derivation1(_Linear):
    """An element D of Der^1(g) = Hom(g0, g1), stored as an n1 x n0 matrix."""

    D: np.ndarray
    _fields = ("D",)

    def __post_init__(self):
        object.__setattr__(self, "D", normalize(self.D))


@dataclass(frozen=True, eq=False)
class DerOne(_Linear):
    """A degree-1 element (D, x) of DER(g) = Der^1(g) + g0."""

    D: np.ndarray
    x: np.ndarray
    _fields = ("D", "x")
    degree = 1

    def __post_init__(self):
        object.__setattr__(self, "D", normalize(self.D))
        object.__setattr__(self, "x", normalize(self.x).reshape(-1))

    @classmethod
    def zero(cls, L: Lie2Algebra) -> "DerOne":
        return cls(zeros(L.n1, L.n0), zeros(L.n0))

    @classmethod
    def of_vector(cls, L: Lie2Algebra, u) -> "DerOne":
        """Embed u in g0 as (0, u)."""
        return cls(zeros(L.n1, L.n0), u)


@dataclass(frozen=True, eq=False)
class DerTwo(_Linear):
    """A degree-2 element a of DER(g) = g1."""

    a: np.ndarray
    _fields = ("a",)
    degree = 2

    def __post_init__(self):
        object.__setattr__(self, "a", normalize(self.a).reshape(-1))

    @classmethod
    def zero(cls, L: Lie2Algebra) -> "DerTwo":
        return cls(zeros(L.n1))


Der3Element = Union[Derivation0, DerOne, DerTwo]


def _zero_of(L: Lie2Algebra, degree: int):
    return (Derivation0.zero, DerOne.zero, DerTwo.zero)[degree](L)


# ---------------------------------------------------------------------------
# derivation conditions
# ---------------------------------------------------------------------------


def derivation_residuals(L: Lie2Algebra, X0, X1, lX) -> tuple:
    """Residual tensors of the chain condition and of conditions (a), (b), (c).

    Every residual is linear in (X0, X1, lX); (a) is indexed by (x, y),
    (b) by (x, a) and (c) by (x, y, z).
    """
    B, M, T, d = L.b00, L.b01, L.l3, L.d
    ein = np.einsum
    X0, X1, lX = normalize(X0), normalize(X1), normalize(lX)
    chain = normalize(X0 @ d - d @ X1).T  # indexed (a, k)
    cond_a = (
        ein("xym,km->xyk", B, X0)
        - ein("mx,myk->xyk", X0, B)
        - ein("my,xmk->xyk", X0, B)
        - ein("xya,ka->xyk", lX, d)
    )
    cond_b = (
        ein("xab,cb->xac", M, X1)
        - ein("mx,mac->xac", X0, M)
        - ein("ba,xbc->xac", X1, M)
        - ein("ma,xmc->xac", d, lX)
    )
    lhs = (
        ein("yzm,xma->xyza", B, lX)
        + ein("yzb,xba->xyza", lX, M)
        + ein("mx,myza->xyza", X0, T)
        + ein("my,xmza->xyza", X0, T)
        + ein("mz,xyma->xyza", X0, T)
    )
    rhs = (
        ein("xyzb,ab->xyza", T, X1)
        + ein("xym,mza->xyza", B, lX)
        + ein("xzm,yma->xyza", B, lX)
        - ein("xyb,zba->xyza", lX, M)
        + ein("xzb,yba->xyza", lX, M)
    )
    return tuple(normalize(r) for r in (chain, cond_a, cond_b, lhs - rhs))


def derivation_check(L: Lie2Algebra, c: Derivation0) -> AxiomReport:
    """Evaluate the chain condition and conditions (a)-(c) on every basis tuple."""
    c.check_shape(L)
    chain, ra, rb_, rc = derivation_residuals(L, c.X0, c.X1, c.lX)
    rb = ReportBuilder("degree-0 derivation conditions")
    rb.tensor(DERIVATION_CONDITIONS[0], chain, ("a",))
    rb.tensor(DERIVATION_CONDITIONS[1], ra, ("x", "y"))
    rb.tensor(DERIVATION_CONDITIONS[2], rb_, ("x", "a"))
    rb.tensor(DERIVATION_CONDITIONS[3], rc, ("x", "y", "z"))
    return rb.done()


def _require_derivation(L: Lie2Algebra, c: Derivation0, what: str) -> None:
    rep = derivation_check(L, c)
    if not rep.ok:
        raise PreconditionError(f"{what} is not a derivation: {rep.summary()}", rep)


def unknown_count(L: Lie2Algebra) -> int:
    n0, n1 = L.n0, L.n1
    return n0 * n0 + n1 * n1 + (n0 * (n0 - 1) // 2) * n1


def unflatten_derivation(L: Lie2Algebra, v) -> Derivation0:
    """Inverse of :func:`flatten_derivation`: X0 row-major, X1 row-major, lX over pairs i<j."""
    n0, n1 = L.n0, L.n1
    v = normalize(v).reshape(-1)
    X0 = v[: n0 * n0].reshape(n0, n0)
    X1 = v[n0 * n0 : n0 * n0 + n1 * n1].reshape(n1, n1)
    lX = zeros(n0, n0, n1)
    pos = n0 * n0 + n1 * n1
    for i, j in combinations(range(n0), 2):
        for a in range(n1):
            lX[i, j, a] = v[pos]
            lX[j, i, a] = -v[pos]
            pos += 1
    return Derivation0(X0, X1, lX)


def flatten_derivation(L: Lie2Algebra, c: Derivation0) -> np.ndarray:
    n0, n1 = L.n0, L.n1
    tail = [c.lX[i, j, a] for i, j in combinations(range(n0), 2) for a in range(n1)]
    return normalize(np.concatenate([c.X0.reshape(-1), c.X1.reshape(-1), np.array(tail, dtype=object)]))


def derivation_constraints(L: Lie2Algebra) -> np.ndarray:
    """Constraint matrix whose kernel is Der^0(g) in the flattened unknowns."""
    n = unknown_count(L)
    cols = []
    for j in range(n):
        e = zeros(n)
        e[j] = Fraction(1)
        c = unflatten_derivation(L, e)
        res = derivation_residuals(L, c.X0, c.X1, c.lX)
        cols.append(np.concatenate([r.reshape(-1) for r in res]))
    if not cols:
        return zeros(0, 0)
    return normalize(np.stack(cols, axis=1))


def derivation_space(L: Lie2Algebra) -> list[Derivation0]:
    """Normalized basis of Der^0(g)."""
    return [unflatten_derivation(L, v) for v in kernel_basis(derivation_constraints(L))]


def derivation_coordinates(L: Lie2Algebra, basis: list[Derivation0], c: Derivation0) -> Optional[np.ndarray]:
    return coordinates([flatten_derivation(L, b) for b in basis], flatten_derivation(L, c))


# ---------------------------------------------------------------------------
# operations on derivations
# ---------------------------------------------------------------------------


def inner_derivation(L: Lie2Algebra, x) -> Derivation0:
    """(ad_x, l3(x, ., .))."""
    x = normalize(x).reshape(-1)
    return Derivation0(L.ad0(x), L.ad1(x), np.einsum("i,imna->mna", x, L.l3))


def commutator_l(X: Derivation0, Y: Derivation0) -> np.ndarray:
    """l_{[X,Y]_C}(x,y) = lX(Yx,y) + lX(x,Yy) - lY(Xx,y) - lY(x,Xy) + X lY(x,y) - Y lX(x,y)."""
    ein = np.einsum
    return normalize(
        ein("mx,mya->xya", Y.X0, X.lX)
        + ein("my,xma->xya", Y.X0, X.lX)
        - ein("mx,mya->xya", X.X0, Y.lX)
        - ein("my,xma->xya", X.X0, Y.lX)
        + ein("xyb,ab->xya", Y.lX, X.X1)
        - ein("xyb,ab->xya", X.lX, Y.X1)
    )


def der_bracket(L: Lie2Algebra, d1: Derivation0, d2: Derivation0, check: bool = True) -> Derivation0:
    if check:
        _require_derivation(L, d1, "first argument")
        _require_derivation(L, d2, "second argument")
    return Derivation0(
        d1.X0 @ d2.X0 - d2.X0 @ d1.X0,
        d1.X1 @ d2.X1 - d2.X1 @ d1.X1,
        commutator_l(d1, d2),
    )


def commutator_with_hom(X: Derivation0, D) -> np.ndarray:
    """[X, D]_C = X1 D - D X0 for D in Hom(g0, g1)."""
    D = D.D if isinstance(D, Derivation1) else normalize(D)
    return normalize(X.X1 @ D - D @ X.X0)


def delta(L: Lie2Algebra, D) -> tuple:
    """delta(D) = (d D, D d)."""
    D = D.D if isinstance(D, Derivation1) else normalize(D)
    return normalize(L.d @ D), normalize(D @ L.d)


def delta_bar(L: Lie2Algebra, D) -> Derivation0:
    """(delta(D), l_delta(D)) with l_delta(D)(x,y) = D[x,y] - [x,Dy] - [Dx,y]."""
    D = D.D if isinstance(D, Derivation1) else normalize(D)
    ein = np.einsum
    l = ein("xym,am->xya", L.b00, D) - ein("by,xba->xya", D, L.b01) + ein("bx,yba->xya", D, L.b01)
    X0, X1 = delta(L, D)
    return Derivation0(X0, X1, normalize(l))


def ad_of_g1(L: Lie2Algebra, a) -> np.ndarray:
    """ad_a : y -> [a, y] = -l2(y, a), as an n1 x n0 matrix."""
    return normalize(-np.einsum("b,ybc->cy", normalize(a), L.b01))


# ---------------------------------------------------------------------------
# Der(g) and DER(g)
# ---------------------------------------------------------------------------


def degree(e) -> int:
    if isinstance(e, Derivation0):
        return 0
    if isinstance(e, DerOne):
        return 1
    if isinstance(e, DerTwo):
        return 2
    raise TypeError(f"not an element of DER: {type(e).__name__}")


def der3_d(L: Lie2Algebra, e):
    """The differential of DER(g): a -> (ad_a, -d a), (D, x) -> delta_bar(D) + inner(x)."""
    k = degree(e)
    if k == 0:
        raise ValueError("the differential of DER(g) is not defined on degree 0")
    if k == 2:
        return DerOne(ad_of_g1(L, e.a), -L.dmap(e.a))
    return delta_bar(L, e.D) + inner_derivation(L, e.x)


def der3_bracket(L: Lie2Algebra, e1, e2):
    """Graded bracket of DER(g).

    Returns None when the degrees sum above 2 (DER(g) has no such component,
    so the bracket is zero).
    """
    p, r = degree(e1), degree(e2)
    if p + r > 2:
        return None
    if p > r:
        res = der3_bracket(L, e2, e1)
        return res if p * r % 2 else -res
    if (p, r) == (0, 0):
        return der_bracket(L, e1, e2, check=False)
    if (p, r) == (0, 1):
        X, D, x = e1, e2.D, e2.x
        return DerOne(commutator_with_hom(X, D) + X.l_partial(x), X.X0 @ x)
    if (p, r) == (0, 2):
        return DerTwo(e1.X1 @ e2.a)
    # (1, 1): symmetric
    return DerTwo(-(e1.D @ e2.x) - (e2.D @ e1.x))


@dataclass(frozen=True, eq=False)
class Der2Structure:
    """Der(g) as a Lie 2-algebra together with the bases used for its structure constants."""

    algebra: Lie2Algebra
    basis0: list
    basis1: list


def _hom_basis(L: Lie2Algebra) -> list[np.ndarray]:
    out = []
    for i in range(L.n1):
        for j in range(L.n0):
            D = zeros(L.n1, L.n0)
            D[i, j] = Fraction(1)
            out.append(D)
    return out


class _DerCoords:
    def __init__(self, L: Lie2Algebra, basis: list[Derivation0]):
        self.L = L
        self.flat = [flatten_derivation(L, b) for b in basis]
        self.dim = len(basis)

    def __call__(self, c: Derivation0) -> np.ndarray:
        res = coordinates(self.flat, flatten_derivation(self.L, c))
        if res is None:
            raise ArithmeticError("element is not a derivation")
        return res


def build_der2(L: Lie2Algebra, basis0: Optional[list] = None) -> Der2Structure:
    """Structure constants of the strict Lie 2-algebra Der(g)."""
    basis0 = derivation_space(L) if basis0 is None else basis0
    basis1 = _hom_basis(L)
    coords = _DerCoords(L, basis0)
    e0, e1 = len(basis0), len(basis1)
    d = zeros(e0, e1)
    for j, D in enumerate(basis1):
        d[:, j] = coords(delta_bar(L, D))
    b00 = zeros(e0, e0, e0)
    for p in range(e0):
        for r in range(e0):
            b00[p, r] = coords(der_bracket(L, basis0[p], basis0[r], check=False))
    b01 = zeros(e0, e1, e1)
    for p in range(e0):
        for j, D in enumerate(basis1):
            b01[p, j] = commutator_with_hom(basis0[p], D).reshape(-1)
    alg = Lie2Algebra(e0, e1, d, b00, b01, zeros(e0, e0, e0, e1))
    return Der2Structure(alg, basis0, basis1)


@dataclass(frozen=True, eq=False)
class Der3Structure:
    """DER(g) as a strict Lie 3-algebra with its bases.

    Degree 1 coordinates are (D row-major, then x); degree 2 coordinates are g1's.
    """

    algebra: Lie3Algebra
    basis0: list
    basis1: list
    basis2: list

    def coords(self, L: Lie2Algebra, e) -> np.ndarray:
        k = degree(e)
        if k == 0:
            return _DerCoords(L, self.basis0)(e)
        return e.vec()


def build_der3(L: Lie2Algebra, basis0: Optional[list] = None) -> Der3Structure:
    """Structure constants of the derivation Lie 3-algebra DER(g)."""
    basis0 = derivation_space(L) if basis0 is None else basis0
    coords = _DerCoords(L, basis0)
    basis1 = [DerOne(D, zeros(L.n0)) for D in _hom_basis(L)]
    for i in range(L.n0):
        u = zeros(L.n0)
        u[i] = Fraction(1)
        basis1.append(DerOne.of_vector(L, u))
    basis2 = []
    for i in range(L.n1):
        a = zeros(L.n1)
        a[i] = Fraction(1)
        basis2.append(DerTwo(a))
    m0, m1, m2 = len(basis0), len(basis1), len(basis2)
    l1_21 = zeros(m1, m2)
    for j, a in enumerate(basis2):
        l1_21[:, j] = der3_d(L, a).vec()
    l1_10 = zeros(m0, m1)
    for j, e in enumerate(basis1):
        l1_10[:, j] = coords(der3_d(L, e))
    c00 = zeros(m0, m0, m0)
    c01 = zeros(m0, m1, m1)
    c02 = zeros(m0, m2, m2)
    for p, X in enumerate(basis0):
        for r, Y in enumerate(basis0):
            c00[p, r] = coords(der3_bracket(L, X, Y))
        for j, e in enumerate(basis1):
            c01[p, j] = der3_bracket(L, X, e).vec()
        for j, a in enumerate(basis2):
            c02[p, j] = der3_bracket(L, X, a).vec()
    c11 = zeros(m1, m1, m2)
    for i, e in enumerate(basis1):
        for j, f in enumerate(basis1):
            c11[i, j] = der3_bracket(L, e, f).vec()
    alg = Lie3Algebra(m0, m1, m2, l1_21, l1_10, c00, c01, c02, c11)
    return Der3Structure(alg, basis0, basis1, basis2)
