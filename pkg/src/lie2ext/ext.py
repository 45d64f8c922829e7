"""Non-abelian extensions of Lie 2-algebras in block form on g + h.

Basis ordering everywhere: the g-basis first, then the h-basis, in both
degrees.  A splitting is stored as the matrices s0 (ĝ0 x g0) and s1
(ĝ1 x g1).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .deriv import DerOne, Derivation0, derivation_check
from .exactq import identity, is_zero, normalize, zeros
from .lie2core import Lie2Algebra, check_lie2_axioms
from .morph import (
    EquivalenceWitness,
    Lie2Morphism,
    MorphismToDer3,
    check_equivalence_witness,
    check_lie2_morphism,
    check_morphism_to_der3,
)
from .report import AxiomReport, PreconditionError, ReportBuilder, StructureError


@dataclass(frozen=True, eq=False)
class Extension:
    """h -> ghat -> g with ghat on g0+h0, g1+h1; inclusion and projection are the block maps."""

    g: Lie2Algebra
    h: Lie2Algebra
    ghat: Lie2Algebra

    def __post_init__(self):
        if (self.ghat.n0, self.ghat.n1) != (self.g.n0 + self.h.n0, self.g.n1 + self.h.n1):
            raise StructureError(
                f"ghat has dimensions ({self.ghat.n0}, {self.ghat.n1}); "
                f"blocks need ({self.g.n0 + self.h.n0}, {self.g.n1 + self.h.n1})"
            )

    def inclusion(self) -> Lie2Morphism:
        g, h = self.g, self.h
        i0 = np.concatenate([zeros(g.n0, h.n0), identity(h.n0)], axis=0)
        i1 = np.concatenate([zeros(g.n1, h.n1), identity(h.n1)], axis=0)
        return Lie2Morphism(i0, i1, zeros(h.n0, h.n0, self.ghat.n1))

    def projection(self) -> Lie2Morphism:
        g, h = self.g, self.h
        p0 = np.concatenate([identity(g.n0), zeros(g.n0, h.n0)], axis=1)
        p1 = np.concatenate([identity(g.n1), zeros(g.n1, h.n1)], axis=1)
        return Lie2Morphism(p0, p1, zeros(self.ghat.n0, self.ghat.n0, g.n1))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Extension):
            return NotImplemented
        return self.g == other.g and self.h == other.h and self.ghat == other.ghat

    __hash__ = None


@dataclass(frozen=True, eq=False)
class Splitting:
    s0: np.ndarray
    s1: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "s0", normalize(self.s0))
        object.__setattr__(self, "s1", normalize(self.s1))

    def check(self, E: Extension) -> None:
        g = E.g
        if self.s0.shape != (E.ghat.n0, g.n0) or self.s1.shape != (E.ghat.n1, g.n1):
            raise StructureError("splitting has the wrong shape for this extension")
        if not (np.array_equal(self.s0[: g.n0], identity(g.n0)) and np.array_equal(self.s1[: g.n1], identity(g.n1))):
            raise PreconditionError("splitting is not a section of the projection")

    @classmethod
    def shifted(cls, E: Extension, beta0, beta1) -> "Splitting":
        """x -> x + beta0 x, a -> a + beta1 a with beta0: g0 -> h0, beta1: g1 -> h1."""
        g, h = E.g, E.h
        b0 = normalize(beta0).reshape(h.n0, g.n0)
        b1 = normalize(beta1).reshape(h.n1, g.n1)
        return cls(np.concatenate([identity(g.n0), b0]), np.concatenate([identity(g.n1), b1]))


def canonical_splitting(E: Extension) -> Splitting:
    """The block inclusion g -> g + h."""
    return Splitting.shifted(E, zeros(E.h.n0, E.g.n0), zeros(E.h.n1, E.g.n1))


CANONICAL = "canonical"


def _resolve(E: Extension, s) -> Splitting:
    if s is None or (isinstance(s, str) and s == CANONICAL):
        return canonical_splitting(E)
    s.check(E)
    return s


@dataclass(frozen=True, eq=False)
class InducedData:
    """Maps induced by a splitting; all values live in h.

    phi[:, a]; mu0[i] a derivation of h; mu1[a] and mu2[i][j] are h1 x h0
    matrices; omega[i, j, :], nu[i, a, :], theta[i, j, k, :].
    """

    phi: np.ndarray
    mu0: tuple
    mu1: tuple
    mu2: tuple
    omega: np.ndarray
    nu: np.ndarray
    theta: np.ndarray


@dataclass(frozen=True, eq=False)
class ExtensionIso:
    F0: np.ndarray
    F1: np.ndarray
    F2: np.ndarray

    def __post_init__(self):
        for name in ("F0", "F1", "F2"):
            object.__setattr__(self, name, normalize(getattr(self, name)))

    def as_morphism(self) -> Lie2Morphism:
        return Lie2Morphism(self.F0, self.F1, self.F2)

    @classmethod
    def identity(cls, E: Extension) -> "ExtensionIso":
        n0, n1 = E.ghat.n0, E.ghat.n1
        return cls(identity(n0), identity(n1), zeros(n0, n0, n1))


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------


def check_extension(E: Extension) -> AxiomReport:
    g, h, G = E.g, E.h, E.ghat
    rb = ReportBuilder("extension")
    rep = check_lie2_axioms(G)
    for r in rep.results:
        rb.flag(f"ghat: {r.name}", r.passed, r.where, residual=r.residual)

    inc = check_lie2_morphism(h, G, E.inclusion())
    rb.flag("inclusion is a strict morphism", inc.ok, inc.summary())
    pro = check_lie2_morphism(G, g, E.projection())
    rb.flag("projection is a strict morphism", pro.ok, pro.summary())

    # h is an ideal: brackets with an h-argument have zero g-component
    g0, g1 = g.n0, g.n1
    rb.tensor("h0 is an ideal in ghat0", G.b00[:, g0:, :g0], ("x", "u"))
    rb.tensor("h acts into h1", G.b01[:, g1:, :g1], ("x", "m"))
    rb.tensor("h0 acts into h1", G.b01[g0:, :, :g1], ("u", "a"))
    rb.tensor("d maps h1 into h0", G.d[:g0, g1:].T, ("m",))
    rb.tensor("Jacobiator with an h-argument lies in h1", G.l3[:, :, g0:, :g1], ("x", "y", "u"))
    return rb.done()


def check_extension_iso(E: Extension, Ep: Extension, F: ExtensionIso) -> AxiomReport:
    """F: E -> E' over the identity on g and h, with F2 vanishing on h-arguments."""
    if not (E.g == Ep.g and E.h == Ep.h):
        raise PreconditionError("extensions have different g or h")
    g, h = E.g, E.h
    N0, N1 = E.ghat.n0, E.ghat.n1
    if F.F0.shape != (N0, N0) or F.F1.shape != (N1, N1) or F.F2.shape != (N0, N0, N1):
        raise StructureError("iso components have the wrong shape")
    rb = ReportBuilder("extension isomorphism")
    inc = E.inclusion()
    rb.tensor("F after i equals j (degree 0)", (F.F0 @ inc.f0 - inc.f0).T, ("u",))
    rb.tensor("F after i equals j (degree 1)", (F.F1 @ inc.f1 - inc.f1).T, ("m",))
    pro = E.projection()
    rb.tensor("q after F equals p (degree 0)", (pro.f0 @ F.F0 - pro.f0).T, ("x",))
    rb.tensor("q after F equals p (degree 1)", (pro.f1 @ F.F1 - pro.f1).T, ("a",))
    rb.tensor("F2(i(u), .) = 0", F.F2[g.n0 :], ("u", "y"))
    rep = check_lie2_morphism(E.ghat, Ep.ghat, F.as_morphism())
    for r in rep.results:
        rb.flag(f"morphism: {r.name}", r.passed, r.where, residual=r.residual)
    return rb.done()


# ---------------------------------------------------------------------------
# splitting -> morphism
# ---------------------------------------------------------------------------


def _h_part(vec, n_g: int, what: str) -> np.ndarray:
    vec = normalize(vec)
    if not is_zero(vec[..., :n_g]):
        raise PreconditionError(f"{what} has a nonzero g-component; the h-block is not an ideal")
    return vec[..., n_g:]


def induced_data(E: Extension, s=CANONICAL) -> InducedData:
    s = _resolve(E, s)
    g, h, G = E.g, E.h, E.ghat
    ein = np.einsum
    s0, s1 = s.s0, s.s1
    i0 = E.inclusion().f0
    i1 = E.inclusion().f1
    g0, g1 = g.n0, g.n1

    phi = _h_part((G.d @ s1 - s0 @ g.d).T, g0, "phi").T

    # [s x, u], [s x, m], l3(s x, u, v) restricted to h
    X0 = ein("px,qu,pqk->xku", s0, i0, G.b00)
    X1 = ein("px,bm,pbc->xcm", s0, i1, G.b01)
    lX = ein("px,qu,rv,pqrc->xuvc", s0, i0, i0, G.l3)
    mu0 = []
    for x in range(g0):
        der = Derivation0(
            _h_part(X0[x].T, g0, "[s(x), u]").T,
            _h_part(X1[x].T, g1, "[s(x), m]").T,
            _h_part(lX[x], g1, "l3(s(x), u, v)"),
        )
        mu0.append(der)

    # mu1(a) u = [s a, u] = -[u, s a]
    M1 = -ein("qu,pa,qpc->auc", i0, s1, G.b01)
    mu1 = tuple(_h_part(M1[a], g1, "[s(a), u]").T for a in range(g.n1))
    M2 = ein("px,qy,ru,pqrc->xyuc", s0, s0, i0, G.l3)
    mu2 = tuple(tuple(_h_part(M2[x, y], g1, "l3(s(x), s(y), u)").T for y in range(g0)) for x in range(g0))

    omega = ein("xyk,pk->xyp", g.b00, s0) - ein("px,qy,pqk->xyk", s0, s0, G.b00)
    omega = _h_part(omega, g0, "omega")
    nu = ein("xab,pb->xap", g.b01, s1) - ein("px,qa,pqc->xac", s0, s1, G.b01)
    nu = _h_part(nu, g1, "nu")
    theta = ein("xyza,ca->xyzc", g.l3, s1) - ein("px,qy,rz,pqrc->xyzc", s0, s0, s0, G.l3)
    theta = _h_part(theta, g1, "theta")
    return InducedData(phi, tuple(mu0), mu1, mu2, omega, nu, theta)


def morphism_from_splitting(E: Extension, s=CANONICAL) -> MorphismToDer3:
    """(mu0, (mu1, -phi), (-mu2, omega), nu, theta)."""
    dat = induced_data(E, s)
    g0, g1 = E.g.n0, E.g.n1
    f1 = [DerOne(dat.mu1[a], -dat.phi[:, a]) for a in range(g1)]
    f2_0 = [[DerOne(-dat.mu2[i][j], dat.omega[i, j]) for j in range(g0)] for i in range(g0)]
    return MorphismToDer3(dat.mu0, f1, f2_0, dat.nu, dat.theta)


def splitting_difference_witness(E: Extension, s: Splitting, sp: Splitting) -> EquivalenceWitness:
    """Witness (s0 - s0', s1 - s1', 0) relating the morphisms of s and s'."""
    s, sp = _resolve(E, s), _resolve(E, sp)
    g = E.g
    b0 = normalize(s.s0 - sp.s0)
    b1 = normalize(s.s1 - sp.s1)
    if not (is_zero(b0[: g.n0]) and is_zero(b1[: g.n1])):
        raise PreconditionError("splittings differ outside the h-block")
    return EquivalenceWitness(b0[g.n0 :], b1[g.n1 :], zeros(g.n0, g.n0, E.h.n1))


# ---------------------------------------------------------------------------
# morphism -> extension
# ---------------------------------------------------------------------------


def extension_from_morphism(g: Lie2Algebra, h: Lie2Algebra, f: MorphismToDer3, check: bool = True) -> Extension:
    """Transfer the structure of f to g + h."""
    if check:
        rep = check_morphism_to_der3(g, h, f)
        if not rep.ok:
            raise PreconditionError(f"not a morphism into DER(h): {rep.summary()}", rep)
    f.check_shape(g, h)
    g0, g1, h0, h1 = g.n0, g.n1, h.n0, h.n1
    N0, N1 = g0 + h0, g1 + h1

    phi = zeros(h0, g1)
    for a in range(g1):
        phi[:, a] = -f.f1[a].x
    mu1 = [f.f1[a].D for a in range(g1)]
    mu2 = [[-f.f2_0[i][j].D for j in range(g0)] for i in range(g0)]
    omega = zeros(g0, g0, h0)
    for i, j in itertools.product(range(g0), repeat=2):
        omega[i, j] = f.f2_0[i][j].x
    mu0 = f.f0

    d = zeros(N0, N1)
    d[:g0, :g1] = g.d
    d[g0:, :g1] = phi
    d[g0:, g1:] = h.d

    b00 = zeros(N0, N0, N0)
    b00[:g0, :g0, :g0] = g.b00
    b00[:g0, :g0, g0:] = -omega
    for i in range(g0):
        # [x, u] = mu0(x) u and [u, x] = -mu0(x) u
        b00[i, g0:, g0:] = mu0[i].X0.T
        b00[g0:, i, g0:] = -mu0[i].X0.T
    b00[g0:, g0:, g0:] = h.b00

    b01 = zeros(N0, N1, N1)
    b01[:g0, :g1, :g1] = g.b01
    b01[:g0, :g1, g1:] = -f.f2_1
    for i in range(g0):
        b01[i, g1:, g1:] = mu0[i].X1.T
    for a in range(g1):
        b01[g0:, a, g1:] = -mu1[a].T
    b01[g0:, g1:, g1:] = h.b01

    l3 = zeros(N0, N0, N0, N1)
    l3[:g0, :g0, :g0, :g1] = g.l3
    l3[:g0, :g0, :g0, g1:] = -f.f3
    l3[g0:, g0:, g0:, g1:] = h.l3
    for i, j in itertools.product(range(g0), repeat=2):
        m = mu2[i][j].T  # [u, c]
        l3[i, j, g0:, g1:] = m
        l3[i, g0:, j, g1:] = -m
        l3[g0:, i, j, g1:] = m
    for i in range(g0):
        lx = mu0[i].lX
        l3[i, g0:, g0:, g1:] = lx
        l3[g0:, i, g0:, g1:] = -lx
        l3[g0:, g0:, i, g1:] = lx
    G = Lie2Algebra(N0, N1, d, b00, b01, l3)
    return Extension(g, h, G)


def direct_product(g: Lie2Algebra, h: Lie2Algebra) -> Extension:
    return extension_from_morphism(g, h, MorphismToDer3.zero(g, h), check=False)


# ---------------------------------------------------------------------------
# isomorphisms <-> equivalence witnesses
# ---------------------------------------------------------------------------


def witness_to_iso(g: Lie2Algebra, h: Lie2Algebra, f: MorphismToDer3, fp: MorphismToDer3,
                   w: EquivalenceWitness, check: bool = True):
    """Extensions of f and f' with F(x+u) = x + b0 x + u, F(a+m) = a + b1 a + m, F2 = b2 on g."""
    if check:
        rep = check_equivalence_witness(g, h, f, fp, w)
        if not rep.ok:
            raise PreconditionError(f"witness does not verify: {rep.summary()}", rep)
    w.check_shape(g, h)
    E = extension_from_morphism(g, h, f, check=check)
    Ep = extension_from_morphism(g, h, fp, check=check)
    g0, g1 = g.n0, g.n1
    N0, N1 = E.ghat.n0, E.ghat.n1
    F0 = identity(N0)
    F0[g0:, :g0] = w.b0
    F1 = identity(N1)
    F1[g1:, :g1] = w.b1
    F2 = zeros(N0, N0, N1)
    F2[:g0, :g0, g1:] = w.b2
    return E, Ep, ExtensionIso(F0, F1, F2)


def iso_to_witness(E: Extension, Ep: Extension, F: ExtensionIso, s=CANONICAL, sp=CANONICAL) -> EquivalenceWitness:
    """b0, b1 from F(s(.)) - s'(.), and b2 = F2 on g x g.

    With F(s x) = s' x + b0 x the witness relates the morphism of (E, s)
    to that of (E', s').
    """
    s, sp = _resolve(E, s), _resolve(Ep, sp)
    g, h = E.g, E.h
    g0, g1 = g.n0, g.n1
    b0 = normalize(F.F0 @ s.s0 - sp.s0)
    b1 = normalize(F.F1 @ s.s1 - sp.s1)
    if not (is_zero(b0[:g0]) and is_zero(b1[:g1])):
        raise PreconditionError("F does not cover the identity of g")
    b2 = np.einsum("px,qy,pqc->xyc", s.s0, s.s0, F.F2)[:, :, g1:]
    return EquivalenceWitness(b0[g0:], b1[g1:], b2)


def induced_data_check(E: Extension, s=CANONICAL) -> AxiomReport:
    """Every mu0(x) is a derivation of h."""
    dat = induced_data(E, s)
    rb = ReportBuilder("induced derivations")
    for x, der in enumerate(dat.mu0):
        rep = derivation_check(E.h, der)
        rb.flag("mu0(x) is a derivation", rep.ok, f"(x={x}) {rep.summary()}")
    return rb.done()
