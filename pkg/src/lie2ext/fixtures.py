"""Constructed extension and morphism fixtures.

Every fixture is built, never searched for: direct products, semidirect
products from strict actions, and non-strict data obtained by re-expressing
a semidirect product in a shifted splitting.
"""

from __future__ import annotations

from dataclasses import dataclass

from .deriv import DerOne, Derivation0
from .exactq import asq, identity, zeros
from .ext import (
    Extension,
    Splitting,
    canonical_splitting,
    direct_product,
    extension_from_morphism,
    morphism_from_splitting,
)
from .lie2core import Lie2Algebra, fixture
from .morph import MorphismToDer3


@dataclass(frozen=True)
class ExtensionFixture:
    """An extension with two valid splittings (the second one non-canonical)."""

    name: str
    ext: Extension
    other: Splitting


def abelian_identity_complex(n: int) -> Lie2Algebra:
    """h1 = h0 = Q^n with d = id and every bracket zero."""
    return Lie2Algebra.zero(n, n).replace(d=identity(n))


def sl2_standard_rep():
    """2x2 matrices of h, e, f acting on Q^2."""
    return [asq([[1, 0], [0, -1]]), asq([[0, 1], [0, 0]]), asq([[0, 0], [1, 0]])]


def aff1_character_morphism(c) -> MorphismToDer3:
    """AFF1 acting on (0 -> Q) through the character e1 -> c, e2 -> 0."""
    g, h = fixture("AFF1"), Lie2Algebra.zero(1, 0)
    f = MorphismToDer3.zero(g, h)
    f0 = [Derivation0(asq([[c]]), zeros(0, 0), zeros(1, 1, 0)), Derivation0.zero(h)]
    return MorphismToDer3(f0, f.f1, f.f2_0, f.f2_1, f.f3)


def sl2_on_identity_complex() -> MorphismToDer3:
    """SL2_SKEL acting on V -id-> V by the standard representation in both degrees."""
    g, h = fixture("SL2_SKEL"), abelian_identity_complex(2)
    f = MorphismToDer3.zero(g, h)
    f0 = [Derivation0(r, r, zeros(2, 2, 2)) for r in sl2_standard_rep()]
    return MorphismToDer3(f0, f.f1, f.f2_0, f.f2_1, f.f3)


def planted_phi_morphism(phi) -> MorphismToDer3:
    """D_ID into (0 -> Q) with f1 = (0, -phi) and everything else zero."""
    g, h = fixture("D_ID"), Lie2Algebra.zero(1, 0)
    f = MorphismToDer3.zero(g, h)
    f1 = [DerOne(zeros(0, 1), asq([-phi]))]
    return MorphismToDer3(f.f0, f1, f.f2_0, f.f2_1, f.f3)


# shifts used for the second splitting of each fixture
_SHIFTS = {
    "direct_product": ([[1, 2, 0], [0, -1, 3]], zeros(0, 1)),
    "semidirect_aff1": ([[1, -2]], zeros(0, 0)),
    "semidirect_sl2_v": ([[1, 0, 2], [-1, 1, 0]], [[1], [2]]),
    "sl2_squared": ([[1, 2, 0], [0, -1, 3], [1, 1, 1]], [[3]]),
}


def _curated(name: str):
    """A non-strict extension: the semidirect product re-expressed in a shifted splitting."""
    base = {"curated_sl2_v": "semidirect_sl2_v", "curated_sl2_squared": "sl2_squared"}[name]
    fx = extension_fixture(base)
    g, h = fx.ext.g, fx.ext.h
    f_shift = morphism_from_splitting(fx.ext, fx.other)
    E = extension_from_morphism(g, h, f_shift)
    b0, b1 = _SHIFTS[base]
    return E, Splitting.shifted(E, -asq(b0) if len(b0) else zeros(h.n0, g.n0), -asq(b1) if len(b1) else zeros(h.n1, g.n1))


EXTENSION_FIXTURES = (
    "direct_product",
    "semidirect_aff1",
    "semidirect_sl2_v",
    "sl2_squared",
    "curated_sl2_v",
    "curated_sl2_squared",
    "planted_phi",
)


def extension_fixture(name: str) -> ExtensionFixture:
    if name == "direct_product":
        E = direct_product(fixture("SL2_SKEL"), fixture("AFF1"))
    elif name == "semidirect_aff1":
        E = extension_from_morphism(fixture("AFF1"), Lie2Algebra.zero(1, 0), aff1_character_morphism(2))
    elif name == "semidirect_sl2_v":
        E = extension_from_morphism(fixture("SL2_SKEL"), abelian_identity_complex(2), sl2_on_identity_complex())
    elif name == "sl2_squared":
        E = direct_product(fixture("SL2_SKEL"), fixture("SL2_SKEL"))
    elif name.startswith("curated_"):
        E, other = _curated(name)
        return ExtensionFixture(name, E, other)
    elif name == "planted_phi":
        E = extension_from_morphism(fixture("D_ID"), Lie2Algebra.zero(1, 0), planted_phi_morphism(3))
        return ExtensionFixture(name, E, Splitting.shifted(E, [[2]], zeros(0, 1)))
    else:
        raise KeyError(f"unknown extension fixture {name!r}; known: {', '.join(EXTENSION_FIXTURES)}")
    b0, b1 = _SHIFTS[name]
    return ExtensionFixture(name, E, Splitting.shifted(E, asq(b0) if len(b0) else zeros(E.h.n0, E.g.n0), b1))


def fixture_morphisms():
    """(name, g, h, f) for every morphism the fixtures provide: canonical and shifted splittings."""
    out = []
    for name in EXTENSION_FIXTURES:
        fx = extension_fixture(name)
        g, h = fx.ext.g, fx.ext.h
        out.append((f"{name}/canonical", g, h, morphism_from_splitting(fx.ext, canonical_splitting(fx.ext))))
        out.append((f"{name}/shifted", g, h, morphism_from_splitting(fx.ext, fx.other)))
    return out
