import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import antisymmetrize, random_rational_array
from lie2ext.exactq import identity, is_zero, zeros
from lie2ext.ext import (
    Extension,
    ExtensionIso,
    Splitting,
    canonical_splitting,
    check_extension,
    check_extension_iso,
    direct_product,
    extension_from_morphism,
    induced_data,
    induced_data_check,
    iso_to_witness,
    morphism_from_splitting,
    splitting_difference_witness,
    witness_to_iso,
)
from lie2ext.fixtures import EXTENSION_FIXTURES, extension_fixture
from lie2ext.lie2core import Lie2Algebra, check_lie2_axioms, fixture
from lie2ext.morph import (
    EquivalenceWitness,
    MorphismToDer3,
    check_equivalence_witness,
    check_lie2_morphism,
    check_morphism_to_der3,
    gauge_transform,
)
from lie2ext.report import PreconditionError, StructureError

FIXTURES = {name: extension_fixture(name) for name in EXTENSION_FIXTURES}


def random_shift(E, rng):
    return Splitting.shifted(E, random_rational_array(rng, E.h.n0, E.g.n0), random_rational_array(rng, E.h.n1, E.g.n1))


def random_witness(g, h, rng):
    b2 = antisymmetrize(random_rational_array(rng, g.n0, g.n0, h.n1))
    return EquivalenceWitness(random_rational_array(rng, h.n0, g.n0), random_rational_array(rng, h.n1, g.n1), b2)


@pytest.mark.parametrize("name", EXTENSION_FIXTURES)
def test_fixture_extensions_verify(name):
    fx = FIXTURES[name]
    rep = check_extension(fx.ext)
    assert rep.ok, rep.render()
    fx.other.check(fx.ext)
    assert induced_data_check(fx.ext, fx.other).ok


def test_shape_mismatch_rejected():
    with pytest.raises(StructureError):
        Extension(fixture("AFF1"), fixture("D_ID"), fixture("A_ab(2,1)"))


def test_perturbed_cross_constant_rejected():
    E = FIXTURES["curated_sl2_v"].ext
    G = E.ghat
    # [s(e), u] for the raising operator e and u the first vector of V
    b00 = G.b00.copy()
    b00[1, 3, 3] += 1
    b00[3, 1, 3] -= 1
    bad = Extension(E.g, E.h, G.replace(b00=b00))
    assert not check_extension(bad).ok


def test_projection_must_be_strict():
    E = FIXTURES["semidirect_aff1"].ext
    G = E.ghat
    b00 = G.b00.copy()
    # [e1, u] acquiring a g-component makes the h-block fail to be an ideal
    b00[0, 2, 1] += 1
    b00[2, 0, 1] -= 1
    assert not check_extension(Extension(E.g, E.h, G.replace(b00=b00))).ok


@pytest.mark.parametrize("name", EXTENSION_FIXTURES)
def test_splitting_morphisms_verify(name):
    fx = FIXTURES[name]
    for s in (canonical_splitting(fx.ext), fx.other):
        rep = check_morphism_to_der3(fx.ext.g, fx.ext.h, morphism_from_splitting(fx.ext, s))
        assert rep.ok, rep.render()


def test_splitting_must_be_a_section():
    E = FIXTURES["semidirect_aff1"].ext
    s = canonical_splitting(E)
    bad = Splitting(s.s0 * 2, s.s1)
    with pytest.raises(PreconditionError):
        induced_data(E, bad)


@pytest.mark.parametrize("name", EXTENSION_FIXTURES)
def test_induced_identities(name):
    """mu0(x)phi(a) - phi([x,a]) = omega(x,da) - d nu(x,a), and the cyclic omega identity."""
    fx = FIXTURES[name]
    E = fx.ext
    g, h = E.g, E.h
    for s in (canonical_splitting(E), fx.other):
        D = induced_data(E, s)
        for x, a in itertools.product(range(g.n0), range(g.n1)):
            lhs = D.mu0[x].X0 @ D.phi[:, a] - D.phi @ g.b01[x, a]
            rhs = D.omega[x].T @ g.d[:, a] - h.d @ D.nu[x, a]
            assert is_zero(lhs - rhs), (x, a)
        for x, y, z in itertools.product(range(g.n0), repeat=3):
            lhs = zeros(h.n0)
            for p, q, r in [(x, y, z), (y, z, x), (z, x, y)]:
                lhs = lhs - D.mu0[p].X0 @ D.omega[q, r] - g.b00[q, r] @ D.omega[p]
            rhs = -h.d @ D.theta[x, y, z] + D.phi @ g.l3[x, y, z]
            assert is_zero(lhs - rhs), (x, y, z)


def test_induced_identities_are_not_vacuous():
    E = FIXTURES["curated_sl2_v"].ext
    D = induced_data(E)
    assert not is_zero(np.einsum("ck,xyzk->xyzc", E.h.d, D.theta))
    assert not is_zero(np.einsum("ca,xyza->xyzc", D.phi, E.g.l3))
    assert not is_zero(D.nu) and not is_zero(D.omega)


def test_direct_product_gives_zero_morphism():
    E = direct_product(fixture("SL2_SKEL"), fixture("AFF1"))
    assert morphism_from_splitting(E) == MorphismToDer3.zero(E.g, E.h)


def test_planted_phi_recovered():
    D = induced_data(FIXTURES["planted_phi"].ext)
    assert D.phi.tolist() == [[3]]


def test_nonzero_data_present():
    D = induced_data(FIXTURES["curated_sl2_squared"].ext)
    assert any(not is_zero(m) for row in D.mu2 for m in row)
    assert not is_zero(D.theta)
    assert any(not is_zero(X.lX) for X in D.mu0)


def test_unverified_morphism_refused():
    fx = FIXTURES["curated_sl2_v"]
    f = morphism_from_splitting(fx.ext)
    nu = f.f2_1.copy()
    nu[0, 0, 0] += 1
    with pytest.raises(PreconditionError):
        extension_from_morphism(fx.ext.g, fx.ext.h, MorphismToDer3(f.f0, f.f1, f.f2_0, nu, f.f3))


# ---------------------------------------------------------------------------
# round trips
# ---------------------------------------------------------------------------


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(EXTENSION_FIXTURES), st.integers(0, 10**6))
def test_roundtrip_morphism_extension_morphism(name, seed):
    E = FIXTURES[name].ext
    f = morphism_from_splitting(E, random_shift(E, random.Random(seed)))
    E2 = extension_from_morphism(E.g, E.h, f)
    assert check_extension(E2).ok
    assert morphism_from_splitting(E2) == f


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(EXTENSION_FIXTURES), st.integers(0, 10**6))
def test_two_splittings_are_equivalent(name, seed):
    E = FIXTURES[name].ext
    rng = random.Random(seed)
    s, sp = random_shift(E, rng), random_shift(E, rng)
    w = splitting_difference_witness(E, s, sp)
    rep = check_equivalence_witness(E.g, E.h, morphism_from_splitting(E, s), morphism_from_splitting(E, sp), w)
    assert rep.ok, rep.render()
    # p0 b0 = 0: the difference of two sections lies in h
    assert is_zero((s.s0 - sp.s0)[: E.g.n0])


def test_same_splitting_gives_zero_witness():
    E = FIXTURES["curated_sl2_squared"].ext
    s = FIXTURES["curated_sl2_squared"].other
    assert splitting_difference_witness(E, s, s) == EquivalenceWitness.zero(E.g, E.h)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(EXTENSION_FIXTURES), st.integers(0, 10**6))
def test_witness_iso_witness(name, seed):
    E = FIXTURES[name].ext
    rng = random.Random(seed)
    g, h = E.g, E.h
    f = morphism_from_splitting(E)
    w = random_witness(g, h, rng)
    fp = gauge_transform(g, h, f, w)
    E1, E2, F = witness_to_iso(g, h, f, fp, w)
    rep = check_extension_iso(E1, E2, F)
    assert rep.ok, rep.render()
    assert iso_to_witness(E1, E2, F) == w


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(EXTENSION_FIXTURES), st.integers(0, 10**6))
def test_iso_witness_with_other_splittings(name, seed):
    """Reading an iso through arbitrary splittings gives a witness between their morphisms."""
    E = FIXTURES[name].ext
    rng = random.Random(seed)
    g, h = E.g, E.h
    f = morphism_from_splitting(E)
    w0 = random_witness(g, h, rng)
    E1, E2, F = witness_to_iso(g, h, f, gauge_transform(g, h, f, w0), w0)
    s, sp = random_shift(E1, rng), random_shift(E2, rng)
    w = iso_to_witness(E1, E2, F, s, sp)
    rep = check_equivalence_witness(g, h, morphism_from_splitting(E1, s), morphism_from_splitting(E2, sp), w)
    assert rep.ok, rep.render()


def test_identity_iso_gives_zero_witness():
    E = FIXTURES["curated_sl2_v"].ext
    assert check_extension_iso(E, E, ExtensionIso.identity(E)).ok
    assert iso_to_witness(E, E, ExtensionIso.identity(E)) == EquivalenceWitness.zero(E.g, E.h)


def test_iso_nonzero_on_h_rejected():
    E = FIXTURES["curated_sl2_squared"].ext
    F = ExtensionIso.identity(E)
    F2 = F.F2.copy()
    n = E.g.n0
    F2[n, n + 1, 0] += 1
    F2[n + 1, n, 0] -= 1
    assert not check_extension_iso(E, E, ExtensionIso(F.F0, F.F1, F2)).ok


def test_iso_must_cover_identity():
    E = FIXTURES["semidirect_aff1"].ext
    F0 = identity(E.ghat.n0)
    F0[0, 0] = 2
    rep = check_extension_iso(E, E, ExtensionIso(F0, identity(E.ghat.n1), zeros(E.ghat.n0, E.ghat.n0, E.ghat.n1)))
    assert not rep.ok


def test_mutated_b2_breaks_the_iso():
    fx = FIXTURES["curated_sl2_v"]
    E = fx.ext
    g, h = E.g, E.h
    f = morphism_from_splitting(E)
    fp = morphism_from_splitting(E, fx.other)
    w = splitting_difference_witness(E, canonical_splitting(E), fx.other)
    E1, E2, F = witness_to_iso(g, h, f, fp, w)
    assert check_lie2_morphism(E1.ghat, E2.ghat, F.as_morphism()).ok
    b2 = w.b2.copy()
    b2[0, 1, 0] += 1
    b2[1, 0, 0] -= 1
    bad = EquivalenceWitness(w.b0, w.b1, b2)
    assert not check_equivalence_witness(g, h, f, fp, bad).ok
    _, _, Fbad = witness_to_iso(g, h, f, fp, bad, check=False)
    assert not check_lie2_morphism(E1.ghat, E2.ghat, Fbad.as_morphism()).ok
    with pytest.raises(PreconditionError):
        witness_to_iso(g, h, f, fp, bad)


def test_extension_of_random_gauge_is_a_lie2_algebra():
    E = FIXTURES["sl2_squared"].ext
    rng = random.Random(5)
    f = gauge_transform(E.g, E.h, morphism_from_splitting(E), random_witness(E.g, E.h, rng))
    assert check_lie2_axioms(extension_from_morphism(E.g, E.h, f).ghat).ok
