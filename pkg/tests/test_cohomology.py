import numpy as np
import pytest

from kgc.catalog import builtin_group
from kgc.cohomology import (Cochain1, Cocycle2, all_characters, alternative_section, bockstein,
                            bockstein_cup_dichotomy, character, classifying_cocycle, coboundary_space,
                            conj_invariant_h1, cup, h1, h2_space, inflation, inflation_kernel,
                            liftability_crosscheck, liftability_via_truncation, massey_pullback_set,
                            pullback, transgression, transgression_image)
from kgc.errors import GroupTooLarge, NotACocycle
from kgc.group import GroupHom, cyclic_group, quotient_group
from kgc.homsearch import t_bundle
from kgc.limits import Limits
from kgc import limits
from kgc.unitriangular import build_bar_extension, build_mp3, omega_family

from group_test_data import H2_DIMENSIONS


@pytest.mark.parametrize("name, p, dim", H2_DIMENSIONS)
def test_h2_dimension(name, p, dim):
    space = h2_space(builtin_group(name), p)
    assert space.dimension == dim
    assert len(space.basis) == dim
    jd = space.to_json_dict()
    assert jd["dim_H2"] == dim
    assert jd["dim_Z2"] == dim + jd["dim_B2"]


def test_h2_cap():
    previous = limits.configure(Limits(h2_cap=16))
    try:
        with pytest.raises(GroupTooLarge, match="over the H2 cap"):
            h2_space(cyclic_group(20), 2)
    finally:
        limits.configure(previous)


def test_h1():
    assert len(h1(builtin_group("D4"), 2)) == 2
    assert len(h1(builtin_group("Q8"), 2)) == 2
    assert len(h1(builtin_group("Z/9"), 3)) == 1
    assert h1(builtin_group("Z/3"), 2) == []
    assert len(all_characters(builtin_group("E:2:2"), 2)) == 4


def test_character():
    G = builtin_group("D4")
    chi = character(G, 2, [1, 0])
    assert chi.hom
    assert chi.to_json_dict()["generator_values"] == [1, 0]
    with pytest.raises(ValueError, match="one value per generator"):
        character(G, 2, [1])
    with pytest.raises(ValueError, match="do not define a hom"):
        character(builtin_group("Z/3"), 2, [1])


def test_cochain_errors():
    G = builtin_group("Z/4")
    with pytest.raises(ValueError, match="group order"):
        Cochain1(G, 2, np.zeros(3))
    with pytest.raises(ValueError, match="not a homomorphism"):
        Cochain1(G, 3, np.arange(4), hom=True)


def test_cocycle_verify():
    G = builtin_group("Z/2")
    with pytest.raises(NotACocycle, match="normalized"):
        Cocycle2(G, 2, np.ones((2, 2)))
    f = Cocycle2(G, 2, [[0, 0], [0, 1]])
    assert not f.is_zero()
    assert (f + f).is_zero()


def test_bockstein_and_cup_p2():
    G = builtin_group("E:2:2")
    space = h2_space(G, 2)
    for chi in all_characters(G, 2):
        assert space.same_class(bockstein(chi), cup(chi, chi))
    chi1, chi2 = h1(G, 2)
    assert not space.is_zero(cup(chi1, chi2))


def test_bockstein_detects_lifts():
    # a character lifts to Z/p^2 exactly when its Bockstein vanishes
    chi = h1(builtin_group("Z/4"), 2)[0]
    assert coboundary_space(chi.group, 2).is_coboundary(bockstein(chi))
    chi = h1(builtin_group("Z/2"), 2)[0]
    assert not coboundary_space(chi.group, 2).is_coboundary(bockstein(chi))


def test_coboundary_witness():
    G = builtin_group("D4")
    rng = np.random.default_rng(3)
    values = rng.integers(0, 3, G.order)
    values[0] = 0
    f = Cochain1(G, 3, values).coboundary()
    space = coboundary_space(G, 3)
    e = space.witness(f)
    assert e is not None
    assert np.array_equal(e.coboundary().table, f.table)


def test_coboundary_solve_with_extras():
    G = builtin_group("E:2:2")
    chi1, chi2 = h1(G, 2)
    target = cup(chi1, chi2) + bockstein(chi1)
    x, _ = coboundary_space(G, 2).solve(target, [cup(chi1, chi2), bockstein(chi1), bockstein(chi2)])
    assert x.tolist() == [1, 1, 0]
    assert coboundary_space(G, 2).solve(target) is None
    rel = coboundary_space(G, 2).relations([cup(chi1, chi1), bockstein(chi1)])
    assert rel.tolist() == [[1, 1]]


def test_classifying_cocycle():
    ext = build_bar_extension(2, 2)
    alpha = classifying_cocycle(ext)
    space = h2_space(ext.Gbar, 2)
    assert not space.is_zero(alpha)
    assert space.same_class(alpha, classifying_cocycle(ext, alternative_section(ext)))
    # the extension splits after pulling back to E
    assert coboundary_space(ext.E, 2).is_coboundary(inflation(alpha, ext.lam))


def test_inflation_kernel_equals_transgression_image():
    # exactness of inf/trg for N inside the Frattini subgroup
    G = builtin_group("D4")
    N = G.center()
    Q, pi = quotient_group(G, N)
    space = h2_space(Q, 2)
    kernel = inflation_kernel(space, pi)
    image = transgression_image(G, N, 2)
    assert kernel.shape[0] == 1
    assert image.shape[0] == 1
    assert np.array_equal(kernel, image)


def test_transgression():
    G = builtin_group("D4")
    N = G.center()
    psis = conj_invariant_h1(G, N, 2)
    assert len(psis) == 1
    f = transgression(G, N, psis[0])
    assert f.group.order == 4
    assert h2_space(f.group, 2).same_class(f, transgression(G, N, psis[0], alternative_section=True))


def test_liftability_crosscheck():
    ext = build_bar_extension(2, 2)
    fam = omega_family("zassenhaus", 2, 2)
    report = liftability_crosscheck(ext, ext.lam, GroupHom.identity(ext.Gbar), fam)
    assert report.agree
    assert report.lifts
    assert report.truncation_vanishes
    assert report.to_json_dict()["status"] == "PASS"


def test_massey_pullbacks_equal_cup():
    G = builtin_group("E:2:2")
    fam = omega_family("zassenhaus", 2, 2)
    space = h2_space(G, 2)
    for phi1 in all_characters(G, 2):
        for phi2 in all_characters(G, 2):
            reps = massey_pullback_set(G, [phi1, phi2], fam)
            assert len(reps) == 1
            assert space.same_class(reps[0], cup(phi1, phi2))


def test_massey_errors():
    G = builtin_group("E:2:2")
    chi = h1(G, 2)[0]
    with pytest.raises(ValueError, match="zassenhaus family"):
        massey_pullback_set(G, [chi, chi], omega_family("lower-central", 2, 2))
    with pytest.raises(ValueError, match="Need 2 characters"):
        massey_pullback_set(G, [chi], omega_family("zassenhaus", 2, 2))


@pytest.mark.parametrize("name", ["E:3:2", "Z/9"])
def test_bockstein_cup_dichotomy(name):
    result = bockstein_cup_dichotomy(builtin_group(name), 3)
    assert result["violations"] == 0
    assert result["status"] == "PASS"
    assert result["pairs"] >= 1


def test_bockstein_cup_dichotomy_needs_odd_prime():
    with pytest.raises(ValueError, match="odd prime"):
        bockstein_cup_dichotomy(builtin_group("D4"), 2)


def test_mp3_class():
    ext = build_mp3(3)
    assert not h2_space(ext.Gbar, 3).is_zero(classifying_cocycle(ext))


def test_pullback():
    ext = build_bar_extension(2, 2)
    alpha = classifying_cocycle(ext)
    same = pullback(alpha, GroupHom.identity(ext.Gbar))
    assert np.array_equal(same.table, alpha.table)
    lifted = pullback(alpha, ext.lam)
    assert lifted.group is ext.E
    assert coboundary_space(ext.E, 2).is_coboundary(lifted)
    with pytest.raises(ValueError, match="another group"):
        pullback(alpha, GroupHom.identity(ext.E))


def test_liftability_via_truncation():
    ext = build_bar_extension(2, 2)
    T = t_bundle(ext.E, omega_family("zassenhaus", 2, 2)).T
    assert liftability_via_truncation(ext, ext.lam, GroupHom.identity(ext.Gbar), T)
