import pytest

from kgc import limits
from kgc.catalog import builtin_group, parse_family
from kgc.errors import BudgetExceeded
from kgc.filtrations import lower_p_central
from kgc.group import GroupHom, cyclic_group, subgroup_generated
from kgc.homsearch import (automorphisms, characters_inflate_bijectively, enumerate_homs, iter_homs, lift_hom,
                           quotient_bundle_check, t_bundle, t_subgroup)
from kgc.limits import Limits
from kgc.unitriangular import build_bar_extension, omega_family


@pytest.mark.parametrize("domain, codomain, count", [
    ("Z/4", "Z/2", 2),
    ("Z/2", "Z/4", 2),
    ("Z/3", "Z/2", 1),
    ("Z/4", "Z/8", 4),
    ("D4", "Z/2", 4),
    ("Q8", "Z/2", 4),
    ("E:2:2", "E:2:2", 16),
])
def test_enumerate_homs(domain, codomain, count):
    homs = enumerate_homs(builtin_group(domain), builtin_group(codomain))
    assert len(homs) == count
    assert homs.explored >= count
    jd = homs.to_json_dict()
    assert jd["count"] == count


def test_enumerate_homs_workers():
    G, U = builtin_group("E:2:2"), builtin_group("D4")
    serial = enumerate_homs(G, U)
    threaded = enumerate_homs(G, U, workers=3)
    assert len(serial) == len(threaded)
    assert set(serial) == set(threaded)


def test_iter_homs_candidates():
    G, U = builtin_group("Z/4"), builtin_group("Z/4")
    homs = list(iter_homs(G, U, candidates=[[1, 3]]))
    assert len(homs) == 2
    assert all(h.is_surjective() for h in homs)


def test_budget_exceeded():
    previous = limits.configure(Limits(budget_prefixes=2))
    try:
        with pytest.raises(BudgetExceeded, match="budget is 2"):
            enumerate_homs(builtin_group("D4"), builtin_group("D4"))
    finally:
        limits.configure(previous)


def test_t_subgroup_is_frattini():
    for name, p in [("D4", 2), ("Q8", 2), ("Heis:3", 3), ("Z/9", 3), ("Meta:3", 3)]:
        G = builtin_group(name)
        assert t_subgroup(G, cyclic_group(p)) == lower_p_central(G, p, 2).term(2)


def test_t_subgroup_trivial_for_faithful_codomain():
    G = builtin_group("D4")
    assert t_subgroup(G, builtin_group("U:2:2")).is_trivial()
    assert t_subgroup(G, cyclic_group(2)).order == 2


def test_t_bundle():
    G = builtin_group("D4")
    bundle = t_bundle(G, omega_family("lower-central", 2, 2))
    bundle.verify()
    assert bundle.T.is_trivial()
    assert bundle.Tbar == G.center()
    assert len(bundle.kernels) == 2
    jd = bundle.to_json_dict()
    assert jd["family"] == "lower-central:2:2"
    assert jd["order_Tbar"] == 2


def test_automorphisms():
    assert len(automorphisms(builtin_group("D4"))) == 8
    assert len(automorphisms(builtin_group("Z/5"))) == 4
    assert len(automorphisms(builtin_group("E:2:2"))) == 6
    assert len(automorphisms(builtin_group("Q8"), limit=3)) == 3


def test_lift_hom():
    ext = build_bar_extension(1, 4)
    for name, lifts in [("Z/2", False), ("Z/4", True), ("Z/8", True)]:
        G = builtin_group(name)
        rhobar = GroupHom.from_generator_images(G, ext.Gbar, [ext.Gbar.generators[0]])
        for method in ("fiber", "enumerate"):
            rho = lift_hom(ext, GroupHom.identity(G), rhobar, method=method)
            assert (rho is not None) == lifts
            if rho is not None:
                assert ext.lam.image[rho.image].tolist() == rhobar.image.tolist()


def test_lift_hom_errors():
    ext = build_bar_extension(1, 4)
    G = builtin_group("Z/4")
    rhobar = GroupHom.from_generator_images(G, ext.Gbar, [ext.Gbar.generators[0]])
    with pytest.raises(ValueError, match="Unknown lift method"):
        lift_hom(ext, GroupHom.identity(G), rhobar, method="guess")
    with pytest.raises(ValueError, match="do not compose"):
        lift_hom(ext, GroupHom.identity(builtin_group("Z/2")), rhobar)


@pytest.mark.parametrize("family", ["lower-central:2:2", "zassenhaus:2:2"])
def test_quotient_bundle_check(family):
    G = builtin_group("D4")
    fam = parse_family(family)
    # T(D4) is trivial and Tbar(D4) is the center
    assert quotient_bundle_check(G, G.center(), fam) == {"T": True, "Tbar": True}
    assert quotient_bundle_check(G, G.trivial(), fam) == {"T": True, "Tbar": True}
    assert quotient_bundle_check(G, G.whole(), fam) == {"T": True, "Tbar": True}


def test_characters_inflate_bijectively():
    G = builtin_group("D4")
    assert characters_inflate_bijectively(G, G.center(), 2)
    assert characters_inflate_bijectively(G, G.trivial(), 2)
    assert not characters_inflate_bijectively(G, G.whole(), 2)
    E = builtin_group("E:2:2")
    assert not characters_inflate_bijectively(E, subgroup_generated(E, [E.generators[0]]), 2)
    Z4 = cyclic_group(4)
    assert characters_inflate_bijectively(Z4, subgroup_generated(Z4, [2]), 2)
