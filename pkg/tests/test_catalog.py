import pytest

from kgc.catalog import (builtin_group, describe_group, group_from_json_dict, group_prime, parse_family,
                         resolve_subgroup, standin_quotients, sweep_catalog, sweep_families)

from group_test_data import MATRIX_DOC, PERMUTATION_DOC, SIGNATURES


@pytest.fixture
def d4():
    return builtin_group("D4")


@pytest.mark.parametrize("name, order, exponent, abelianization", SIGNATURES)
def test_builtin_signatures(name, order, exponent, abelianization):
    assert builtin_group(name).signature() == (order, exponent, abelianization)


def test_builtin_cached():
    assert builtin_group("D4") is builtin_group("D4")
    assert builtin_group("Heis:3") is builtin_group("U:2:3")


@pytest.mark.parametrize("spec, match", [
    ("D5", "Unknown builtin group"),
    ("U:2", "Unknown builtin group"),
    ("Z/x", "Expected integers"),
    ("Meta:2", "odd prime"),
    ("Mp3:2", "odd prime"),
    ("Ab:1,4", "Invalid abelian invariants"),
])
def test_builtin_errors(spec, match):
    with pytest.raises(ValueError, match=match):
        builtin_group(spec)


def test_group_from_json_dict(d4):
    assert group_from_json_dict("D4") is d4
    assert group_from_json_dict({"builtin": "Q8"}) is builtin_group("Q8")
    G = group_from_json_dict(PERMUTATION_DOC)
    assert G.order == 8
    assert G.name == "input"
    assert G.signature() == d4.signature()
    assert group_from_json_dict(MATRIX_DOC).name == "Q8 from a document"


def test_parse_family():
    fam = parse_family("mixed:3")
    assert (fam.label, fam.n, fam.p) == ("mixed", 2, 3)
    assert fam.name == "mixed:3"
    fam = parse_family("lower-central:3:2")
    assert len(fam.extensions) == 3
    assert fam.filtration_kind == "lower-central"
    for spec in ("zassenhaus:1:2", "lower-central:2:4", "mixed", "upper:2:2", "zassenhaus:a:2"):
        with pytest.raises(ValueError, match="Invalid family"):
            parse_family(spec)


def test_resolve_subgroup(d4):
    rotation, reflection = d4.generators
    assert resolve_subgroup(d4, "trivial").order == 1
    assert resolve_subgroup(d4, "whole").order == 8
    assert resolve_subgroup(d4, "center").order == 2
    assert resolve_subgroup(d4, "derived") == d4.center()
    assert resolve_subgroup(d4, "lower-central:2") == d4.center()
    assert resolve_subgroup(d4, "zassenhaus:3").is_trivial()
    assert resolve_subgroup(d4, f"generated:{rotation}").order == 4
    assert resolve_subgroup(d4, f"normal:{reflection}").order == 4
    fam = parse_family("lower-central:2:2")
    assert resolve_subgroup(d4, "T", fam).is_trivial()
    assert resolve_subgroup(d4, "Tbar", fam) == d4.center()


@pytest.mark.parametrize("spec, match", [
    ("T", "needs a family"),
    ("generated:99", "outside"),
    ("normal:x", "Expected integers"),
    ("frattini", "Unknown subgroup spec"),
])
def test_resolve_subgroup_errors(d4, spec, match):
    with pytest.raises(ValueError, match=match):
        resolve_subgroup(d4, spec)


def test_group_prime():
    assert group_prime(builtin_group("Meta:3")) == 3
    with pytest.raises(ValueError, match="not a p-group"):
        group_prime(builtin_group("Z/6"))


def test_sweep_families():
    assert [f.name for f in sweep_families(2)] == ["zassenhaus:2:2", "lower-central:2:2", "zassenhaus:3:2"]
    assert [f.name for f in sweep_families(3)] == ["zassenhaus:2:3", "lower-central:2:3", "mixed:3"]


def test_sweep_catalog():
    groups = sweep_catalog(0)
    assert len(groups) >= 25
    names = [G.name for G in groups]
    assert "Meta:3" in names
    assert names.count("U2(Z/3)") <= 1
    quotients = standin_quotients(0)
    assert quotients
    assert all(Q.order < 2 ** 10 for Q in quotients)


def test_describe_group(d4):
    jd = describe_group(d4)
    assert jd["order"] == 8
    assert not jd["abelian"]
    assert jd["abelianization_order"] == 4
    assert jd["center_order"] == 2
    assert jd["derived_order"] == 2
