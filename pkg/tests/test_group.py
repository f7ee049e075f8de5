import numpy as np
import pytest

from kgc.catalog import builtin_group
from kgc.elements import MatrixElement, PermutationElement
from kgc.errors import (ClosureCapExceeded, EmptyList, MixedElementKinds, MixedParents,
                        NonNormalArguments, NotNormal)
from kgc.group import (FiniteGroup, GroupHom, Subgroup, commutator_subgroup, cyclic_group,
                       derived_subgroup, generate_group, intersect_subgroups, join_subgroups,
                       normal_closure, power_commutator_subgroup, quotient_group, subgroup_generated)

from group_test_data import D4_GENERATORS, Q8_GENERATORS, SIGNATURES


@pytest.fixture
def d4():
    return generate_group(D4_GENERATORS, name="D4")


@pytest.fixture
def q8():
    return generate_group(Q8_GENERATORS, name="Q8")


def test_generate_group(d4, q8):
    assert d4.order == 8
    assert q8.order == 8
    assert d4.identity == 0
    assert len(d4.generators) == 2
    assert d4.concrete[0] == D4_GENERATORS[0].identity()
    # ids follow BFS depth
    assert np.all(np.diff(d4.depth) >= 0)


def test_generate_group_errors():
    with pytest.raises(ClosureCapExceeded):
        generate_group(D4_GENERATORS, cap=4)
    with pytest.raises(MixedElementKinds):
        generate_group([D4_GENERATORS[0], MatrixElement([[1, 1], [0, 1]], 2)])


def test_trivial_group():
    G = generate_group([])
    assert G.order == 1
    assert G.is_abelian()
    assert G.center().is_whole()


@pytest.mark.parametrize("name, order, exponent, abelianization", SIGNATURES)
def test_signature(name, order, exponent, abelianization):
    G = builtin_group(name)
    assert G.signature() == (order, exponent, abelianization)


def test_element_orders(d4, q8):
    assert sorted(d4.element_orders().tolist()) == [1, 2, 2, 2, 2, 2, 4, 4]
    assert sorted(q8.element_orders().tolist()) == [1, 2, 4, 4, 4, 4, 4, 4]


def test_words(d4):
    for g in range(d4.order):
        assert d4.evaluate_word(d4.word(g)) == g
    assert d4.word(0) == ()
    assert sum(layer.size for layer in d4.layers) == d4.order - 1


def test_commutator_convention(d4):
    a = np.arange(d4.order)[:, None]
    b = np.arange(d4.order)[None, :]
    comm = d4.commutator(a, b)
    expected = d4.mult[d4.mult[d4.inv[a], d4.inv[b]], d4.mult[a, b]]
    assert np.array_equal(comm, expected)
    assert np.array_equal(comm == 0, d4.mult == d4.mult.T)
    # g x g^-1
    assert np.array_equal(d4.conjugate(a, b), d4.mult[d4.mult[a, b], d4.inv[a]])


def test_power_map(d4):
    assert np.array_equal(d4.power_map(-1), d4.inv)
    assert not np.any(d4.power_map(4))
    assert np.array_equal(d4.power_map(1), np.arange(8))
    Z6 = cyclic_group(6)
    assert Z6.power(1, 4) == Z6.power(Z6.generators[0], 4)


def test_center_and_derived(d4, q8):
    assert d4.center().order == 2
    assert q8.center().order == 2
    assert derived_subgroup(d4) == d4.center()
    assert derived_subgroup(q8) == q8.center()
    assert derived_subgroup(cyclic_group(5)).is_trivial()


def test_subgroup_init(d4):
    with pytest.raises(ValueError, match="identity"):
        Subgroup(d4, [1, 2])
    with pytest.raises(ValueError, match="Lagrange"):
        Subgroup(d4, [0, 1, 2])
    H = Subgroup(d4, [0, 0])
    assert H.is_trivial()
    assert 0 in H


def test_subgroup_generated(d4):
    s = d4.generators[1]
    H = subgroup_generated(d4, [s])
    assert H.order == 2
    assert not H.is_normal()
    assert normal_closure(d4, [s]).order == 4
    assert H.is_closed()
    assert H.is_subset(d4.whole())


def test_commutator_subgroup(d4):
    s = subgroup_generated(d4, [d4.generators[1]])
    with pytest.raises(NonNormalArguments):
        commutator_subgroup(d4, s, s)
    assert commutator_subgroup(d4, d4.whole(), s) == d4.center()
    assert power_commutator_subgroup(d4, d4.whole(), 2) == d4.center()
    with pytest.raises(NonNormalArguments):
        power_commutator_subgroup(d4, s, 2)


def test_join_and_intersect(d4, q8):
    r = subgroup_generated(d4, [d4.generators[0]])
    s = normal_closure(d4, [d4.generators[1]])
    assert join_subgroups(d4, [r, s]).is_whole()
    assert intersect_subgroups([r, s]) == d4.center()

    with pytest.raises(EmptyList):
        intersect_subgroups([])
    with pytest.raises(MixedParents):
        intersect_subgroups([d4.whole(), q8.whole()])
    with pytest.raises(MixedParents):
        join_subgroups(d4, [q8.whole()])


def test_quotient_group(d4):
    Q, pi = quotient_group(d4, d4.center())
    assert Q.order == 4
    assert Q.is_abelian()
    assert Q.exponent == 2
    assert pi.kernel() == d4.center()
    assert pi.is_surjective()
    # memoized
    again, pi_again = quotient_group(d4, d4.center())
    assert again is Q
    assert pi_again is pi

    with pytest.raises(NotNormal):
        quotient_group(d4, subgroup_generated(d4, [d4.generators[1]]))


def test_as_group(d4):
    r = subgroup_generated(d4, [d4.generators[0]])
    H, inc = r.as_group()
    assert H.order == 4
    assert H.is_abelian()
    assert inc.is_injective()
    assert inc.image_of() == r


def test_from_table():
    mult = (np.arange(4)[:, None] + np.arange(4)[None, :]) % 4
    G, old_ids = FiniteGroup.from_table(mult, [3], name="Z/4")
    assert G.order == 4
    assert old_ids.tolist() == [0, 3, 2, 1]
    with pytest.raises(ValueError, match="reach"):
        FiniteGroup.from_table(mult, [2])


def test_group_hom(d4):
    Z2 = cyclic_group(2)
    Z4 = cyclic_group(4)
    sign = GroupHom.from_generator_images(d4, Z2, [1, 0])
    assert sign.kernel().order == 4
    assert sign.generator_images() == [1, 0]
    assert not sign.is_injective()

    with pytest.raises(ValueError, match="not a homomorphism"):
        GroupHom.from_generator_images(d4, Z4, [1, 0])
    with pytest.raises(ValueError, match="one image per"):
        GroupHom.from_generator_images(d4, Z2, [1])

    ident = GroupHom.identity(d4)
    assert ident.then(sign) == sign
    assert sign.preimage_of(Z2.trivial()) == sign.kernel()


def test_to_json_dict(d4):
    jd = d4.to_json_dict()
    assert jd["name"] == "D4"
    assert jd["order"] == 8
    assert jd["exponent"] == 4
    assert jd["generators"] == [[1, 2, 3, 0], [0, 3, 2, 1]]
    assert jd["hash"] == d4.hash()


def test_hash():
    assert cyclic_group(32).hash() == cyclic_group(32).hash()
    names = ["Z/32", "Ab:16,2", "Ab:8,4", "Ab:4,4,2", "E:2:5", "Free:zassenhaus:2:2:2"]
    hashes = {builtin_group(name).hash() for name in names}
    assert len(hashes) == len(names)
    assert len({builtin_group("D4").hash(), builtin_group("Q8").hash()}) == 2
