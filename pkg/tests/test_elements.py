import pytest

from kgc.elements import (MatrixElement, PermutationElement, ResidueElement, check_same_kind,
                          elements_from_json_dict)
from kgc.errors import MixedElementKinds

from group_test_data import D4_ROTATION, D4_REFLECTION, PERMUTATION_DOC, MATRIX_DOC, RESIDUE_DOC


def test_permutation_init():
    a = PermutationElement(D4_ROTATION)
    assert a.degree == 4
    assert a.key() == (1, 2, 3, 0)
    assert a.signature() == ("permutation", 4)

    # padded to a larger degree
    b = PermutationElement([1, 0], degree=4)
    assert b.key() == (1, 0, 2, 3)

    with pytest.raises(ValueError, match="bijection"):
        PermutationElement([0, 0, 1])
    with pytest.raises(ValueError, match="Degree smaller"):
        PermutationElement(D4_ROTATION, degree=2)


def test_permutation_compose():
    a = PermutationElement(D4_ROTATION)
    one = a.identity()
    assert a.compose(one) == a
    assert one.compose(a) == a

    power = a
    for _ in range(3):
        power = power.compose(a)
    assert power == one


def test_matrix_init():
    m = MatrixElement([[1, 5], [0, 1]], 3)
    assert m.entries.tolist() == [[1, 2], [0, 1]]
    assert m.dimension == 2
    assert m.is_unitriangular()
    assert m.signature() == ("matrix", 2, 3)

    with pytest.raises(ValueError, match="Invalid modulus"):
        MatrixElement([[1]], 1)
    with pytest.raises(ValueError, match="square"):
        MatrixElement([[1, 0]], 3)


def test_matrix_compose():
    a = MatrixElement([[1, 1], [0, 1]], 4)
    b = a.compose(a).compose(a).compose(a)
    assert b == a.identity()
    assert a.compose(a).entries.tolist() == [[1, 2], [0, 1]]


def test_residue():
    a = ResidueElement(5, 6)
    assert a.value == 5
    assert a.compose(ResidueElement(2, 6)).value == 1
    assert a.identity().value == 0
    with pytest.raises(ValueError, match="Invalid modulus"):
        ResidueElement(1, 0)


def test_check_same_kind():
    check_same_kind([])
    check_same_kind([PermutationElement(D4_ROTATION), PermutationElement(D4_REFLECTION)])

    with pytest.raises(MixedElementKinds):
        check_same_kind([PermutationElement(D4_ROTATION), MatrixElement([[1]], 2)])
    with pytest.raises(MixedElementKinds):
        check_same_kind([MatrixElement([[1]], 2), MatrixElement([[1]], 3)])


def test_elements_from_json_dict():
    gens = elements_from_json_dict(PERMUTATION_DOC)
    assert len(gens) == 2
    assert isinstance(gens[0], PermutationElement)
    assert gens[1].key() == (0, 3, 2, 1)

    gens = elements_from_json_dict(MATRIX_DOC)
    assert all(isinstance(g, MatrixElement) for g in gens)
    assert gens[0].to_json_dict() == [[0, 1], [2, 0]]

    gens = elements_from_json_dict(RESIDUE_DOC)
    assert gens[0].value == 2

    with pytest.raises(ValueError, match="Unknown element kind"):
        elements_from_json_dict({"kind": "quaternion", "generators": []})
