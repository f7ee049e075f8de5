from typing import List, Dict, Any, Hashable, Tuple

import numpy as np
from sympy.combinatorics import Permutation

from kgc.errors import MixedElementKinds


class ConcreteElement():
    """A group element in its input representation, before closure builds a table

    Subclasses supply composition, an identity of the same shape, a hashable key
    and a signature. Two elements can live in one group only if their
    signatures match.
    """

    kind = "abstract"

    def compose(self, other: "ConcreteElement") -> "ConcreteElement":
        raise NotImplementedError("Subclasses must implement this method")

    def identity(self) -> "ConcreteElement":
        raise NotImplementedError("Subclasses must implement this method")

    def key(self) -> Hashable:
        raise NotImplementedError("Subclasses must implement this method")

    def signature(self) -> Tuple:
        raise NotImplementedError("Subclasses must implement this method")

    def to_json_dict(self) -> Any:
        raise NotImplementedError("Subclasses must implement this method")

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ConcreteElement) and self.signature() == other.signature() \
            and self.key() == other.key()

    def __hash__(self) -> int:
        return hash((self.signature(), self.key()))


class PermutationElement(ConcreteElement):
    """Permutation of {0..degree-1}; the product a*b applies a first

    ctor params:
    perm: Permutation | List[int] -- sympy permutation or its array form
    degree: int -- size of the moved set, defaults to the permutation size
    """

    kind = "permutation"

    def __init__(self, perm: Permutation | List[int], degree: int | None = None) -> None:
        if not isinstance(perm, Permutation):
            images = list(perm)
            if sorted(images) != list(range(len(images))):
                raise ValueError("Permutation images must be a bijection of 0..d-1")
            perm = Permutation(images)
        if degree is not None:
            if degree < perm.size:
                raise ValueError("Degree smaller than the permutation size")
            perm = Permutation(perm.array_form + list(range(perm.size, degree)))
        self.perm = perm

    @property
    def degree(self) -> int:
        return self.perm.size

    def compose(self, other: "PermutationElement") -> "PermutationElement":
        return PermutationElement(self.perm * other.perm)

    def identity(self) -> "PermutationElement":
        return PermutationElement(list(range(self.degree)))

    def key(self) -> Hashable:
        return tuple(self.perm.array_form)

    def signature(self) -> Tuple:
        return (self.kind, self.degree)

    @classmethod
    def from_json_dict(cls, jd: Any, degree: int) -> "PermutationElement":
        """Either an image list [1, 2, 3, 0] or a cycle dict {"cycles": [[0, 1, 2, 3]]}"""
        if isinstance(jd, dict):
            return cls(Permutation(jd["cycles"], size=degree), degree)
        return cls(list(jd), degree)

    def to_json_dict(self) -> Any:
        return list(self.perm.array_form)


class MatrixElement(ConcreteElement):
    """Square matrix over Z/m, multiplied as a @ b mod m

    ctor params:
    entries: array-like -- the rows
    modulus: int -- m >= 2, entries are reduced mod m
    """

    kind = "matrix"

    def __init__(self, entries: Any, modulus: int) -> None:
        self.modulus = modulus
        self.entries = entries

    @property
    def modulus(self) -> int:
        return self._modulus

    @modulus.setter
    def modulus(self, value: int) -> None:
        if not isinstance(value, (int, np.integer)) or value < 2:
            raise ValueError(f"Invalid modulus {value!r}")
        self._modulus = int(value)

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @entries.setter
    def entries(self, value: Any) -> None:
        arr = np.array(value, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise ValueError("Matrix must be square and non-empty")
        self._entries = arr % self.modulus
        self._key = self._entries.tobytes()

    @property
    def dimension(self) -> int:
        return self.entries.shape[0]

    def is_unitriangular(self) -> bool:
        e = self.entries
        return bool(np.all(np.diag(e) == 1) and not np.any(np.tril(e, -1)))

    def compose(self, other: "MatrixElement") -> "MatrixElement":
        return MatrixElement(self.entries @ other.entries, self.modulus)

    def identity(self) -> "MatrixElement":
        return MatrixElement(np.eye(self.dimension, dtype=np.int64), self.modulus)

    def key(self) -> Hashable:
        return self._key

    def signature(self) -> Tuple:
        return (self.kind, self.dimension, self.modulus)

    @classmethod
    def from_json_dict(cls, jd: Any, modulus: int) -> "MatrixElement":
        return cls(jd, modulus)

    def to_json_dict(self) -> Any:
        return self.entries.tolist()


class ResidueElement(ConcreteElement):
    """Residue class in the additive group Z/m

    ctor params:
    value: int -- any integer, reduced mod m
    modulus: int -- m >= 1
    """

    kind = "residue"

    def __init__(self, value: int, modulus: int) -> None:
        if not isinstance(modulus, (int, np.integer)) or modulus < 1:
            raise ValueError(f"Invalid modulus {modulus!r}")
        self.modulus = int(modulus)
        self.value = int(value) % self.modulus

    def compose(self, other: "ResidueElement") -> "ResidueElement":
        return ResidueElement(self.value + other.value, self.modulus)

    def identity(self) -> "ResidueElement":
        return ResidueElement(0, self.modulus)

    def key(self) -> Hashable:
        return self.value

    def signature(self) -> Tuple:
        return (self.kind, self.modulus)

    @classmethod
    def from_json_dict(cls, jd: Any, modulus: int) -> "ResidueElement":
        return cls(int(jd), modulus)

    def to_json_dict(self) -> Any:
        return self.value


def check_same_kind(gens: List[ConcreteElement]) -> None:
    """MixedElementKinds unless every generator shares the first one's signature"""
    if not gens:
        return
    sig = gens[0].signature()
    for g in gens[1:]:
        if type(g) is not type(gens[0]) or g.signature() != sig:
            raise MixedElementKinds(f"Generator {g.signature()} does not match {sig}")


def elements_from_json_dict(jd: Dict) -> List[ConcreteElement]:
    """Generators of a group-input document.

    Like this:
        {
            "kind": "permutation",
            "degree": 4,
            "generators": [[1, 2, 3, 0], {"cycles": [[1, 3]]}]
        }
    """
    kind = jd["kind"]
    gens = jd.get("generators", [])
    if kind == "permutation":
        degree = int(jd["degree"])
        return [PermutationElement.from_json_dict(g, degree) for g in gens]
    if kind == "matrix":
        return [MatrixElement.from_json_dict(g, int(jd["modulus"])) for g in gens]
    if kind == "residue":
        return [ResidueElement.from_json_dict(g, int(jd["modulus"])) for g in gens]
    raise ValueError(f"Unknown element kind {kind!r}")
