"""Finite groups as dense multiplication tables, and the subgroup calculus on them.

Element ids are breadth-first discovery order over the generators, so id 0 is
always the identity and every element carries a shortest-or-tied generator
word. Commutators follow [a, b] = a^-1 b^-1 a b.
"""
import hashlib
import logging
from typing import List, Dict, Any, Tuple, Iterable, Sequence

import numpy as np

from kgc import limits
from kgc.elements import ConcreteElement, ResidueElement, check_same_kind
from kgc.errors import (ClosureCapExceeded, EmptyList, MixedParents, NonNormalArguments,
                        NotNormal)

logger = logging.getLogger(__name__)

ID_DTYPE = np.int32
COMMUTATOR_CONVENTION = "[a,b] = a^-1 b^-1 a b"

_CHECK_CHUNK = 1 << 22  # table entries per vectorized verification step


def _ids(values: Iterable[int] | np.ndarray) -> np.ndarray:
    return np.asarray(list(values) if not isinstance(values, np.ndarray) else values,
                      dtype=np.int64).ravel()


class FiniteGroup:
    """A finite group stored as its full multiplication table

    ctor params:
    mult: np.ndarray -- order x order table of element ids, already in BFS order
    generators: List[int] -- element ids of the generators, in the order words refer to them
    parent: np.ndarray -- BFS parent of every element (parent[0] = 0)
    gen_of: np.ndarray -- generator index with element = parent * generators[gen_of]
    depth: np.ndarray -- BFS depth, i.e. word length
    name: str -- label used in reports
    concrete: List[ConcreteElement] -- input representation per id, if the group came from closure
    check: str -- "full" verifies associativity as well, "basic" only identity and inverses
    """

    def __init__(self, mult: np.ndarray, generators: List[int], parent: np.ndarray,
                 gen_of: np.ndarray, depth: np.ndarray, name: str = "",
                 concrete: List[ConcreteElement] | None = None, check: str = "full") -> None:
        self.mult = np.ascontiguousarray(mult, dtype=ID_DTYPE)
        self.order = self.mult.shape[0]
        # each row is a permutation of the ids, so its minimum 0 sits at the inverse
        self.inv = np.argmin(self.mult, axis=1).astype(ID_DTYPE)
        self.generators = [int(g) for g in generators]
        self.parent = np.asarray(parent, dtype=np.int64)
        self.gen_of = np.asarray(gen_of, dtype=np.int64)
        self.depth = np.asarray(depth, dtype=np.int64)
        self.name = name
        self.concrete = concrete
        self.cache: Dict[Any, Any] = {}
        self._words: List[Tuple[int, ...]] | None = None
        self._orders: np.ndarray | None = None
        self._layers: List[np.ndarray] | None = None
        self.verify(full=(check == "full"))

    @property
    def identity(self) -> int:
        return 0

    def verify(self, full: bool = True) -> None:
        """ValueError on a broken identity, inverse or (if full) associativity law"""
        n = self.order
        ar = np.arange(n)
        if not (np.array_equal(self.mult[0], ar) and np.array_equal(self.mult[:, 0], ar)):
            raise ValueError(f"Identity law fails in {self.name}")
        if np.any(self.mult[ar, self.inv] != 0):
            raise ValueError(f"Inverse law fails in {self.name}")
        if not full:
            return
        lim = limits.current()
        if n <= lim.assoc_full_limit:
            step = max(1, _CHECK_CHUNK // (n * n))
            for lo in range(0, n, step):
                rows = ar[lo:lo + step]
                left = self.mult[self.mult[rows]]
                right = self.mult[rows[:, None, None], self.mult[None, :, :]]
                if not np.array_equal(left, right):
                    raise ValueError(f"Associativity fails in {self.name}")
        else:
            rng = np.random.default_rng(lim.seed)
            total = lim.assoc_sample_factor * n * n
            logger.info("sampling %d associativity triples for %s", total, self.name)
            while total > 0:
                size = min(total, _CHECK_CHUNK)
                a, b, c = rng.integers(0, n, (3, size))
                if np.any(self.mult[self.mult[a, b], c] != self.mult[a, self.mult[b, c]]):
                    raise ValueError(f"Associativity fails in {self.name}")
                total -= size

    # words and layers
    def word(self, g: int) -> Tuple[int, ...]:
        return self.words[g]

    @property
    def words(self) -> List[Tuple[int, ...]]:
        if self._words is None:
            words: List[Tuple[int, ...]] = [()] * self.order
            for g in range(1, self.order):
                words[g] = words[self.parent[g]] + (int(self.gen_of[g]),)
            self._words = words
        return self._words

    @property
    def layers(self) -> List[np.ndarray]:
        """Element ids grouped by BFS depth, depth 1 upwards"""
        if self._layers is None:
            top = int(self.depth.max()) if self.order > 1 else 0
            self._layers = [np.nonzero(self.depth == d)[0] for d in range(1, top + 1)]
        return self._layers

    def evaluate_word(self, word: Sequence[int]) -> int:
        g = 0
        for j in word:
            g = int(self.mult[g, self.generators[j]])
        return g

    # arithmetic
    def mul(self, a: int, b: int) -> int:
        return int(self.mult[a, b])

    def commutator(self, a: Any, b: Any) -> Any:
        """[a,b] = a^-1 b^-1 a b, elementwise on arrays"""
        return self.mult[self.mult[self.inv[a], self.inv[b]], self.mult[a, b]]

    def conjugate(self, g: Any, x: Any) -> Any:
        """g x g^-1, elementwise on arrays"""
        return self.mult[self.mult[g, x], self.inv[g]]

    def power_map(self, k: int) -> np.ndarray:
        """g -> g^k for every element at once"""
        result = np.zeros(self.order, dtype=np.int64)
        base = np.arange(self.order)
        k = int(k)
        if k < 0:
            base = self.inv.astype(np.int64)
            k = -k
        while k:
            if k & 1:
                result = self.mult[result, base]
            base = self.mult[base, base]
            k >>= 1
        return result

    def power(self, g: int, k: int) -> int:
        return int(self.power_map(k)[g])

    def element_orders(self) -> np.ndarray:
        if self._orders is None:
            ar = np.arange(self.order)
            orders = np.zeros(self.order, dtype=np.int64)
            orders[0] = 1
            cur = ar.copy()
            k = 1
            while np.any(orders == 0):
                cur = self.mult[cur, ar]
                k += 1
                orders[(cur == 0) & (orders == 0)] = k
            self._orders = orders
        return self._orders

    @property
    def exponent(self) -> int:
        return int(np.lcm.reduce(self.element_orders()))

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mult, self.mult.T))

    def is_p_group(self, p: int) -> bool:
        n = self.order
        while n % p == 0:
            n //= p
        return n == 1

    # standard subgroups
    def whole(self) -> "Subgroup":
        return Subgroup(self, np.arange(self.order), generators=self.generators)

    def trivial(self) -> "Subgroup":
        return Subgroup(self, [0], generators=[])

    def center(self) -> "Subgroup":
        gens = _ids(self.generators)
        if gens.size == 0:
            return self.whole()
        commuting = np.all(self.mult[:, gens] == self.mult[gens, :].T, axis=1)
        return Subgroup(self, np.nonzero(commuting)[0])

    def hash(self) -> str:
        h = hashlib.sha256()
        h.update(str(self.order).encode())
        gens = _ids(self.generators)
        h.update(gens.astype(np.int32).tobytes())
        # the generator columns fix the whole table
        h.update(np.ascontiguousarray(self.mult[:, gens]).astype(np.int32).tobytes())
        return h.hexdigest()[:16]

    def signature(self) -> Tuple[int, int, int]:
        """(order, exponent, abelianization order), compared across isomorphic builds"""
        derived = commutator_subgroup(self, self.whole(), self.whole())
        return (self.order, self.exponent, self.order // derived.order)

    def find(self, element: ConcreteElement) -> int:
        """Id of a concrete element of a closure-built group"""
        if self.concrete is None:
            raise ValueError(f"{self.name} has no concrete elements")
        if "index" not in self.cache:
            self.cache["index"] = {e.key(): i for i, e in enumerate(self.concrete)}
        try:
            return self.cache["index"][element.key()]
        except KeyError:
            raise ValueError(f"Element is not in {self.name}") from None

    def describe(self, g: int) -> Any:
        if self.concrete is not None:
            return self.concrete[g].to_json_dict()
        return list(self.word(g))

    def to_json_dict(self) -> Dict:
        return {
            "name": self.name,
            "order": self.order,
            "exponent": self.exponent,
            "generators": [self.describe(g) for g in self.generators],
            "hash": self.hash()
        }

    @classmethod
    def from_table(cls, mult: np.ndarray, generators: Sequence[int], name: str = "",
                   check: str = "basic") -> Tuple["FiniteGroup", np.ndarray]:
        """Re-index an abstract table whose identity is id 0 into BFS order over generators.

        returns (group, old_ids) where old_ids[new_id] is the id in the input table.
        """
        mult = np.asarray(mult)
        n = mult.shape[0]
        gens = _ids(generators)
        old_ids, parents, gen_idx, depths = bfs_order(mult, gens)
        if old_ids.size != n:
            raise ValueError(f"Generators reach {old_ids.size} of {n} elements")
        old_to_new = np.empty(n, dtype=np.int64)
        old_to_new[old_ids] = np.arange(n)
        new_mult = old_to_new[mult[np.ix_(old_ids, old_ids)]]
        group = cls(new_mult, list(old_to_new[gens]), old_to_new[parents], gen_idx, depths,
                    name=name, check=check)
        return group, old_ids


def bfs_order(mult: np.ndarray, gens: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Right-multiplication BFS from id 0 over a table.

    returns (ids, parent, gen, depth) per reached element in discovery order, where
    ids[i] = parent[i] * gens[gen[i]] as table ids.
    """
    seen = np.zeros(mult.shape[0], dtype=bool)
    seen[0] = True
    order_ids = [np.zeros(1, dtype=np.int64)]
    parents = [np.zeros(1, dtype=np.int64)]
    gen_idx = [np.zeros(1, dtype=np.int64)]
    depths = [np.zeros(1, dtype=np.int64)]
    frontier = order_ids[0]
    d = 0
    while frontier.size and gens.size:
        d += 1
        step = mult[np.ix_(frontier, gens)].ravel()
        fresh = ~seen[step]
        cand = step[fresh]
        pos = np.nonzero(fresh)[0]
        _, first = np.unique(cand, return_index=True)
        first = np.sort(first)
        new = cand[first].astype(np.int64)
        seen[new] = True
        order_ids.append(new)
        parents.append(frontier[pos[first] // gens.size])
        gen_idx.append(pos[first] % gens.size)
        depths.append(np.full(new.size, d, dtype=np.int64))
        frontier = new
    return (np.concatenate(order_ids), np.concatenate(parents), np.concatenate(gen_idx),
            np.concatenate(depths))


class Subgroup:
    """Sorted set of element ids of a parent group, closed under products and inverses

    ctor params:
    parent: FiniteGroup -- the ambient group
    members: Iterable[int] -- element ids; duplicates are dropped
    generators: List[int] -- a generating set, if the caller already knows one
    """

    def __init__(self, parent: FiniteGroup, members: Iterable[int] | np.ndarray,
                 generators: List[int] | None = None) -> None:
        self.parent = parent
        self.members = np.unique(_ids(members))
        if self.members.size == 0 or self.members[0] != 0:
            raise ValueError("Subgroup must contain the identity")
        if self.members[-1] >= parent.order:
            raise ValueError("Subgroup member outside the parent group")
        if parent.order % self.members.size:
            raise ValueError(f"Subgroup of order {self.members.size} breaks Lagrange in {parent.name}")
        self._generators = None if generators is None else [int(g) for g in generators]
        self._mask: np.ndarray | None = None

    @property
    def order(self) -> int:
        return int(self.members.size)

    @property
    def index(self) -> int:
        return self.parent.order // self.order

    @property
    def mask(self) -> np.ndarray:
        if self._mask is None:
            self._mask = np.zeros(self.parent.order, dtype=bool)
            self._mask[self.members] = True
        return self._mask

    @property
    def key(self) -> bytes:
        return self.members.tobytes()

    @property
    def generators(self) -> List[int]:
        """Greedy generating set, members scanned in id order"""
        if self._generators is None:
            self._generators = subgroup_generated(self.parent, self.members).generators
        return self._generators

    def __contains__(self, g: int) -> bool:
        return bool(self.mask[g])

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Subgroup) and other.parent is self.parent \
            and np.array_equal(self.members, other.members)

    def __hash__(self) -> int:
        return hash((id(self.parent), self.key))

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order}, parent={self.parent.name!r})"

    def is_trivial(self) -> bool:
        return self.order == 1

    def is_whole(self) -> bool:
        return self.order == self.parent.order

    def is_subset(self, other: "Subgroup") -> bool:
        return bool(np.all(other.mask[self.members]))

    def is_closed(self) -> bool:
        G = self.parent
        return bool(np.all(self.mask[G.inv[self.members]])) and \
            bool(np.all(self.mask[G.mult[np.ix_(self.members, self.members)]]))

    def is_normal(self) -> bool:
        G = self.parent
        gens = _ids(G.generators)
        if gens.size == 0:
            return True
        conj = G.conjugate(gens[:, None], self.members[None, :])
        return bool(np.all(self.mask[conj]))

    def as_group(self) -> Tuple[FiniteGroup, "GroupHom"]:
        """This subgroup as a group of its own, with the inclusion into the parent"""
        G = self.parent
        key = ("as_group", self.key)
        if key not in G.cache:
            pos = np.full(G.order, -1, dtype=np.int64)
            pos[self.members] = np.arange(self.order)
            table = pos[G.mult[np.ix_(self.members, self.members)]]
            H, old_ids = FiniteGroup.from_table(table, pos[_ids(self.generators)],
                                                name=f"{G.name}>{self.order}")
            G.cache[key] = (H, GroupHom(H, G, self.members[old_ids], check=False))
        return G.cache[key]

    def to_json_dict(self) -> Dict:
        G = self.parent
        return {
            "order": self.order,
            "generators": [G.describe(g) for g in self.generators]
        }


def _is_multiplicative(domain: FiniteGroup, codomain: FiniteGroup, image: np.ndarray) -> bool:
    if image[0] != 0:
        return False
    n = domain.order
    step = max(1, _CHECK_CHUNK // max(n, 1))
    for lo in range(0, n, step):
        rows = slice(lo, lo + step)
        lhs = image[domain.mult[rows]]
        rhs = codomain.mult[image[rows, None], image[None, :]]
        if not np.array_equal(lhs, rhs):
            return False
    return True


class GroupHom:
    """A homomorphism stored as the image of every domain element

    ctor params:
    domain: FiniteGroup
    codomain: FiniteGroup
    image: np.ndarray -- codomain id per domain id
    check: bool -- verify image[1] = 1 and multiplicativity on all pairs
    """

    def __init__(self, domain: FiniteGroup, codomain: FiniteGroup, image: np.ndarray,
                 check: bool = True) -> None:
        self.domain = domain
        self.codomain = codomain
        self.image = np.asarray(image, dtype=np.int64)
        if self.image.shape != (domain.order,):
            raise ValueError("Image array does not match the domain order")
        if check and not _is_multiplicative(domain, codomain, self.image):
            raise ValueError(f"Map {domain.name} -> {codomain.name} is not a homomorphism")

    @classmethod
    def from_generator_images(cls, domain: FiniteGroup, codomain: FiniteGroup,
                              images: Sequence[int], check: bool = True) -> "GroupHom":
        """Extend generator images along the BFS words of the domain"""
        images = _ids(images)
        if images.size != len(domain.generators):
            raise ValueError("Need one image per domain generator")
        image = np.zeros(domain.order, dtype=np.int64)
        for layer in domain.layers:
            image[layer] = codomain.mult[image[domain.parent[layer]], images[domain.gen_of[layer]]]
        return cls(domain, codomain, image, check=check)

    @classmethod
    def identity(cls, G: FiniteGroup) -> "GroupHom":
        return cls(G, G, np.arange(G.order), check=False)

    @classmethod
    def trivial(cls, domain: FiniteGroup, codomain: FiniteGroup) -> "GroupHom":
        return cls(domain, codomain, np.zeros(domain.order, dtype=np.int64), check=False)

    def __call__(self, g: int) -> int:
        return int(self.image[g])

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GroupHom) and other.domain is self.domain \
            and other.codomain is self.codomain and np.array_equal(self.image, other.image)

    def __hash__(self) -> int:
        return hash((id(self.domain), id(self.codomain), self.image.tobytes()))

    def generator_images(self) -> List[int]:
        return [int(self.image[g]) for g in self.domain.generators]

    def kernel(self) -> Subgroup:
        return Subgroup(self.domain, np.nonzero(self.image == 0)[0])

    def image_of(self, sub: Subgroup | None = None) -> Subgroup:
        members = self.image if sub is None else self.image[sub.members]
        return Subgroup(self.codomain, members)

    def preimage_of(self, sub: Subgroup) -> Subgroup:
        return Subgroup(self.domain, np.nonzero(sub.mask[self.image])[0])

    def then(self, other: "GroupHom") -> "GroupHom":
        """self followed by other"""
        if other.domain is not self.codomain:
            raise ValueError("Composition needs matching codomain and domain")
        return GroupHom(self.domain, other.codomain, other.image[self.image], check=False)

    def is_injective(self) -> bool:
        return int(np.count_nonzero(self.image == 0)) == 1

    def is_surjective(self) -> bool:
        return np.unique(self.image).size == self.codomain.order

    def to_json_dict(self) -> Dict:
        return {
            "domain": self.domain.name,
            "codomain": self.codomain.name,
            "generator_images": [self.codomain.describe(g) for g in self.generator_images()]
        }


def generate_group(gens: List[ConcreteElement], name: str = "", cap: int | None = None) -> FiniteGroup:
    """Breadth-first closure of concrete generators into a table group"""
    check_same_kind(gens)
    cap = limits.current().cap_order if cap is None else cap
    if not gens:
        return FiniteGroup(np.zeros((1, 1)), [], [0], [0], [0], name=name or "1")
    one = gens[0].identity()
    elements: List[ConcreteElement] = [one]
    index = {one.key(): 0}
    parent, gen_of, depth = [0], [0], [0]
    right: List[List[int]] = []
    x = 0
    while x < len(elements):
        row = []
        for j, g in enumerate(gens):
            y = elements[x].compose(g)
            k = y.key()
            if k not in index:
                if len(elements) >= cap:
                    raise ClosureCapExceeded(cap)
                index[k] = len(elements)
                elements.append(y)
                parent.append(x)
                gen_of.append(j)
                depth.append(depth[x] + 1)
            row.append(index[k])
        right.append(row)
        x += 1
    n = len(elements)
    R = np.asarray(right, dtype=np.int64)
    mult = np.empty((n, n), dtype=ID_DTYPE)
    mult[:, 0] = np.arange(n)
    # b = parent(b) * gen, so a*b = (a*parent(b)) * gen
    for b in range(1, n):
        mult[:, b] = R[mult[:, parent[b]], gen_of[b]]
    logger.info("closure of %s: %d elements", name or "group", n)
    return FiniteGroup(mult, list(R[0]), parent, gen_of, depth, name=name, concrete=elements)


def cyclic_group(m: int) -> FiniteGroup:
    """Z/m from the residue 1; id i is the residue i"""
    return generate_group([ResidueElement(1, m)], name=f"Z/{m}")


def _extend_closure(G: FiniteGroup, mask: np.ndarray, gens: np.ndarray, frontier: np.ndarray) -> None:
    while frontier.size:
        step = G.mult[np.ix_(frontier, gens)].ravel()
        frontier = np.unique(step[~mask[step]])
        mask[frontier] = True


def subgroup_generated(G: FiniteGroup, seed: Iterable[int] | np.ndarray) -> Subgroup:
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    gens: List[int] = []
    for s in _ids(seed):
        if mask[s]:
            continue
        gens.append(int(s))
        _extend_closure(G, mask, np.asarray(gens), np.nonzero(mask)[0])
    return Subgroup(G, np.nonzero(mask)[0], generators=gens)


def _normal_closure_under(G: FiniteGroup, seed: Iterable[int] | np.ndarray,
                          conjugators: np.ndarray) -> Subgroup:
    H = subgroup_generated(G, seed)
    if conjugators.size == 0:
        return H
    while True:
        hg = _ids(H.generators)
        if hg.size == 0:
            return H
        conj = np.concatenate([G.conjugate(conjugators[:, None], hg[None, :]).ravel(),
                               G.conjugate(G.inv[conjugators][:, None], hg[None, :]).ravel()])
        fresh = np.unique(conj[~H.mask[conj]])
        if fresh.size == 0:
            return H
        H = subgroup_generated(G, np.concatenate([hg, fresh]))


def normal_closure(G: FiniteGroup, seed: Iterable[int] | np.ndarray) -> Subgroup:
    return _normal_closure_under(G, seed, _ids(G.generators))


def commutator_subgroup(G: FiniteGroup, A: Subgroup, B: Subgroup) -> Subgroup:
    """[A, B], generated by all a^-1 b^-1 a b; one of A, B must be normal in G"""
    if not (A.is_normal() or B.is_normal()):
        raise NonNormalArguments("Commutator subgroup needs a normal argument")
    x, y = _ids(A.generators), _ids(B.generators)
    if x.size == 0 or y.size == 0:
        return G.trivial()
    comms = G.commutator(x[:, None], y[None, :]).ravel()
    # [A,B] is the normal closure of the generator commutators inside <A, B>
    return _normal_closure_under(G, comms, np.concatenate([x, y]))


def power_commutator_subgroup(G: FiniteGroup, A: Subgroup, m: int) -> Subgroup:
    """A^m [G, A] for normal A"""
    if not A.is_normal():
        raise NonNormalArguments("Power-commutator subgroup needs a normal subgroup")
    if m < 1:
        raise ValueError(f"Invalid exponent {m}")
    powers = G.power_map(m)[A.members]
    comm = commutator_subgroup(G, G.whole(), A)
    return subgroup_generated(G, np.concatenate([np.unique(powers), _ids(comm.generators)]))


def derived_subgroup(G: FiniteGroup) -> Subgroup:
    return commutator_subgroup(G, G.whole(), G.whole())


def join_subgroups(G: FiniteGroup, subs: List[Subgroup]) -> Subgroup:
    """The subgroup generated by a union of subgroups"""
    seeds = [_ids(s.generators) for s in subs if s.parent is G]
    if len(seeds) != len(subs):
        raise MixedParents("Join of subgroups from different groups")
    return subgroup_generated(G, np.concatenate(seeds) if seeds else [])


def intersect_subgroups(subs: List[Subgroup]) -> Subgroup:
    if not subs:
        raise EmptyList("Intersection of an empty list of subgroups")
    G = subs[0].parent
    if any(s.parent is not G for s in subs):
        raise MixedParents("Intersection of subgroups from different groups")
    mask = np.logical_and.reduce([s.mask for s in subs])
    return Subgroup(G, np.nonzero(mask)[0])


def quotient_group(G: FiniteGroup, N: Subgroup) -> Tuple[FiniteGroup, GroupHom]:
    """G/N on coset ids with the projection; repeated calls return the same objects"""
    if N.parent is not G:
        raise MixedParents("Quotient by a subgroup of another group")
    key = ("quotient", N.key)
    if key in G.cache:
        return G.cache[key]
    if not N.is_normal():
        raise NotNormal(f"Subgroup of order {N.order} is not normal in {G.name}")
    rep = np.empty(G.order, dtype=np.int64)
    step = max(1, _CHECK_CHUNK // N.order)
    for lo in range(0, G.order, step):
        rep[lo:lo + step] = G.mult[lo:lo + step][:, N.members].min(axis=1)
    reps, label = np.unique(rep, return_inverse=True)
    table = label[G.mult[np.ix_(reps, reps)]]
    Q, old_ids = FiniteGroup.from_table(table, label[_ids(G.generators)],
                                        name=f"{G.name}/{N.order}")
    old_to_new = np.empty(Q.order, dtype=np.int64)
    old_to_new[old_ids] = np.arange(Q.order)
    pi = GroupHom(G, Q, old_to_new[label.ravel()], check=False)
    G.cache[key] = (Q, pi)
    logger.debug("quotient %s has order %d", Q.name, Q.order)
    return Q, pi
