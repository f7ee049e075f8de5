import logging
import math
from typing import List, Dict

import numpy as np

from kgc.group import (FiniteGroup, Subgroup, commutator_subgroup, power_commutator_subgroup,
                       subgroup_generated)

logger = logging.getLogger(__name__)

KINDS = ("lower-central", "zassenhaus")


class FiltrationChain:
    """Descending normal series G = term(1) >= term(2) >= ...

    ctor params:
    kind: str -- lower-central or zassenhaus
    p: int
    terms: List[Subgroup] -- term(1) first
    """

    def __init__(self, kind: str, p: int, terms: List[Subgroup]) -> None:
        if kind not in KINDS:
            raise ValueError(f"Unknown filtration kind {kind!r}")
        self.kind = kind
        self.p = p
        self.terms = terms

    @property
    def group(self) -> FiniteGroup:
        return self.terms[0].parent

    def term(self, i: int) -> Subgroup:
        """1-based; past the computed length a trivial tail is assumed"""
        if i < 1:
            raise ValueError(f"Filtration index starts at 1, got {i}")
        if i <= len(self.terms):
            return self.terms[i - 1]
        if self.terms[-1].is_trivial():
            return self.terms[-1]
        raise ValueError(f"Term {i} was not computed")

    def orders(self) -> List[int]:
        return [t.order for t in self.terms]

    def verify(self) -> None:
        """ValueError unless the chain descends through normal subgroups with elementary abelian layers"""
        for i, t in enumerate(self.terms):
            if not t.is_normal():
                raise ValueError(f"{self.kind} term {i + 1} is not normal")
            if i and not t.is_subset(self.terms[i - 1]):
                raise ValueError(f"{self.kind} term {i + 1} is not inside term {i}")
            if i and not layer_is_elementary(self.terms[i - 1], t, self.p):
                raise ValueError(f"{self.kind} layer {i}/{i + 1} is not elementary abelian")

    def to_json_dict(self) -> Dict:
        return {
            "kind": self.kind,
            "p": self.p,
            "orders": self.orders()
        }


def layer_is_elementary(A: Subgroup, B: Subgroup, p: int) -> bool:
    """A/B is elementary abelian, for B inside A and normal"""
    G = A.parent
    gens = np.asarray(A.generators, dtype=np.int64)
    if gens.size == 0:
        return True
    comms = G.commutator(gens[:, None], gens[None, :])
    return bool(np.all(B.mask[comms]) and np.all(B.mask[G.power_map(p)[gens]]))


def is_elementary_abelian(Q: FiniteGroup, p: int) -> bool:
    return Q.is_abelian() and bool(np.all(p % Q.element_orders() == 0))


def lower_p_central(G: FiniteGroup, p: int, upto: int) -> FiltrationChain:
    """G^(1,p) = G, G^(i+1,p) = (G^(i,p))^p [G, G^(i,p)]"""
    key = ("lower-central", p)
    terms: List[Subgroup] = G.cache.setdefault(key, [G.whole()])
    while len(terms) < upto:
        prev = terms[-1]
        terms.append(prev if prev.is_trivial() else power_commutator_subgroup(G, prev, p))
    logger.debug("lower %d-central orders of %s: %s", p, G.name, [t.order for t in terms[:upto]])
    return FiltrationChain("lower-central", p, terms[:upto])


def zassenhaus(G: FiniteGroup, p: int, upto: int) -> FiltrationChain:
    """G_(n,p) = (G_(ceil(n/p),p))^p times the product of [G_(i,p), G_(j,p)] over i + j = n"""
    key = ("zassenhaus", p)
    terms: List[Subgroup] = G.cache.setdefault(key, [G.whole()])
    while len(terms) < upto:
        n = len(terms) + 1
        if terms[-1].is_trivial():
            terms.append(terms[-1])
            continue
        base = terms[math.ceil(n / p) - 1]
        seeds = [np.unique(G.power_map(p)[base.members])]
        for i in range(1, n // 2 + 1):
            comm = commutator_subgroup(G, terms[i - 1], terms[n - i - 1])
            seeds.append(np.asarray(comm.generators, dtype=np.int64))
        terms.append(subgroup_generated(G, np.concatenate(seeds)))
    logger.debug("%d-zassenhaus orders of %s: %s", p, G.name, [t.order for t in terms[:upto]])
    return FiltrationChain("zassenhaus", p, terms[:upto])


def filtration(G: FiniteGroup, kind: str, p: int, upto: int) -> FiltrationChain:
    if upto < 1:
        raise ValueError(f"Filtration length must be at least 1, got {upto}")
    if kind == "lower-central":
        return lower_p_central(G, p, upto)
    if kind == "zassenhaus":
        return zassenhaus(G, p, upto)
    raise ValueError(f"Unknown filtration kind {kind!r}")
