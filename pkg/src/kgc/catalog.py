"""Named groups, families and subgroup specs, and the sweep catalog."""
import functools
import logging
from typing import List, Dict, Any

import numpy as np
from sympy import factorint, isprime

from kgc.elements import MatrixElement, PermutationElement, elements_from_json_dict
from kgc.filtrations import filtration
from kgc.group import (FiniteGroup, Subgroup, cyclic_group, derived_subgroup, generate_group,
                       normal_closure, quotient_group, subgroup_generated)
from kgc.homsearch import t_bundle
from kgc.magnus import free_nilpotent_standin
from kgc.unitriangular import (OmegaFamily, build_elementary_abelian, build_mp3, build_unitriangular,
                               omega_family)

logger = logging.getLogger(__name__)

BUILTIN_FORMS = ("D4", "Q8", "Z/n", "E:p:r", "Ab:a,b,...", "Mp3:p", "U:n:m", "Heis:p", "Meta:p",
                 "Free:zassenhaus:k:p:n", "Free:lower-central:k:p:n")

SWEEP_NAMES = ("D4", "Q8", "Mp3:3", "Heis:3", "U:2:2", "U:2:3", "U:3:2", "U:2:4", "Meta:3",
               "Z/2", "Z/4", "Z/8", "Z/3", "Z/9", "Z/27", "E:2:2", "E:2:3", "E:3:2",
               "Ab:2,4", "Ab:4,4", "Ab:3,9", "Free:zassenhaus:2:2:2", "Free:lower-central:2:2:2",
               "Free:zassenhaus:2:3:2", "Free:zassenhaus:2:2:3")

# stand-in, family label, level
QUOTIENT_SOURCES = (("Free:zassenhaus:2:2:2", "zassenhaus", 2),
                    ("Free:lower-central:2:2:2", "lower-central", 2),
                    ("Free:zassenhaus:2:3:2", "zassenhaus", 2),
                    ("Free:zassenhaus:2:2:3", "zassenhaus", 3))


def _ints(text: str, sep: str = ",") -> List[int]:
    try:
        return [int(x) for x in text.split(sep) if x != ""]
    except ValueError:
        raise ValueError(f"Expected integers in {text!r}") from None


def _abelian(orders: List[int]) -> FiniteGroup:
    """Z/a_1 x ... x Z/a_r as commuting last-column matrices over Z/lcm"""
    if not orders or any(a < 2 for a in orders):
        raise ValueError(f"Invalid abelian invariants {orders}")
    m = int(np.lcm.reduce(orders))
    r = len(orders)
    gens = []
    for i, a in enumerate(orders):
        e = np.eye(r + 1, dtype=np.int64)
        e[i, r] = m // a
        gens.append(MatrixElement(e, m))
    return generate_group(gens, name="Ab:" + ",".join(map(str, orders)))


def _metacyclic(p: int) -> FiniteGroup:
    """<tau> x| <sigma>, both of order p^2, sigma tau sigma^-1 = tau^(1+p), over Z/p^3"""
    if p == 2 or not isprime(p):
        raise ValueError(f"Meta needs an odd prime, got {p}")
    m = p ** 3
    sigma = MatrixElement([[1 + p, 0], [0, 1]], m)
    tau = MatrixElement([[1, p], [0, 1]], m)
    G = generate_group([sigma, tau], name=f"Meta:{p}")
    s, t = G.generators
    if G.order != p ** 4 or G.conjugate(s, t) != G.power(t, 1 + p):
        raise ValueError(f"Meta:{p} generators break the defining relations")
    return G


@functools.lru_cache(maxsize=None)
def builtin_group(spec: str) -> FiniteGroup:
    """A group from its builtin name, e.g. "D4", "U:3:2", "Free:zassenhaus:2:2:2" """
    head, _, rest = spec.partition(":")
    if spec == "D4":
        return generate_group([PermutationElement([1, 2, 3, 0]), PermutationElement([0, 3, 2, 1])], name="D4")
    if spec == "Q8":
        i = MatrixElement([[0, 1], [2, 0]], 3)
        j = MatrixElement([[1, 1], [1, 2]], 3)
        return generate_group([i, j], name="Q8")
    if spec.startswith("Z/"):
        return cyclic_group(_ints(spec[2:])[0])
    args = rest.split(":") if rest else []
    if head == "E" and len(args) == 2:
        p, r = map(int, args)
        return build_elementary_abelian(p, r)
    if head == "Ab" and len(args) == 1:
        return _abelian(_ints(args[0]))
    if head == "Mp3" and len(args) == 1:
        return build_mp3(int(args[0])).E
    if head == "U" and len(args) == 2:
        n, m = map(int, args)
        return build_unitriangular(n, m)
    if head == "Heis" and len(args) == 1:
        return build_unitriangular(2, int(args[0]))
    if head == "Meta" and len(args) == 1:
        return _metacyclic(int(args[0]))
    if head == "Free" and len(args) == 4:
        k, p, n = map(int, args[1:])
        return free_nilpotent_standin(k, p, args[0], n)
    raise ValueError(f"Unknown builtin group {spec!r}; forms are {', '.join(BUILTIN_FORMS)}")


def group_from_json_dict(jd: Any) -> FiniteGroup:
    """A builtin name, {"builtin": name}, or an element document with generators"""
    if isinstance(jd, str):
        return builtin_group(jd)
    if "builtin" in jd:
        return builtin_group(jd["builtin"])
    gens = elements_from_json_dict(jd)
    return generate_group(gens, name=jd.get("name", "input"))


def parse_family(spec: str) -> OmegaFamily:
    """ "zassenhaus:n:p", "lower-central:n:p" or "mixed:p" """
    parts = spec.split(":")
    try:
        if parts[0] == "mixed" and len(parts) == 2:
            return omega_family("mixed", 2, int(parts[1]))
        if parts[0] in ("zassenhaus", "lower-central") and len(parts) == 3:
            return omega_family(parts[0], int(parts[1]), int(parts[2]))
    except ValueError as e:
        raise ValueError(f"Invalid family {spec!r}: {e}") from None
    raise ValueError(f"Invalid family {spec!r}")


def group_prime(G: FiniteGroup) -> int:
    primes = list(factorint(G.order))
    if len(primes) != 1:
        raise ValueError(f"{G.name} is not a p-group")
    return primes[0]


def resolve_subgroup(G: FiniteGroup, spec: str, fam: OmegaFamily | None = None) -> Subgroup:
    """A subgroup from a spec string.

    Like this:
        "trivial", "whole", "center", "derived", "T", "Tbar",
        "lower-central:3", "zassenhaus:2", "generated:1,4", "normal:5"
    """
    head, _, arg = spec.partition(":")
    if spec == "trivial":
        return G.trivial()
    if spec == "whole":
        return G.whole()
    if spec == "center":
        return G.center()
    if spec == "derived":
        return derived_subgroup(G)
    if spec in ("T", "Tbar"):
        if fam is None:
            raise ValueError(f"Subgroup {spec!r} needs a family")
        bundle = t_bundle(G, fam)
        return bundle.T if spec == "T" else bundle.Tbar
    if head in ("lower-central", "zassenhaus"):
        i = _ints(arg)[0]
        p = fam.p if fam is not None else group_prime(G)
        return filtration(G, head, p, i).term(i)
    if head in ("generated", "normal"):
        ids = _ints(arg)
        if any(not 0 <= x < G.order for x in ids):
            raise ValueError(f"Element ids {ids} outside {G.name}")
        return subgroup_generated(G, ids) if head == "generated" else normal_closure(G, ids)
    raise ValueError(f"Unknown subgroup spec {spec!r}")


def sweep_families(p: int) -> List[OmegaFamily]:
    """The families run on p-groups in a sweep"""
    fams = [omega_family("zassenhaus", 2, p), omega_family("lower-central", 2, p)]
    if p == 2:
        fams.append(omega_family("zassenhaus", 3, p))
    else:
        fams.append(omega_family("mixed", 2, p))
    return fams


def standin_quotients(seed: int = 0, per_source: int = 3) -> List[FiniteGroup]:
    """Quotients Q/N of free-nilpotent stand-ins by normal N inside the level-n term.

    Candidates are normal closures of the term's elements in a seeded random
    order; the first per_source distinct nontrivial ones are kept.
    """
    rng = np.random.default_rng(seed)
    found: List[FiniteGroup] = []
    for name, kind, n in QUOTIENT_SOURCES:
        Q = builtin_group(name)
        p = group_prime(Q)
        inside = filtration(Q, kind, p, n).term(n)
        seen: List[Subgroup] = []
        for x in rng.permutation(inside.members[1:]):
            N = normal_closure(Q, [int(x)])
            if N in seen:
                continue
            seen.append(N)
            found.append(quotient_group(Q, N)[0])
            if len(seen) == per_source:
                break
    return found


def sweep_catalog(seed: int = 0) -> List[FiniteGroup]:
    groups: List[FiniteGroup] = []
    for name in SWEEP_NAMES:
        G = builtin_group(name)
        if all(G is not H for H in groups):
            groups.append(G)
    groups.extend(standin_quotients(seed))
    logger.info("sweep catalog: %d groups", len(groups))
    return groups


def describe_group(G: FiniteGroup) -> Dict:
    """group-info payload"""
    order, exponent, abelianization = G.signature()
    return {
        **G.to_json_dict(),
        "abelian": G.is_abelian(),
        "abelianization_order": abelianization,
        "center_order": G.center().order,
        "derived_order": order // abelianization
    }
