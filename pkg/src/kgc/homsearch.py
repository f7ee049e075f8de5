"""Homomorphism enumeration and the intersection subgroups T^U(G), T(G), Tbar(G).

Generator images are chosen one generator at a time. After choosing the image
of generator i the map is extended over H_i = <g_1..g_i> along BFS words and
every Cayley edge inside H_i is checked, so a bad prefix dies as soon as any
forced product disagrees with the codomain table. A generator already inside
H_(i-1) gets its image forced.
"""
import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from typing import List, Dict, Iterator, Sequence

import numpy as np

from kgc import limits
from kgc.errors import BudgetExceeded
from kgc.group import (FiniteGroup, GroupHom, Subgroup, bfs_order, cyclic_group, intersect_subgroups,
                       quotient_group)
from kgc.unitriangular import CentralExtension, OmegaFamily

logger = logging.getLogger(__name__)


class _Level:
    """H_i in BFS order over the first i generators, with its Cayley edges"""

    def __init__(self, G: FiniteGroup, gens: np.ndarray) -> None:
        ids, parents, gen_idx, depth = bfs_order(G.mult, gens)
        self.ids = ids
        self.pos = np.full(G.order, -1, dtype=np.int64)
        self.pos[ids] = np.arange(ids.size)
        self.parent_pos = self.pos[parents]
        self.gen_idx = gen_idx
        bounds = np.searchsorted(depth, np.arange(1, int(depth.max()) + 2)) if ids.size > 1 else []
        self.layers = [slice(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:])]
        src = np.repeat(np.arange(ids.size), gens.size)
        gen = np.tile(np.arange(gens.size), ids.size)
        self.edge_src = src
        self.edge_gen = gen
        self.edge_dst = self.pos[G.mult[ids[src], gens[gen]]]

    def evaluate(self, umult: np.ndarray, gimg: np.ndarray) -> np.ndarray:
        image = np.zeros(self.ids.size, dtype=np.int64)
        for sl in self.layers:
            image[sl] = umult[image[self.parent_pos[sl]], gimg[self.gen_idx[sl]]]
        return image

    def consistent(self, umult: np.ndarray, gimg: np.ndarray, image: np.ndarray) -> bool:
        return bool(np.array_equal(umult[image[self.edge_src], gimg[self.edge_gen]],
                                   image[self.edge_dst]))


class _SearchPlan:

    def __init__(self, G: FiniteGroup) -> None:
        gens = np.asarray(G.generators, dtype=np.int64)
        self.gens = gens
        self.levels = [_Level(G, gens[:i + 1]) for i in range(gens.size)]
        # position of generator i inside H_(i-1) when it is redundant there
        self.forced = [None] + [
            (int(self.levels[i - 1].pos[gens[i]]) if self.levels[i - 1].pos[gens[i]] >= 0 else None)
            for i in range(1, gens.size)
        ]


def _plan(G: FiniteGroup) -> _SearchPlan:
    if "hom_plan" not in G.cache:
        G.cache["hom_plan"] = _SearchPlan(G)
    return G.cache["hom_plan"]


class _Budget:

    def __init__(self, budget: int) -> None:
        self.budget = budget
        self.explored = 0
        self._lock = threading.Lock()

    def tick(self) -> None:
        with self._lock:
            self.explored += 1
            if self.explored > self.budget:
                raise BudgetExceeded(self.explored, self.budget)


class HomSet:
    """All homomorphisms from domain to codomain, in search order

    ctor params:
    domain: FiniteGroup
    codomain: FiniteGroup
    homs: List[GroupHom]
    explored: int -- prefixes the search visited
    """

    def __init__(self, domain: FiniteGroup, codomain: FiniteGroup, homs: List[GroupHom],
                 explored: int = 0) -> None:
        self.domain = domain
        self.codomain = codomain
        self.homs = homs
        self.explored = explored

    def __len__(self) -> int:
        return len(self.homs)

    def __iter__(self) -> Iterator[GroupHom]:
        return iter(self.homs)

    def to_json_dict(self, witnesses: int = 16) -> Dict:
        return {
            "domain": self.domain.name,
            "codomain": self.codomain.name,
            "count": len(self.homs),
            "explored_prefixes": self.explored,
            "witnesses": [h.generator_images() for h in self.homs[:witnesses]]
        }


def _default_candidates(G: FiniteGroup, U: FiniteGroup) -> List[np.ndarray]:
    """Codomain elements whose order divides the generator's order"""
    uorders = U.element_orders()
    gorders = G.element_orders()
    return [np.nonzero(gorders[g] % uorders == 0)[0] for g in G.generators]


def _search(G: FiniteGroup, U: FiniteGroup, cands: List[np.ndarray], budget: _Budget,
            first: Sequence[int] | None = None) -> Iterator[GroupHom]:
    plan = _plan(G)
    k = plan.gens.size
    umult = U.mult
    if k == 0:
        budget.tick()
        yield GroupHom.trivial(G, U)
        return
    allowed = [np.zeros(U.order, dtype=bool) for _ in range(k)]
    for i, c in enumerate(cands):
        allowed[i][c] = True
    gimg = np.zeros(k, dtype=np.int64)

    def descend(level: int, prev_image: np.ndarray | None) -> Iterator[GroupHom]:
        lev = plan.levels[level]
        forced = plan.forced[level]
        if forced is not None:
            options = [int(prev_image[forced])]
            if not allowed[level][options[0]]:
                return
        elif level == 0 and first is not None:
            options = first
        else:
            options = cands[level]
        for c in options:
            budget.tick()
            gimg[level] = c
            image = lev.evaluate(umult, gimg)
            if not lev.consistent(umult, gimg, image):
                continue
            if level + 1 < k:
                yield from descend(level + 1, image)
            else:
                full = np.empty(G.order, dtype=np.int64)
                full[lev.ids] = image
                yield GroupHom(G, U, full)

    yield from descend(0, None)


def iter_homs(G: FiniteGroup, U: FiniteGroup, candidates: List[np.ndarray] | None = None,
              budget: int | None = None) -> Iterator[GroupHom]:
    """Stream every hom G -> U, optionally restricting generator i to candidates[i]"""
    cands = _default_candidates(G, U) if candidates is None else \
        [np.asarray(c, dtype=np.int64) for c in candidates]
    tracker = _Budget(limits.current().budget_prefixes if budget is None else budget)
    yield from _search(G, U, cands, tracker)
    logger.debug("hom search %s -> %s explored %d prefixes", G.name, U.name, tracker.explored)


def enumerate_homs(G: FiniteGroup, U: FiniteGroup, candidates: List[np.ndarray] | None = None,
                   workers: int = 1) -> HomSet:
    """The complete HomSet; with workers > 1 the first generator's images are split across threads"""
    cands = _default_candidates(G, U) if candidates is None else \
        [np.asarray(c, dtype=np.int64) for c in candidates]
    tracker = _Budget(limits.current().budget_prefixes)
    if workers <= 1 or not G.generators:
        homs = list(_search(G, U, cands, tracker))
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(lambda c: list(_search(G, U, cands, tracker, first=[int(c)])), cands[0])
            homs = [h for part in parts for h in part]
    logger.info("Hom(%s, %s): %d homs, %d prefixes", G.name, U.name, len(homs), tracker.explored)
    return HomSet(G, U, homs, tracker.explored)


def t_subgroup(G: FiniteGroup, U: FiniteGroup) -> Subgroup:
    """T^U(G), the intersection of the kernels of all homs G -> U"""
    key = ("T", U.name, U.hash())
    if key in G.cache:
        return G.cache[key]
    mask = np.ones(G.order, dtype=bool)
    for hom in iter_homs(G, U):
        mask &= hom.image == 0
        if np.count_nonzero(mask) == 1:
            break
    T = Subgroup(G, np.nonzero(mask)[0])
    G.cache[key] = T
    return T


class TBundle:
    """T(G) and Tbar(G) for a family, with the per-extension pieces

    ctor params:
    family: OmegaFamily
    T: Subgroup -- intersection of T^E over the family
    Tbar: Subgroup -- intersection of T^Gbar over the family
    kernels: List[Subgroup] -- T^E per extension
    bar_kernels: List[Subgroup] -- T^Gbar per extension
    """

    def __init__(self, family: OmegaFamily, T: Subgroup, Tbar: Subgroup,
                 kernels: List[Subgroup], bar_kernels: List[Subgroup]) -> None:
        self.family = family
        self.T = T
        self.Tbar = Tbar
        self.kernels = kernels
        self.bar_kernels = bar_kernels

    def verify(self) -> None:
        if not self.T.is_subset(self.Tbar):
            raise ValueError("T(G) is not inside Tbar(G)")
        if not (self.T.is_normal() and self.Tbar.is_normal()):
            raise ValueError("T(G) or Tbar(G) is not normal")

    def to_json_dict(self) -> Dict:
        return {
            "family": self.family.name,
            "order_T": self.T.order,
            "order_Tbar": self.Tbar.order,
            "orders_T_per_extension": [k.order for k in self.kernels],
            "orders_Tbar_per_extension": [k.order for k in self.bar_kernels]
        }


def t_bundle(G: FiniteGroup, fam: OmegaFamily) -> TBundle:
    key = ("bundle", fam.name)
    if key not in G.cache:
        kernels = [t_subgroup(G, ext.E) for ext in fam.extensions]
        bar_kernels = [t_subgroup(G, ext.Gbar) for ext in fam.extensions]
        bundle = TBundle(fam, intersect_subgroups(kernels), intersect_subgroups(bar_kernels),
                         kernels, bar_kernels)
        bundle.verify()
        G.cache[key] = bundle
    return G.cache[key]


def lift_hom(ext: CentralExtension, pi: GroupHom, rhobar: GroupHom,
             method: str = "auto") -> GroupHom | None:
    """A hom rho: G -> E with lam(rho) = rhobar(pi), or None.

    The fiber method gives generator i only the |Z| preimages of its required
    Gbar image; the enumerate method filters the full Hom(G, E).
    """
    G = pi.domain
    if pi.codomain is not rhobar.domain or rhobar.codomain is not ext.Gbar:
        raise ValueError("pi and rhobar do not compose into Gbar")
    targets = rhobar.image[pi.image]
    k = len(G.generators)
    if method == "auto":
        method = "fiber" if ext.p ** k < ext.E.order ** k else "enumerate"
    if method == "fiber":
        lam = ext.lam.image
        fibers = [np.nonzero(lam == targets[g])[0] for g in G.generators]
        return next(iter_homs(G, ext.E, candidates=fibers), None)
    if method == "enumerate":
        for rho in iter_homs(G, ext.E):
            if np.array_equal(ext.lam.image[rho.image], targets):
                return rho
        return None
    raise ValueError(f"Unknown lift method {method!r}")


def automorphisms(G: FiniteGroup, limit: int | None = None) -> List[GroupHom]:
    """Bijective endomorphisms, found by generator-image search over same-order elements"""
    orders = G.element_orders()
    cands = [np.nonzero(orders == orders[g])[0] for g in G.generators]
    found: List[GroupHom] = []
    for hom in iter_homs(G, G, candidates=cands):
        if hom.is_surjective():
            found.append(hom)
            if limit is not None and len(found) >= limit:
                break
    return found


def quotient_bundle_check(G: FiniteGroup, N: Subgroup, fam: OmegaFamily) -> Dict[str, bool]:
    """Along pi: G -> G/N, N <= T(G) iff T(G) = pi^-1[T(G/N)], and likewise for Tbar"""
    bundle = t_bundle(G, fam)
    Q, pi = quotient_group(G, N)
    below = t_bundle(Q, fam)
    return {
        "T": N.is_subset(bundle.T) == (pi.preimage_of(below.T) == bundle.T),
        "Tbar": N.is_subset(bundle.Tbar) == (pi.preimage_of(below.Tbar) == bundle.Tbar)
    }


def characters_inflate_bijectively(G: FiniteGroup, N: Subgroup, p: int) -> bool:
    """Composing with G -> G/N maps Hom(G/N, Z/p) one-to-one onto Hom(G, Z/p)"""
    Q, pi = quotient_group(G, N)
    Zp = cyclic_group(p)
    below = enumerate_homs(Q, Zp)
    pulled = {tuple(pi.then(h).image.tolist()) for h in below}
    own = {tuple(h.image.tolist()) for h in enumerate_homs(G, Zp)}
    return len(pulled) == len(below) and pulled == own
