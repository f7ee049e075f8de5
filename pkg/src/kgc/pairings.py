"""Bilinear pairings over F_p and the A/B/C tower on second cohomology.

For normal N1 <= N2 <= G everything is computed on one chain of quotients
G -> Q1 = G/N1 -> Q2 = Q1/pi1(N2), so every class on G/N2 lives on the single
group Q2 and subspaces are coordinate row spaces of its H2Space.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Dict, Any, Sequence, Tuple

import numpy as np

from kgc import limits, linalg
from kgc.cohomology import (H2Space, Cocycle2, classifying_cocycle, coboundary_space, conj_invariant_h1,
                            h1, h2_space, inflated_columns, inflation, inflation_kernel, pullback,
                            liftability_crosscheck, transgression)
from kgc.errors import (CriterionDisagreement, GroupTooLarge, NonCommutingSquare, NotNormal,
                        ResourceExhausted, TransgressionSolveFailed)
from kgc.filtrations import filtration, layer_is_elementary, lower_p_central
from kgc.group import (FiniteGroup, GroupHom, Subgroup, cyclic_group, intersect_subgroups,
                       join_subgroups, normal_closure, power_commutator_subgroup, quotient_group,
                       subgroup_generated)
from kgc.homsearch import iter_homs, lift_hom, t_bundle, t_subgroup
from kgc.unitriangular import OmegaFamily, build_unitriangular

logger = logging.getLogger(__name__)

SHADOW_CAVEAT = "statements about free profinite groups are evaluated on finite free-nilpotent quotients"

LIFT_METHODS = ("lift", "inflation")


class PairingMatrix:
    """A bilinear map on two F_p bases, as the matrix of its values

    ctor params:
    left_labels: List[Any] -- e.g. coset representative ids
    right_labels: List[Any] -- e.g. class indices
    matrix: np.ndarray -- len(left) x len(right)
    p: int
    """

    def __init__(self, left_labels: List[Any], right_labels: List[Any], matrix: np.ndarray, p: int) -> None:
        self.left_labels = list(left_labels)
        self.right_labels = list(right_labels)
        self.matrix = np.mod(np.asarray(matrix, dtype=np.int64).reshape(len(self.left_labels),
                                                                         len(self.right_labels)), p)
        self.p = p

    @property
    def shape(self) -> Tuple[int, int]:
        return self.matrix.shape

    @property
    def rank(self) -> int:
        return linalg.rank(self.p, self.matrix)

    def to_json_dict(self) -> Dict:
        return {
            "p": self.p,
            "rows": len(self.left_labels),
            "cols": len(self.right_labels),
            "rank": self.rank,
            "matrix": self.matrix.tolist()
        }


class PairingKernels:
    """Kernels and surjectivity flags of a PairingMatrix"""

    def __init__(self, left_kernel: np.ndarray, right_kernel: np.ndarray, left_surjective: bool,
                 right_surjective: bool) -> None:
        self.left_kernel = left_kernel
        self.right_kernel = right_kernel
        self.left_surjective = left_surjective
        self.right_surjective = right_surjective

    @property
    def nondegenerate(self) -> bool:
        return self.left_kernel.shape[0] == 0 and self.right_kernel.shape[0] == 0

    @property
    def perfect(self) -> bool:
        return self.nondegenerate and self.left_surjective and self.right_surjective

    def to_json_dict(self) -> Dict:
        return {
            "dim_left_kernel": int(self.left_kernel.shape[0]),
            "dim_right_kernel": int(self.right_kernel.shape[0]),
            "left_surjective": self.left_surjective,
            "right_surjective": self.right_surjective,
            "nondegenerate": self.nondegenerate,
            "perfect": self.perfect
        }


def pairing_kernels(P: PairingMatrix) -> PairingKernels:
    rows, cols = P.shape
    r = P.rank
    return PairingKernels(linalg.left_null_space(P.p, P.matrix, rows) if rows else np.zeros((0, 0), dtype=np.int64),
                          linalg.null_space(P.p, P.matrix, cols),
                          left_surjective=(r == cols), right_surjective=(r == rows))


def _check_square(P1: PairingMatrix, P2: PairingMatrix, alpha: np.ndarray, beta: np.ndarray) -> None:
    """P1(a, beta b) = P2(alpha a, b) on basis pairs; alpha rows are alpha(a_i), beta rows beta(b_j)"""
    p = P1.p
    if alpha.shape != (P1.shape[0], P2.shape[0]) or beta.shape != (P2.shape[1], P1.shape[1]):
        raise NonCommutingSquare("alpha/beta shapes do not fit the pairings")
    if not np.array_equal(linalg.matmul(p, P1.matrix, beta.T), linalg.matmul(p, alpha, P2.matrix)):
        raise NonCommutingSquare("P1(a, beta b) != P2(alpha a, b)")


def induced_coker_ker(P1: PairingMatrix, P2: PairingMatrix, alpha: np.ndarray,
                      beta: np.ndarray) -> PairingMatrix:
    """The pairing Coker(alpha) x Ker(beta) -> Z/p that a commuting square induces"""
    p = P1.p
    alpha = np.mod(np.asarray(alpha, dtype=np.int64).reshape(P1.shape[0], P2.shape[0]), p)
    beta = np.mod(np.asarray(beta, dtype=np.int64).reshape(P2.shape[1], P1.shape[1]), p)
    _check_square(P1, P2, alpha, beta)
    dim_a2, dim_b2 = P2.shape
    image = linalg.span(p, alpha, dim_a2)
    reps = np.eye(dim_a2, dtype=np.int64)[linalg.extend_basis(p, image, np.eye(dim_a2, dtype=np.int64))]
    kernel = linalg.left_null_space(p, beta, dim_b2) if dim_b2 else np.zeros((0, 0), dtype=np.int64)
    values = linalg.matmul(p, linalg.matmul(p, reps, P2.matrix), kernel.T)
    # representatives shifted by the image of alpha give the same values
    if image.shape[0] and np.any(linalg.matmul(p, linalg.matmul(p, image, P2.matrix), kernel.T)):
        raise NonCommutingSquare("induced pairing is not well defined on cokernel classes")
    return PairingMatrix([tuple(r) for r in reps.tolist()], [tuple(k) for k in kernel.tolist()],
                         values, p)


def left_surjectivity_check(P1: PairingMatrix, P2: PairingMatrix, alpha: np.ndarray,
                            beta: np.ndarray) -> bool:
    """False only when P1 is left-surjective, beta injective and P2 is not left-surjective"""
    p = P1.p
    alpha = np.mod(np.asarray(alpha, dtype=np.int64).reshape(P1.shape[0], P2.shape[0]), p)
    beta = np.mod(np.asarray(beta, dtype=np.int64).reshape(P2.shape[1], P1.shape[1]), p)
    _check_square(P1, P2, alpha, beta)
    injective = linalg.rank(p, beta) == P2.shape[1]
    if not (pairing_kernels(P1).left_surjective and injective):
        return True
    return pairing_kernels(P2).left_surjective


def _as_rows(coords: Any, dim: int) -> np.ndarray:
    coords = np.asarray(coords, dtype=np.int64)
    if coords.size == 0:
        return np.zeros((0, dim), dtype=np.int64)
    return coords.reshape(-1, dim)


class SubspaceHandle:
    """A subspace of H^2(Q), as coordinate rows in an H2Space

    ctor params:
    space: H2Space
    basis: np.ndarray -- independent coordinate rows
    provenance: List[Dict] -- generators that produced it, each with its coordinates
    """

    def __init__(self, space: H2Space, basis: np.ndarray, provenance: List[Dict] | None = None) -> None:
        self.space = space
        self.basis = linalg.span(space.p, _as_rows(basis, space.dimension), space.dimension)
        self.provenance = provenance or []

    @property
    def dimension(self) -> int:
        return int(self.basis.shape[0])

    def contains(self, coords: np.ndarray) -> bool:
        return linalg.contains(self.space.p, self.basis, coords)

    def is_subspace_of(self, other: "SubspaceHandle") -> bool:
        return other.contains(self.basis)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SubspaceHandle) and other.space is self.space \
            and linalg.same_span(self.space.p, self.basis, other.basis, self.space.dimension)

    def verify(self) -> None:
        for item in self.provenance:
            if not self.contains(item["coords"]):
                raise ValueError(f"Provenance class from {item['extension']} is outside the subspace")

    def classes(self) -> List[Cocycle2]:
        return [self.space.from_coordinates(v) for v in self.basis]

    def to_json_dict(self) -> Dict:
        return {
            "group_hash": self.space.G.hash(),
            "dimension": self.dimension,
            "basis": self.basis.tolist(),
            "generators": len(self.provenance)
        }


def _pullbacks(G: FiniteGroup, pi: GroupHom, fam: OmegaFamily, method: str | None) -> List[Dict]:
    """Distinct pullback classes rhobar^*(alpha_omega) over all rhobar: G/N -> Ubar_omega.

    With a method, each entry records whether rhobar is pi-liftable, decided by a
    lift search ("lift") or by inflation to H^2(G) ("inflation").
    """
    if method is not None and method not in LIFT_METHODS:
        raise ValueError(f"Unknown liftability method {method!r}")
    Q = pi.codomain
    key = ("pullbacks", fam.name, id(G), pi.kernel().key, method)
    if key in Q.cache:
        return Q.cache[key]
    space = h2_space(Q, fam.p)
    found: Dict[Tuple[bytes, bool | None], Dict] = {}
    for ext in fam.extensions:
        alpha = classifying_cocycle(ext)
        for rhobar in iter_homs(Q, ext.Gbar):
            f = pullback(alpha, rhobar)
            coords = space.coordinates(f)
            liftable = None
            if method == "lift":
                liftable = lift_hom(ext, pi, rhobar) is not None
            elif method == "inflation":
                liftable = coboundary_space(G, fam.p).is_coboundary(inflated_columns(f, pi))
            found.setdefault((coords.tobytes(), liftable), {
                "extension": ext.label,
                "images": rhobar.generator_images(),
                "coords": coords,
                "liftable": liftable
            })
    entries = list(found.values())
    logger.debug("%d distinct pullback classes on %s for %s", len(entries), Q.name, fam.name)
    Q.cache[key] = entries
    return entries


def _rows(entries: List[Dict], dim: int) -> np.ndarray:
    return np.array([e["coords"] for e in entries], dtype=np.int64).reshape(len(entries), dim)


def liftable_pullback_space(G: FiniteGroup, N: Subgroup, fam: OmegaFamily,
                            method: str = "lift") -> SubspaceHandle:
    """H^2(G/N)_pi, spanned by the pi-liftable pullbacks"""
    _check_inside_tbar(G, [N], fam)
    Q, pi = quotient_group(G, N)
    return _liftable_space(G, pi, fam, method)


def _liftable_space(G: FiniteGroup, pi: GroupHom, fam: OmegaFamily, method: str) -> SubspaceHandle:
    space = h2_space(pi.codomain, fam.p)
    liftable = [e for e in _pullbacks(G, pi, fam, method) if e["liftable"]]
    handle = SubspaceHandle(space, _rows(liftable, space.dimension), liftable)
    handle.verify()
    return handle


def _check_inside_tbar(G: FiniteGroup, subs: Sequence[Subgroup], fam: OmegaFamily) -> None:
    Tbar = t_bundle(G, fam).Tbar
    for N in subs:
        if not N.is_normal():
            raise NotNormal(f"Subgroup of order {N.order} is not normal in {G.name}")
        if not N.is_subset(Tbar):
            raise ValueError(f"Subgroup of order {N.order} is not inside Tbar({G.name})")


def coset_basis(G: FiniteGroup, upper: Subgroup, lower: Subgroup, p: int) -> List[int]:
    """Lowest-id representatives of an F_p basis of upper/lower"""
    if not lower.is_subset(upper):
        raise ValueError("Lower subgroup is not inside the upper one")
    if not layer_is_elementary(upper, lower, p):
        raise ValueError(f"Quotient of order {upper.order // lower.order} is not elementary abelian")
    reps: List[int] = []
    current = lower
    for g in upper.members:
        if current.order == upper.order:
            break
        if g in current:
            continue
        reps.append(int(g))
        current = subgroup_generated(G, list(current.generators) + [int(g)])
    return reps


class Tower:
    """G -> Q1 = G/N1 -> Q2 = Q1/M with M = pi1(N2)

    ctor params:
    G: FiniteGroup
    N1: Subgroup -- normal, inside N2
    N2: Subgroup -- normal, inside N1 G^(2,p)
    p: int
    """

    def __init__(self, G: FiniteGroup, N1: Subgroup, N2: Subgroup, p: int) -> None:
        for N in (N1, N2):
            if N.parent is not G or not N.is_normal():
                raise NotNormal(f"Subgroup of order {N.order} is not normal in {G.name}")
        if not N1.is_subset(N2):
            raise ValueError("N1 is not inside N2")
        frattini = lower_p_central(G, p, 2).term(2)
        if not N2.is_subset(join_subgroups(G, [N1, frattini])):
            raise ValueError("N2 is not inside N1 G^(2,p)")
        self.G = G
        self.N1 = N1
        self.N2 = N2
        self.p = p
        self.Q1, self.pi1 = quotient_group(G, N1)
        self.M = self.pi1.image_of(N2)
        self.Q2, self.pi12 = quotient_group(self.Q1, self.M)
        self.pi2 = self.pi1.then(self.pi12)
        self.space = h2_space(self.Q2, p)
        self._memo: Dict[Any, Any] = {}

    def _transgressions(self) -> Tuple[np.ndarray, np.ndarray]:
        """Coordinates of trg(psi_i) and the table of psi_i on M"""
        if "trg" not in self._memo:
            psis = conj_invariant_h1(self.Q1, self.M, self.p)
            coords = [self.space.coordinates(transgression(self.Q1, self.M, psi, pi=self.pi12))
                      for psi in psis]
            H, inc = self.M.as_group()
            pos = np.full(self.Q1.order, -1, dtype=np.int64)
            pos[inc.image] = np.arange(H.order)
            self._memo["trg"] = (np.array(coords, dtype=np.int64).reshape(len(psis), self.space.dimension),
                                 np.array([psi.values for psi in psis], dtype=np.int64).reshape(len(psis), H.order))
            self._memo["pos"] = pos
        return self._memo["trg"]

    def a_basis(self) -> np.ndarray:
        if "A" not in self._memo:
            self._memo["A"] = inflation_kernel(self.space, self.pi12)
        return self._memo["A"]

    def evaluate(self, sigmas: Sequence[int], coords: np.ndarray) -> np.ndarray:
        """<sigma, beta> = psi(sigma N1) where beta = trg(psi); rows sigmas, columns classes"""
        p = self.p
        coords = _as_rows(coords, self.space.dimension)
        trg, table = self._transgressions()
        x, ok = linalg.solve_left(p, trg, coords)
        if not np.all(ok):
            raise TransgressionSolveFailed(f"A class on {self.Q2.name} is not a transgression")
        values = linalg.matmul(p, x, table)
        idx = self._memo["pos"][self.pi1.image[np.asarray(sigmas, dtype=np.int64)]]
        return values[:, idx].T % p

    def pullbacks(self, fam: OmegaFamily, method: str) -> List[Dict]:
        return _pullbacks(self.G, self.pi2, fam, method)

    def liftable_basis(self, fam: OmegaFamily, method: str) -> np.ndarray:
        liftable = [e for e in self.pullbacks(fam, method) if e["liftable"]]
        return linalg.span(self.p, _rows(liftable, self.space.dimension), self.space.dimension)

    def b_provenance(self, fam: OmegaFamily, method: str) -> List[Dict]:
        A = self.a_basis()
        liftable = [e for e in self.pullbacks(fam, method) if e["liftable"]]
        if not liftable:
            return []
        _, inside = linalg.solve_left(self.p, A, _rows(liftable, self.space.dimension))
        return [e for e, ok in zip(liftable, inside) if ok]


def a_space(G: FiniteGroup, N1: Subgroup, N2: Subgroup, p: int) -> SubspaceHandle:
    """Ker(H^2(G/N2) -> H^2(G/N1))"""
    tower = Tower(G, N1, N2, p)
    return SubspaceHandle(tower.space, tower.a_basis())


def a_pairing(G: FiniteGroup, N1: Subgroup, N2: Subgroup, p: int) -> PairingMatrix:
    """N2/N1 N2^p [G, N2] x A -> Z/p through transgression preimages"""
    tower = Tower(G, N1, N2, p)
    return _a_matrix(tower)


def _a_matrix(tower: Tower) -> PairingMatrix:
    G = tower.G
    lower = join_subgroups(G, [tower.N1, power_commutator_subgroup(G, tower.N2, tower.p)])
    reps = coset_basis(G, tower.N2, lower, tower.p)
    A = tower.a_basis()
    return PairingMatrix(reps, list(range(A.shape[0])), tower.evaluate(reps, A), tower.p)


def b_space(G: FiniteGroup, N1: Subgroup, N2: Subgroup, fam: OmegaFamily,
            method: str = "lift") -> SubspaceHandle:
    """Span of the pi2-liftable pullbacks that inflate to 0 on G/N1"""
    _check_inside_tbar(G, [N1, N2], fam)
    tower = Tower(G, N1, N2, fam.p)
    provenance = tower.b_provenance(fam, method)
    handle = SubspaceHandle(tower.space, _rows(provenance, tower.space.dimension), provenance)
    handle.verify()
    return handle


def c_space(G: FiniteGroup, N1: Subgroup, N2: Subgroup, fam: OmegaFamily,
            method: str = "lift") -> SubspaceHandle:
    """Liftable pullback space of G/N2 intersected with the inflation kernel"""
    _check_inside_tbar(G, [N1, N2], fam)
    tower = Tower(G, N1, N2, fam.p)
    return _c_handle(tower, fam, method)


def _c_handle(tower: Tower, fam: OmegaFamily, method: str) -> SubspaceHandle:
    dim = tower.space.dimension
    return SubspaceHandle(tower.space, linalg.intersect(tower.p, tower.liftable_basis(fam, method),
                                                        tower.a_basis(), dim))


def _chain(tower: Tower, fam: OmegaFamily, method: str) -> Tuple[SubspaceHandle, SubspaceHandle, SubspaceHandle]:
    """B, C, A with B <= C <= A checked"""
    provenance = tower.b_provenance(fam, method)
    B = SubspaceHandle(tower.space, _rows(provenance, tower.space.dimension), provenance)
    C = _c_handle(tower, fam, method)
    A = SubspaceHandle(tower.space, tower.a_basis())
    if not (B.is_subspace_of(C) and C.is_subspace_of(A)):
        raise CriterionDisagreement(f"B <= C <= A fails on {tower.G.name}")
    return B, C, A


class KernelCondition:
    """Outcome of comparing the subspace generated by individual kernel elements with the whole kernel

    ctor params:
    holds: bool
    dims: Dict[str, int]
    witness: Cocycle2 | None -- a class in the kernel outside the generated part
    """

    def __init__(self, holds: bool, dims: Dict[str, int], witness: Cocycle2 | None = None) -> None:
        self.holds = holds
        self.dims = dims
        self.witness = witness

    def to_json_dict(self) -> Dict:
        return {
            "holds": self.holds,
            "dims": self.dims,
            "witness": None if self.witness is None else self.witness.to_json_dict()
        }


def _witness(p: int, small: np.ndarray, big: np.ndarray, space: H2Space) -> Cocycle2 | None:
    extra = linalg.extend_basis(p, small, big)
    return space.from_coordinates(big[extra[0]]) if extra.size else None


def kernel_generating_condition(G: FiniteGroup, N1: Subgroup, N2: Subgroup, fam: OmegaFamily,
                                method: str = "lift") -> KernelCondition:
    """B = C, with a class of C outside B when it fails"""
    _check_inside_tbar(G, [N1, N2], fam)
    tower = Tower(G, N1, N2, fam.p)
    B, C, A = _chain(tower, fam, method)
    holds = B.dimension == C.dimension
    return KernelCondition(holds, {"B": B.dimension, "C": C.dimension, "A": A.dimension},
                           None if holds else _witness(fam.p, B.basis, C.basis, tower.space))


class CheckReport:
    """A named check with its verdict and the numbers behind it

    ctor params:
    check: str
    passed: bool | None -- None when the instance was skipped
    details: Dict
    """

    def __init__(self, check: str, passed: bool | None, details: Dict | None = None) -> None:
        self.check = check
        self.passed = passed
        self.details = details or {}

    @property
    def status(self) -> str:
        if self.passed is None:
            return "SKIP"
        return "PASS" if self.passed else "FAIL"

    def to_json_dict(self) -> Dict:
        return {"check": self.check, "status": self.status, **self.details}


def transfer_check(G: FiniteGroup, N: Subgroup, fam: OmegaFamily) -> CheckReport:
    """pi[T(G)] = T(G/N) against the kernel generating condition for (N, Tbar(G))"""
    _check_inside_tbar(G, [N], fam)
    bundle = t_bundle(G, fam)
    Q, pi = quotient_group(G, N)
    side_a = pi.image_of(bundle.T) == t_bundle(Q, fam).T
    # liftability through inflation keeps side (b) off the lift search
    side_b = kernel_generating_condition(G, N, bundle.Tbar, fam, method="inflation")
    if side_a != side_b.holds:
        logger.error("transfer disagreement on %s with N of order %d for %s", G.name, N.order, fam.name)
    return CheckReport("transfer", side_a == side_b.holds, {
        "group": G.name,
        "group_hash": G.hash(),
        "family": fam.name,
        "order_N": N.order,
        "order_T": bundle.T.order,
        "order_Tbar": bundle.Tbar.order,
        "transfer_holds": side_a,
        "kernel_condition": side_b.to_json_dict(),
        "caveat": SHADOW_CAVEAT
    })


class PairingReport:
    """B- and C-pairings with their flags, the A-pairing, and the diagram checks"""

    def __init__(self, a: PairingMatrix, b: PairingMatrix, c: PairingMatrix, checks: Dict[str, bool]) -> None:
        self.a = a
        self.b = b
        self.c = c
        self.checks = checks

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_json_dict(self) -> Dict:
        return {
            "status": "PASS" if self.passed else "FAIL",
            "A": {**self.a.to_json_dict(), **pairing_kernels(self.a).to_json_dict()},
            "B": {**self.b.to_json_dict(), **pairing_kernels(self.b).to_json_dict()},
            "C": {**self.c.to_json_dict(), **pairing_kernels(self.c).to_json_dict()},
            "checks": self.checks
        }


def c_pairing(G: FiniteGroup, N1: Subgroup, N2: Subgroup, fam: OmegaFamily,
              method: str = "lift") -> PairingReport:
    """All three pairings of the tower, restricted from the A-pairing, with perfectness and compatibility checks"""
    _check_inside_tbar(G, [N1, N2], fam)
    p = fam.p
    tower = Tower(G, N1, N2, p)
    B, C, A = _chain(tower, fam, method)
    T = t_bundle(G, fam).T
    T_q1 = t_bundle(tower.Q1, fam).T
    lower_a = join_subgroups(G, [N1, power_commutator_subgroup(G, N2, p)])
    lower_c = intersect_subgroups([N2, join_subgroups(G, [N1, T])])
    lower_b = intersect_subgroups([N2, tower.pi1.preimage_of(T_q1)])
    a_reps = coset_basis(G, N2, lower_a, p)
    b_reps = coset_basis(G, N2, lower_b, p)
    c_reps = coset_basis(G, N2, lower_c, p)
    a_mat = PairingMatrix(a_reps, list(range(A.dimension)), tower.evaluate(a_reps, A.basis), p)
    b_mat = PairingMatrix(b_reps, list(range(B.dimension)), tower.evaluate(b_reps, B.basis), p)
    c_mat = PairingMatrix(c_reps, list(range(C.dimension)), tower.evaluate(c_reps, C.basis), p)
    checks = {
        "A_perfect": pairing_kernels(a_mat).perfect,
        "B_perfect": pairing_kernels(b_mat).perfect,
        "C_perfect": pairing_kernels(c_mat).perfect,
        "left_surjections": lower_a.is_subset(lower_c) and lower_c.is_subset(lower_b),
        # the quotient pairings are restrictions of the A-pairing, so the dropped subgroups pair to zero
        "B_well_defined": not np.any(tower.evaluate(lower_b.generators, B.basis)),
        "C_well_defined": not np.any(tower.evaluate(lower_c.generators, C.basis)),
        "C_zero_iff_equal_joins": (C.dimension == 0) ==
                                  (join_subgroups(G, [N1, T]) == join_subgroups(G, [N2, T])),
        "B_is_A_iff_left_equal": (B == A) == (lower_a == lower_b)
    }
    return PairingReport(a_mat, b_mat, c_mat, checks)


def special_case_check(G: FiniteGroup, N: Subgroup, fam: OmegaFamily, method: str = "lift") -> CheckReport:
    """With N1 = N cap T(G), N2 = N: B equals H^2(G/N)_pi, which equals the inflation kernel"""
    _check_inside_tbar(G, [N], fam)
    T = t_bundle(G, fam).T
    N1 = intersect_subgroups([N, T])
    tower = Tower(G, N1, N, fam.p)
    B, C, A = _chain(tower, fam, method)
    liftable = SubspaceHandle(tower.space, tower.liftable_basis(fam, method))
    return CheckReport("special-case", B == liftable and liftable == A, {
        "group": G.name,
        "family": fam.name,
        "order_N": N.order,
        "dim_B": B.dimension,
        "dim_liftable": liftable.dimension,
        "dim_A": A.dimension
    })


def liftable_inflation_check(G: FiniteGroup, N1: Subgroup, N2: Subgroup, fam: OmegaFamily,
                             method: str = "lift") -> CheckReport:
    """Inflation H^2(G/N2)_pi2 -> H^2(G/N1)_pi1 is onto, and injective iff N1 T(G) = N2 T(G)"""
    _check_inside_tbar(G, [N1, N2], fam)
    tower = Tower(G, N1, N2, fam.p)
    space1 = h2_space(tower.Q1, fam.p)
    lp2 = tower.liftable_basis(fam, method)
    lp1 = _liftable_space(G, tower.pi1, fam, method).basis
    image = np.array([space1.coordinates(inflation(tower.space.from_coordinates(v), tower.pi12)) for v in lp2],
                     dtype=np.int64).reshape(lp2.shape[0], space1.dimension)
    onto = linalg.same_span(fam.p, image, lp1, space1.dimension)
    injective = linalg.rank(fam.p, image) == lp2.shape[0]
    T = t_bundle(G, fam).T
    joins_equal = join_subgroups(G, [N1, T]) == join_subgroups(G, [N2, T])
    return CheckReport("liftable-inflation", onto and injective == joins_equal, {
        "group": G.name,
        "family": fam.name,
        "dim_liftable_2": int(lp2.shape[0]),
        "dim_liftable_1": int(lp1.shape[0]),
        "onto": onto,
        "injective": injective,
        "joins_equal": joins_equal
    })


def quotient_kernel_condition(G: FiniteGroup, fam: OmegaFamily) -> KernelCondition:
    """Pullbacks to G/Tbar(G) that die in H^2(G) generate all of span(pullbacks) cap Ker(inf)"""
    p = fam.p
    bundle = t_bundle(G, fam)
    Qb, pib = quotient_group(G, bundle.Tbar)
    space = h2_space(Qb, p)
    dim = space.dimension
    rows = _rows(_pullbacks(G, pib, fam, None), dim)
    kernel = inflation_kernel(space, pib)
    whole = linalg.intersect(p, rows, kernel, dim)
    _, inside = linalg.solve_left(p, kernel, rows)
    generated = linalg.span(p, rows[inside], dim)
    holds = generated.shape[0] == whole.shape[0]
    return KernelCondition(holds, {"pullbacks": int(linalg.rank(p, rows)), "kernel": int(whole.shape[0]),
                                   "generated": int(generated.shape[0])},
                           None if holds else _witness(p, generated, whole, space))


def filtration_transfer_check(Q: FiniteGroup, N: Subgroup, fam: OmegaFamily) -> CheckReport:
    """For G = Q/N with Q a free-nilpotent stand-in and N inside its level-n term:
    Tbar(G) is the level-n term, and T(G) is the level-(n+1) term iff the quotient kernel condition holds"""
    n, p, kind = fam.n, fam.p, fam.filtration_kind
    if not N.is_subset(filtration(Q, kind, p, n).term(n)):
        raise ValueError(f"Subgroup of order {N.order} is not inside the level-{n} {kind} term")
    G, _ = quotient_group(Q, N)
    chain = filtration(G, kind, p, n + 1)
    bundle = t_bundle(G, fam)
    tbar_matches = bundle.Tbar == chain.term(n)
    t_matches = bundle.T == chain.term(n + 1)
    condition = quotient_kernel_condition(G, fam)
    return CheckReport("filtration-transfer", tbar_matches and t_matches == condition.holds, {
        "group": G.name,
        "family": fam.name,
        "filtration": kind,
        "orders": chain.orders(),
        "order_T": bundle.T.order,
        "order_Tbar": bundle.Tbar.order,
        "tbar_is_level_n": tbar_matches,
        "t_is_level_n_plus_1": t_matches,
        "kernel_condition": condition.to_json_dict(),
        "caveat": SHADOW_CAVEAT
    })


def random_normal_subgroups(G: FiniteGroup, inside: Subgroup, count: int,
                            rng: np.random.Generator) -> List[Subgroup]:
    """Normal closures of random elements of a normal subgroup, duplicates dropped"""
    found: List[Subgroup] = []
    if inside.order == 1:
        return found
    for _ in range(count):
        x = int(rng.choice(inside.members[1:]))
        N = normal_closure(G, [x])
        if N not in found:
            found.append(N)
    return found


SWEEP_CHECKS = ("transfer", "pairings", "liftability")


def _skip(check: str, G: FiniteGroup, fam: OmegaFamily, N: Subgroup, reason: str) -> CheckReport:
    return CheckReport(check, None, {"group": G.name, "family": fam.name, "order_N": N.order,
                                     "reason": reason})


def liftability_triples(G: FiniteGroup, N: Subgroup, fam: OmegaFamily, limit: int) -> CheckReport:
    """liftability_crosscheck on up to limit homs G/N -> Gbar per extension"""
    Q, pi = quotient_group(G, N)
    triples = disagreements = 0
    for ext in fam.extensions:
        for count, rhobar in enumerate(iter_homs(Q, ext.Gbar)):
            if count >= limit:
                break
            triples += 1
            if not liftability_crosscheck(ext, pi, rhobar, fam).agree:
                disagreements += 1
    return CheckReport("liftability", disagreements == 0, {
        "group": G.name,
        "family": fam.name,
        "order_N": N.order,
        "triples": triples,
        "disagreements": disagreements
    })


def _pairing_check(G: FiniteGroup, N: Subgroup, fam: OmegaFamily) -> CheckReport:
    report = c_pairing(G, G.trivial(), N, fam, method="lift")
    return CheckReport("pairings", report.passed, {"group": G.name, "family": fam.name,
                                                   "order_N": N.order, **report.to_json_dict()})


def _sweep_group(G: FiniteGroup, fam: OmegaFamily, randoms: int, seed: int,
                 checks: Sequence[str], lift_limit: int) -> List[CheckReport]:
    if not G.is_p_group(fam.p):
        return []
    bundle = t_bundle(G, fam)
    cap = limits.current().h2_cap
    if G.order // bundle.Tbar.order > cap:
        return [_skip(c, G, fam, bundle.Tbar, f"|G/Tbar(G)| exceeds {cap}") for c in checks]
    rng = np.random.default_rng(seed)
    subs = [G.trivial(), bundle.Tbar]
    for N in random_normal_subgroups(G, bundle.Tbar, randoms, rng):
        if N not in subs:
            subs.append(N)
    reports = []
    for N in subs:
        for check in checks:
            try:
                if check == "transfer":
                    reports.append(transfer_check(G, N, fam))
                elif check == "pairings":
                    reports.append(_pairing_check(G, N, fam))
                else:
                    reports.append(liftability_triples(G, N, fam, lift_limit))
            except (GroupTooLarge, ResourceExhausted) as e:
                reports.append(_skip(check, G, fam, N, str(e)))
    return reports


def transfer_sweep(groups: Sequence[FiniteGroup], families: Sequence[OmegaFamily], seed: int = 0,
                   randoms: int = 2, workers: int = 1, checks: Sequence[str] = ("transfer",),
                   lift_limit: int = 8) -> List[CheckReport]:
    """Checks over groups x families, N ranging over 1, Tbar(G) and random normal subgroups of Tbar(G)"""
    unknown = set(checks) - set(SWEEP_CHECKS)
    if unknown:
        raise ValueError(f"Unknown sweep checks {sorted(unknown)}")
    tasks = [(G, fam, seed + i) for i, G in enumerate(groups) for fam in families]
    if workers <= 1:
        parts = [_sweep_group(G, fam, randoms, s, checks, lift_limit) for G, fam, s in tasks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda t: _sweep_group(t[0], t[1], randoms, t[2], checks, lift_limit),
                                  tasks))
    reports = [r for part in parts for r in part]
    logger.info("sweep: %d instances, %d failed", len(reports),
                sum(r.status == "FAIL" for r in reports))
    return reports


def example_two_shadow(G: FiniteGroup, p: int) -> CheckReport:
    """For the order-p^4 metacyclic group: G^(3,p) differs from T^{Z/p^2} cap T^{U2(Z/p)},
    the quotient by the latter is abelian and G/G^(3,p) is non-abelian on two generators"""
    chain = lower_p_central(G, p, 3)
    third = chain.term(3)
    inter = intersect_subgroups([t_subgroup(G, cyclic_group(p * p)), t_subgroup(G, build_unitriangular(2, p))])
    Q_inter, _ = quotient_group(G, inter)
    Q_third, _ = quotient_group(G, third)
    rank = len(h1(Q_third, p))
    details = {
        "group": G.name,
        "order_G3": third.order,
        "order_intersection": inter.order,
        "differ": third != inter,
        "intersection_quotient_abelian": Q_inter.is_abelian(),
        "G3_quotient_abelian": Q_third.is_abelian(),
        "G3_quotient_generators": rank
    }
    passed = details["differ"] and details["intersection_quotient_abelian"] \
        and not details["G3_quotient_abelian"] and rank == 2
    return CheckReport("example-two", passed, details)
