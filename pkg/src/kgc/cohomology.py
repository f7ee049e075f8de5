"""Mod-p cohomology of finite groups with trivial coefficients, on normalized cochains.

A normalized 2-cocycle f is determined by its generator columns c(g, j) = f(g, s_j):
the cocycle identity f(g, h s) = f(g, h) + f(gh, s) - f(h, s) extends them along
BFS words, and it suffices to impose it on every Cayley edge (h, s). Coboundary
questions are answered from the generator columns alone, so they work on groups
far above the H^2 cap.
"""
import itertools
import logging
from typing import List, Dict, Any, Tuple, Sequence

import numpy as np

from kgc import limits, linalg
from kgc.errors import GroupTooLarge, NotACocycle, NotInvariant
from kgc.group import FiniteGroup, GroupHom, Subgroup, quotient_group
from kgc.homsearch import iter_homs, lift_hom, t_bundle
from kgc.unitriangular import CentralExtension, OmegaFamily, build_bar_extension, build_mp3

logger = logging.getLogger(__name__)

SECTION_CONVENTION = "lowest BFS id in each coset; extensions use the corner-reduced representative"

_CHUNK = 1 << 22


class Cochain1:
    """A 1-cochain G -> Z/p

    ctor params:
    group: FiniteGroup
    p: int
    values: np.ndarray -- one value per element id
    hom: bool -- when set, additivity is verified on all pairs
    """

    def __init__(self, group: FiniteGroup, p: int, values: np.ndarray, hom: bool = False) -> None:
        self.group = group
        self.p = p
        self.values = np.mod(np.asarray(values, dtype=np.int64), p)
        if self.values.shape != (group.order,):
            raise ValueError("Cochain values do not match the group order")
        self.hom = hom
        if hom and not self.is_hom():
            raise ValueError(f"Cochain on {group.name} is not a homomorphism")

    def is_hom(self) -> bool:
        G, v = self.group, self.values
        step = max(1, _CHUNK // G.order)
        for lo in range(0, G.order, step):
            rows = slice(lo, lo + step)
            if np.any(v[G.mult[rows]] != (v[rows, None] + v[None, :]) % self.p):
                return False
        return True

    def __add__(self, other: "Cochain1") -> "Cochain1":
        return Cochain1(self.group, self.p, self.values + other.values, hom=self.hom and other.hom)

    def __rmul__(self, scalar: int) -> "Cochain1":
        return Cochain1(self.group, self.p, scalar * self.values, hom=self.hom)

    def __neg__(self) -> "Cochain1":
        return (-1) * self

    def is_zero(self) -> bool:
        return not np.any(self.values)

    def coboundary(self) -> "Cocycle2":
        """(g, h) -> e(g) + e(h) - e(gh)"""
        G, e = self.group, self.values
        return Cocycle2(G, self.p, e[:, None] + e[None, :] - e[G.mult], check=False)

    def to_json_dict(self) -> Dict:
        G = self.group
        return {
            "group_hash": G.hash(),
            "p": self.p,
            "generator_values": [int(self.values[g]) for g in G.generators]
        }


class Cocycle2:
    """A normalized 2-cocycle G x G -> Z/p

    ctor params:
    group: FiniteGroup
    p: int
    table: np.ndarray -- order x order values
    check: bool -- verify normalization and the cocycle identity
    """

    def __init__(self, group: FiniteGroup, p: int, table: np.ndarray, check: bool = True) -> None:
        self.group = group
        self.p = p
        self.table = np.mod(np.asarray(table, dtype=np.int64), p)
        if self.table.shape != (group.order, group.order):
            raise ValueError("Cocycle table does not match the group order")
        if check:
            self.verify()

    def verify(self) -> None:
        G, f, p = self.group, self.table, self.p
        if np.any(f[0]) or np.any(f[:, 0]):
            raise NotACocycle(f"Cocycle on {G.name} is not normalized")
        step = max(1, _CHUNK // G.order)
        for s in G.generators:
            fs = f[:, s]
            hs = G.mult[:, s]
            for lo in range(0, G.order, step):
                rows = slice(lo, lo + step)
                lhs = f[rows][:, hs]
                rhs = f[rows] + fs[G.mult[rows]] - fs[None, :]
                if np.any(lhs != rhs % p):
                    raise NotACocycle(f"Cocycle identity fails on {G.name}")

    @classmethod
    def zero(cls, group: FiniteGroup, p: int) -> "Cocycle2":
        return cls(group, p, np.zeros((group.order, group.order), dtype=np.int64), check=False)

    def columns(self) -> np.ndarray:
        """f(g, s_j) as an order x generators array"""
        return self.table[:, self.group.generators]

    def __add__(self, other: "Cocycle2") -> "Cocycle2":
        return Cocycle2(self.group, self.p, self.table + other.table, check=False)

    def __sub__(self, other: "Cocycle2") -> "Cocycle2":
        return Cocycle2(self.group, self.p, self.table - other.table, check=False)

    def __rmul__(self, scalar: int) -> "Cocycle2":
        return Cocycle2(self.group, self.p, scalar * self.table, check=False)

    def is_zero(self) -> bool:
        return not np.any(self.table)

    def export(self) -> Dict:
        return {
            "group_hash": self.group.hash(),
            "p": self.p,
            "order": self.group.order,
            "table": self.table.ravel().tolist()
        }

    def to_json_dict(self) -> Dict:
        jd = self.export()
        if self.group.order > 32:
            del jd["table"]
        return jd


def _word_counts(G: FiniteGroup, p: int) -> np.ndarray:
    """How often each generator occurs in each element's BFS word, mod p"""
    key = ("word_counts", p)
    if key not in G.cache:
        k = len(G.generators)
        counts = np.zeros((G.order, k), dtype=np.int64)
        eye = np.eye(k, dtype=np.int64)
        for layer in G.layers:
            counts[layer] = (counts[G.parent[layer]] + eye[G.gen_of[layer]]) % p
        G.cache[key] = counts
    return G.cache[key]


def _as_columns(G: FiniteGroup, f: Any) -> np.ndarray:
    if isinstance(f, Cocycle2):
        if f.group is not G:
            raise ValueError("Cocycle lives on another group")
        return f.columns()
    return np.asarray(f, dtype=np.int64)


class CoboundarySpace:
    """Decides f = delta e from the generator columns of f, without a size cap

    A candidate e is pinned down by its generator values t along BFS words,
    e(x) = counts(x).t + b_f(x); the remaining Cayley edges give M t = r(f).

    ctor params:
    G: FiniteGroup
    p: int
    """

    def __init__(self, G: FiniteGroup, p: int) -> None:
        self.G = G
        self.p = p
        self.gens = np.asarray(G.generators, dtype=np.int64)
        k = self.gens.size
        self.k = k
        self.counts = _word_counts(G, p)
        nxt = G.mult[:, self.gens]
        self.M = ((self.counts[nxt] - self.counts[:, None, :] - np.eye(k, dtype=np.int64)[None])
                  % p).reshape(G.order * k, k)

    def _offsets(self, cols: np.ndarray) -> np.ndarray:
        """b_f for a batch of column arrays shaped (d, order, k)"""
        G = self.G
        b = np.zeros((cols.shape[0], G.order), dtype=np.int64)
        for layer in G.layers:
            par = G.parent[layer]
            b[:, layer] = b[:, par] - cols[:, par, G.gen_of[layer]]
        return b % self.p

    def residuals(self, cols: np.ndarray) -> np.ndarray:
        cols = np.asarray(cols, dtype=np.int64).reshape(-1, self.G.order, self.k)
        b = self._offsets(cols)
        nxt = self.G.mult[:, self.gens]
        r = b[:, :, None] - cols - b[:, nxt]
        return r.reshape(cols.shape[0], -1) % self.p

    def solve(self, f: Any, extras: Sequence[Any] = ()) -> Tuple[np.ndarray, Cochain1] | None:
        """x and e with f - sum x_i extras_i = delta e, or None"""
        G, p = self.G, self.p
        cols = _as_columns(G, f)
        extra_cols = np.array([_as_columns(G, h) for h in extras], dtype=np.int64) \
            .reshape(len(extras), G.order, self.k)
        if self.k == 0:
            return np.zeros(len(extras), dtype=np.int64), Cochain1(G, p, np.zeros(G.order))
        A = np.hstack([self.M, self.residuals(extra_cols).T]) if len(extras) else self.M
        coeffs, ok = linalg.solve_left(p, A.T, self.residuals(cols))
        if not ok[0]:
            return None
        t, x = coeffs[0, :self.k], coeffs[0, self.k:]
        shifted = cols - np.tensordot(x, extra_cols, axes=1) if len(extras) else cols
        e = (self.counts @ t + self._offsets(shifted[None])[0]) % p
        return x % p, Cochain1(G, p, e)

    def is_coboundary(self, f: Any) -> bool:
        return self.solve(f) is not None

    def witness(self, f: Any) -> Cochain1 | None:
        found = self.solve(f)
        return None if found is None else found[1]

    def relations(self, cocycles: Sequence[Any]) -> np.ndarray:
        """Basis of {x : sum x_i cocycles_i is a coboundary}"""
        d = len(cocycles)
        if self.k == 0 or d == 0:
            return np.eye(d, dtype=np.int64)
        cols = np.array([_as_columns(self.G, h) for h in cocycles], dtype=np.int64)
        A = np.hstack([self.M, self.residuals(cols).T])
        null = linalg.null_space(self.p, A, self.k + d)
        return linalg.span(self.p, null[:, self.k:], d)


def coboundary_space(G: FiniteGroup, p: int) -> CoboundarySpace:
    key = ("coboundaries", p)
    if key not in G.cache:
        G.cache[key] = CoboundarySpace(G, p)
    return G.cache[key]


class H2Space:
    """H^2(G, Z/p) = Z^2 / B^2 with a basis of representatives and a coordinate solver

    ctor params:
    G: FiniteGroup -- order at most the configured h2_cap
    p: int
    """

    def __init__(self, G: FiniteGroup, p: int) -> None:
        cap = limits.current().h2_cap
        if G.order > cap:
            raise GroupTooLarge(G.order, cap)
        self.G = G
        self.p = p
        n = G.order
        gens = np.asarray(G.generators, dtype=np.int64)
        k = gens.size
        nu = n * k
        self._extension = self._extension_tensor()
        constraints = linalg.RowSpace(p, nu)
        if k:
            normal = np.zeros((k, nu), dtype=np.int64)
            normal[np.arange(k), np.arange(k)] = 1
            constraints.add(normal)
            hs, js = np.meshgrid(np.arange(n), np.arange(k), indexing="ij")
            hs, js = hs.ravel(), js.ravel()
            xs = G.mult[hs, gens[js]]
            tree = (G.parent[xs] == hs) & (G.gen_of[xs] == js) & (xs != 0)
            hs, js, xs = hs[~tree], js[~tree], xs[~tree]
            batch = max(1, 4096 // n)
            ar = np.arange(n)
            for lo in range(0, hs.size, batch):
                h, j, x = hs[lo:lo + batch], js[lo:lo + batch], xs[lo:lo + batch]
                rows = self._extension[:, x, :] - self._extension[:, h, :]
                b = np.arange(h.size)
                rows[ar[:, None], b[None, :], G.mult[ar[:, None], h[None, :]] * k + j[None, :]] -= 1
                rows[:, b, h * k + j] += 1
                constraints.add(rows.transpose(1, 0, 2).reshape(-1, nu))
        cocycles = constraints.null_space()
        bounds = np.zeros((n, nu), dtype=np.int64)
        if k:
            g_idx, j_idx = np.meshgrid(np.arange(n), np.arange(k), indexing="ij")
            u = (g_idx * k + j_idx).ravel()
            np.add.at(bounds, (g_idx.ravel(), u), 1)
            np.add.at(bounds, (gens[j_idx.ravel()], u), 1)
            np.add.at(bounds, (G.mult[g_idx.ravel(), gens[j_idx.ravel()]], u), -1)
        self.coboundary_basis = linalg.span(p, bounds[1:] % p, nu)
        extra = linalg.extend_basis(p, self.coboundary_basis, cocycles)
        self.basis_vectors = cocycles[extra]
        self.dimension = int(extra.size)
        self.cocycle_dimension = int(cocycles.shape[0])
        self._solver = linalg.CoordinateSolver(p, np.vstack([self.basis_vectors, self.coboundary_basis])) \
            if nu else None
        self.basis = [self.cocycle_from_vector(v) for v in self.basis_vectors]
        logger.info("H2(%s, Z/%d) has dimension %d", G.name, p, self.dimension)

    def _extension_tensor(self) -> np.ndarray:
        """F[g, x] as a linear form in the generator columns"""
        G, p = self.G, self.p
        n, k = G.order, len(G.generators)
        F = np.zeros((n, n, n * k), dtype=np.int16)
        ar = np.arange(n)
        for x in range(1, n):
            y, j = G.parent[x], G.gen_of[x]
            F[:, x, :] = F[:, y, :]
            F[ar, x, G.mult[:, y] * k + j] += 1
            F[:, x, y * k + j] -= 1
            F[:, x, :] %= p
        return F

    def cocycle_from_vector(self, v: np.ndarray) -> Cocycle2:
        table = np.tensordot(self._extension, np.asarray(v, dtype=np.int64), axes=1)
        return Cocycle2(self.G, self.p, table)

    def coordinates(self, f: Cocycle2) -> np.ndarray:
        if f.group is not self.G:
            raise ValueError("Cocycle lives on another group")
        if self._solver is None:
            return np.zeros(0, dtype=np.int64)
        coords, inside = self._solver.coordinates(f.columns().ravel())
        if not inside[0]:
            raise NotACocycle(f"Columns are not a cocycle on {self.G.name}")
        return coords[0, :self.dimension]

    def from_coordinates(self, coords: np.ndarray) -> Cocycle2:
        total = Cocycle2.zero(self.G, self.p)
        for c, b in zip(np.asarray(coords, dtype=np.int64), self.basis):
            if c:
                total = total + int(c) * b
        return total

    def same_class(self, f: Cocycle2, g: Cocycle2) -> bool:
        return bool(np.array_equal(self.coordinates(f), self.coordinates(g)))

    def is_zero(self, f: Cocycle2) -> bool:
        return not np.any(self.coordinates(f))

    def to_json_dict(self) -> Dict:
        return {
            "group": self.G.name,
            "group_hash": self.G.hash(),
            "p": self.p,
            "dim_H2": self.dimension,
            "dim_Z2": self.cocycle_dimension,
            "dim_B2": int(self.coboundary_basis.shape[0])
        }


def h2_space(G: FiniteGroup, p: int) -> H2Space:
    key = ("h2", p)
    if key not in G.cache:
        G.cache[key] = H2Space(G, p)
    return G.cache[key]


def h1(G: FiniteGroup, p: int) -> List[Cochain1]:
    """Basis of Hom(G, Z/p): generator values v with M v = 0, extended along BFS words"""
    space = coboundary_space(G, p)
    if space.k == 0:
        return []
    basis = linalg.null_space(p, space.M, space.k)
    return [Cochain1(G, p, space.counts @ v, hom=True) for v in basis]


def character(G: FiniteGroup, p: int, generator_values: Sequence[int]) -> Cochain1:
    """The hom G -> Z/p with the given generator values; ValueError if there is none"""
    space = coboundary_space(G, p)
    v = np.mod(np.asarray(generator_values, dtype=np.int64), p)
    if v.size != space.k:
        raise ValueError("Need one value per generator")
    if space.k and np.any(space.M @ v % p):
        raise ValueError(f"Generator values {list(v)} do not define a hom on {G.name}")
    return Cochain1(G, p, space.counts @ v if space.k else np.zeros(G.order), hom=True)


def classifying_cocycle(ext: CentralExtension, section: np.ndarray | None = None) -> Cocycle2:
    """(x, y) -> iota^-1(s(x) s(y) s(xy)^-1)"""
    E, Gbar = ext.E, ext.Gbar
    S = ext.section if section is None else np.asarray(section, dtype=np.int64)
    if S[0] != 0 or not np.array_equal(ext.lam.image[S], np.arange(Gbar.order)):
        raise ValueError("Section is not normalized or does not split lambda")
    defect = E.mult[E.mult[S[:, None], S[None, :]], E.inv[S[Gbar.mult]]]
    back = np.full(E.order, -1, dtype=np.int64)
    back[ext.iota.image] = np.arange(ext.Z.order)
    table = back[defect]
    if np.any(table < 0):
        raise ValueError(f"{ext.label}: section defect leaves the kernel")
    return Cocycle2(Gbar, ext.p, table)


def alternative_section(ext: CentralExtension) -> np.ndarray:
    """The section shifted by the kernel generator away from the identity"""
    S = ext.section.copy()
    z = ext.iota.image[1] if ext.Z.order > 1 else 0
    S[1:] = ext.E.mult[S[1:], z]
    return S


def pullback(alpha: Cocycle2, rho: GroupHom) -> Cocycle2:
    """(x, y) -> alpha(rho x, rho y) on the domain of rho"""
    if rho.codomain is not alpha.group:
        raise ValueError("Pullback along a hom into another group")
    img = rho.image
    return Cocycle2(rho.domain, alpha.p, alpha.table[img[:, None], img[None, :]], check=False)


def inflation(alpha: Cocycle2, pi: GroupHom) -> Cocycle2:
    """alpha on Q inflated to G along pi: G -> Q"""
    return pullback(alpha, pi)


def inflated_columns(alpha: Cocycle2, pi: GroupHom) -> np.ndarray:
    """Generator columns of the inflation, without building the full table"""
    img = pi.image
    gens = np.asarray(pi.domain.generators, dtype=np.int64)
    return alpha.table[img[:, None], img[gens][None, :]]


def cup(phi: Cochain1, psi: Cochain1) -> Cocycle2:
    if phi.group is not psi.group:
        raise ValueError("Cup product of cochains on different groups")
    if not (phi.hom or phi.is_hom()) or not (psi.hom or psi.is_hom()):
        raise ValueError("Cup product needs homomorphisms")
    return Cocycle2(phi.group, phi.p, np.outer(phi.values, psi.values))


def bockstein(phi: Cochain1) -> Cocycle2:
    """Integer carry of the lift of phi to {0..p-1}"""
    G, p, v = phi.group, phi.p, phi.values
    if not (phi.hom or phi.is_hom()):
        raise ValueError("Bockstein needs a homomorphism")
    return Cocycle2(G, p, (v[:, None] + v[None, :] - v[G.mult]) // p)


def conj_invariant_h1(G: FiniteGroup, N: Subgroup, p: int) -> List[Cochain1]:
    """Basis of H^1(N)^G, as cochains on N.as_group()"""
    H, inc = N.as_group()
    chars = h1(H, p)
    if not chars:
        return []
    pos = np.full(G.order, -1, dtype=np.int64)
    pos[inc.image] = np.arange(H.order)
    gens = np.asarray(G.generators, dtype=np.int64)
    conj = pos[G.conjugate(gens[:, None], inc.image[None, :])].ravel()
    X = np.array([c.values for c in chars])
    D = (X[:, conj] - np.tile(X, (1, gens.size))) % p
    fixed = linalg.left_null_space(p, D, len(chars))
    return [Cochain1(H, p, linalg.matmul(p, v[None, :], X)[0], hom=True) for v in fixed]


def _coset_section(G: FiniteGroup, pi: GroupHom, alternative: bool = False) -> np.ndarray:
    if alternative:
        last = G.order - 1 - np.unique(pi.image[::-1], return_index=True)[1]
        last[0] = 0
        return last
    return np.unique(pi.image, return_index=True)[1]


def transgression(G: FiniteGroup, N: Subgroup, psi: Cochain1, pi: GroupHom | None = None,
                  alternative_section: bool = False) -> Cocycle2:
    """trg(psi)(x, y) = psi(t(x) t(y) t(xy)^-1) on G/N, t the lowest-id coset section.

    pi, when given, is the projection to use for G/N; its kernel must be N.
    """
    H, inc = N.as_group()
    if psi.group is not H:
        raise ValueError("psi must be a cochain on N.as_group()")
    pos = np.full(G.order, -1, dtype=np.int64)
    pos[inc.image] = np.arange(H.order)
    gens = np.asarray(G.generators, dtype=np.int64)
    if gens.size and np.any(psi.values[pos[G.conjugate(gens[:, None], inc.image[None, :])]]
                            != psi.values[None, :]):
        raise NotInvariant("psi is not invariant under conjugation by G")
    if pi is None:
        Q, pi = quotient_group(G, N)
    elif pi.kernel() != N or not pi.is_surjective():
        raise ValueError("Projection does not have kernel N")
    Q = pi.codomain
    t = _coset_section(G, pi, alternative_section)
    defect = G.mult[G.mult[t[:, None], t[None, :]], G.inv[t[Q.mult]]]
    return Cocycle2(Q, psi.p, psi.values[pos[defect]])


def inflation_kernel(space_Q: H2Space, pi: GroupHom) -> np.ndarray:
    """Coordinates (in space_Q) of a basis of ker(H^2(Q) -> H^2(G))"""
    if pi.codomain is not space_Q.G:
        raise ValueError("Projection does not land in the H^2 group")
    target = coboundary_space(pi.domain, space_Q.p)
    cols = [inflated_columns(b, pi) for b in space_Q.basis]
    return target.relations(cols)


def transgression_image(G: FiniteGroup, N: Subgroup, p: int) -> np.ndarray:
    """Coordinates in H^2(G/N) of a basis of trg(H^1(N)^G)"""
    Q, _ = quotient_group(G, N)
    space = h2_space(Q, p)
    coords = [space.coordinates(transgression(G, N, psi)) for psi in conj_invariant_h1(G, N, p)]
    return linalg.span(p, np.array(coords, dtype=np.int64).reshape(len(coords), space.dimension),
                       space.dimension)


def superdiagonal(ext: CentralExtension) -> np.ndarray:
    """(i, i+1) entries of the section matrix of every Gbar element"""
    E = ext.E
    mats = [E.concrete[e].entries for e in ext.section]
    size = mats[0].shape[0]
    return np.array([[m[i, i + 1] for i in range(size - 1)] for m in mats], dtype=np.int64)


def massey_pullback_set(Q: FiniteGroup, phis: Sequence[Cochain1], fam: OmegaFamily) -> List[Cocycle2]:
    """One representative per class of rhobar^*(alpha) over rhobar: Q -> Ubar_n with
    superdiagonal (phi_1, ..., phi_n); empty when the Massey product is undefined"""
    if fam.label != "zassenhaus":
        raise ValueError("Massey pullbacks need the zassenhaus family")
    ext = fam.extensions[0]
    if len(phis) != fam.n:
        raise ValueError(f"Need {fam.n} characters, got {len(phis)}")
    p = fam.p
    diag = superdiagonal(ext) % p
    wanted = np.array([[phi.values[g] for phi in phis] for g in Q.generators], dtype=np.int64)
    candidates = [np.nonzero(np.all(diag == w, axis=1))[0] for w in wanted]
    alpha = classifying_cocycle(ext)
    space = h2_space(Q, p)
    seen: Dict[bytes, Cocycle2] = {}
    for rhobar in iter_homs(Q, ext.Gbar, candidates=candidates):
        f = pullback(alpha, rhobar)
        key = space.coordinates(f).tobytes()
        seen.setdefault(key, f)
    return list(seen.values())


class LiftabilityReport:
    """The three (or four) faces of one liftability question

    ctor params:
    lifts: bool -- a lift G -> E exists
    inflation_vanishes: bool -- rhobar^*(alpha) inflates to 0 in H^2(G)
    transgression_preimage: bool -- rhobar^*(alpha) lies in trg(H^1(N)^G)
    truncation_vanishes: bool | None -- inflation to G/(N cap T(G)) vanishes, if checked
    """

    def __init__(self, lifts: bool, inflation_vanishes: bool, transgression_preimage: bool,
                 truncation_vanishes: bool | None = None, psi: Cochain1 | None = None) -> None:
        self.lifts = lifts
        self.inflation_vanishes = inflation_vanishes
        self.transgression_preimage = transgression_preimage
        self.truncation_vanishes = truncation_vanishes
        self.psi = psi

    @property
    def agree(self) -> bool:
        verdicts = {self.lifts, self.inflation_vanishes, self.transgression_preimage}
        if self.truncation_vanishes is not None:
            verdicts.add(self.truncation_vanishes)
        return len(verdicts) == 1

    def to_json_dict(self) -> Dict:
        return {
            "status": "PASS" if self.agree else "FAIL",
            "lift_exists": self.lifts,
            "inflation_vanishes": self.inflation_vanishes,
            "transgression_preimage": self.transgression_preimage,
            "truncation_vanishes": self.truncation_vanishes,
            "psi": None if self.psi is None else self.psi.to_json_dict()
        }


def liftability_via_truncation(ext: CentralExtension, pi: GroupHom, rhobar: GroupHom,
                               T: Subgroup) -> bool:
    """rhobar^*(alpha) inflated only as far as G/(N cap T) vanishes"""
    G = pi.domain
    N = pi.kernel()
    M = Subgroup(G, np.nonzero(N.mask & T.mask)[0])
    QM, piM = quotient_group(G, M)
    down = np.zeros(QM.order, dtype=np.int64)
    down[piM.image] = pi.image
    to_q = GroupHom(QM, pi.codomain, down, check=False)
    beta = pullback(classifying_cocycle(ext), rhobar)
    return coboundary_space(QM, ext.p).is_coboundary(inflated_columns(beta, to_q))


def liftability_crosscheck(ext: CentralExtension, pi: GroupHom, rhobar: GroupHom,
                           fam: OmegaFamily | None = None) -> LiftabilityReport:
    """Lift search against inflation vanishing against transgression preimage.

    With a family, kernel(pi) must lie in Tbar(G) and the truncated form is checked too.
    """
    G = pi.domain
    N = pi.kernel()
    truncation = None
    if fam is not None:
        bundle = t_bundle(G, fam)
        if not N.is_subset(bundle.Tbar):
            raise ValueError("kernel of pi is not inside Tbar(G)")
        truncation = liftability_via_truncation(ext, pi, rhobar, bundle.T)
    lifts = lift_hom(ext, pi, rhobar) is not None
    beta = pullback(classifying_cocycle(ext), rhobar)
    vanishes = coboundary_space(G, ext.p).is_coboundary(inflated_columns(beta, pi))
    psis = conj_invariant_h1(G, N, ext.p)
    trgs = [transgression(G, N, psi, pi=pi) for psi in psis]
    found = coboundary_space(pi.codomain, ext.p).solve(beta, trgs)
    psi = None
    if found is not None and psis:
        psi = Cochain1(psis[0].group, ext.p, sum(int(x) * s.values for x, s in zip(found[0], psis)),
                       hom=True)
    report = LiftabilityReport(lifts, vanishes, found is not None, truncation, psi)
    if not report.agree:
        logger.warning("liftability disagreement for %s over %s", ext.label, G.name)
    return report


def all_characters(G: FiniteGroup, p: int) -> List[Cochain1]:
    """Every hom G -> Z/p, as combinations of the h1 basis"""
    basis = h1(G, p)
    table = np.array([b.values for b in basis], dtype=np.int64).reshape(len(basis), G.order)
    return [Cochain1(G, p, np.asarray(c, dtype=np.int64) @ table, hom=True)
            for c in itertools.product(range(p), repeat=len(basis))]


def _mp3_coefficients(heis: CentralExtension) -> Tuple[int, int]:
    """(a, c) with the M_{p^3} class equal to a Bock(chi_1) + c chi_1 cup chi_2"""
    Gbar, p = heis.Gbar, heis.p
    chi1, chi2 = character(Gbar, p, [1, 0]), character(Gbar, p, [0, 1])
    found = coboundary_space(Gbar, p).solve(classifying_cocycle(heis),
                                            [bockstein(chi1), cup(chi1, chi2)])
    if found is None or found[0][1] == 0:
        raise ValueError(f"{heis.label} class is not a Bockstein plus a cup product")
    return int(found[0][0]), int(found[0][1])


def bockstein_cup_dichotomy(G: FiniteGroup, p: int) -> Dict:
    """For psi, xi with Bock(psi) = psi cup xi in H^2(G): psi lifts to Z/p^2, or
    (psi, eta) lifts to M_{p^3} where eta is the multiple of xi that kills the pullback"""
    if p == 2:
        raise ValueError("The Bockstein/cup dichotomy needs an odd prime")
    cyclic, heis = build_bar_extension(1, p * p), build_mp3(p)
    a, c = _mp3_coefficients(heis)
    scale = (-a * pow(c, -1, p)) % p
    ident = GroupHom.identity(G)
    space = coboundary_space(G, p)
    z = cyclic.Gbar.generators[0]
    x1, x2 = heis.Gbar.generators
    H = heis.Gbar
    chars = all_characters(G, p)
    pairs = violations = 0
    for psi in chars:
        bock = bockstein(psi)
        to_cyclic = GroupHom.from_generator_images(
            G, cyclic.Gbar, [cyclic.Gbar.power(z, int(psi.values[g])) for g in G.generators])
        lifts_cyclic = None
        for xi in chars:
            if not space.is_coboundary(bock - cup(psi, xi)):
                continue
            pairs += 1
            if lifts_cyclic is None:
                lifts_cyclic = lift_hom(cyclic, ident, to_cyclic) is not None
            if lifts_cyclic:
                continue
            to_heis = GroupHom.from_generator_images(G, H, [
                H.mul(H.power(x1, int(psi.values[g])), H.power(x2, scale * int(xi.values[g])))
                for g in G.generators])
            if lift_hom(heis, ident, to_heis) is None:
                violations += 1
                logger.warning("neither lift exists on %s", G.name)
    return {
        "group": G.name,
        "p": p,
        "mp3_class": {"bockstein": a, "cup": c},
        "second_coordinate_scale": scale,
        "pairs": pairs,
        "violations": violations,
        "status": "PASS" if violations == 0 else "FAIL"
    }
