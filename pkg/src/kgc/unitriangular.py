"""Unitriangular groups, their corner quotients, M_{p^3}, and the extension families built from them."""
import functools
import hashlib
import logging
from typing import List, Dict, Tuple

import numpy as np
from sympy import factorint, isprime

from kgc.elements import MatrixElement
from kgc.group import (FiniteGroup, GroupHom, Subgroup, cyclic_group, generate_group,
                       intersect_subgroups, quotient_group)

logger = logging.getLogger(__name__)

FAMILY_LABELS = ("zassenhaus", "lower-central", "mixed")


def _prime_of(m: int) -> int:
    factors = factorint(m)
    if len(factors) != 1:
        raise ValueError(f"Modulus {m} is not a prime power")
    return next(iter(factors))


def _elementary(size: int, i: int, j: int, value: int, m: int) -> MatrixElement:
    a = np.eye(size, dtype=np.int64)
    a[i, j] = value
    return MatrixElement(a, m)


@functools.lru_cache(maxsize=None)
def build_unitriangular(n: int, m: int) -> FiniteGroup:
    """U_n(Z/m): unipotent upper-triangular (n+1)x(n+1) matrices, from the superdiagonal generators"""
    if n < 1 or m < 2:
        raise ValueError(f"Invalid unitriangular parameters n={n}, m={m}")
    gens = [_elementary(n + 1, i, i + 1, 1, m) for i in range(n)]
    return generate_group(gens, name=f"U{n}(Z/{m})")


@functools.lru_cache(maxsize=None)
def build_elementary_abelian(p: int, r: int) -> FiniteGroup:
    """(Z/p)^r as the matrices I + sum a_i E_{i,last}"""
    if r < 1:
        return generate_group([], name="1")
    gens = [_elementary(r + 1, i, r, 1, p) for i in range(r)]
    return generate_group(gens, name=f"(Z/{p})^{r}")


class CentralExtension:
    """0 -> Z -> E -> Gbar -> 1 with Z cyclic of prime order p and a normalized set-section

    ctor params:
    label: str -- e.g. "U2(Z/3)" or "M27"
    p: int -- order of Z
    Z: FiniteGroup -- cyclic, id z is the residue z
    E: FiniteGroup
    Gbar: FiniteGroup
    iota: GroupHom -- Z -> E, central and injective
    lam: GroupHom -- E -> Gbar, surjective with kernel iota(Z)
    section: np.ndarray -- Gbar id -> E id, section[0] = 0
    gammas: List[GroupHom] -- homs out of Gbar whose kernels meet trivially
    embedding: GroupHom -- Z -> Gbar, injective
    """

    def __init__(self, label: str, p: int, Z: FiniteGroup, E: FiniteGroup, Gbar: FiniteGroup,
                 iota: GroupHom, lam: GroupHom, section: np.ndarray,
                 gammas: List[GroupHom] | None = None, embedding: GroupHom | None = None) -> None:
        self.label = label
        self.p = p
        self.Z = Z
        self.E = E
        self.Gbar = Gbar
        self.iota = iota
        self.lam = lam
        self.section = np.asarray(section, dtype=np.int64)
        self.gammas = gammas or []
        self.embedding = embedding

    def kernel(self) -> Subgroup:
        return self.iota.image_of()

    def verify(self) -> None:
        """ValueError unless every structural property of the extension holds"""
        E = self.E
        Zimg = self.kernel()
        if not self.iota.is_injective():
            raise ValueError(f"{self.label}: iota is not injective")
        if not Zimg.is_subset(E.center()):
            raise ValueError(f"{self.label}: iota(Z) is not central")
        if not self.lam.is_surjective() or self.lam.kernel() != Zimg:
            raise ValueError(f"{self.label}: lambda is not onto with kernel iota(Z)")
        if self.section[0] != 0 or \
                not np.array_equal(self.lam.image[self.section], np.arange(self.Gbar.order)):
            raise ValueError(f"{self.label}: section does not split lambda")
        if self.gammas:
            kernels = intersect_subgroups([g.kernel() for g in self.gammas])
            if not kernels.is_trivial():
                raise ValueError(f"{self.label}: gamma kernels meet in {kernels.order} elements")
        if self.embedding is not None and not self.embedding.is_injective():
            raise ValueError(f"{self.label}: Z does not embed in Gbar")

    def to_json_dict(self) -> Dict:
        return {
            "label": self.label,
            "p": self.p,
            "order_E": self.E.order,
            "order_Gbar": self.Gbar.order,
            "section": "corner-reduced representative",
            "section_hash": hashlib.sha256(self.section.tobytes()).hexdigest()[:16]
        }


def _embed_z(Z: FiniteGroup, Gbar: FiniteGroup, p: int) -> GroupHom | None:
    """Z -> Gbar through the first element of order p"""
    candidates = np.nonzero(Gbar.element_orders() == p)[0]
    if candidates.size == 0:
        return None
    return GroupHom.from_generator_images(Z, Gbar, [int(candidates[0])])


@functools.lru_cache(maxsize=None)
def build_bar_extension(n: int, m: int) -> CentralExtension:
    """U_n(Z/m) over its quotient by the order-p part (m/p)Z/m of the corner entry"""
    p = _prime_of(m)
    E = build_unitriangular(n, m)
    step = m // p
    corner = E.find(_elementary(n + 1, 0, n, step, m))
    Z = cyclic_group(p)
    iota = GroupHom.from_generator_images(Z, E, [corner])
    Gbar, lam = quotient_group(E, iota.image_of())
    # the coset representative whose corner entry lies in 0..m/p-1
    corners = np.array([e.entries[0, n] for e in E.concrete])
    reps = np.nonzero(corners < step)[0]
    section = np.zeros(Gbar.order, dtype=np.int64)
    section[lam.image[reps]] = reps
    ext = CentralExtension(f"{E.name}/{p}", p, Z, E, Gbar, iota, lam, section)
    ext.gammas = list(gamma_homs(ext))
    ext.embedding = _embed_z(Z, Gbar, p)
    logger.info("built extension %s: |E|=%d |Gbar|=%d", ext.label, E.order, Gbar.order)
    return ext


def _matrix_map(ext: CentralExtension, target: FiniteGroup, transform) -> GroupHom:
    E = ext.E
    image = np.array([target.find(transform(E.concrete[e])) for e in ext.section])
    return GroupHom(ext.Gbar, target, image)


def gamma_homs(ext: CentralExtension) -> Tuple[GroupHom, ...]:
    """Homs out of Gbar with trivially intersecting kernels.

    Size index 1 gives the embedding x -> p x of Z/p^(k-1) into Z/p^k (twice, as
    gamma_1 = gamma_2). Otherwise gamma_1 zeroes the first row and gamma_2 the last
    column off the diagonal; for a modulus p^k with k > 1 a third map reduces the
    entries mod p^(k-1).
    """
    E = ext.E
    size = E.concrete[0].dimension
    m = E.concrete[0].modulus
    p = ext.p
    if size == 2:
        emb = _matrix_map(ext, E, lambda a: MatrixElement(
            np.eye(2, dtype=np.int64) + p * np.triu(a.entries, 1), m))
        return (emb, emb)

    def zero_first_row(a: MatrixElement) -> MatrixElement:
        b = a.entries.copy()
        b[0, 1:] = 0
        return MatrixElement(b, m)

    def zero_last_column(a: MatrixElement) -> MatrixElement:
        b = a.entries.copy()
        b[:-1, -1] = 0
        return MatrixElement(b, m)

    gammas = [_matrix_map(ext, E, zero_first_row), _matrix_map(ext, E, zero_last_column)]
    if m > p:
        smaller = build_unitriangular(size - 1, m // p)
        gammas.append(_matrix_map(ext, smaller, lambda a: MatrixElement(a.entries, m // p)))
    return tuple(gammas)


@functools.lru_cache(maxsize=None)
def build_mp3(p: int) -> CentralExtension:
    """0 -> Z/p -> M_{p^3} -> (Z/p)^2 -> 0 with r -> (1,0), s -> (0,1).

    M_{p^3} is realized over Z/p^2 by r = [[1,1],[0,1]] and s = [[1-p,0],[0,1]],
    so that s^-1 r s = r^(1+p) and [r, s] = r^p.
    """
    if p == 2 or not isprime(p):
        raise ValueError(f"M_p^3 needs an odd prime, got {p}")
    m = p * p
    r = MatrixElement([[1, 1], [0, 1]], m)
    s = MatrixElement([[1 - p, 0], [0, 1]], m)
    E = generate_group([r, s], name=f"M{p ** 3}")
    rid, sid = E.generators
    if E.power(rid, m) != 0 or E.power(sid, p) != 0 or \
            E.commutator(rid, sid) != E.power(rid, p):
        raise ValueError(f"M{p ** 3} generators break the defining relations")
    Gbar = build_elementary_abelian(p, 2)
    x1, x2 = Gbar.generators
    lam = GroupHom.from_generator_images(E, Gbar, [x1, x2])
    Z = cyclic_group(p)
    iota = GroupHom.from_generator_images(Z, E, [E.power(rid, p)])
    section = np.zeros(Gbar.order, dtype=np.int64)
    for a in range(p):
        for b in range(p):
            x = Gbar.mul(Gbar.power(x1, a), Gbar.power(x2, b))
            section[x] = E.mul(E.power(sid, b), E.power(rid, a))
    emb = GroupHom.from_generator_images(Gbar, E, [E.power(rid, p), E.mul(sid, E.power(rid, p))])
    ext = CentralExtension(E.name, p, Z, E, Gbar, iota, lam, section, gammas=[emb],
                           embedding=_embed_z(Z, Gbar, p))
    return ext


class OmegaFamily:
    """A labelled family of central extensions with kernel Z/p

    ctor params:
    label: str -- one of zassenhaus, lower-central, mixed
    n: int -- level; 2 for the mixed family
    p: int
    extensions: List[CentralExtension]
    """

    def __init__(self, label: str, n: int, p: int, extensions: List[CentralExtension]) -> None:
        if label not in FAMILY_LABELS:
            raise ValueError(f"Unknown family label {label!r}")
        self.label = label
        self.n = n
        self.p = p
        self.extensions = extensions

    @property
    def name(self) -> str:
        return f"mixed:{self.p}" if self.label == "mixed" else f"{self.label}:{self.n}:{self.p}"

    @property
    def filtration_kind(self) -> str:
        """The filtration whose (n+1)-th term T(free) equals for this family"""
        return "zassenhaus" if self.label == "zassenhaus" else "lower-central"

    def verify(self) -> None:
        for ext in self.extensions:
            ext.verify()
            if not ext.gammas:
                raise ValueError(f"{ext.label}: no gamma witnesses")
            if ext.embedding is None:
                raise ValueError(f"{ext.label}: no embedding of Z into Gbar")

    def to_json_dict(self) -> Dict:
        return {
            "family": self.name,
            "extensions": [ext.to_json_dict() for ext in self.extensions]
        }


@functools.lru_cache(maxsize=None)
def omega_family(label: str, n: int, p: int) -> OmegaFamily:
    if not isprime(p):
        raise ValueError(f"{p} is not a prime")
    if label == "zassenhaus":
        if n < 2:
            raise ValueError("zassenhaus family needs n >= 2")
        exts = [build_bar_extension(n, p)]
    elif label == "lower-central":
        if n < 2:
            raise ValueError("lower-central family needs n >= 2")
        exts = [build_bar_extension(s, p ** (n - s + 1)) for s in range(1, n + 1)]
    elif label == "mixed":
        exts = [build_bar_extension(1, p * p), build_mp3(p)]
        n = 2
    else:
        raise ValueError(f"Unknown family label {label!r}")
    fam = OmegaFamily(label, n, p, exts)
    fam.verify()
    return fam
