"""Truncated Magnus algebra over F_p, Lyndon words and free-nilpotent stand-ins.

Free-group words are tuples of nonzero letters: +i is x_i and -i its inverse,
with letters numbered from 1. A series of degree cutoff d stores one
coefficient vector per degree e <= d, indexed by the words of length e read as
base-k numbers with the first letter most significant.
"""
import hashlib
import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Dict, Any, Hashable, Sequence, Tuple

import numpy as np
from sympy import divisors, factorint, isprime

from kgc import limits, linalg
from kgc.elements import ConcreteElement
from kgc.errors import ClosureCapExceeded, CriterionDisagreement, WordTooShort
from kgc.filtrations import filtration
from kgc.group import COMMUTATOR_CONVENTION, FiniteGroup, generate_group
from kgc.unitriangular import build_unitriangular, omega_family

logger = logging.getLogger(__name__)

Word = Tuple[int, ...]


class TruncatedSeries:
    """An element of F_p<<X_1..X_k>> modulo words longer than deg

    ctor params:
    k: int -- alphabet size
    p: int
    deg: int -- cutoff, coefficients of longer words are dropped
    coeffs: List[np.ndarray] -- coeffs[e] has k**e entries
    """

    def __init__(self, k: int, p: int, deg: int, coeffs: List[np.ndarray]) -> None:
        if deg < 1:
            raise ValueError(f"Truncation degree must be at least 1, got {deg}")
        if len(coeffs) != deg + 1 or any(c.shape != (k ** e,) for e, c in enumerate(coeffs)):
            raise ValueError("Coefficient vectors do not match the alphabet and degree")
        self.k = k
        self.p = p
        self.deg = deg
        self.coeffs = [np.mod(np.asarray(c, dtype=np.int64), p) for c in coeffs]

    @classmethod
    def one(cls, k: int, p: int, deg: int) -> "TruncatedSeries":
        coeffs = [np.zeros(k ** e, dtype=np.int64) for e in range(deg + 1)]
        coeffs[0][0] = 1
        return cls(k, p, deg, coeffs)

    @classmethod
    def generator(cls, i: int, k: int, p: int, deg: int) -> "TruncatedSeries":
        """1 + X_i, letters numbered from 1"""
        if not 1 <= i <= k:
            raise ValueError(f"Letter {i} outside the alphabet 1..{k}")
        s = cls.one(k, p, deg)
        s.coeffs[1][i - 1] = 1
        return s

    def _same_algebra(self, other: "TruncatedSeries") -> None:
        if (self.k, self.p, self.deg) != (other.k, other.p, other.deg):
            raise ValueError("Series live in different truncated algebras")

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._same_algebra(other)
        out = [np.zeros(self.k ** e, dtype=np.int64) for e in range(self.deg + 1)]
        for i, a in enumerate(self.coeffs):
            if not a.any():
                continue
            for j in range(self.deg + 1 - i):
                b = other.coeffs[j]
                if b.any():
                    out[i + j] += np.outer(a, b).ravel()
        return TruncatedSeries(self.k, self.p, self.deg, out)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._same_algebra(other)
        return TruncatedSeries(self.k, self.p, self.deg,
                               [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._same_algebra(other)
        return TruncatedSeries(self.k, self.p, self.deg,
                               [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TruncatedSeries) and \
            (self.k, self.p, self.deg) == (other.k, other.p, other.deg) and \
            all(np.array_equal(a, b) for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self) -> int:
        return hash(self.key())

    def key(self) -> bytes:
        return b"".join(c.tobytes() for c in self.coeffs)

    def inverse(self) -> "TruncatedSeries":
        """Geometric series sum (1 - a)^m, exact in the truncation"""
        if self.coeffs[0][0] % self.p == 0:
            raise ValueError("Series with zero constant term is not invertible")
        c0 = pow(int(self.coeffs[0][0]), -1, self.p)
        one = TruncatedSeries.one(self.k, self.p, self.deg)
        scaled = TruncatedSeries(self.k, self.p, self.deg, [c0 * c for c in self.coeffs])
        u = one - scaled
        result, term = one, one
        for _ in range(self.deg):
            term = term * u
            result = result + term
        return TruncatedSeries(self.k, self.p, self.deg, [c0 * c for c in result.coeffs])

    def component(self, e: int) -> np.ndarray:
        return self.coeffs[e]

    def valuation(self) -> int:
        """Lowest positive degree with a nonzero coefficient, deg + 1 if none"""
        for e in range(1, self.deg + 1):
            if self.coeffs[e].any():
                return e
        return self.deg + 1

    def is_one(self) -> bool:
        return self.coeffs[0][0] == 1 and self.valuation() == self.deg + 1

    def terms(self) -> Dict[str, int]:
        """Nonzero coefficients keyed by words like "X1X2"; the constant term keys as "1" """
        out: Dict[str, int] = {}
        for e, c in enumerate(self.coeffs):
            for idx in np.nonzero(c)[0]:
                letters = np.unravel_index(int(idx), (self.k,) * e) if e else ()
                out["".join(f"X{int(x) + 1}" for x in letters) or "1"] = int(c[idx])
        return out

    def to_json_dict(self) -> Dict:
        return {
            "k": self.k,
            "p": self.p,
            "deg": self.deg,
            "terms": self.terms()
        }


class LyndonWord:
    """A word over letters 1..k strictly smaller than each of its proper suffixes

    ctor params:
    letters: Sequence[int]
    """

    def __init__(self, letters: Sequence[int]) -> None:
        self.letters = tuple(int(x) for x in letters)
        if not is_lyndon(self.letters):
            raise ValueError(f"{self.letters} is not a Lyndon word")

    def __len__(self) -> int:
        return len(self.letters)

    def __lt__(self, other: "LyndonWord") -> bool:
        return self.letters < other.letters

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LyndonWord) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def __repr__(self) -> str:
        return f"LyndonWord({''.join(map(str, self.letters))})"

    def to_json_dict(self) -> List[int]:
        return list(self.letters)


def is_lyndon(letters: Sequence[int]) -> bool:
    w = tuple(letters)
    return len(w) > 0 and all(w < w[i:] for i in range(1, len(w)))


def lyndon_words(k: int, n: int) -> List[LyndonWord]:
    """Lyndon words of length exactly n over 1..k, in lexicographic order (Duval's generator)"""
    if k < 1 or n < 1:
        return []
    found: List[LyndonWord] = []
    w = [-1]
    while w:
        w[-1] += 1
        m = len(w)
        if m == n:
            found.append(LyndonWord([x + 1 for x in w]))
        while len(w) < n:
            w.append(w[-m])
        while w and w[-1] == k - 1:
            w.pop()
    return found


def _mobius(d: int) -> int:
    exps = factorint(d)
    if any(e > 1 for e in exps.values()):
        return 0
    return -1 if len(exps) % 2 else 1


def necklace_count(k: int, n: int) -> int:
    """(1/n) sum over d | n of mu(d) k^(n/d)"""
    if n < 1:
        raise ValueError(f"Word length must be positive, got {n}")
    return sum(_mobius(d) * k ** (n // d) for d in divisors(n)) // n


# free-group words

def reduce_word(word: Sequence[int]) -> Word:
    out: List[int] = []
    for x in word:
        if x == 0:
            raise ValueError("Letter 0 is not a generator")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(int(x))
    return tuple(out)


def inverse_word(word: Sequence[int]) -> Word:
    return tuple(-int(x) for x in reversed(word))


def commutator_word(a: Sequence[int], b: Sequence[int]) -> Word:
    """[a, b] = a^-1 b^-1 a b"""
    return reduce_word(inverse_word(a) + inverse_word(b) + tuple(a) + tuple(b))


def conjugate_word(g: Sequence[int], x: Sequence[int]) -> Word:
    """g^-1 x g"""
    return reduce_word(inverse_word(g) + tuple(x) + tuple(g))


def power_word(word: Sequence[int], m: int) -> Word:
    base = tuple(word) if m >= 0 else inverse_word(word)
    return reduce_word(base * abs(m))


def random_word(k: int, length: int, rng: np.random.Generator) -> Word:
    letters = rng.integers(1, k + 1, size=length) * rng.choice([-1, 1], size=length)
    return reduce_word(letters.tolist())


def word_rank(word: Sequence[int]) -> int:
    return max((abs(x) for x in word), default=0)


def tau(w: Sequence[int]) -> Word:
    """[a_1, [a_2, ... [a_{n-1}, a_n]...]] for the letters of w"""
    if len(w) < 2:
        raise WordTooShort(f"Iterated commutator needs at least 2 letters, got {len(w)}")
    result: Word = (int(w[-1]),)
    for a in reversed(w[:-1]):
        result = commutator_word((int(a),), result)
    return result


def magnus_image(word: Sequence[int], k: int, p: int, deg: int) -> TruncatedSeries:
    """x_i -> 1 + X_i, x_i^-1 -> its truncated geometric inverse"""
    if word_rank(word) > k:
        raise ValueError(f"Word uses letters beyond the alphabet 1..{k}")
    gens = [TruncatedSeries.generator(i, k, p, deg) for i in range(1, k + 1)]
    invs = [g.inverse() for g in gens]
    result = TruncatedSeries.one(k, p, deg)
    for x in word:
        result = result * (gens[x - 1] if x > 0 else invs[-x - 1])
    return result


class MembershipVerdict:
    """Whether a word lies in the (n+1)-th Zassenhaus term of the free group

    ctor params:
    word: Word
    p: int
    n: int
    magnus: bool -- Magnus image is 1 through degree n
    matrix: bool -- every generator-image tuple into U_n(Z/p) sends the word to 1
    exhaustive: bool -- matrix criterion ran over all tuples
    tuples: int -- tuples evaluated
    """

    def __init__(self, word: Word, p: int, n: int, magnus: bool, matrix: bool,
                 exhaustive: bool, tuples: int) -> None:
        self.word = word
        self.p = p
        self.n = n
        self.magnus = magnus
        self.matrix = matrix
        self.exhaustive = exhaustive
        self.tuples = tuples

    @property
    def member(self) -> bool:
        return self.magnus

    def __bool__(self) -> bool:
        return self.member

    def to_json_dict(self) -> Dict:
        return {
            "word": list(self.word),
            "p": self.p,
            "level": self.n + 1,
            "member": self.member,
            "magnus": self.magnus,
            "matrix": self.matrix,
            "matrix_mode": "exhaustive" if self.exhaustive else "sampled",
            "tuples": self.tuples
        }


def _image_tuples(order: int, k: int) -> Tuple[np.ndarray, bool]:
    lim = limits.current()
    if order ** k <= lim.membership_tuples:
        return np.indices((order,) * k).reshape(k, -1).T, True
    rng = np.random.default_rng(lim.seed)
    return rng.integers(0, order, size=(lim.membership_samples, k)), False


def evaluate_word(U: FiniteGroup, word: Sequence[int], images: np.ndarray) -> np.ndarray:
    """The word's value for each row of generator images, shaped (tuples, k)"""
    cur = np.zeros(images.shape[0], dtype=np.int64)
    for x in word:
        g = images[:, abs(x) - 1]
        cur = U.mult[cur, g if x > 0 else U.inv[g]]
    return cur


def zassenhaus_membership(word: Sequence[int], p: int, n: int, k: int | None = None) -> MembershipVerdict:
    """Is word in S_(n+1,p)? Magnus valuation and the U_n(Z/p) matrix criterion, cross-checked"""
    word = reduce_word(word)
    k = max(1, word_rank(word)) if k is None else k
    magnus = magnus_image(word, k, p, n).is_one()
    U = build_unitriangular(n, p)
    images, exhaustive = _image_tuples(U.order, k)
    matrix = not evaluate_word(U, word, images).any()
    if matrix != magnus:
        if exhaustive or magnus:
            raise CriterionDisagreement(
                f"word {word}: Magnus says {magnus}, U{n}(Z/{p}) tuples say {matrix}")
        logger.warning("sampled U%d(Z/%d) tuples missed the witness for %s", n, p, word)
    return MembershipVerdict(word, p, n, magnus, matrix, exhaustive, int(images.shape[0]))


class SeriesElement(ConcreteElement):
    """A unit of the truncated Magnus algebra as a closure element

    ctor params:
    series: TruncatedSeries
    """

    kind = "series"

    def __init__(self, series: TruncatedSeries) -> None:
        self.series = series
        self._key = series.key()

    def compose(self, other: "SeriesElement") -> "SeriesElement":
        return SeriesElement(self.series * other.series)

    def identity(self) -> "SeriesElement":
        s = self.series
        return SeriesElement(TruncatedSeries.one(s.k, s.p, s.deg))

    def key(self) -> Hashable:
        return self._key

    def signature(self) -> Tuple:
        s = self.series
        return (self.kind, s.k, s.p, s.deg)

    def to_json_dict(self) -> Any:
        return self.series.terms()


class MatrixStack(ConcreteElement):
    """A tuple of unitriangular matrices, one block of equally sized matrices per modulus

    ctor params:
    blocks: List[np.ndarray] -- block j has shape (count_j, d_j, d_j)
    moduli: List[int]
    """

    kind = "stack"

    def __init__(self, blocks: List[np.ndarray], moduli: List[int]) -> None:
        if len(blocks) != len(moduli):
            raise ValueError("One modulus per block")
        self.moduli = [int(m) for m in moduli]
        self.blocks = [np.mod(np.asarray(b, dtype=np.int64), m) for b, m in zip(blocks, self.moduli)]
        self._key = b"".join(b.tobytes() for b in self.blocks)

    def compose(self, other: "MatrixStack") -> "MatrixStack":
        return MatrixStack([np.matmul(a, b) for a, b in zip(self.blocks, other.blocks)], self.moduli)

    def identity(self) -> "MatrixStack":
        eyes = [np.broadcast_to(np.eye(b.shape[1], dtype=np.int64), b.shape).copy() for b in self.blocks]
        return MatrixStack(eyes, self.moduli)

    def key(self) -> Hashable:
        return self._key

    def signature(self) -> Tuple:
        return (self.kind, tuple((b.shape[0], b.shape[1], m) for b, m in zip(self.blocks, self.moduli)))

    def components(self) -> int:
        return sum(b.shape[0] for b in self.blocks)

    def to_json_dict(self) -> Any:
        return {
            "components": self.components(),
            "digest": hashlib.sha256(self._key).hexdigest()[:16]
        }


class ImplicitGroup:
    """A free-nilpotent stand-in kept as series generators, with no multiplication table

    ctor params:
    k: int
    p: int
    n: int -- the Zassenhaus term n+1 is trivial
    """

    implicit = True

    def __init__(self, k: int, p: int, n: int) -> None:
        self.k = k
        self.p = p
        self.n = n
        self.name = f"Free:zassenhaus:{k}:{p}:{n}"
        self.generators = [TruncatedSeries.generator(i, k, p, n) for i in range(1, k + 1)]

    def identity(self) -> TruncatedSeries:
        return TruncatedSeries.one(self.k, self.p, self.n)

    def mul(self, a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
        return a * b

    def inverse(self, a: TruncatedSeries) -> TruncatedSeries:
        return a.inverse()

    def evaluate(self, word: Sequence[int]) -> TruncatedSeries:
        return magnus_image(word, self.k, self.p, self.n)

    def relators(self) -> List[Word]:
        """tau_w for Lyndon w of length n+1, and x_i^(p^j) for the least p^j >= n+1"""
        rels = [tau(w.letters) for w in lyndon_words(self.k, self.n + 1)]
        q = self.p
        while q < self.n + 1:
            q *= self.p
        rels.extend(power_word((i,), q) for i in range(1, self.k + 1))
        return rels

    def verify(self) -> None:
        for rel in self.relators():
            if not self.evaluate(rel).is_one():
                raise ValueError(f"{self.name}: relator {rel} is not trivial")

    def to_json_dict(self) -> Dict:
        return {
            "name": self.name,
            "implicit": True,
            "k": self.k,
            "p": self.p,
            "n": self.n
        }


def _stack_generators(k: int, p: int, n: int) -> List[MatrixStack]:
    """Generator images in the product over every k-tuple into each lower-central family group"""
    lim = limits.current()
    fam = omega_family("lower-central", n, p)
    groups = [ext.E for ext in fam.extensions]
    if sum(E.order ** k for E in groups) > lim.standin_components:
        raise ClosureCapExceeded(lim.standin_components)
    per_gen: List[List[np.ndarray]] = [[] for _ in range(k)]
    moduli = []
    for E in groups:
        mats = np.array([e.entries for e in E.concrete])
        tuples = np.indices((E.order,) * k).reshape(k, -1)
        for i in range(k):
            per_gen[i].append(mats[tuples[i]])
        moduli.append(E.concrete[0].modulus)
    return [MatrixStack(blocks, moduli) for blocks in per_gen]


def free_nilpotent_standin(k: int, p: int, kind: str, n: int,
                           implicit: bool = False) -> FiniteGroup | ImplicitGroup:
    """The free group on k letters modulo its (n+1)-th Zassenhaus or lower p-central term.

    The Zassenhaus quotient is generated by the 1 + X_i in the degree-n
    truncated Magnus algebra; the lower-central quotient by the generator
    images in every k-tuple of the lower-central family's groups. With
    implicit set, a Zassenhaus closure past the order cap falls back to an
    ImplicitGroup.
    """
    if not isprime(p):
        raise ValueError(f"{p} is not a prime")
    if k < 1 or n < 1:
        raise ValueError(f"Invalid stand-in parameters k={k}, n={n}")
    name = f"Free:{kind}:{k}:{p}:{n}"
    if kind == "zassenhaus":
        gens: List[ConcreteElement] = [SeriesElement(TruncatedSeries.generator(i, k, p, n))
                                       for i in range(1, k + 1)]
    elif kind == "lower-central":
        if n < 2:
            gens = [MatrixStack([np.array([[[1, 1 if j == i else 0], [0, 1]] for j in range(k)])], [p])
                    for i in range(k)]
        else:
            gens = _stack_generators(k, p, n)
    else:
        raise ValueError(f"Unknown filtration kind {kind!r}")
    try:
        G = generate_group(gens, name=name)
    except ClosureCapExceeded:
        if implicit and kind == "zassenhaus":
            logger.warning("%s exceeds the order cap, kept implicit", name)
            Q = ImplicitGroup(k, p, n)
            Q.verify()
            return Q
        raise
    chain = filtration(G, kind, p, n + 1)
    if not chain.term(n + 1).is_trivial():
        raise ValueError(f"{name}: term {n + 1} of the {kind} filtration is not trivial")
    return G


class HarnessReport:
    """Outcome of the Lyndon-commutator separation construction on S/S_(n+1,p)"""

    def __init__(self, p: int, n: int, k: int, hypothesis: bool, items: Dict, verdict: str) -> None:
        self.p = p
        self.n = n
        self.k = k
        self.hypothesis = hypothesis
        self.items = items
        self.verdict = verdict

    @property
    def passed(self) -> bool | None:
        if not self.hypothesis:
            return None
        return self.verdict == "transfer fails"

    def to_json_dict(self) -> Dict:
        return {
            "p": self.p,
            "n": self.n,
            "k": self.k,
            "family": f"zassenhaus:{self.n}:{self.p}",
            "hypothesis_k_large": self.hypothesis,
            "items": self.items,
            "verdict": self.verdict,
            "commutator_convention": COMMUTATOR_CONVENTION
        }


def _commutator_components(k: int, p: int) -> Tuple[List[Tuple[int, int]], np.ndarray]:
    pairs = list(itertools.combinations(range(1, k + 1), 2))
    rows = np.array([magnus_image(tau((i, j)), k, p, 2).component(2) for i, j in pairs],
                    dtype=np.int64)
    return pairs, rows


def _check_conjugates(k: int, p: int, pairs: List[Tuple[int, int]], rows: np.ndarray,
                      count: int, rng: np.random.Generator) -> int:
    """How many random conjugates g^-1 tau_12 tau_ij^-1 g have the predicted degree-2 image"""
    agree = 0
    for _ in range(count):
        idx = int(rng.integers(1, len(pairs)))
        g = random_word(k, 6, rng)
        rel = tau(pairs[0]) + inverse_word(tau(pairs[idx]))
        image = magnus_image(conjugate_word(g, rel), k, p, 2)
        if not image.component(1).any() and \
                np.array_equal(image.component(2), (rows[0] - rows[idx]) % p):
            agree += 1
    return agree


def _search_partition(U: FiniteGroup, comm: np.ndarray, k: int, f1: int, f2: int) -> Tuple[int, int]:
    """Extend (f1, f2) to k images with all pairwise commutators equal; (explored, violations)"""
    c = int(comm[f1, f2])
    explored = 0
    violations = 0

    def extend(chosen: List[int]) -> None:
        nonlocal explored, violations
        if len(chosen) == k:
            if c != 0:
                violations += 1
            return
        ok = np.all(comm[np.asarray(chosen)] == c, axis=0)
        for x in np.nonzero(ok)[0]:
            explored += 1
            extend(chosen + [int(x)])

    extend([f1, f2])
    return explored, violations


def common_commutator_search(U: FiniteGroup, k: int, workers: int = 1) -> Dict:
    """Every f: {1..k} -> U with one common value for [f(i), f(j)], i < j, has that value trivial.

    Partitions on (f(1), f(2)); a partition with [f(1), f(2)] = 1 holds no violation and
    is skipped.
    """
    comm = U.commutator(np.arange(U.order)[:, None], np.arange(U.order)[None, :])
    starts = [(a, b) for a in range(U.order) for b in range(U.order) if comm[a, b] != 0]
    if k < 2:
        return {"partitions": 0, "skipped": U.order ** 2, "explored": 0, "violations": 0}
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        results = list(pool.map(lambda ab: _search_partition(U, comm, k, *ab), starts))
    return {
        "partitions": len(starts),
        "skipped": U.order ** 2 - len(starts),
        "explored": sum(r[0] for r in results),
        "violations": sum(r[1] for r in results)
    }


def counterexample_harness(p: int = 2, n: int = 2, k: int = 9, workers: int = 1,
                           conjugates: int = 100) -> HarnessReport:
    """T(Q/N) is not the image of T(Q) for Q = S/S_(3,p) and N generated by tau_12 tau_ij^-1.

    Everything happens in degree <= 2 of the Magnus algebra: the generators of N
    are commutators, so conjugation only moves their images in degree >= 3.
    """
    if n != 2:
        raise ValueError("The separation construction is implemented for n = 2")
    U = build_unitriangular(n, p)
    hypothesis = k >= U.order + n - 1
    items: Dict[str, Any] = {"order_U": U.order, "k_bound": U.order + n - 1}
    if k < 2:
        return HarnessReport(p, n, k, False, items, "hypothesis fails")
    pairs, rows = _commutator_components(k, p)
    items["independence"] = {
        "commutators": len(pairs),
        "coordinates": k * k,
        "rank": linalg.rank(p, rows)
    }
    diffs = (rows[:1] - rows[1:]) % p
    span_rank = linalg.rank(p, diffs) if diffs.size else 0
    with_tau = linalg.rank(p, np.vstack([diffs, rows[:1]]))
    rng = np.random.default_rng(limits.current().seed)
    agree = _check_conjugates(k, p, pairs, rows, conjugates, rng) if len(pairs) > 1 else 0
    items["non_membership"] = {
        "span_rank": span_rank,
        "rank_with_tau12": with_tau,
        "tau12_outside_N": with_tau > span_rank,
        "conjugates_checked": conjugates if len(pairs) > 1 else 0,
        "conjugates_agreeing": agree
    }
    if not hypothesis:
        logger.info("k = %d is below |U| + n - 1 = %d, no verdict", k, U.order + n - 1)
        return HarnessReport(p, n, k, False, items, "hypothesis fails")
    search = common_commutator_search(U, k, workers)
    items["common_commutator"] = search
    separated = items["independence"]["rank"] == len(pairs) and with_tau > span_rank \
        and search["violations"] == 0 and agree == conjugates
    items["kernel_generating_condition_via_transfer"] = {
        "holds": not separated,
        "derived_from": "transfer condition (a)"
    }
    verdict = "transfer fails" if separated else "inconclusive"
    logger.info("counterexample k=%d: %s, %d nodes explored", k, verdict, search["explored"])
    return HarnessReport(p, n, k, True, items, verdict)
