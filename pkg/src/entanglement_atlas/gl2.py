"""Matrices and finite subgroups of GL2(Z/nZ).

Group elements are packed into int64 codes ((a*n + b)*n + c)*n + d so that
closures, reductions and conjugation searches run as numpy array operations.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import BadGluing, ModulusMismatch, NonInvertibleGenerator, NotADivisor


# ---------------------------------------------------------------- arithmetic

def factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def units(n: int) -> list[int]:
    return [u for u in range(n) if math.gcd(u, n) == 1] if n > 1 else [0]


@lru_cache(maxsize=None)
def _inverse_table(n: int) -> np.ndarray:
    table = np.zeros(max(n, 1), dtype=np.int64)
    for u in units(n):
        table[u] = pow(u, -1, n) if n > 1 else 0
    return table


def encode(a, b, c, d, n: int):
    return ((a * n + b) * n + c) * n + d


def decode(codes, n: int):
    codes = np.asarray(codes, dtype=np.int64)
    d = codes % n
    rest = codes // n
    c = rest % n
    rest //= n
    b = rest % n
    a = rest // n
    return a, b, c, d


def mul_codes(x, y, n: int):
    """Entrywise product of packed matrices (broadcasting)."""
    a1, b1, c1, d1 = decode(x, n)
    a2, b2, c2, d2 = decode(y, n)
    return encode((a1 * a2 + b1 * c2) % n, (a1 * b2 + b1 * d2) % n,
                  (c1 * a2 + d1 * c2) % n, (c1 * b2 + d1 * d2) % n, n)


def inv_codes(x, n: int):
    a, b, c, d = decode(x, n)
    di = _inverse_table(n)[(a * d - b * c) % n]
    return encode((d * di) % n, (-b * di) % n, (-c * di) % n, (a * di) % n, n)


def conj_codes(g, x, n: int):
    """g x g^-1, broadcasting over both arguments."""
    return mul_codes(mul_codes(g, x, n), inv_codes(g, n), n)


def det_codes(x, n: int):
    a, b, c, d = decode(x, n)
    return (a * d - b * c) % n


def trace_codes(x, n: int):
    a, _, _, d = decode(x, n)
    return (a + d) % n


def reduce_codes(x, n: int, m: int):
    a, b, c, d = decode(x, n)
    return encode(a % m, b % m, c % m, d % m, m)


def crt_codes(x, m1: int, y, m2: int):
    """Glue codes mod m1 and mod m2 (coprime) into codes mod m1*m2."""
    n = m1 * m2
    u1 = (m2 * pow(m2, -1, m1)) % n if m1 > 1 else 0
    u2 = (m1 * pow(m1, -1, m2)) % n if m2 > 1 else 0
    ex = decode(x, m1)
    ey = decode(y, m2)
    parts = [(e1 * u1 + e2 * u2) % n for e1, e2 in zip(ex, ey)]
    return encode(*parts, n)


def identity_code(n: int) -> int:
    return int(encode(1 % n, 0, 0, 1 % n, n))


def minus_identity_code(n: int) -> int:
    return int(encode((-1) % n, 0, 0, (-1) % n, n))


@lru_cache(maxsize=None)
def gl2_codes(n: int) -> np.ndarray:
    """All elements of GL2(Z/nZ), sorted."""
    allc = np.arange(n ** 4, dtype=np.int64)
    dets = det_codes(allc, n)
    ok = np.gcd(dets, n) == 1
    return allc[ok]


@lru_cache(maxsize=None)
def sl2_codes(n: int) -> np.ndarray:
    g = gl2_codes(n)
    return g[det_codes(g, n) == 1 % n]


def gl2_order(n: int) -> int:
    order = 1
    for p, e in factorize(n).items():
        order *= p ** (4 * (e - 1)) * (p * p - 1) * (p * p - p)
    return order


# ---------------------------------------------------------------- matrices

@dataclass(frozen=True)
class ResidueMatrix:
    """A 2x2 matrix with entries reduced modulo `modulus`."""

    modulus: int
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        n = self.modulus
        if n < 1:
            raise ValueError("modulus must be positive")
        for name in "abcd":
            object.__setattr__(self, name, getattr(self, name) % n)

    @classmethod
    def of(cls, n: int, entries: Sequence[int]) -> "ResidueMatrix":
        a, b, c, d = entries
        return cls(n, a, b, c, d)

    @classmethod
    def from_code(cls, code: int, n: int) -> "ResidueMatrix":
        a, b, c, d = (int(v) for v in decode(code, n))
        return cls(n, a, b, c, d)

    @property
    def code(self) -> int:
        return int(encode(self.a, self.b, self.c, self.d, self.modulus))

    @property
    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def det(self) -> int:
        return (self.a * self.d - self.b * self.c) % self.modulus

    def trace(self) -> int:
        return (self.a + self.d) % self.modulus

    def is_invertible(self) -> bool:
        return math.gcd(self.det(), self.modulus) == 1

    def __matmul__(self, other: "ResidueMatrix") -> "ResidueMatrix":
        if other.modulus != self.modulus:
            raise ModulusMismatch(f"{self.modulus} vs {other.modulus}")
        return ResidueMatrix.from_code(int(mul_codes(self.code, other.code, self.modulus)),
                                       self.modulus)

    def inverse(self) -> "ResidueMatrix":
        if not self.is_invertible():
            raise NonInvertibleGenerator(str(self))
        return ResidueMatrix.from_code(int(inv_codes(self.code, self.modulus)), self.modulus)

    def reduce(self, m: int) -> "ResidueMatrix":
        if self.modulus % m:
            raise NotADivisor(f"{m} does not divide {self.modulus}")
        return ResidueMatrix(m, self.a, self.b, self.c, self.d)

    def __str__(self) -> str:
        return f"({self.a},{self.b};{self.c},{self.d})"

    __repr__ = __str__


def as_matrix(n: int, m) -> ResidueMatrix:
    if isinstance(m, ResidueMatrix):
        if m.modulus != n:
            raise ModulusMismatch(f"generator mod {m.modulus} used at modulus {n}")
        return m
    return ResidueMatrix.of(n, tuple(m))


# ---------------------------------------------------------------- groups

def _closure(gen_codes: np.ndarray, n: int) -> np.ndarray:
    seen = np.zeros(n ** 4, dtype=bool)
    start = identity_code(n)
    seen[start] = True
    frontier = np.array([start], dtype=np.int64)
    gens = np.unique(np.asarray(gen_codes, dtype=np.int64))
    while frontier.size:
        prods = mul_codes(frontier[:, None], gens[None, :], n).ravel()
        prods = np.unique(prods)
        new = prods[~seen[prods]]
        seen[new] = True
        frontier = new
    return np.flatnonzero(seen).astype(np.int64)


class FiniteMatrixGroup:
    """A subgroup of GL2(Z/nZ) given by generators and/or its element set."""

    def __init__(self, modulus: int, generators: Iterable = (), elements=None):
        self.modulus = int(modulus)
        self._gens = tuple(as_matrix(self.modulus, g) for g in generators)
        self._elements = None
        if elements is not None:
            self._elements = np.unique(np.asarray(elements, dtype=np.int64))
        self._fingerprint = None

    # -- basic data
    @property
    def elements(self) -> np.ndarray:
        if self._elements is None:
            codes = np.array([g.code for g in self._gens], dtype=np.int64)
            self._elements = _closure(codes, self.modulus)
        return self._elements

    @property
    def order(self) -> int:
        return int(self.elements.size)

    def __len__(self) -> int:
        return self.order

    @property
    def generators(self) -> tuple[ResidueMatrix, ...]:
        if not self._gens and self._elements is not None:
            self._gens = tuple(ResidueMatrix.from_code(int(c), self.modulus)
                               for c in _greedy_generators(self._elements, self.modulus))
        return self._gens

    @property
    def generator_codes(self) -> np.ndarray:
        gens = self.generators
        if not gens:
            return np.array([identity_code(self.modulus)], dtype=np.int64)
        return np.array([g.code for g in gens], dtype=np.int64)

    def contains_codes(self, codes) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64)
        el = self.elements
        idx = np.searchsorted(el, codes)
        idx = np.minimum(idx, el.size - 1)
        return el[idx] == codes

    def __contains__(self, m) -> bool:
        m = as_matrix(self.modulus, m)
        return bool(self.contains_codes(np.array([m.code]))[0])

    def __iter__(self):
        for c in self.elements:
            yield ResidueMatrix.from_code(int(c), self.modulus)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteMatrixGroup):
            return NotImplemented
        return (self.modulus == other.modulus and self.order == other.order
                and bool(np.array_equal(self.elements, other.elements)))

    def __hash__(self) -> int:
        return hash((self.modulus, self.elements.tobytes()))

    def __repr__(self) -> str:
        gens = ", ".join(str(g) for g in self.generators[:6])
        return f"FiniteMatrixGroup(mod {self.modulus}, order {self.order}, <{gens}>)"

    # -- derived groups
    def is_subgroup_of(self, other: "FiniteMatrixGroup") -> bool:
        if other.modulus != self.modulus:
            raise ModulusMismatch(f"{self.modulus} vs {other.modulus}")
        return bool(np.all(other.contains_codes(self.generator_codes)))

    def has_minus_identity(self) -> bool:
        return bool(self.contains_codes(np.array([minus_identity_code(self.modulus)]))[0])

    def with_minus_identity(self) -> "FiniteMatrixGroup":
        if self.has_minus_identity():
            return self
        n = self.modulus
        el = self.elements
        both = np.concatenate([el, mul_codes(el, minus_identity_code(n), n)])
        gens = list(self.generators) + [ResidueMatrix(n, -1, 0, 0, -1)]
        return FiniteMatrixGroup(n, gens, elements=both)

    def sl2_part(self) -> "FiniteMatrixGroup":
        el = self.elements
        return FiniteMatrixGroup(self.modulus, elements=el[det_codes(el, self.modulus) == 1 % self.modulus])

    def det_image(self) -> list[int]:
        return sorted(set(int(v) for v in np.unique(det_codes(self.elements, self.modulus))))

    def has_surjective_det(self) -> bool:
        return len(self.det_image()) == len(units(self.modulus))

    def conjugate(self, g: ResidueMatrix) -> "FiniteMatrixGroup":
        n = self.modulus
        g = as_matrix(n, g)
        gens = [ResidueMatrix.from_code(int(c), n)
                for c in conj_codes(g.code, self.generator_codes, n)]
        el = None
        if self._elements is not None:
            el = conj_codes(g.code, self._elements, n)
        return FiniteMatrixGroup(n, gens, elements=el)

    def fingerprint(self) -> tuple:
        """Conjugacy invariant: order plus census of element invariants."""
        if self._fingerprint is None:
            self._fingerprint = group_fingerprint(self.elements, self.modulus)
        return self._fingerprint


def element_invariants(codes, n: int) -> np.ndarray:
    a, b, c, d = decode(codes, n)
    s = np.gcd(np.gcd(np.gcd(b, c), (a - d) % n), n)
    return ((a + d) % n * n + (a * d - b * c) % n) * (n + 1) + s


def group_fingerprint(codes, n: int) -> tuple:
    keys, counts = np.unique(element_invariants(codes, n), return_counts=True)
    return (int(np.asarray(codes).size),) + tuple(zip(keys.tolist(), counts.tolist()))


def _greedy_generators(elements: np.ndarray, n: int) -> list[int]:
    """A short generating list for an explicit element set."""
    target = elements.size
    if target <= 1:
        return []
    rng = np.random.default_rng(1729)
    gens: list[int] = []
    current = np.array([identity_code(n)], dtype=np.int64)
    # elements of large order first make the list short
    pool = elements[rng.permutation(target)]
    while current.size < target:
        inside = np.isin(pool, current)
        pool = pool[~inside]
        gens.append(int(pool[0]))
        current = _closure(np.array(gens), n)
    # drop redundant generators
    i = 0
    while i < len(gens) and len(gens) > 1:
        trial = gens[:i] + gens[i + 1:]
        if _closure(np.array(trial), n).size == target:
            gens = trial
        else:
            i += 1
    return gens


# ---------------------------------------------------------------- operations

def generate_group(generators: Iterable, n: int) -> FiniteMatrixGroup:
    """Closure of the given generators inside GL2(Z/nZ)."""
    gens = [as_matrix(n, g) for g in generators]
    for i, g in enumerate(gens):
        if not g.is_invertible():
            raise NonInvertibleGenerator(f"generator {i} = {g} has determinant {g.det()} not a unit mod {n}", i)
    return FiniteMatrixGroup(n, gens)


def gl2_group(n: int) -> FiniteMatrixGroup:
    return FiniteMatrixGroup(n, elements=gl2_codes(n))


def reduce_mod(G: FiniteMatrixGroup, m: int) -> FiniteMatrixGroup:
    n = G.modulus
    if m < 1 or n % m:
        raise NotADivisor(f"{m} does not divide {n}")
    gens = [g.reduce(m) for g in G.generators]
    el = np.unique(reduce_codes(G.elements, n, m))
    return FiniteMatrixGroup(m, gens, elements=el)


def kernel_of_reduction(G: FiniteMatrixGroup, m: int) -> FiniteMatrixGroup:
    """Elements of G congruent to the identity modulo m."""
    n = G.modulus
    if m < 1 or n % m:
        raise NotADivisor(f"{m} does not divide {n}")
    el = G.elements
    red = reduce_codes(el, n, m)
    return FiniteMatrixGroup(n, elements=el[red == identity_code(m)])


def preimage_in(G: FiniteMatrixGroup, m: int, image: FiniteMatrixGroup) -> FiniteMatrixGroup:
    """Elements of G whose reduction mod m lies in `image`."""
    el = G.elements
    red = reduce_codes(el, G.modulus, m)
    return FiniteMatrixGroup(G.modulus, elements=el[image.contains_codes(red)])


def full_preimage(H: FiniteMatrixGroup, n: int) -> FiniteMatrixGroup:
    """pi^{-1}(H) inside GL2(Z/nZ) for H at a level dividing n."""
    m = H.modulus
    if n % m:
        raise NotADivisor(f"{m} does not divide {n}")
    allc = gl2_codes(n)
    return FiniteMatrixGroup(n, elements=allc[H.contains_codes(reduce_codes(allc, n, m))])


# ---------------------------------------------------------------- conjugacy

def _candidate_conjugators(gen_codes: np.ndarray, target: FiniteMatrixGroup, n: int) -> np.ndarray:
    """All c in GL2(Z/n) with c * gens * c^-1 inside target, by exhaustive scan."""
    allc = gl2_codes(n)
    ok = np.ones(allc.size, dtype=bool)
    for x in gen_codes:
        ok &= target.contains_codes(conj_codes(allc, x, n))
    return allc[ok]


def _conjugators_into(K: FiniteMatrixGroup, G: FiniteMatrixGroup, first_only: bool):
    n = G.modulus
    gens = K.generator_codes
    parts = sorted(p ** e for p, e in factorize(n).items())
    if len(parts) <= 1:
        cands = _candidate_conjugators(gens, G, n)
        return cands[:1] if first_only else cands
    # conjugators factor through CRT: prune each prime-power component first
    comp = []
    for q in parts:
        Gq = reduce_mod(G, q)
        comp.append((q, _candidate_conjugators(reduce_codes(gens, n, q), Gq, q)))
        if comp[-1][1].size == 0:
            return np.array([], dtype=np.int64)
    q0, cands = comp[0]
    found = []
    for q, cq in comp[1:]:
        combined = crt_codes(cands[:, None], q0, cq[None, :], q).ravel()
        q0 = q0 * q
        cands = combined
    # check the glued candidates in chunks
    chunk = 1 << 18
    for start in range(0, cands.size, chunk):
        block = cands[start:start + chunk]
        ok = np.ones(block.size, dtype=bool)
        for x in gens:
            ok &= G.contains_codes(conj_codes(block, x, n))
        hit = block[ok]
        if hit.size:
            if first_only:
                return hit[:1]
            found.append(hit)
    return np.concatenate(found) if found else np.array([], dtype=np.int64)


def conjugacy_witness(G: FiniteMatrixGroup, H: FiniteMatrixGroup):
    """Some g with g G g^-1 = H, or None when G and H are not conjugate."""
    if G.modulus != H.modulus:
        raise ModulusMismatch(f"{G.modulus} vs {H.modulus}")
    if G.order != H.order or G.fingerprint() != H.fingerprint():
        return None
    hit = _conjugators_into(G, H, first_only=True)
    if hit.size == 0:
        return None
    return ResidueMatrix.from_code(int(hit[0]), G.modulus)


def are_conjugate(G: FiniteMatrixGroup, H: FiniteMatrixGroup) -> bool:
    return conjugacy_witness(G, H) is not None


def conjugate_into(K: FiniteMatrixGroup, G: FiniteMatrixGroup):
    """Some g with g K g^-1 a subgroup of G, or None."""
    if G.modulus != K.modulus:
        raise ModulusMismatch(f"{K.modulus} vs {G.modulus}")
    if K.order > G.order or G.order % K.order:
        return None
    hit = _conjugators_into(K, G, first_only=True)
    if hit.size == 0:
        return None
    return ResidueMatrix.from_code(int(hit[0]), G.modulus)


def normalizer(H: FiniteMatrixGroup, ambient: FiniteMatrixGroup | None = None) -> FiniteMatrixGroup:
    n = H.modulus
    if ambient is None:
        cands = _conjugators_into(H, H, first_only=False)
        return FiniteMatrixGroup(n, elements=cands)
    amb = ambient.elements
    ok = np.ones(amb.size, dtype=bool)
    for x in H.generator_codes:
        ok &= H.contains_codes(conj_codes(amb, x, n))
    return FiniteMatrixGroup(n, elements=amb[ok])


# ---------------------------------------------------------------- goursat

@dataclass(frozen=True)
class Gluing:
    """An isomorphism A/M_A -> B/M_B, given on generators of A.

    `pairs` lists (x, y) with x in A and y in B meaning xM_A maps to yM_B;
    the x's must generate A modulo M_A.
    """

    kernel_a: FiniteMatrixGroup
    kernel_b: FiniteMatrixGroup
    pairs: tuple


def goursat_product(A: FiniteMatrixGroup, B: FiniteMatrixGroup, gluing: Gluing) -> FiniteMatrixGroup:
    """The fibre product A x_theta B inside GL2(Z/(ab)) via CRT."""
    p, q = A.modulus, B.modulus
    if math.gcd(p, q) != 1:
        raise BadGluing(f"levels {p} and {q} are not coprime")
    MA, MB = gluing.kernel_a, gluing.kernel_b
    if MA.modulus != p or MB.modulus != q:
        raise BadGluing("kernel levels do not match the factors")
    if not (MA.is_subgroup_of(A) and MB.is_subgroup_of(B)):
        raise BadGluing("kernels are not subgroups of the factors")
    if A.order * MB.order != B.order * MA.order:
        raise BadGluing("quotients have different orders")
    n = p * q
    xs = np.array([as_matrix(p, x).code for x, _ in gluing.pairs] + list(MA.generator_codes)
                  + [identity_code(p)] * MB.generator_codes.size, dtype=np.int64)
    ys = np.array([as_matrix(q, y).code for _, y in gluing.pairs]
                  + [identity_code(q)] * MA.generator_codes.size + list(MB.generator_codes),
                  dtype=np.int64)
    gens = crt_codes(xs, p, ys, q)
    G = FiniteMatrixGroup(n, [ResidueMatrix.from_code(int(c), n) for c in np.unique(gens)])
    if G.order != A.order * MB.order:
        raise BadGluing(f"gluing is not a well-defined isomorphism (order {G.order})")
    if reduce_mod(G, p).order != A.order or reduce_mod(G, q).order != B.order:
        raise BadGluing("generator pairs do not generate the factors")
    return G


def parse_generators(spec: str, n: int) -> list[ResidueMatrix]:
    """Parse 'a,b,c,d;a,b,c,d' into matrices mod n."""
    out = []
    for chunk in spec.split(";"):
        chunk = chunk.strip().strip("()")
        if not chunk:
            continue
        vals = [int(v) for v in chunk.split(",")]
        if len(vals) != 4:
            raise ValueError(f"matrix needs four entries: {chunk!r}")
        out.append(ResidueMatrix.of(n, vals))
    return out
