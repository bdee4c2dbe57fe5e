"""Small abstract groups given by multiplication tables.

Used for entanglement types: quotients of matrix groups are turned into
Cayley tables here, then compared up to isomorphism.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product

import numpy as np

from .errors import TooLarge
from .gl2 import FiniteMatrixGroup, mul_codes


class AbstractGroup:
    """A finite group on {0, ..., k-1} with table[i, j] = i*j."""

    def __init__(self, table):
        self.table = np.asarray(table, dtype=np.int64)
        k = self.table.shape[0]
        ident = [i for i in range(k) if np.array_equal(self.table[i], np.arange(k))]
        self.identity = ident[0]

    @property
    def order(self) -> int:
        return int(self.table.shape[0])

    @cached_property
    def inverse(self) -> np.ndarray:
        return np.argmax(self.table == self.identity, axis=1)

    @cached_property
    def element_orders(self) -> np.ndarray:
        k = self.order
        out = np.ones(k, dtype=np.int64)
        for i in range(k):
            cur, m = i, 1
            while cur != self.identity:
                cur = int(self.table[cur, i])
                m += 1
            out[i] = m
        return out

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def census(self) -> tuple:
        vals, counts = np.unique(self.element_orders, return_counts=True)
        return tuple(zip(vals.tolist(), counts.tolist()))

    def center_order(self) -> int:
        return int(sum(np.array_equal(self.table[i], self.table[:, i]) for i in range(self.order)))

    def closure(self, gens) -> frozenset:
        out = {self.identity}
        frontier = [self.identity]
        gens = list(gens)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = int(self.table[x, g])
                    if y not in out:
                        out.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(out)

    def conjugacy_class(self, x: int) -> frozenset:
        inv = self.inverse
        return frozenset(int(self.table[self.table[g, x], inv[g]]) for g in range(self.order))

    @cached_property
    def normal_subgroups(self) -> list[frozenset]:
        closures = set()
        for x in range(self.order):
            closures.add(self.closure(self.conjugacy_class(x)))
        found = set(closures)
        frontier = list(found)
        while frontier:
            nxt = []
            for A in frontier:
                for B in closures:
                    C = self.closure(A | B)
                    if C not in found:
                        found.add(C)
                        nxt.append(C)
            frontier = nxt
        return sorted(found, key=lambda s: (len(s), sorted(s)))

    def quotient(self, N: frozenset) -> "AbstractGroup":
        label = -np.ones(self.order, dtype=np.int64)
        reps = []
        for x in range(self.order):
            if label[x] < 0:
                for n in N:
                    label[self.table[x, n]] = len(reps)
                reps.append(x)
        k = len(reps)
        tab = np.empty((k, k), dtype=np.int64)
        for i, r in enumerate(reps):
            for j, s in enumerate(reps):
                tab[i, j] = label[self.table[r, s]]
        return AbstractGroup(tab)

    @cached_property
    def small_generating_set(self) -> list[int]:
        order = self.element_orders
        cands = sorted(range(self.order), key=lambda i: (-order[i], i))
        gens: list[int] = []
        cur = frozenset([self.identity])
        for x in cands:
            if len(cur) == self.order:
                break
            if x not in cur:
                gens.append(x)
                cur = self.closure(gens)
        return gens

    def abelian_invariants(self) -> tuple[int, ...]:
        """Invariant factors d1 | d2 | ... of an abelian group."""
        k = self.order
        orders = self.element_orders
        primes = [p for p in range(2, k + 1) if k % p == 0 and all(p % q for q in range(2, p))]
        parts: list[list[int]] = []
        for p in primes:
            full = 1
            while k % (full * p) == 0:
                full *= p
            logs = [0]
            e = 1
            while p ** logs[-1] < full:
                cnt = int(sum(1 for o in orders if (p ** e) % o == 0))
                logs.append(round(np.log(cnt) / np.log(p)))
                e += 1
            # logs[j] - logs[j-1] counts cyclic factors of exponent >= j
            ge = [logs[j] - logs[j - 1] for j in range(1, len(logs))] + [0]
            exps = []
            for j in range(len(ge) - 1):
                exps += [j + 1] * (ge[j] - ge[j + 1])
            parts.append(sorted(p ** x for x in exps))
        width = max((len(x) for x in parts), default=0)
        factors = []
        for i in range(width):
            f = 1
            for x in parts:
                if i < len(x):
                    f *= x[-1 - i]
            factors.append(f)
        return tuple(sorted(factors))


# ---------------------------------------------------------------- isomorphisms

def _extend(G: AbstractGroup, H: AbstractGroup, gens: list[int], imgs: list[int]):
    """Extend gens -> imgs to a homomorphism, or None if inconsistent."""
    phi = {G.identity: H.identity}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g, h in zip(gens, imgs):
                y = int(G.table[x, g])
                val = int(H.table[phi[x], h])
                if y in phi:
                    if phi[y] != val:
                        return None
                else:
                    phi[y] = val
                    nxt.append(y)
        frontier = nxt
    if len(phi) != G.order:
        return None
    # closure by right multiplication by generators suffices for consistency
    return np.array([phi[i] for i in range(G.order)], dtype=np.int64)


def isomorphisms(G: AbstractGroup, H: AbstractGroup):
    """Yield every isomorphism G -> H as an index array."""
    if G.order != H.order or G.census() != H.census():
        return
    gens = G.small_generating_set
    go = G.element_orders
    ho = H.element_orders
    pools = [[j for j in range(H.order) if ho[j] == go[g]] for g in gens]
    for imgs in product(*pools):
        phi = _extend(G, H, gens, list(imgs))
        if phi is not None and len(set(phi.tolist())) == G.order:
            yield phi


def is_isomorphic(G: AbstractGroup, H: AbstractGroup) -> bool:
    if G.order != H.order or G.census() != H.census() or G.is_abelian() != H.is_abelian():
        return False
    return next(isomorphisms(G, H), None) is not None


def is_quotient_of(small: AbstractGroup, big: AbstractGroup) -> bool:
    if big.order % small.order:
        return False
    for N in big.normal_subgroups:
        if len(N) * small.order == big.order and is_isomorphic(big.quotient(N), small):
            return True
    return False


# ---------------------------------------------------------------- matrix quotients

def coset_labels(big: FiniteMatrixGroup, normal: FiniteMatrixGroup):
    """Label each element of `big` by its coset of `normal`; return labels and reps."""
    n = big.modulus
    el = big.elements
    sub = normal.elements
    label = -np.ones(el.size, dtype=np.int64)
    reps = []
    while True:
        free = np.flatnonzero(label < 0)
        if free.size == 0:
            break
        x = el[free[0]]
        coset = mul_codes(x, sub, n)
        label[np.searchsorted(el, coset)] = len(reps)
        reps.append(int(x))
    return label, reps


def matrix_quotient(big: FiniteMatrixGroup, normal: FiniteMatrixGroup) -> AbstractGroup:
    label, reps = coset_labels(big, normal)
    el = big.elements
    r = np.array(reps, dtype=np.int64)
    prods = mul_codes(r[:, None], r[None, :], big.modulus)
    return AbstractGroup(label[np.searchsorted(el, prods)])


# ---------------------------------------------------------------- identification

@dataclass(frozen=True)
class GroupIsoClass:
    order: int
    abelian_invariants: tuple | None
    named_tag: str
    census: tuple = field(compare=False, default=())

    @property
    def name(self) -> str:
        if self.abelian_invariants is not None:
            if self.order == 1:
                return "1"
            return " x ".join(f"Z/{d}" for d in self.abelian_invariants)
        return self.named_tag

    def __str__(self) -> str:
        return self.name


_SMALL_NONABELIAN = {
    (6, ((1, 1), (2, 3), (3, 2))): "S3",
    (8, ((1, 1), (2, 5), (4, 2))): "D4",
    (8, ((1, 1), (2, 1), (4, 6))): "Q8",
    (10, ((1, 1), (2, 5), (5, 4))): "D5",
    (12, ((1, 1), (2, 3), (3, 8))): "A4",
    (12, ((1, 1), (2, 7), (3, 2), (6, 2))): "D6",
    (12, ((1, 1), (2, 1), (3, 2), (4, 6), (6, 2))): "Dic3",
    (24, ((1, 1), (2, 9), (3, 8), (4, 6))): "S4",
}


def identify_abstract(G: AbstractGroup) -> GroupIsoClass:
    census = G.census()
    if G.is_abelian():
        inv = G.abelian_invariants() if G.order > 1 else ()
        return GroupIsoClass(G.order, inv, "abelian", census)
    tag = _SMALL_NONABELIAN.get((G.order, census), "unidentified")
    if tag == "S4" and G.center_order() != 1:
        tag = "unidentified"
    return GroupIsoClass(G.order, None, tag, census)


def identify_iso_class(Q, limit: int = 64) -> GroupIsoClass:
    """Isomorphism class of an abstract group or of a matrix quotient (big, normal)."""
    if isinstance(Q, tuple):
        big, normal = Q
        if big.order // normal.order > limit:
            raise TooLarge(f"quotient of order {big.order // normal.order} exceeds {limit}")
        Q = matrix_quotient(big, normal)
    if Q.order > limit:
        raise TooLarge(f"group of order {Q.order} exceeds {limit}")
    return identify_abstract(Q)


def cyclic_group(k: int) -> AbstractGroup:
    idx = np.arange(k)
    return AbstractGroup((idx[:, None] + idx[None, :]) % k)

