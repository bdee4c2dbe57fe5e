"""Entanglement classification for open subgroups of GL2 given at finite level.

For a group G at level n and divisors a, b of n with c = lcm(a, b) and
d = gcd(a, b), the kernels N_a, N_b, N_d live inside G_c = G mod c.  G
represents an (a, b)-entanglement when <N_a, N_b> is a proper subgroup of
N_d; the type is the quotient N_d / <N_a, N_b>.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import BadPair, ModulusMismatch, NonSurjectiveDeterminant, NotBorel, TooLarge
from .finite_groups import (
    AbstractGroup,
    GroupIsoClass,
    identify_abstract,
    is_isomorphic,
    is_quotient_of,
    matrix_quotient,
)
from .gl2 import (
    FiniteMatrixGroup,
    ResidueMatrix,
    _conjugators_into,
    conj_codes,
    conjugate_into,
    decode,
    det_codes,
    gl2_order,
    kernel_of_reduction,
    preimage_in,
    reduce_codes,
    reduce_mod,
    trace_codes,
    units,
)


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


@dataclass
class EntanglementReport:
    modulus: int
    pair: tuple[int, int]
    c: int
    d: int
    n_a: FiniteMatrixGroup
    n_b: FiniteMatrixGroup
    n_d: FiniteMatrixGroup
    joint: FiniteMatrixGroup
    represents: bool
    quotient: AbstractGroup | None
    type: GroupIsoClass | None
    det_index: int
    group_index: int
    explained: bool
    primitive: bool | None = None
    sl2_type: GroupIsoClass | None = None

    @property
    def unexplained(self) -> bool:
        return bool(self.represents and self.primitive and not self.explained)

    @property
    def type_string(self) -> str:
        return type_string(self.type, self.sl2_type)

    def summary(self) -> dict:
        return {
            "modulus": self.modulus,
            "pair": list(self.pair),
            "represents": self.represents,
            "type": self.type_string if self.represents else None,
            "det_index": self.det_index,
            "group_index": self.group_index,
            "explained": self.explained,
            "primitive": self.primitive,
            "unexplained": self.unexplained,
        }


def type_string(T: GroupIsoClass | None, T2: GroupIsoClass | None) -> str:
    if T is None:
        return "1"
    if T2 is None or T2 == T:
        return T.name
    return f"({T.name},{T2.name})"


def _check_pair(n: int, a: int, b: int) -> tuple[int, int]:
    if a > b:
        a, b = b, a
    if a < 2 or a == b or n % _lcm(a, b):
        raise BadPair(f"({a},{b}) is not a valid divisor pair at level {n}")
    return a, b


def _report(G: FiniteMatrixGroup, a: int, b: int, with_type: bool = True) -> EntanglementReport:
    n = G.modulus
    c, d = _lcm(a, b), math.gcd(a, b)
    Gc = reduce_mod(G, c) if c != n else G
    Na = kernel_of_reduction(Gc, a)
    Nb = kernel_of_reduction(Gc, b)
    Nd = kernel_of_reduction(Gc, d)
    img_b = reduce_mod(Nb, a)
    joint = preimage_in(Gc, a, img_b)
    # the joint group is symmetric in a and b
    other = preimage_in(Gc, b, reduce_mod(Na, b))
    if not np.array_equal(joint.elements, other.elements):
        raise AssertionError("joint kernel computed two ways disagrees")
    represents = joint.order < Nd.order
    dets = np.unique(det_codes(joint.elements, c))
    det_index = len(units(c)) // dets.size
    group_index = Gc.order // joint.order
    # explained has two readings: equal indices, or ker(det) inside the joint kernel
    ker_det = Gc.elements[det_codes(Gc.elements, c) == 1 % c]
    surjective = np.unique(det_codes(Gc.elements, c)).size == len(units(c))
    if surjective and bool(joint.contains_codes(ker_det).all()) != (det_index == group_index):
        raise AssertionError("index test and kernel test for explained disagree")
    Q = T = None
    if represents and with_type:
        # N_d / joint is isomorphic to pi_a(N_d) / pi_a(N_b), a small computation
        Q = matrix_quotient(reduce_mod(Nd, a), img_b)
        T = identify_abstract(Q) if Q.order <= 64 else GroupIsoClass(Q.order, None, "unidentified",
                                                                      Q.census())
    return EntanglementReport(n, (a, b), c, d, Na, Nb, Nd, joint, represents, Q, T,
                              det_index, group_index, det_index == group_index)


def entanglement_report(G: FiniteMatrixGroup, a: int, b: int,
                        with_primitivity: bool = True) -> EntanglementReport:
    """Classify the (a, b)-entanglement represented by G."""
    n = G.modulus
    a, b = _check_pair(n, a, b)
    if not G.has_surjective_det():
        raise NonSurjectiveDeterminant(f"det(G) misses units mod {n}")
    rep = _report(G, a, b)
    if rep.represents:
        H = G.sl2_part()
        rep.sl2_type = _report(H, a, b).type or identify_abstract(AbstractGroup([[0]]))
    if with_primitivity and rep.represents:
        prim = primitivity_check(G)
        rep.primitive = bool(prim.primitive and prim.maximal is not None
                             and prim.maximal[0] == (a, b))
    return rep


# ---------------------------------------------------------------- primitivity

def divisor_pairs(n: int) -> list[tuple[int, int]]:
    ds = [d for d in range(2, n + 1) if n % d == 0]
    return [(a, b) for a in ds for b in ds if a < b and n % _lcm(a, b) == 0]


def _divides(x: int, y: int) -> bool:
    return y % x == 0


def precedes(x, y) -> bool:
    """The order relation on (pair, type) elements: x <= y."""
    (a1, b1), H1 = x
    (a2, b2), H2 = y
    if H1.order == H2.order and is_isomorphic(H1, H2):
        if (_divides(a2, a1) and _divides(b2, b1)) or (_divides(b2, a1) and _divides(a2, b1)):
            return True
    # a proper quotient; an isomorphic one is handled above, which keeps the relation antisymmetric
    if H1.order < H2.order and is_quotient_of(H1, H2):
        if (_divides(a1, a2) and _divides(b1, b2)) or (_divides(b1, a2) and _divides(a1, b2)):
            return True
    return False


@dataclass
class PrimitivityResult:
    primitive: bool
    elements: list = field(default_factory=list)
    maximal: tuple | None = None


def primitivity_check(G: FiniteMatrixGroup) -> PrimitivityResult:
    """Collect every represented (pair, type) and test for a unique maximal one."""
    n = G.modulus
    elems = []
    for a, b in divisor_pairs(n):
        rep = _report(G, a, b)
        if rep.represents:
            elems.append(((a, b), rep.quotient))
    maximal = []
    for i, x in enumerate(elems):
        if not any(j != i and precedes(x, y) and not precedes(y, x) for j, y in enumerate(elems)):
            maximal.append(x)
    if len(maximal) == 1 and _lcm(*maximal[0][0]) == n:
        m = maximal[0]
        return PrimitivityResult(True, elems, (m[0], identify_abstract(m[1])))
    top = (maximal[0][0], identify_abstract(maximal[0][1])) if len(maximal) == 1 else None
    return PrimitivityResult(False, elems, top)


# ---------------------------------------------------------------- admissibility

def has_complex_conjugation(G: FiniteMatrixGroup) -> bool:
    """Some g in G with trace 0, det -1 fixing a vector of order n."""
    n = G.modulus
    el = G.elements
    cand = el[(trace_codes(el, n) == 0) & (det_codes(el, n) == (-1) % n)]
    if cand.size == 0:
        return False
    xs, ys = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    xs, ys = xs.ravel(), ys.ravel()
    full = np.gcd(np.gcd(xs, ys), n) == 1
    xs, ys = xs[full], ys[full]
    a, b, c, d = decode(cand, n)
    fixed = ((a[:, None] * xs + b[:, None] * ys - xs) % n == 0) & \
            ((c[:, None] * xs + d[:, None] * ys - ys) % n == 0)
    return bool(fixed.any())


def admissible_check(G: FiniteMatrixGroup) -> tuple[bool, str]:
    n = G.modulus
    if G.order == gl2_order(n):
        return False, "G ≠ GL₂ fails"
    if not G.has_surjective_det():
        return False, "det not surjective"
    if not has_complex_conjugation(G):
        return False, "no element of trace 0 and det -1 fixing a point of order N"
    return True, "admissible"


# ---------------------------------------------------------------- maximality

def select_maximal(groups: list[FiniteMatrixGroup]) -> list[FiniteMatrixGroup]:
    """Groups not contained, up to conjugacy, in another listed group.

    Among mutually conjugate groups the first one listed is kept.
    """
    keep = []
    for i, K in enumerate(groups):
        dominated = False
        for j, G in enumerate(groups):
            if i == j or G.order < K.order:
                continue
            if G.order == K.order:
                if j < i and G.fingerprint() == K.fingerprint() and conjugate_into(K, G) is not None:
                    dominated = True
                    break
                continue
            if G.order % K.order == 0 and conjugate_into(K, G) is not None:
                dominated = True
                break
        if not dominated:
            keep.append(K)
    return keep


# ---------------------------------------------------------------- isogenies

def _borel_diagonals(G: FiniteMatrixGroup, m: int) -> set[frozenset]:
    Gm = reduce_mod(G, m)
    upper = FiniteMatrixGroup(m, elements=_upper_triangular(m))
    conj = _conjugators_into(Gm, upper, first_only=False)
    if conj.size == 0:
        raise NotBorel(f"image mod {m} is not contained in a Borel subgroup")
    out = set()
    el = Gm.elements
    seen = set()
    for g in conj:
        img = np.unique(conj_codes(int(g), el, m))
        key = img.tobytes()
        if key in seen:
            continue
        seen.add(key)
        a, _, _, d = decode(img, m)
        out.add(frozenset(zip(a.tolist(), d.tolist())))
    return out


@lru_cache(maxsize=None)
def _upper_triangular(m: int) -> np.ndarray:
    from .gl2 import gl2_codes
    allc = gl2_codes(m)
    _, _, c, _ = decode(allc, m)
    return allc[c == 0]


def isogeny_dual_compatible(G1: FiniteMatrixGroup, G2: FiniteMatrixGroup, m: int) -> bool:
    """Whether the mod-m images match under the diagonal swap of an m-isogeny.

    Each (a, b; 0, d) in one Borel image must have a partner (d, beta; 0, a)
    in the other, in both directions, for some choice of Borel conjugation.
    """
    if G1.modulus % m or G2.modulus % m:
        raise ModulusMismatch(f"{m} does not divide both levels")
    D1 = _borel_diagonals(G1, m)
    D2 = _borel_diagonals(G2, m)
    for x in D1:
        swapped = frozenset((d, a) for a, d in x)
        if swapped in D2:
            return True
    return False
