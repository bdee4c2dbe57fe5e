"""Conjugacy classes of subgroups of GL2(Z/pZ) for small primes p.

Classes are grown bottom-up: every class representative H is extended by one
element x at a time and the closure <H, x> is deduplicated by conjugacy.
For p >= 11 the same extension runs inside each maximal overgroup type
(Borel, split and nonsplit Cartan normalisers, exceptional preimages) and
the groups containing SL2; this keeps each closure small.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import UnsupportedModulus
from .gl2 import (
    FiniteMatrixGroup,
    ResidueMatrix,
    _closure,
    are_conjugate,
    conj_codes,
    decode,
    det_codes,
    gl2_codes,
    identity_code,
    mul_codes,
    normalizer,
)

SUPPORTED_PRIMES = (2, 3, 5, 7, 11, 13)


def _key(codes: np.ndarray) -> bytes:
    return np.sort(codes).tobytes()


def _powers(x: int, n: int) -> list[int]:
    out = [identity_code(n)]
    cur = x
    while cur != out[0]:
        out.append(cur)
        cur = int(mul_codes(cur, x, n))
    return out


def _cyclic_generators(x: int, n: int) -> np.ndarray:
    pw = _powers(x, n)
    k = len(pw)
    return np.array([pw[j] for j in range(1, k) if np.gcd(j, k) == 1] or [x], dtype=np.int64)


def enumerate_subgroup_classes(ambient: np.ndarray, conj_by: np.ndarray, n: int) -> list[FiniteMatrixGroup]:
    """All subgroups of `ambient` up to conjugation by `conj_by`.

    `conj_by` must normalise the ambient group.
    """
    ambient = np.sort(np.asarray(ambient, dtype=np.int64))
    conj_by = np.asarray(conj_by, dtype=np.int64)
    pos = {int(c): i for i, c in enumerate(ambient)}
    triv = np.array([identity_code(n)], dtype=np.int64)
    reps: list[np.ndarray] = []
    rep_gens: list[list[int]] = []
    known: set[bytes] = set()

    def register(el: np.ndarray, gens: list[int]) -> None:
        conj = conj_codes(conj_by[:, None], el[None, :], n)
        for row in conj:
            known.add(_key(row))
        reps.append(el)
        rep_gens.append(gens)

    register(triv, [])
    i = 0
    while i < len(reps):
        H = reps[i]
        Hg = FiniteMatrixGroup(n, elements=H)
        inH = np.zeros(ambient.size, dtype=bool)
        inH[[pos[int(c)] for c in H]] = True
        remaining = ~inH
        hgens = rep_gens[i]
        ok = np.ones(conj_by.size, dtype=bool)
        for g in hgens:
            ok &= Hg.contains_codes(conj_codes(conj_by, g, n))
        N = conj_by[ok]
        big = N.size * H.size > 4_000_000
        while remaining.any():
            j = int(np.flatnonzero(remaining)[0])
            x = int(ambient[j])
            seeds = _cyclic_generators(x, n)
            if not big:
                seeds = mul_codes(seeds[:, None], H[None, :], n).ravel()
            orbit = np.unique(conj_codes(N[:, None], seeds[None, :], n).ravel())
            remaining[np.searchsorted(ambient, orbit)] = False
            remaining[j] = False
            gens = hgens + [x]
            K = _closure(np.array(gens, dtype=np.int64), n)
            if _key(K) in known:
                continue
            register(K, gens)
        i += 1
    return [FiniteMatrixGroup(n, [ResidueMatrix.from_code(c, n) for c in g] or
                              [ResidueMatrix(n, 1, 0, 0, 1)], elements=el)
            for el, g in zip(reps, rep_gens)]


# ---------------------------------------------------------------- named overgroups

def primitive_root(p: int) -> int:
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in _prime_divisors(p - 1)):
            return g
    return 1


def _prime_divisors(m: int) -> list[int]:
    out, q = [], 2
    while q * q <= m:
        if m % q == 0:
            out.append(q)
            while m % q == 0:
                m //= q
        q += 1
    if m > 1:
        out.append(m)
    return out


def nonresidue(p: int) -> int:
    """The constant eps used for the nonsplit Cartan at p."""
    if p == 2:
        return 1
    if p % 4 == 3:
        return p - 1
    for e in range(2, p):
        if pow(e, (p - 1) // 2, p) == p - 1:
            return e
    raise ValueError(p)


def borel(p: int) -> FiniteMatrixGroup:
    g = primitive_root(p)
    return FiniteMatrixGroup(p, [(g, 0, 0, 1), (1, 0, 0, g), (1, 1, 0, 1)])


def split_cartan(p: int) -> FiniteMatrixGroup:
    g = primitive_root(p)
    return FiniteMatrixGroup(p, [(g, 0, 0, 1), (1, 0, 0, g)])


def split_cartan_normalizer(p: int) -> FiniteMatrixGroup:
    g = primitive_root(p)
    return FiniteMatrixGroup(p, [(g, 0, 0, 1), (1, 0, 0, g), (0, 1, 1, 0)])


def nonsplit_cartan(p: int) -> FiniteMatrixGroup:
    if p == 2:
        return FiniteMatrixGroup(2, [(1, 1, 1, 0)])
    eps = nonresidue(p)
    allc = gl2_codes(p)
    a, b, c, d = decode(allc, p)
    keep = (a == d) & (b == (c * eps) % p)
    return FiniteMatrixGroup(p, elements=allc[keep])


def nonsplit_cartan_normalizer(p: int) -> FiniteMatrixGroup:
    if p == 2:
        return FiniteMatrixGroup(2, elements=gl2_codes(2))
    cn = nonsplit_cartan(p)
    el = cn.elements
    refl = int(ResidueMatrix(p, 1, 0, 0, -1).code)
    return FiniteMatrixGroup(p, elements=np.concatenate([el, mul_codes(refl, el, p)]))


def _projective_order(x: int, p: int) -> int:
    a, b, c, d = decode(x, p)
    k, cur = 1, x
    while True:
        ca, cb, cc, cd = decode(cur, p)
        if cb == 0 and cc == 0 and ca == cd:
            return k
        cur = int(mul_codes(cur, x, p))
        k += 1


def scalars(p: int) -> np.ndarray:
    return np.array([int(ResidueMatrix(p, u, 0, 0, u).code) for u in range(1, p)], dtype=np.int64)


@lru_cache(maxsize=None)
def exceptional_preimage(p: int, kind: str) -> FiniteMatrixGroup:
    """Full preimage in GL2(F_p) of a projective S4 ('S4') or A5 ('A5')."""
    orders = {"S4": (4, 3, 2, 24), "A5": (2, 3, 5, 60)}[kind]
    ox, oy, oxy, size = orders
    allc = gl2_codes(p)
    po = np.array([_projective_order(int(c), p) for c in allc])
    xs = allc[po == ox]
    ys = allc[po == oy]
    target = size * (p - 1)
    sc = scalars(p)
    for x in xs[:200]:
        for y in ys:
            xy = int(mul_codes(x, y, p))
            if _projective_order(xy, p) != oxy:
                continue
            el = _closure(np.concatenate([[x, y], sc]), p)
            if el.size == target:
                return FiniteMatrixGroup(p, elements=el)
    raise ValueError(f"no projective {kind} in PGL2(F_{p})")


def det_preimage(p: int, dets: list[int]) -> FiniteMatrixGroup:
    allc = gl2_codes(p)
    return FiniteMatrixGroup(p, elements=allc[np.isin(det_codes(allc, p), dets)])


def _subgroups_of_units(p: int) -> list[list[int]]:
    g = primitive_root(p)
    out = []
    for k in range(1, p):
        if (p - 1) % k == 0:
            h = pow(g, (p - 1) // k, p)
            out.append(sorted({pow(h, j, p) for j in range(k)}))
    return out


def _merge_classes(groups: list[FiniteMatrixGroup]) -> list[FiniteMatrixGroup]:
    buckets: dict[tuple, list[FiniteMatrixGroup]] = {}
    out = []
    for G in groups:
        fp = G.fingerprint()
        bucket = buckets.setdefault(fp, [])
        if any(are_conjugate(G, H) for H in bucket):
            continue
        bucket.append(G)
        out.append(G)
    return out


def _dickson_lattice(p: int) -> list[FiniteMatrixGroup]:
    ambients = [borel(p), split_cartan_normalizer(p), nonsplit_cartan_normalizer(p),
                exceptional_preimage(p, "S4")]
    if p % 10 in (1, 9):
        ambients.append(exceptional_preimage(p, "A5"))
    found: list[FiniteMatrixGroup] = []
    for amb in ambients:
        N = normalizer(amb, FiniteMatrixGroup(p, elements=gl2_codes(p)))
        found.extend(enumerate_subgroup_classes(amb.elements, N.elements, p))
    found.extend(det_preimage(p, d) for d in _subgroups_of_units(p))
    return _merge_classes(found)


def _sort_key(G: FiniteMatrixGroup):
    return (G.order, G.fingerprint())


@lru_cache(maxsize=None)
def _lattice(p: int, method: str) -> tuple[FiniteMatrixGroup, ...]:
    if method == "extension":
        allc = gl2_codes(p)
        groups = enumerate_subgroup_classes(allc, allc, p)
    else:
        groups = _dickson_lattice(p)
    return tuple(sorted(groups, key=_sort_key))


def subgroup_lattice(p: int, method: str = "auto") -> list[FiniteMatrixGroup]:
    """One representative per conjugacy class of subgroups of GL2(Z/pZ)."""
    if p not in SUPPORTED_PRIMES:
        raise UnsupportedModulus(f"subgroup lattices are available for p in {SUPPORTED_PRIMES}")
    if method == "auto":
        method = "extension" if p <= 7 else "overgroups"
    if method not in ("extension", "overgroups"):
        raise ValueError(method)
    if method == "overgroups" and p < 5:
        raise ValueError("overgroup route needs p >= 5")
    return list(_lattice(p, method))
