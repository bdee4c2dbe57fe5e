"""Index, cusps, elliptic points and genus of the modular curve attached to G.

Everything happens in PSL2: H = G cap SL2(Z/n) is enlarged to +-H and the
right action of S = (0,-1;1,0) and T = (1,1;0,1) on the cosets +-H x is
tabulated once.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .gl2 import (
    FiniteMatrixGroup,
    decode,
    encode,
    minus_identity_code,
    mul_codes,
    reduce_codes,
    sl2_codes,
)


@dataclass(frozen=True)
class CuspDatum:
    numerator: int
    denominator: int
    width: int
    matrix: tuple[int, int, int, int]

    @property
    def label(self) -> str:
        if self.denominator == 0:
            return "oo"
        if self.denominator == 1:
            return str(self.numerator)
        return f"{self.numerator}/{self.denominator}"

    @property
    def value(self):
        return None if self.denominator == 0 else Fraction(self.numerator, self.denominator)


@dataclass
class CongruenceInvariants:
    sl2_level: int
    index: int
    cusps: int
    e2: int
    e3: int
    genus: int
    cusp_data: list[CuspDatum] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "sl2_level": self.sl2_level,
            "index": self.index,
            "cusps": self.cusps,
            "e2": self.e2,
            "e3": self.e3,
            "genus": self.genus,
            "cusp_widths": [c.width for c in self.cusp_data],
            "cusp_reps": [c.label for c in self.cusp_data],
        }


@dataclass
class CosetAction:
    modulus: int
    reps: np.ndarray
    perm_S: np.ndarray
    perm_T: np.ndarray
    perm_ST: np.ndarray
    pm_h: np.ndarray


def _pm(H: FiniteMatrixGroup) -> np.ndarray:
    el = H.elements
    return np.unique(np.concatenate([el, mul_codes(el, minus_identity_code(H.modulus), H.modulus)]))


def coset_action(H: FiniteMatrixGroup) -> CosetAction:
    """Permutation action of S and T on the right cosets of +-H in SL2(Z/n)."""
    n = H.modulus
    pm_h = _pm(H)
    label = np.full(n ** 4, -1, dtype=np.int64)
    S = int(encode(0, (-1) % n, 1 % n, 0, n))
    T = int(encode(1 % n, 1 % n, 0, 1 % n, n))
    reps: list[int] = []

    def new_coset(x: int) -> int:
        members = mul_codes(pm_h, x, n)
        label[members] = len(reps)
        reps.append(x)
        return len(reps) - 1

    new_coset(int(encode(1 % n, 0, 0, 1 % n, n)))
    perm_S: list[int] = []
    perm_T: list[int] = []
    i = 0
    while i < len(reps):
        x = reps[i]
        for g, perm in ((S, perm_S), (T, perm_T)):
            y = int(mul_codes(x, g, n))
            j = int(label[y])
            if j < 0:
                j = new_coset(y)
            perm.append(j)
        i += 1
    pS = np.array(perm_S, dtype=np.int64)
    pT = np.array(perm_T, dtype=np.int64)
    return CosetAction(n, np.array(reps, dtype=np.int64), pS, pT, pT[pS], pm_h)


def _cycles(perm: np.ndarray) -> list[list[int]]:
    seen = np.zeros(perm.size, dtype=bool)
    out = []
    for i in range(perm.size):
        if not seen[i]:
            cyc = []
            j = i
            while not seen[j]:
                seen[j] = True
                cyc.append(j)
                j = int(perm[j])
            out.append(cyc)
    return out


def _complete(a: int, c: int) -> tuple[int, int, int, int]:
    """An SL2(Z) matrix with first column (a, c)."""
    if c == 0:
        return (1, 0, 0, 1)
    g, x, y = _egcd(a, c)
    # a*x + c*y = 1  ->  (a, -y; c, x)
    return (a, -y, c, x)


def _egcd(a: int, b: int):
    if b == 0:
        return (a, 1, 0)
    g, x, y = _egcd(b, a % b)
    return (g, y, x - (a // b) * y)


def _cusp_rep(vectors: set[tuple[int, int]], n: int) -> tuple[int, int]:
    best = None
    for c in range(0, n + 1):
        for a0, c0 in vectors:
            if c0 != c % n:
                continue
            if c == 0:
                if a0 == 1 % n:
                    cand = (1, 0)
                else:
                    continue
            else:
                a = a0
                while math.gcd(a, c) != 1:
                    a += n
                cand = (a, c)
            if best is None or cand[0] < best[0]:
                best = cand
        if best is not None:
            return best
    raise AssertionError("no primitive lift found")


def cusp_data(H: FiniteMatrixGroup, action: CosetAction | None = None) -> list[CuspDatum]:
    n = H.modulus
    act = action or coset_action(H)
    out = []
    for cyc in _cycles(act.perm_T):
        x = int(act.reps[cyc[0]])
        members = mul_codes(act.pm_h, x, n)
        a, _, c, _ = decode(members, n)
        vecs = set(zip(a.tolist(), c.tolist()))
        num, den = _cusp_rep(vecs, n)
        out.append(CuspDatum(num, den, len(cyc), _complete(num, den)))
    out.sort(key=lambda d: (d.denominator, d.numerator))
    return out


def sl2_level(H: FiniteMatrixGroup) -> int:
    """Least m | n with H the full preimage of its reduction mod m in SL2(Z/n)."""
    n = H.modulus
    full = sl2_codes(n).size
    for m in range(1, n + 1):
        if n % m:
            continue
        img = np.unique(reduce_codes(H.elements, n, m)).size
        if H.order * sl2_codes(m).size == img * full:
            return m
    return n


def modular_invariants(G: FiniteMatrixGroup) -> CongruenceInvariants:
    H = G.sl2_part()
    act = coset_action(H)
    index = int(act.reps.size)
    e2 = int(np.sum(act.perm_S == np.arange(index)))
    e3 = int(np.sum(act.perm_ST == np.arange(index)))
    data = cusp_data(H, act)
    genus = 1 + Fraction(index, 12) - Fraction(e2, 4) - Fraction(e3, 3) - Fraction(len(data), 2)
    if genus.denominator != 1:
        raise AssertionError(f"non-integral genus {genus}")
    return CongruenceInvariants(sl2_level(H), index, len(data), e2, e3, int(genus), data)


def genus(G: FiniteMatrixGroup) -> int:
    return modular_invariants(G).genus

