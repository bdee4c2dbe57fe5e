"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are coordinate vectors over Q in the power basis 1, z, ..., z^(phi-1)
modulo the N-th cyclotomic polynomial.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache

import numpy as np


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    """Exact division of integer polynomials (ascending coefficients)."""
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1] // lead
        out[i] = c
        for j, d in enumerate(den):
            num[i + j] -= c * d
    if any(num):
        raise ArithmeticError("inexact division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divexact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


def euler_phi(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


class CyclotomicField:
    """Q(zeta_N) with zeta_N = exp(2 pi i / N)."""

    _cache: dict = {}

    def __new__(cls, level: int):
        if level in cls._cache:
            return cls._cache[level]
        obj = super().__new__(cls)
        obj.level = level
        obj.phi_poly = cyclotomic_polynomial(level)
        obj.degree = len(obj.phi_poly) - 1
        cls._cache[level] = obj
        return obj

    def __repr__(self) -> str:
        return f"Q(zeta_{self.level})"

    def __reduce__(self):
        return (CyclotomicField, (self.level,))

    # -- coordinate level helpers (integer or Fraction lists / arrays)
    def reduce_rows(self, arr: np.ndarray) -> np.ndarray:
        """Reduce the last axis (powers of zeta) modulo the cyclotomic polynomial."""
        phi = self.degree
        arr = np.array(arr, dtype=object)
        width = arr.shape[-1]
        if width <= phi:
            pad = [(0, 0)] * (arr.ndim - 1) + [(0, phi - width)]
            return np.pad(arr, pad, constant_values=0).astype(object)
        poly = self.phi_poly
        for k in range(width - 1, phi - 1, -1):
            c = arr[..., k]
            for j in range(phi):
                if poly[j]:
                    arr[..., k - phi + j] = arr[..., k - phi + j] - c * poly[j]
            arr[..., k] = 0
        return arr[..., :phi]

    def root_of_unity(self, k: int) -> "CyclotomicNumber":
        k %= self.level
        vec = np.zeros(max(k + 1, 1), dtype=object)
        vec[:] = 0
        vec[k] = 1
        return CyclotomicNumber(self, self.reduce_rows(vec[None, :])[0])

    def one(self) -> "CyclotomicNumber":
        return self(1)

    def zero(self) -> "CyclotomicNumber":
        return self(0)

    def __call__(self, value) -> "CyclotomicNumber":
        if isinstance(value, CyclotomicNumber):
            return value.embed(self.level)
        coords = [Fraction(0)] * self.degree
        coords[0] = Fraction(value)
        return CyclotomicNumber(self, coords)

    def gen(self) -> "CyclotomicNumber":
        return self.root_of_unity(1)


class CyclotomicNumber:
    __slots__ = ("field", "coords")

    def __init__(self, field: CyclotomicField, coords):
        self.field = field
        self.coords = tuple(Fraction(c) for c in coords)
        if len(self.coords) != field.degree:
            raise ValueError("coordinate length mismatch")

    @property
    def level(self) -> int:
        return self.field.level

    def _coerce(self, other) -> "CyclotomicNumber":
        if isinstance(other, CyclotomicNumber):
            if other.field is self.field:
                return other
            big = math.lcm(self.level, other.level)
            if big != self.level:
                raise ValueError("mixed cyclotomic levels; embed explicitly")
            return other.embed(self.level)
        return self.field(other)

    def __add__(self, other):
        o = self._coerce(other)
        return CyclotomicNumber(self.field, [a + b for a, b in zip(self.coords, o.coords)])

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.field, [-a for a in self.coords])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber(self.field, [a * other for a in self.coords])
        o = self._coerce(other)
        phi = self.field.degree
        prod = [Fraction(0)] * (2 * phi - 1)
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(o.coords):
                    if b:
                        prod[i + j] += a * b
        return CyclotomicNumber(self.field, self.field.reduce_rows(np.array([prod], dtype=object))[0])

    __rmul__ = __mul__

    def multiplication_matrix(self) -> list[list[Fraction]]:
        """Matrix M with coords(self * y) = M @ coords(y)."""
        phi = self.field.degree
        cols = []
        for j in range(phi):
            e = [0] * phi
            e[j] = 1
            cols.append((self * CyclotomicNumber(self.field, e)).coords)
        return [[cols[j][i] for j in range(phi)] for i in range(phi)]

    def inverse(self) -> "CyclotomicNumber":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        M = self.multiplication_matrix()
        phi = len(M)
        rhs = [Fraction(1)] + [Fraction(0)] * (phi - 1)
        sol = solve_rational(M, rhs)
        return CyclotomicNumber(self.field, sol)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber(self.field, [a / other for a in self.coords])
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.field.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        try:
            o = self._coerce(other)
        except (ValueError, TypeError):
            return NotImplemented
        return self.coords == o.coords

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self.coords[0])
        return hash((self.level, self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coords[0]

    def embed(self, level: int) -> "CyclotomicNumber":
        """Image in Q(zeta_level) for a multiple `level` of the current level."""
        if level == self.level:
            return self
        if level % self.level:
            raise ValueError(f"cannot embed level {self.level} into {level}")
        step = level // self.level
        F = CyclotomicField(level)
        vec = np.zeros(step * (self.field.degree - 1) + 1, dtype=object)
        vec[:] = 0
        for i, c in enumerate(self.coords):
            vec[i * step] = c
        return CyclotomicNumber(F, F.reduce_rows(vec[None, :])[0])

    def descend(self, level: int) -> "CyclotomicNumber":
        """Write the element over Q(zeta_level); raises if it does not lie there."""
        if level == self.level:
            return self
        F = CyclotomicField(level)
        # solve coords against the images of the small basis
        basis = [F.root_of_unity(i).embed(self.level).coords for i in range(F.degree)]
        M = [[basis[j][i] for j in range(F.degree)] for i in range(self.field.degree)]
        sol = solve_rational(M, list(self.coords))
        out = CyclotomicNumber(F, sol)
        if out.embed(self.level) != self:
            raise ValueError(f"element does not lie in Q(zeta_{level})")
        return out

    def complex(self) -> complex:
        z = cmath.exp(2j * math.pi / self.level)
        return sum(float(c) * z ** i for i, c in enumerate(self.coords))

    def __repr__(self) -> str:
        if self.is_rational():
            return str(self.coords[0])
        parts = []
        for i, c in enumerate(self.coords):
            if c:
                mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
                if not mono:
                    parts.append(str(c))
                elif c == 1:
                    parts.append(mono)
                elif c == -1:
                    parts.append("-" + mono)
                else:
                    parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ") + f" [z=zeta_{self.level}]"


def solve_rational(M, rhs):
    """Solve a square nonsingular rational system by Gaussian elimination."""
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(rhs[i])] for i, row in enumerate(M)]
    cols = len(A[0]) - 1
    r = 0
    piv_cols = []
    for c in range(cols):
        p = next((i for i in range(r, n) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(n):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        piv_cols.append(c)
        r += 1
        if r == n:
            break
    if any(A[i][-1] != 0 for i in range(r, n)):
        raise ValueError("inconsistent system")
    sol = [Fraction(0)] * cols
    for i, c in enumerate(piv_cols):
        sol[c] = A[i][-1]
    return sol
