"""Truncated q-series with exponents in (1/D)Z and cyclotomic coefficients.

A series is stored as an integer array of shape (length, phi(N)) together
with a positive common denominator: row k holds the zeta-coordinates of the
coefficient of q^((start + k)/D) times `den`.  All terms with exponent
below (start + length)/D are exact.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce

import numpy as np

from .cyclotomic import CyclotomicField, CyclotomicNumber
from .errors import PrecisionTooSmall


def _obj_zeros(shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(0)
    return out


def _gcd_all(arr: np.ndarray, start: int = 0) -> int:
    return reduce(math.gcd, (int(x) for x in arr.flat if x), start)


class FractionalQSeries:
    __slots__ = ("field", "D", "start", "num", "den")

    def __init__(self, field: CyclotomicField, D: int, start: int, num: np.ndarray, den: int = 1,
                 _normalize: bool = True):
        self.field = field
        self.D = int(D)
        self.start = int(start)
        num = np.asarray(num, dtype=object)
        if num.ndim != 2 or num.shape[1] != field.degree:
            raise ValueError("coefficient array must have shape (length, phi(N))")
        self.num = num
        self.den = int(den)
        if self.den <= 0:
            raise ValueError("denominator must be positive")
        if _normalize:
            self._reduce()

    def _reduce(self) -> None:
        if self.den == 1:
            return
        g = _gcd_all(self.num, self.den)
        if g > 1:
            self.num = self.num // g
            self.den //= g

    # -- constructors
    @classmethod
    def from_terms(cls, terms: dict, D: int, truncation: Fraction, field: CyclotomicField | None = None):
        """Build from {exponent: coefficient}; exponents must lie in (1/D)Z and be < truncation."""
        field = field or CyclotomicField(1)
        trunc_k = Fraction(truncation) * D
        if trunc_k.denominator != 1:
            raise ValueError("truncation must lie in (1/D)Z")
        ks = {}
        for e, c in terms.items():
            k = Fraction(e) * D
            if k.denominator != 1:
                raise ValueError(f"exponent {e} is not in (1/{D})Z")
            if k >= trunc_k:
                raise ValueError(f"exponent {e} is at or beyond the truncation")
            ks[int(k)] = field(c) if not isinstance(c, CyclotomicNumber) else c.embed(field.level)
        start = min(ks) if ks else int(trunc_k)
        length = int(trunc_k) - start
        den = reduce(math.lcm, (x.denominator for c in ks.values() for x in c.coords), 1)
        num = _obj_zeros((length, field.degree))
        for k, c in ks.items():
            num[k - start] = [int(x * den) for x in c.coords]
        return cls(field, D, start, num, den)

    @classmethod
    def one(cls, field: CyclotomicField, D: int, truncation: Fraction) -> "FractionalQSeries":
        return cls.from_terms({0: 1}, D, truncation, field)

    @classmethod
    def from_integer_coeffs(cls, coeffs, D: int = 1, start: int = 0,
                            field: CyclotomicField | None = None) -> "FractionalQSeries":
        field = field or CyclotomicField(1)
        num = _obj_zeros((len(coeffs), field.degree))
        num[:, 0] = [int(c) for c in coeffs]
        return cls(field, D, start, num)

    # -- data access
    @property
    def level(self) -> int:
        return self.field.level

    @property
    def length(self) -> int:
        return self.num.shape[0]

    @property
    def truncation(self) -> Fraction:
        return Fraction(self.start + self.length, self.D)

    @property
    def exponent_denominator(self) -> int:
        return self.D

    def coefficient(self, e) -> CyclotomicNumber:
        k = Fraction(e) * self.D
        if Fraction(e) >= self.truncation:
            raise PrecisionTooSmall(f"exponent {e} is beyond the truncation {self.truncation}")
        if k.denominator != 1 or k < self.start:
            return self.field(0)
        row = self.num[int(k) - self.start]
        return CyclotomicNumber(self.field, [Fraction(int(x), self.den) for x in row])

    def terms(self) -> dict:
        out = {}
        for i in range(self.length):
            row = self.num[i]
            if any(row):
                out[Fraction(self.start + i, self.D)] = CyclotomicNumber(
                    self.field, [Fraction(int(x), self.den) for x in row])
        return out

    def first_index(self) -> int | None:
        for i in range(self.length):
            if any(self.num[i]):
                return i
        return None

    def valuation(self) -> Fraction:
        i = self.first_index()
        if i is None:
            raise PrecisionTooSmall("no nonzero term below the truncation")
        return Fraction(self.start + i, self.D)

    def leading_coefficient(self) -> CyclotomicNumber:
        return self.coefficient(self.valuation())

    def is_rational(self) -> bool:
        return not any(x for x in self.num[:, 1:].flat)

    # -- reshaping
    def _stripped(self) -> "FractionalQSeries":
        i = self.first_index()
        if i is None or i == 0:
            return self
        return FractionalQSeries(self.field, self.D, self.start + i, self.num[i:], self.den, False)

    def with_denominator(self, D: int) -> "FractionalQSeries":
        """Same series on the finer exponent lattice (1/D)Z."""
        if D == self.D:
            return self
        if D % self.D:
            raise ValueError(f"{D} is not a multiple of {self.D}")
        s = D // self.D
        num = _obj_zeros((self.length * s, self.field.degree))
        num[::s] = self.num
        return FractionalQSeries(self.field, D, self.start * s, num, self.den, False)

    def embed(self, level: int) -> "FractionalQSeries":
        if level == self.level:
            return self
        if level % self.level:
            raise ValueError(f"cannot embed level {self.level} into {level}")
        F = CyclotomicField(level)
        step = level // self.level
        wide = _obj_zeros((self.length, step * (self.field.degree - 1) + 1))
        wide[:, ::step] = self.num
        return FractionalQSeries(F, self.D, self.start, F.reduce_rows(wide), self.den, False)

    def descend(self, level: int) -> "FractionalQSeries":
        """Rewrite over Q(zeta_level); raises ValueError if a coefficient lies outside."""
        if level == self.level:
            return self
        F = CyclotomicField(level)
        basis = _embedding_rows(level, self.level)
        # pick phi(level) coordinates on which the embedding is invertible
        cols = _pivot_coordinates(basis)
        sub = [[basis[j][c] for j in range(F.degree)] for c in cols]
        inv = _inverse_matrix(sub)
        num = _obj_zeros((self.length, F.degree))
        den = 1
        for i in range(F.degree):
            for j, c in enumerate(cols):
                if inv[i][j]:
                    den = math.lcm(den, inv[i][j].denominator)
        for i in range(F.degree):
            for j, c in enumerate(cols):
                x = inv[i][j] * den
                if x:
                    num[:, i] += self.num[:, c] * int(x)
        out = FractionalQSeries(F, self.D, self.start, num, self.den * den)
        back = out.embed(self.level)
        if (back - self).first_index() is not None:
            raise ValueError(f"series does not descend to Q(zeta_{level})")
        return out

    def truncate(self, truncation) -> "FractionalQSeries":
        k = Fraction(truncation) * self.D
        if k.denominator != 1:
            raise ValueError("truncation must lie in the exponent lattice")
        k = int(k)
        if k >= self.start + self.length:
            return self
        length = max(k - self.start, 0)
        return FractionalQSeries(self.field, self.D, self.start, self.num[:length], self.den)

    def _align(self, other: "FractionalQSeries"):
        level = math.lcm(self.level, other.level)
        a, b = self.embed(level), other.embed(level)
        D = math.lcm(a.D, b.D)
        return a.with_denominator(D), b.with_denominator(D)

    # -- arithmetic
    def __add__(self, other):
        if not isinstance(other, FractionalQSeries):
            other = self._constant(other)
        a, b = self._align(other)
        start = min(a.start, b.start)
        stop = min(a.start + a.length, b.start + b.length)
        den = math.lcm(a.den, b.den)
        num = _obj_zeros((max(stop - start, 0), a.field.degree))
        for s in (a, b):
            lo, hi = s.start, min(s.start + s.length, stop)
            if hi > lo:
                num[lo - start:hi - start] += s.num[:hi - lo] * (den // s.den)
        return FractionalQSeries(a.field, a.D, start, num, den)

    __radd__ = __add__

    def __neg__(self):
        return FractionalQSeries(self.field, self.D, self.start, -self.num, self.den, False)

    def __sub__(self, other):
        if not isinstance(other, FractionalQSeries):
            other = self._constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def _constant(self, c) -> "FractionalQSeries":
        return FractionalQSeries.from_terms({0: c}, self.D, max(self.truncation, Fraction(1, self.D)),
                                            self.field)

    def scale(self, c) -> "FractionalQSeries":
        """Multiply by a constant (int, Fraction or cyclotomic number)."""
        if isinstance(c, (int, Fraction)):
            c = Fraction(c)
            num = self.num * c.numerator
            den = self.den * c.denominator
            if den < 0:
                num, den = -num, -den
            return FractionalQSeries(self.field, self.D, self.start, num, den)
        c = c.embed(math.lcm(c.level, self.level)) if c.level != self.level else c
        s = self.embed(c.level)
        cden = reduce(math.lcm, (x.denominator for x in c.coords), 1)
        cnum = [int(x * cden) for x in c.coords]
        phi = s.field.degree
        wide = _obj_zeros((s.length, 2 * phi - 1))
        for j, y in enumerate(cnum):
            if y:
                wide[:, j:j + phi] += s.num * y
        return FractionalQSeries(s.field, s.D, s.start, s.field.reduce_rows(wide), s.den * cden)

    def shift(self, e) -> "FractionalQSeries":
        """Multiply by q^e."""
        k = Fraction(e) * self.D
        if k.denominator != 1:
            D = math.lcm(self.D, k.denominator * self.D)
            return self.with_denominator(D).shift(e)
        return FractionalQSeries(self.field, self.D, self.start + int(k), self.num, self.den, False)

    def __mul__(self, other):
        if not isinstance(other, FractionalQSeries):
            return self.scale(other)
        a, b = self._align(other)
        a, b = a._stripped(), b._stripped()
        start = a.start + b.start
        length = min(a.length, b.length)
        phi = a.field.degree
        cols_a = [i for i in range(phi) if any(a.num[:length, i])]
        cols_b = [j for j in range(phi) if any(b.num[:length, j])]
        wide = _obj_zeros((length, 2 * phi - 1))
        for i in cols_a:
            x = a.num[:length, i]
            for j in cols_b:
                wide[:, i + j] += np.convolve(x, b.num[:length, j])[:length]
        num = a.field.reduce_rows(wide)
        return FractionalQSeries(a.field, a.D, start, num, a.den * b.den)

    __rmul__ = __mul__

    def inverse(self) -> "FractionalQSeries":
        """1/self, with relative precision preserved."""
        s = self._stripped()
        if s.length == 0 or not any(s.num[0]):
            raise PrecisionTooSmall("cannot invert a series with no known leading term")
        lead = s.leading_coefficient()
        monic = s.scale(lead.inverse()).shift(-s.valuation())
        # Newton iteration b <- b(2 - a b) on a series with constant term 1
        L = monic.length
        b = FractionalQSeries.one(s.field, s.D, Fraction(1, s.D))
        prec = 1
        while prec < L:
            prec = min(2 * prec, L)
            a = monic.truncate(Fraction(prec, s.D))
            b = b.truncate(Fraction(prec, s.D))
            ab = (a * _pad(b, prec)).truncate(Fraction(prec, s.D))
            b = _pad(b, prec) * (2 - ab)
            b = b.truncate(Fraction(prec, s.D))
        return b.scale(lead.inverse()).shift(-s.valuation())

    def __truediv__(self, other):
        if isinstance(other, FractionalQSeries):
            return self * other.inverse()
        if isinstance(other, (int, Fraction)):
            return self.scale(1 / Fraction(other))
        return self.scale(other.inverse())

    def __pow__(self, k: int) -> "FractionalQSeries":
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            s = self._stripped()
            return FractionalQSeries.one(self.field, self.D, Fraction(s.length, self.D))
        out = None
        base = self
        while k:
            if k & 1:
                out = base if out is None else out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def substitute_power(self, m: int) -> "FractionalQSeries":
        """f(q^m)."""
        num = _obj_zeros((self.length * m, self.field.degree))
        num[::m] = self.num
        return FractionalQSeries(self.field, self.D, self.start * m, num, self.den, False)

    def equals_to_precision(self, other: "FractionalQSeries") -> bool:
        d = self - other
        return not any(x for x in d.num.flat)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FractionalQSeries):
            return NotImplemented
        return self.truncation == other.truncation and self.equals_to_precision(other)

    __hash__ = None

    # -- output
    def dump(self) -> str:
        """One line per nonzero term: 'num/den : [c0, c1, ...]' with exact fractions."""
        lines = []
        for e, c in sorted(self.terms().items()):
            coords = ", ".join(f"{x.numerator}/{x.denominator}" for x in c.coords)
            lines.append(f"{e.numerator}/{e.denominator} : [{coords}]")
        return "\n".join(lines)

    @classmethod
    def load(cls, text: str, level: int, D: int, truncation) -> "FractionalQSeries":
        F = CyclotomicField(level)
        terms = {}
        for line in text.strip().splitlines():
            e, _, body = line.partition(":")
            coords = [Fraction(x) for x in body.strip().strip("[]").split(",")]
            terms[Fraction(e.strip())] = CyclotomicNumber(F, coords)
        return cls.from_terms(terms, D, Fraction(truncation), F)

    def __repr__(self) -> str:
        parts = []
        for e, c in sorted(self.terms().items())[:8]:
            parts.append(f"({c!r})*q^({e})")
        return " + ".join(parts) + f" + O(q^({self.truncation}))"


def _pad(s: FractionalQSeries, length: int) -> FractionalQSeries:
    """Treat missing high terms of an exact finite series as zero (used by Newton steps)."""
    if s.length >= length:
        return s
    num = _obj_zeros((length, s.field.degree))
    num[:s.length] = s.num
    return FractionalQSeries(s.field, s.D, s.start, num, s.den, False)


def _embedding_rows(small: int, big: int) -> list[list[int]]:
    """Coordinates in Q(zeta_big) of zeta_small^i for the power basis of Q(zeta_small)."""
    F = CyclotomicField(small)
    return [[int(x) for x in F.root_of_unity(i).embed(big).coords] for i in range(F.degree)]


def _pivot_coordinates(basis: list[list[int]]) -> list[int]:
    from .linalg import rank
    chosen: list[int] = []
    width = len(basis[0])
    for c in range(width):
        trial = chosen + [c]
        if rank([[basis[j][k] for j in range(len(basis))] for k in trial]) == len(trial):
            chosen = trial
            if len(chosen) == len(basis):
                break
    return chosen


def _inverse_matrix(M) -> list[list[Fraction]]:
    from .cyclotomic import solve_rational
    n = len(M)
    cols = [solve_rational(M, [1 if i == j else 0 for i in range(n)]) for j in range(n)]
    return [[cols[j][i] for j in range(n)] for i in range(n)]
