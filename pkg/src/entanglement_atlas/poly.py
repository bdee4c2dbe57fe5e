"""Dense univariate polynomials and rational functions with exact coefficients.

Coefficients are Fractions (ring None) or elements of a cyclotomic field
(ring a CyclotomicField).  Arithmetic never leaves the coefficient field.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import reduce

from .cyclotomic import CyclotomicField, CyclotomicNumber
from .errors import ZeroInput


def _lift(c, ring):
    if ring is None:
        if isinstance(c, CyclotomicNumber):
            return c.rational()
        return Fraction(c)
    return ring(c)


def _common_ring(a, b):
    if a is None:
        return b
    if b is None or a is b:
        return a
    return CyclotomicField(math.lcm(a.level, b.level))


class Poly:
    """Polynomial with ascending coefficient tuple; the zero polynomial has no coefficients."""

    __slots__ = ("coeffs", "ring")

    def __init__(self, coeffs=(), ring: CyclotomicField | None = None):
        cs = [_lift(c, ring) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)
        self.ring = ring

    # -- constructors
    @classmethod
    def x(cls, ring=None) -> "Poly":
        return cls([0, 1], ring)

    @classmethod
    def const(cls, c, ring=None) -> "Poly":
        return cls([c], ring)

    @classmethod
    def from_roots(cls, roots, ring=None) -> "Poly":
        out = cls([1], ring)
        for r in roots:
            out = out * cls([-r, 1], ring)
        return out

    @classmethod
    def parse(cls, text: str, var: str = "t") -> "Poly":
        f = parse_rational_function(text, var)
        if f.den.degree != 0:
            raise ValueError(f"{text!r} is not a polynomial")
        return f.num * (1 / f.den.coeffs[0])

    @classmethod
    def from_json(cls, arr) -> "Poly":
        return cls([Fraction(s) for s in arr])

    def to_json(self) -> list[str]:
        if self.ring is not None:
            raise ValueError("only rational polynomials serialize to JSON")
        return [f"{c.numerator}/{c.denominator}" for c in self.coeffs]

    # -- basic data
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self):
        return self.coeffs[-1] if self.coeffs else self._zero()

    def _zero(self):
        return _lift(0, self.ring)

    def coeff(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else self._zero()

    def in_ring(self, ring) -> "Poly":
        return Poly(self.coeffs, ring)

    def is_rational(self) -> bool:
        return self.ring is None or all(c.is_rational() for c in self.coeffs)

    def to_rational(self) -> "Poly":
        return Poly([c if self.ring is None else c.rational() for c in self.coeffs])

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, CyclotomicNumber):
            return Poly([other], _common_ring(self.ring, other.field))
        return Poly([other], self.ring)

    def _align(self, other):
        o = self._coerce(other)
        ring = _common_ring(self.ring, o.ring)
        a = self if self.ring is ring else self.in_ring(ring)
        b = o if o.ring is ring else o.in_ring(ring)
        return a, b, ring

    # -- arithmetic
    def __add__(self, other):
        a, b, ring = self._align(other)
        n = max(len(a.coeffs), len(b.coeffs))
        return Poly([a.coeff(i) + b.coeff(i) for i in range(n)], ring)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs], self.ring)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        a, b, ring = self._align(other)
        if a.is_zero() or b.is_zero():
            return Poly([], ring)
        if len(b.coeffs) == 1:
            c = b.coeffs[0]
            return Poly([x * c for x in a.coeffs], ring)
        if len(a.coeffs) == 1:
            c = a.coeffs[0]
            return Poly([c * x for x in b.coeffs], ring)
        if ring is None:
            return Poly(_mul_rational(a.coeffs, b.coeffs))
        out = [ring(0)] * (len(a.coeffs) + len(b.coeffs) - 1)
        for i, x in enumerate(a.coeffs):
            if x.is_zero():
                continue
            for j, y in enumerate(b.coeffs):
                out[i + j] = out[i + j] + x * y
        return Poly(out, ring)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly([1], self.ring)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __truediv__(self, other):
        if isinstance(other, Poly):
            q, r = divmod(self, other)
            if not r.is_zero():
                raise ArithmeticError("inexact polynomial division")
            return q
        o = self._coerce(other)
        inv = 1 / o.coeffs[0]
        return self * inv

    def __divmod__(self, other: "Poly"):
        a, b, ring = self._align(other)
        if b.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(a.coeffs)
        db = b.degree
        if len(rem) <= db:
            return Poly([], ring), a
        inv = 1 / b.coeffs[-1]
        quo = [None] * (len(rem) - db)
        for i in range(len(rem) - 1 - db, -1, -1):
            c = rem[i + db] * inv
            quo[i] = c
            if c != 0:
                for j, y in enumerate(b.coeffs):
                    rem[i + j] = rem[i + j] - c * y
        return Poly(quo, ring), Poly(rem[:db], ring)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            other = self._coerce(other)
        if len(self.coeffs) != len(other.coeffs):
            return False
        return all(x == y for x, y in zip(self.coeffs, other.coeffs))

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __call__(self, x):
        acc = x * 0 if not isinstance(x, Poly) else Poly([], x.ring)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Poly":
        return Poly([c * i for i, c in enumerate(self.coeffs)][1:], self.ring)

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self * (1 / self.lead)

    def content(self) -> Fraction:
        """Positive rational c with self / c a primitive integer polynomial."""
        if self.ring is not None:
            raise ValueError("content is defined for rational polynomials only")
        if self.is_zero():
            return Fraction(0)
        den = reduce(math.lcm, (c.denominator for c in self.coeffs), 1)
        num = reduce(math.gcd, (c.numerator for c in self.coeffs), 0)
        return Fraction(num, den)

    def integer_coeffs(self) -> list[int]:
        c = self.content()
        return [int(x / c) for x in self.coeffs]

    def compose(self, g: "Poly") -> "Poly":
        return self(g)

    def reverse(self, degree: int | None = None) -> "Poly":
        d = self.degree if degree is None else degree
        return Poly([self.coeff(d - i) for i in range(d + 1)], self.ring)

    def evaluate_complex(self, z: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + (complex(float(c)) if self.ring is None else c.complex())
        return acc

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)})"

    def __str__(self) -> str:
        return format_poly(self)


def _mul_rational(a, b):
    # integer convolution under a common denominator
    da = reduce(math.lcm, (x.denominator for x in a), 1)
    db = reduce(math.lcm, (x.denominator for x in b), 1)
    ia = [int(x * da) for x in a]
    ib = [int(x * db) for x in b]
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(ia):
        if x:
            for j, y in enumerate(ib):
                out[i + j] += x * y
    den = da * db
    return [Fraction(v, den) for v in out]


def format_poly(p: Poly, var: str = "t") -> str:
    if p.is_zero():
        return "0"
    parts = []
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if c == 0:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if p.ring is not None and not c.is_rational():
            cs = f"({c!r})"
            parts.append(f"+ {cs}*{mono}" if mono else f"+ {cs}")
            continue
        c = c if p.ring is None else c.rational()
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if mono and a == 1:
            body = mono
        elif mono:
            body = f"{a}*{mono}"
        else:
            body = str(a)
        parts.append(f"{sign} {body}")
    s = " ".join(parts)
    return s[2:] if s.startswith("+ ") else "-" + s[2:]


# ---------------------------------------------------------------- gcd and squarefree

def _primitive_int(p: Poly) -> list[int]:
    cs = p.integer_coeffs()
    if cs[-1] < 0:
        cs = [-c for c in cs]
    return cs


def _int_prem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b over Z."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    e = len(a) - len(b) + 1
    while len(r) - 1 >= db and any(r):
        c = r[-1]
        r = [x * lb for x in r]
        shift = len(r) - 1 - db
        for j, y in enumerate(b):
            r[shift + j] -= c * y
        r.pop()
        e -= 1
        while r and r[-1] == 0:
            r.pop()
    if e > 0:
        r = [x * lb ** e for x in r]
    return r


def _subresultant_gcd(a: list[int], b: list[int]) -> list[int]:
    """Primitive gcd of two primitive integer polynomials via the subresultant PRS."""
    if len(a) < len(b):
        a, b = b, a
    g = h = 1
    while True:
        delta = len(a) - len(b)
        r = _int_prem(a, b)
        if not r:
            break
        if len(r) == 1:
            return [1]
        a, b = b, [x // (g * h ** delta) for x in r]
        g = a[-1]
        h = (g ** delta) // (h ** (delta - 1)) if delta >= 1 else h ** (1 - delta) * g ** delta
    cont = reduce(math.gcd, b, 0)
    out = [x // cont for x in b]
    return out if out[-1] > 0 else [-x for x in out]


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd; zero only when both inputs are zero."""
    a, b, ring = a._align(b)
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if ring is None:
        if a.degree == 0 or b.degree == 0:
            return Poly([1])
        g = _subresultant_gcd(_primitive_int(a), _primitive_int(b))
        return Poly(g).monic()
    while not b.is_zero():
        a, b = b, (a % b).monic() if not (a % b).is_zero() else Poly([], ring)
    return a.monic()


def squarefree_decomposition(f: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: monic squarefree, pairwise coprime s_i with f = lc * prod s_i^i."""
    if f.is_zero():
        raise ZeroInput("squarefree decomposition of zero")
    if f.degree == 0:
        return []
    out = []
    df = f.derivative()
    a = poly_gcd(f, df)
    b = f / a
    c = df / a
    d = c - b.derivative()
    i = 1
    while b.degree > 0:
        ai = poly_gcd(b, d)
        b = b / ai
        c = d / ai
        d = c - b.derivative()
        if ai.degree > 0:
            out.append((ai.monic(), i))
        i += 1
    return out


def squarefree_part(f: Poly) -> Poly:
    """Product of the factors of odd multiplicity, monic."""
    out = Poly([1], f.ring)
    for s, m in squarefree_decomposition(f):
        if m % 2:
            out = out * s
    return out


# ---------------------------------------------------------------- rational functions

class RationalFunction:
    """num/den with gcd 1 and monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _reduced: bool = False):
        num = num if isinstance(num, Poly) else Poly([num])
        if den is None:
            den = Poly([1], num.ring)
        elif not isinstance(den, Poly):
            den = num._coerce(den)
        num, den, _ = num._align(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not _reduced:
            if num.is_zero():
                den = Poly([1], num.ring)
            else:
                g = poly_gcd(num, den)
                if g.degree > 0:
                    num, den = num / g, den / g
            lc = den.lead
            num, den = num * (1 / lc), den * (1 / lc)
        self.num = num
        self.den = den

    @property
    def ring(self):
        return self.num.ring

    @classmethod
    def x(cls, ring=None) -> "RationalFunction":
        return cls(Poly.x(ring))

    @classmethod
    def parse(cls, text: str, var: str = "t") -> "RationalFunction":
        return parse_rational_function(text, var)

    @classmethod
    def from_json(cls, obj) -> "RationalFunction":
        return cls(Poly.from_json(obj["num"]), Poly.from_json(obj["den"]))

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @property
    def degree(self) -> int:
        return max(self.num.degree, self.den.degree, 0)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def constant(self):
        if not self.is_constant():
            raise ValueError("not a constant")
        return self.num.coeff(0)

    def is_rational(self) -> bool:
        return self.num.is_rational() and self.den.is_rational()

    def to_rational(self) -> "RationalFunction":
        return RationalFunction(self.num.to_rational(), self.den.to_rational(), _reduced=True)

    def in_ring(self, ring) -> "RationalFunction":
        return RationalFunction(self.num.in_ring(ring), self.den.in_ring(ring), _reduced=True)

    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Poly):
            return RationalFunction(other, _reduced=False)
        return RationalFunction(self.num._coerce(other), _reduced=True)

    def __add__(self, other):
        o = self._coerce(other)
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return RationalFunction(self.den ** (-k), self.num ** (-k))
        return RationalFunction(self.num ** k, self.den ** k, _reduced=True)

    def __eq__(self, other) -> bool:
        try:
            o = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __call__(self, x):
        if isinstance(x, RationalFunction):
            return compose(self, x)
        return self.num(x) / self.den(x)

    def derivative(self) -> "RationalFunction":
        return RationalFunction(self.num.derivative() * self.den - self.num * self.den.derivative(),
                                self.den * self.den)

    def __repr__(self) -> str:
        return f"RationalFunction(({self.num}) / ({self.den}))"

    def __str__(self) -> str:
        if self.den.degree == 0:
            return str(self.num)
        return f"({self.num}) / ({self.den})"


def compose(f: RationalFunction, g: RationalFunction) -> RationalFunction:
    """f(g(t)) via homogenisation: sum f_i A^i B^(d-i) over sum h_i A^i B^(d-i)."""
    if not isinstance(f, RationalFunction):
        f = RationalFunction(f)
    if not isinstance(g, RationalFunction):
        g = RationalFunction(g)
    A, B = g.num, g.den
    d = max(f.num.degree, f.den.degree, 0)
    ring = _common_ring(f.ring, g.ring)
    powA = [Poly([1], ring)]
    powB = [Poly([1], ring)]
    for _ in range(d):
        powA.append(powA[-1] * A)
        powB.append(powB[-1] * B)

    def homog(p: Poly) -> Poly:
        out = Poly([], ring)
        for i, c in enumerate(p.coeffs):
            if c != 0:
                out = out + powA[i] * powB[d - i] * c
        return out

    return RationalFunction(homog(f.num), homog(f.den))


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\*\*|[-+*/^()]))")


def parse_rational_function(text: str, var: str = "t") -> RationalFunction:
    """Parse arithmetic in one variable: integers, + - * / ^ (or **), parentheses.

    Juxtaposition such as 3t or (t+1)(t-1) is read as multiplication.
    """
    tokens = []
    pos = 0
    text = text.replace("−", "-").replace("·", "*")
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise ValueError(f"cannot parse {text[pos:]!r}")
        num, name, op = m.groups()
        if num is not None:
            tokens.append(("num", int(num)))
        elif name is not None:
            if name != var:
                raise ValueError(f"unknown symbol {name!r}")
            tokens.append(("var", name))
        else:
            tokens.append(("op", "^" if op == "**" else op))
        pos = m.end()
    tokens.append(("end", None))
    i = 0
    X = RationalFunction(Poly.x())

    def peek():
        return tokens[i]

    def take():
        nonlocal i
        tok = tokens[i]
        i += 1
        return tok

    def expr():
        val = term()
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            rhs = term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def starts_atom(tok):
        return tok[0] in ("num", "var") or tok == ("op", "(")

    def term():
        val = unary()
        while True:
            tok = peek()
            if tok in (("op", "*"), ("op", "/")):
                take()
                rhs = unary()
                val = val * rhs if tok[1] == "*" else val / rhs
            elif starts_atom(tok):
                val = val * power()
            else:
                return val

    def unary():
        if peek() == ("op", "-"):
            take()
            return -unary()
        if peek() == ("op", "+"):
            take()
            return unary()
        return power()

    def power():
        base = atom()
        if peek() == ("op", "^"):
            take()
            sign = 1
            if peek() == ("op", "-"):
                take()
                sign = -1
            kind, e = take()
            if kind != "num":
                raise ValueError("exponent must be an integer")
            return base ** (sign * e)
        return base

    def atom():
        kind, val = take()
        if kind == "num":
            return RationalFunction(Poly([val]))
        if kind == "var":
            return X
        if (kind, val) == ("op", "("):
            inner = expr()
            if take() != ("op", ")"):
                raise ValueError("unbalanced parentheses")
            return inner
        raise ValueError(f"unexpected token {val!r}")

    out = expr()
    if peek()[0] != "end":
        raise ValueError(f"trailing input in {text!r}")
    return out
