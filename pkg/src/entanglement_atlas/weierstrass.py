"""Weierstrass models over Q or Q(t), square classes, twists and quartic reduction."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from sympy import factorint

from .errors import SingularModel, SingularQuartic, ZeroInput
from .poly import Poly, RationalFunction, squarefree_decomposition


def _rf(x) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, Poly):
        return RationalFunction(x)
    return RationalFunction(Poly([Fraction(x)]))


@dataclass(frozen=True)
class WeierstrassModel:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6."""

    a1: RationalFunction
    a2: RationalFunction
    a3: RationalFunction
    a4: RationalFunction
    a6: RationalFunction

    @classmethod
    def of(cls, a1=0, a2=0, a3=0, a4=0, a6=0) -> "WeierstrassModel":
        return cls(*(_rf(x) for x in (a1, a2, a3, a4, a6)))

    @classmethod
    def short(cls, a4, a6) -> "WeierstrassModel":
        return cls.of(0, 0, 0, a4, a6)

    @property
    def ainvs(self) -> tuple:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def is_constant(self) -> bool:
        return all(a.is_constant() for a in self.ainvs)

    def is_short(self) -> bool:
        return self.a1.is_zero() and self.a2.is_zero() and self.a3.is_zero()

    @property
    def b2(self):
        return self.a1 * self.a1 + self.a2 * 4

    @property
    def b4(self):
        return self.a1 * self.a3 + self.a4 * 2

    @property
    def b6(self):
        return self.a3 * self.a3 + self.a6 * 4

    @property
    def b8(self):
        a1, a2, a3, a4, a6 = self.ainvs
        return a1 * a1 * a6 + a2 * a6 * 4 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4

    @property
    def c4(self):
        return self.b2 * self.b2 - self.b4 * 24

    @property
    def c6(self):
        return -(self.b2 ** 3) + self.b2 * self.b4 * 36 - self.b6 * 216

    @property
    def discriminant(self):
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        return -(b2 * b2 * b8) - b4 ** 3 * 8 - b6 * b6 * 27 + b2 * b4 * b6 * 9

    def j_invariant(self):
        disc = self.discriminant
        if disc.is_zero():
            raise SingularModel("discriminant vanishes")
        return self.c4 ** 3 / disc

    def evaluate(self, t) -> "WeierstrassModel":
        """Specialize a family at t = value."""
        return WeierstrassModel.of(*(a(Fraction(t)) for a in self.ainvs))

    def constants(self) -> tuple[Fraction, ...]:
        return tuple(a.constant() for a in self.ainvs)

    def __str__(self) -> str:
        return f"[{', '.join(str(a) for a in self.ainvs)}]"


def weierstrass_invariants(E: WeierstrassModel):
    """(c4, c6, Delta, j); raises SingularModel when Delta = 0."""
    disc = E.discriminant
    if disc.is_zero():
        raise SingularModel("discriminant vanishes")
    return E.c4, E.c6, disc, E.c4 ** 3 / disc


def short_form(E: WeierstrassModel) -> WeierstrassModel:
    """y^2 = x^3 - c4/48 x - c6/864, isomorphic over the base field."""
    if E.is_short():
        return E
    return WeierstrassModel.short(E.c4 * Fraction(-1, 48), E.c6 * Fraction(-1, 864))


def quadratic_twist(E: WeierstrassModel, d) -> WeierstrassModel:
    """Twist of the short form by d: a4 -> d^2 a4, a6 -> d^3 a6."""
    d = _rf(d)
    if d.is_zero():
        raise ZeroInput("twist by zero")
    S = short_form(E)
    return WeierstrassModel.short(S.a4 * d * d, S.a6 * d ** 3)


# ---------------------------------------------------------------- square classes

def squarefree_integer(n: int) -> int:
    """Signed squarefree part of a nonzero integer."""
    if n == 0:
        raise ZeroInput("squarefree part of zero")
    out = -1 if n < 0 else 1
    for p, e in factorint(abs(n)).items():
        if e % 2:
            out *= p
    return out


@dataclass(frozen=True)
class SquareClass:
    """constant * poly modulo squares: constant squarefree in Z, poly monic squarefree."""

    constant: int
    poly: Poly

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        c = squarefree_integer(self.constant * other.constant)
        f = RationalFunction(self.poly * other.poly)
        return square_class(f * c)

    def __str__(self) -> str:
        if self.poly.degree <= 0:
            return str(self.constant)
        return f"{self.constant}*({self.poly})" if self.constant != 1 else str(self.poly)


def square_class(f) -> SquareClass:
    """Class of a nonzero rational function (or rational number) modulo squares."""
    f = _rf(f)
    if f.is_zero():
        raise ZeroInput("square class of zero")
    lead = Fraction(f.num.lead) / Fraction(f.den.lead)
    const = squarefree_integer(lead.numerator * lead.denominator)
    part = Poly([1])
    for p in (f.num, f.den):
        for s, m in squarefree_decomposition(p):
            if m % 2:
                part = part * s
    return SquareClass(const, part.monic())


def _is_power(x: Fraction, k: int) -> bool:
    x = Fraction(x)
    if x < 0:
        if k % 2 == 0:
            return False
        x = -x
    return _int_root(x.numerator, k) is not None and _int_root(x.denominator, k) is not None


def _int_root(n: int, k: int) -> int | None:
    if n < 2:
        return n
    r = int(round(n ** (1.0 / k))) if n.bit_length() < 1000 else 1 << (n.bit_length() // k)
    # Newton refinement for large inputs
    for _ in range(200):
        nr = ((k - 1) * r + n // max(r, 1) ** (k - 1)) // k
        if abs(nr - r) <= 1:
            break
        r = nr
    for c in (r - 1, r, r + 1):
        if c > 0 and c ** k == n:
            return c
    return None


def is_rational_square(x) -> bool:
    return _is_power(Fraction(x), 2)


def q_isomorphic(E1: WeierstrassModel, E2: WeierstrassModel) -> bool:
    """Isomorphism over Q of two nonsingular models with rational coefficients."""
    for E in (E1, E2):
        if not E.is_constant():
            raise ValueError("q_isomorphic needs constant models")
        if E.discriminant.is_zero():
            raise SingularModel("discriminant vanishes")
    c4a, c6a = E1.c4.constant(), E1.c6.constant()
    c4b, c6b = E2.c4.constant(), E2.c6.constant()
    if E1.j_invariant() != E2.j_invariant():
        return False
    if c4a == 0:
        # j = 0: sextic twists, c6' = u^-6 c6
        return _is_power(Fraction(c6b) / Fraction(c6a), 6)
    if c6a == 0:
        # j = 1728: quartic twists, c4' = u^-4 c4
        return _is_power(Fraction(c4b) / Fraction(c4a), 4)
    # generic j: the twist parameter is c6' c4 / (c6 c4')
    return is_rational_square(Fraction(c6b) * Fraction(c4a) / (Fraction(c6a) * Fraction(c4b)))


# ---------------------------------------------------------------- quartics

def quartic_to_weierstrass(q: Poly, point=None) -> WeierstrassModel:
    """A Weierstrass model of y^2 = q(x) (degree 3 or 4) isomorphic over Q.

    `point` is a rational point (x0, y0) on the curve; for a cubic it may be
    omitted, the point at infinity being used.
    """
    q = q if q.ring is None else q.to_rational()
    if q.degree not in (3, 4):
        raise SingularQuartic(f"degree {q.degree} is not 3 or 4")
    if any(m > 1 for _, m in squarefree_decomposition(q)):
        raise SingularQuartic("the polynomial has a repeated root")
    if q.degree == 3 and point is None:
        return _cubic_model(q)
    if point is None:
        raise SingularQuartic("a rational point is required for a quartic")
    x0, y0 = Fraction(point[0]), Fraction(point[1])
    if q(x0) != y0 * y0:
        raise SingularQuartic(f"({x0}, {y0}) is not on the curve")
    if y0 == 0:
        # x = x0 + 1/u, y = v/u^2 turns y^2 = q(x) into v^2 = cubic(u)
        shifted = q(Poly([x0, 1]))
        cubic = shifted.reverse(4)
        return _cubic_model(cubic)
    # shift the point to x = 0, then Connell's formulas for y^2 = a x^4 + b x^3 + c x^2 + d x + e^2
    s = q(Poly([x0, 1]))
    a, b, c, d = s.coeff(4), s.coeff(3), s.coeff(2), s.coeff(1)
    e = y0
    a1 = d / e
    a2 = c - d * d / (4 * e * e)
    a3 = 2 * e * b
    a4 = -4 * e * e * a
    a6 = a2 * a4
    return WeierstrassModel.of(a1, a2, a3, a4, a6)


def _cubic_model(cubic: Poly) -> WeierstrassModel:
    """v^2 = a u^3 + b u^2 + c u + d  ->  Y^2 = X^3 + b X^2 + ac X + a^2 d (X = a u, Y = a v)."""
    a, b, c, d = cubic.coeff(3), cubic.coeff(2), cubic.coeff(1), cubic.coeff(0)
    if a == 0:
        raise SingularQuartic("the cubic degenerates")
    return WeierstrassModel.of(0, b, 0, a * c, a * a * d)


def minimal_like(E: WeierstrassModel) -> WeierstrassModel:
    """Scale a constant short model to integral coefficients with small denominators removed."""
    S = short_form(E)
    A, B = S.a4.constant(), S.a6.constant()
    den = math.lcm(Fraction(A).denominator, Fraction(B).denominator)
    u = 1
    for p, e in factorint(den).items():
        u *= p ** -(-e // 2)
    return WeierstrassModel.short(A * u ** 4, B * u ** 6)
