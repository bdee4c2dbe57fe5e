"""Moebius maps over cyclotomic fields: equivalence of rational functions and
cyclotomic points in fibers.

Candidates are located numerically (roots of exact squarefree factors,
polished with Newton's method) and recognized in Q(zeta_N) by integer
relation finding; every answer returned has been verified exactly.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp
import numpy as np

from .cyclotomic import CyclotomicField, CyclotomicNumber
from .errors import DegeneratePoints, DegreeMismatch
from .poly import Poly, RationalFunction, compose, squarefree_decomposition

DPS = 80


def _mp_coeffs(p: Poly) -> list:
    if p.ring is None:
        return [mp.mpf(c.numerator) / c.denominator for c in p.coeffs]
    z = mp.expjpi(mp.mpf(2) / p.ring.level)
    out = []
    for c in p.coeffs:
        out.append(sum((mp.mpf(x.numerator) / x.denominator) * z ** i for i, x in enumerate(c.coords)))
    return out


def _horner(cs, x):
    acc = mp.mpc(0)
    for c in reversed(cs):
        acc = acc * x + c
    return acc


def numeric_roots(p: Poly, dps: int = DPS) -> list[tuple[complex, int]]:
    """Distinct complex roots with multiplicities, polished to `dps` digits."""
    out = []
    with mp.workdps(dps):
        for s, m in squarefree_decomposition(p):
            cs = _mp_coeffs(s)
            dcs = [c * i for i, c in enumerate(cs)][1:]
            approx = np.roots([complex(c) for c in reversed(cs)]) if s.degree > 1 else \
                [complex(-cs[0] / cs[1])]
            for r in approx:
                x = mp.mpc(r)
                for _ in range(200):
                    step = _horner(cs, x) / _horner(dcs, x)
                    x -= step
                    if abs(step) < mp.mpf(10) ** (-dps + 5) * max(1, abs(x)):
                        break
                out.append((x, m))
    return out


def recognize(value, N: int, max_coeff: int = 10 ** 12) -> CyclotomicNumber | None:
    """An element of Q(zeta_N) numerically equal to `value`, or None.

    Real and imaginary parts are combined with the transcendental weight pi,
    so one integer relation captures both.
    """
    F = CyclotomicField(N)
    z = mp.expjpi(mp.mpf(2) / N)
    theta = mp.pi
    value = mp.mpc(value)
    vec = [mp.re(value) + theta * mp.im(value)]
    for i in range(F.degree):
        w = z ** i
        vec.append(mp.re(w) + theta * mp.im(w))
    rel = mp.pslq(vec, maxcoeff=max_coeff, maxsteps=10 ** 6)
    if rel is None or rel[0] == 0:
        return None
    coords = [Fraction(-c, rel[0]) for c in rel[1:]]
    cand = CyclotomicNumber(F, coords)
    tol = mp.mpf(10) ** (-(mp.mp.dps // 2))
    if abs(_to_mp(cand) - value) > tol * max(1, abs(value)):
        return None
    return cand


def _to_mp(c: CyclotomicNumber):
    z = mp.expjpi(mp.mpf(2) / c.level)
    return sum((mp.mpf(x.numerator) / x.denominator) * z ** i for i, x in enumerate(c.coords))


def cyclotomic_roots(p: Poly, N: int) -> list[CyclotomicNumber]:
    """Roots of p lying in Q(zeta_N), each verified by exact evaluation."""
    F = CyclotomicField(N)
    pp = p if p.ring is None or p.ring.level == N else p.in_ring(F)
    found = []
    with mp.workdps(DPS):
        for x, _ in numeric_roots(pp):
            c = recognize(x, N)
            if c is None:
                continue
            val = pp.in_ring(F)(c) if pp.ring is None else pp(c)
            if val == 0 and c not in found:
                found.append(c)
    return found


# ---------------------------------------------------------------- Moebius maps

@dataclass(frozen=True)
class Moebius:
    """t -> (a t + b) / (c t + d)."""

    a: object
    b: object
    c: object
    d: object

    def as_function(self, ring=None) -> RationalFunction:
        return RationalFunction(Poly([self.b, self.a], ring), Poly([self.d, self.c], ring))

    def inverse(self) -> "Moebius":
        return Moebius(self.d, -self.b, -self.c, self.a)


def _mob_from_points(xs):
    """Complex 2x2 matrix sending xs (None = infinity) to 0, 1, infinity."""
    x1, x2, x3 = xs
    if x3 is None:
        return mp.matrix([[1, -x1], [0, x2 - x1]])
    if x1 is None:
        return mp.matrix([[0, x2 - x3], [1, -x3]])
    if x2 is None:
        return mp.matrix([[1, -x1], [1, -x3]])
    return mp.matrix([[x2 - x3, -x1 * (x2 - x3)], [x2 - x1, -x3 * (x2 - x1)]])


def _apply(M, x):
    if x is None:
        return None if M[1, 0] == 0 else M[0, 0] / M[1, 0]
    den = M[1, 0] * x + M[1, 1]
    if abs(den) < mp.mpf(10) ** (-(mp.mp.dps - 10)):
        return None
    return (M[0, 0] * x + M[0, 1]) / den


def _fibers(f: RationalFunction, values) -> list[tuple]:
    """Points of P^1 (None = infinity) in f^-1(v) with ramification indices."""
    out = []
    deg = f.degree
    for v in values:
        if v is None:
            pts = numeric_roots(f.den) if f.den.degree > 0 else []
            extra = f.num.degree - f.den.degree
        else:
            g = f.num - f.den * v
            pts = numeric_roots(g) if g.degree > 0 else []
            extra = deg - g.degree if f.den.degree >= f.num.degree else 0
        pts = [(x, m, v) for x, m in pts]
        if extra > 0:
            pts.append((None, extra, v))
        out.extend(pts)
    return out


def _eval_mp(f: RationalFunction, x):
    return _horner(_mp_coeffs(f.num), x) / _horner(_mp_coeffs(f.den), x)


def moebius_equivalent(f: RationalFunction, g: RationalFunction, N: int = 1) -> RationalFunction | None:
    """A Moebius mu over Q(zeta_N) with f = g o mu, or None.

    Three points in low-multiplicity fibers of f are matched with fiber
    points of g of the same ramification; each candidate mu is tested
    numerically, recognized exactly and verified by composition.
    """
    if f.degree != g.degree:
        raise DegreeMismatch(f"degrees {f.degree} and {g.degree} differ")
    F = CyclotomicField(N) if N > 1 else None
    with mp.workdps(DPS):
        values = [None, 0, 1728, 1, -1]
        ff = _fibers(f, values)
        gf = _fibers(g, values)
        # rarest (value, multiplicity) signatures first
        sig_count = {}
        for _, m, v in gf:
            sig_count[(v, m)] = sig_count.get((v, m), 0) + 1
        ff = [p for p in ff if (p[2], p[1]) in sig_count]
        ff.sort(key=lambda p: (sig_count[(p[2], p[1])], p[0] is None))
        chosen = []
        for p in ff:
            if all(not _same_point(p[0], q[0]) for q in chosen):
                chosen.append(p)
            if len(chosen) == 3:
                break
        if len(chosen) < 3:
            return None
        pools = [[q for q in gf if (q[2], q[1]) == (p[2], p[1])] for p in chosen]
        M_x = _mob_from_points([p[0] for p in chosen])
        probes = [mp.mpc("0.3137", "0.2718"), mp.mpc("-1.1", "0.577")]
        for ys in itertools.product(*pools):
            pts = [y[0] for y in ys]
            if any(_same_point(a, b) for a, b in itertools.combinations(pts, 2)):
                continue
            M_y = _mob_from_points(pts)
            mu = mp.inverse(M_y) * M_x
            ok = True
            for x in probes:
                y = _apply(mu, x)
                if y is None:
                    ok = False
                    break
                lhs, rhs = _eval_mp(f, x), _eval_mp(g, y)
                if abs(lhs - rhs) > mp.mpf(10) ** (-20) * max(1, abs(lhs)):
                    ok = False
                    break
            if not ok:
                continue
            exact = _recognize_moebius(mu, N)
            if exact is None:
                continue
            mu_f = exact.as_function(F)
            lhs = f.in_ring(F) if F is not None else f
            rhs = compose(g.in_ring(F) if F is not None else g, mu_f)
            if lhs == rhs:
                return mu_f.to_rational() if mu_f.is_rational() else mu_f
    return None


def _same_point(a, b) -> bool:
    if a is None or b is None:
        return a is None and b is None
    return abs(a - b) < mp.mpf(10) ** (-30) * max(1, abs(a))


def _recognize_moebius(M, N: int) -> Moebius | None:
    entries = [M[0, 0], M[0, 1], M[1, 0], M[1, 1]]
    k = max(range(4), key=lambda i: abs(entries[i]))
    scaled = [e / entries[k] for e in entries]
    out = []
    for e in scaled:
        if abs(e) < mp.mpf(10) ** (-40):
            out.append(0 if N == 1 else CyclotomicField(N)(0))
            continue
        c = recognize(e, N)
        if c is None:
            return None
        out.append(c.rational() if N == 1 else c)
    return Moebius(*out)


def moebius_to_points(t1, t2, t3, ring=None) -> RationalFunction:
    """The exact Moebius map sending t1, t2, t3 (None = infinity) to 0, 1, infinity."""
    from .siegel import moebius_through
    al, be, ga, de = moebius_through(t1, t2, t3)
    return RationalFunction(Poly([be, al], ring), Poly([de, ga], ring))
