"""Independent reference computations used by the tests.

Nothing here calls the package's group closure, kernel, coset or series
code; each oracle recomputes its answer from the definitions in plain
Python or sympy.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction

import mpmath as mp
import sympy as sp


# ---------------------------------------------------------------- matrices as tuples

def mat_mul(x, y, n):
    a, b, c, d = x
    e, f, g, h = y
    return ((a * e + b * g) % n, (a * f + b * h) % n, (c * e + d * g) % n, (c * f + d * h) % n)


def mat_inv(x, n):
    a, b, c, d = x
    di = pow((a * d - b * c) % n, -1, n)
    return ((d * di) % n, (-b * di) % n, (-c * di) % n, (a * di) % n)


def det(x, n):
    return (x[0] * x[3] - x[1] * x[2]) % n


def all_gl2(n):
    return [m for m in itertools.product(range(n), repeat=4) if math.gcd(det(m, n), n) == 1]


def closure(gens, n):
    ident = (1 % n, 0, 0, 1 % n)
    out = {ident}
    frontier = [ident]
    gens = [tuple(g) for g in gens]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mat_mul(x, g, n)
                if y not in out:
                    out.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(out)


def reduce(x, m):
    return tuple(v % m for v in x)


def kernel(elements, m):
    ident = (1 % m, 0, 0, 1 % m)
    return frozenset(x for x in elements if reduce(x, m) == ident)


def image(elements, m):
    return frozenset(reduce(x, m) for x in elements)


def conjugate(elements, g, n):
    gi = mat_inv(g, n)
    return frozenset(mat_mul(mat_mul(g, x, n), gi, n) for x in elements)


def conjugacy_canon(elements, n, universe):
    return min(tuple(sorted(conjugate(elements, g, n))) for g in universe)


def all_subgroups_by_subsets(n):
    """Every subgroup of GL2(Z/n) by testing all subsets; only for n = 2."""
    univ = all_gl2(n)
    ident = (1, 0, 0, 1)
    rest = [x for x in univ if x != ident]
    out = []
    for r in range(len(rest) + 1):
        for sub in itertools.combinations(rest, r):
            s = set(sub) | {ident}
            if all(mat_mul(x, y, n) in s for x in s for y in s):
                out.append(frozenset(s))
    return out


def joint_kernel(elements, n, a, b):
    """<N_a, N_b> inside G_c, c = lcm(a, b), by closure of the union."""
    c = a * b // math.gcd(a, b)
    Gc = image(elements, c)
    Na = kernel(Gc, a)
    Nb = kernel(Gc, b)
    return Gc, closure(list(Na | Nb), c)


# ---------------------------------------------------------------- modular curves

def coset_action_invariants(sl2_subgroup, n):
    """(index, cusps, e2, e3, widths) of +-H in SL2(Z/n) from the right coset action."""
    sl2 = [m for m in itertools.product(range(n), repeat=4) if det(m, n) == 1 % n]
    minus = ((-1) % n, 0, 0, (-1) % n)
    H = set(sl2_subgroup) | {mat_mul(minus, h, n) for h in sl2_subgroup}
    cosets = {}
    reps = []
    for g in sl2:
        key = frozenset(mat_mul(h, g, n) for h in H)
        if key not in cosets:
            cosets[key] = len(reps)
            reps.append(g)

    def act(i, s):
        g = mat_mul(reps[i], s, n)
        return cosets[frozenset(mat_mul(h, g, n) for h in H)]

    S = (0, (-1) % n, 1, 0)
    T = (1, 1, 0, 1)
    ST = mat_mul(S, T, n)
    k = len(reps)
    e2 = sum(1 for i in range(k) if act(i, S) == i)
    e3 = sum(1 for i in range(k) if act(i, ST) == i)
    seen = set()
    widths = []
    for i in range(k):
        if i in seen:
            continue
        w = 0
        j = i
        while j not in seen:
            seen.add(j)
            w += 1
            j = act(j, T)
        widths.append(w)
    return k, len(widths), e2, e3, sorted(widths)


def genus_formula(index, cusps, e2, e3):
    return 1 + Fraction(index, 12) - Fraction(e2, 4) - Fraction(e3, 3) - Fraction(cusps, 2)


# ---------------------------------------------------------------- series

def sigma(k, m):
    return sum(d ** k for d in range(1, m + 1) if m % d == 0)


def _mul(x, y, length):
    out = [0] * length
    for i, a in enumerate(x[:length]):
        if a:
            for j, b in enumerate(y[:length - i]):
                out[i + j] += a * b
    return out


def _inverse(x, length):
    """1/x for an integer series with x[0] = +-1."""
    out = [0] * length
    out[0] = x[0]
    for n in range(1, length):
        out[n] = -x[0] * sum(x[k] * out[n - k] for k in range(1, n + 1) if k < len(x))
    return out


def j_coefficients_from_e6(length):
    """Coefficients of j = 1728 E4^3 / (E4^3 - E6^2), from q^-1 on."""
    n = length + 1
    e4 = [1] + [240 * sigma(3, m) for m in range(1, n)]
    e6 = [1] + [-504 * sigma(5, m) for m in range(1, n)]
    e4c = _mul(_mul(e4, e4, n), e4, n)
    den = [a - b for a, b in zip(e4c, _mul(e6, e6, n))]
    # den = 1728 q (1 + ...); divide out 1728 q exactly
    assert den[0] == 0 and all(c % 1728 == 0 for c in den)
    unit = [c // 1728 for c in den[1:]]
    return _mul(e4c, _inverse(unit, length), length)


def eta_quotient_x0_2(length):
    """Coefficients of (eta(tau)/eta(2 tau))^24 = q^-1 prod (1 + q^n)^-24, from q^-1 on."""
    prod = [1] + [0] * (length - 1)
    for n in range(1, length):
        factor = [0] * length
        factor[0] = 1
        factor[n] = 1
        prod = _mul(prod, factor, length)
    inv = _inverse(prod, length)
    out = [1] + [0] * (length - 1)
    for _ in range(24):
        out = _mul(out, inv, length)
    return out


def siegel_numeric(pairs, root, tau, terms=200, dps=40):
    """exp(2 pi i root) * prod g_a(tau), straight from the product formula."""
    with mp.workdps(dps):
        tau = mp.mpc(tau)
        val = mp.exp(2j * mp.pi * mp.mpf(root.numerator) / root.denominator)
        for a1, a2 in pairs:
            a1 = mp.mpf(a1.numerator) / a1.denominator
            a2 = mp.mpf(a2.numerator) / a2.denominator
            qz = mp.exp(2j * mp.pi * (a2 + tau * a1))
            g = -mp.exp(mp.pi * 1j * tau * (a1 * a1 - a1 + mp.mpf(1) / 6)) * mp.exp(mp.pi * 1j * a2 * (a1 - 1)) * (1 - qz)
            for n in range(1, terms):
                qn = mp.exp(2j * mp.pi * tau * n)
                g *= (1 - qn * qz) * (1 - qn / qz)
            val *= g
        return val


def bernoulli2(x):
    return Fraction(str(sp.bernoulli(2, sp.Rational(x.numerator, x.denominator))))


# ---------------------------------------------------------------- elliptic curves

def sympy_invariants(a1, a2, a3, a4, a6):
    b2 = a1 ** 2 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 ** 2 + 4 * a6
    b8 = a1 ** 2 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 ** 2 - a4 ** 2
    c4 = b2 ** 2 - 24 * b4
    c6 = -b2 ** 3 + 36 * b2 * b4 - 216 * b6
    disc = -b2 ** 2 * b8 - 8 * b4 ** 3 - 27 * b6 ** 2 + 9 * b2 * b4 * b6
    return sp.simplify(c4), sp.simplify(c6), sp.simplify(disc), sp.cancel(c4 ** 3 / disc)


def subgroup_classes(n):
    """Conjugacy classes of subgroups of GL2(Z/n) by extending class representatives one element at a time.

    Every subgroup is <K, g> for a proper subgroup K, and conjugating K onto its
    representative conjugates g along, so representatives suffice.
    """
    univ = all_gl2(n)
    trivial = frozenset([(1, 0, 0, 1)])
    reps = {conjugacy_canon(trivial, n, univ): trivial}
    frontier = [trivial]
    while frontier:
        nxt = []
        for H in frontier:
            done = set()
            for g in univ:
                if g in H:
                    continue
                K = closure(list(H) + [g], n)
                if K in done:
                    continue
                done.add(K)
                key = conjugacy_canon(K, n, univ)
                if key not in reps:
                    reps[key] = K
                    nxt.append(K)
        frontier = nxt
    return set(reps)
