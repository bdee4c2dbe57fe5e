"""Siegel functions, their orbit products, hauptmoduls and j-map relations.

For a = (a1, a2) with a1 = k1/N, a2 = k2/N the Siegel function is

    g_a = -q^(B2(a1)/2) * exp(2 pi i a2 (a1 - 1) / 2) * (1 - q_z)
          * prod_{n >= 1} (1 - q^n q_z)(1 - q^n / q_z),   q_z = zeta_N^k2 q^a1.

Products are kept in factored form (sign, q-exponent, root of unity, core
series over Q(zeta_N) in q^(1/N)) and only materialized on request.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .congruence import CuspDatum, cusp_data, modular_invariants
from .cyclotomic import CyclotomicField, CyclotomicNumber
from .errors import (
    DegeneratePoints,
    InsufficientPrecision,
    NoRelation,
    NotGenusZero,
    PrecisionTooSmall,
)
from .gl2 import FiniteMatrixGroup, decode
from .linalg import nullspace, solve
from .poly import Poly, RationalFunction
from .qseries import FractionalQSeries, _obj_zeros

Pair = tuple[Fraction, Fraction]


def bernoulli2(x: Fraction) -> Fraction:
    return x * x - x + Fraction(1, 6)


def siegel_leading_exponent(a) -> Fraction:
    """(1/2) B2(a1), the q-exponent in front of g_a."""
    return bernoulli2(Fraction(a[0])) / 2


# ---------------------------------------------------------------- orbits on A_N

def in_fundamental_set(a1: Fraction, a2: Fraction) -> bool:
    if a1 == 0 and a2 == 0:
        return False
    if 0 < a1 < Fraction(1, 2):
        return 0 <= a2 < 1
    if a1 == 0:
        return 0 < a2 <= Fraction(1, 2)
    if a1 == Fraction(1, 2):
        return 0 <= a2 <= Fraction(1, 2)
    return False


def canonical_pair(k1: int, k2: int, N: int) -> tuple[int, int]:
    """The representative of +-(k1, k2)/N lying in A_N, as residues mod N."""
    for s in (1, -1):
        x, y = (s * k1) % N, (s * k2) % N
        if in_fundamental_set(Fraction(x, N), Fraction(y, N)):
            return x, y
    raise ValueError(f"({k1},{k2}) is zero mod {N}")


def fundamental_set(N: int) -> list[tuple[int, int]]:
    out = []
    for k1 in range(N):
        for k2 in range(N):
            if (k1, k2) != (0, 0) and in_fundamental_set(Fraction(k1, N), Fraction(k2, N)):
                out.append((k1, k2))
    return out


@dataclass(frozen=True)
class OrbitSet:
    level: int
    orbits: tuple[tuple[tuple[int, int], ...], ...]

    @property
    def representatives(self) -> list[Pair]:
        return [self.as_pair(o[0]) for o in self.orbits]

    def as_pair(self, k) -> Pair:
        return (Fraction(k[0], self.level), Fraction(k[1], self.level))

    def pairs(self, i: int) -> list[Pair]:
        return [self.as_pair(k) for k in self.orbits[i]]

    def index_of(self, a) -> int:
        N = self.level
        k = canonical_pair(int(Fraction(a[0]) * N), int(Fraction(a[1]) * N), N)
        for i, o in enumerate(self.orbits):
            if k in o:
                return i
        raise KeyError(a)

    def __len__(self) -> int:
        return len(self.orbits)


def _sort_key(k):
    return (k[0], k[1])


def build_orbits(H: FiniteMatrixGroup, N: int | None = None) -> OrbitSet:
    """Orbits of A_N under the right action a -> a*gamma of the group H."""
    N = N or H.modulus
    if H.modulus != N:
        raise ValueError("H must be given at level N")
    gens = H.generator_codes
    a, b, c, d = decode(gens, N) if gens.size else ([], [], [], [])
    mats = list(zip(np.atleast_1d(a).tolist(), np.atleast_1d(b).tolist(),
                    np.atleast_1d(c).tolist(), np.atleast_1d(d).tolist()))
    seen: set = set()
    orbits = []
    for k in fundamental_set(N):
        if k in seen:
            continue
        orbit = {k}
        frontier = [k]
        while frontier:
            nxt = []
            for x, y in frontier:
                for (p, q, r, s) in mats:
                    img = canonical_pair(x * p + y * r, x * q + y * s, N)
                    if img not in orbit:
                        orbit.add(img)
                        nxt.append(img)
            frontier = nxt
        seen |= orbit
        orbits.append(tuple(sorted(orbit, key=_sort_key)))
    orbits.sort(key=lambda o: _sort_key(o[0]))
    return OrbitSet(N, tuple(orbits))


# ---------------------------------------------------------------- series

@dataclass(frozen=True)
class SiegelProduct:
    """sign * exp(2 pi i root) * q^exponent * core, core in Q(zeta_N)[[q^(1/N)]] with core(0) != 0."""

    level: int
    sign: int
    exponent: Fraction
    root: Fraction
    core: FractionalQSeries

    def __mul__(self, other: "SiegelProduct") -> "SiegelProduct":
        return SiegelProduct(self.level, self.sign * other.sign, self.exponent + other.exponent,
                             (self.root + other.root) % 1, self.core * other.core)

    def __pow__(self, m: int) -> "SiegelProduct":
        return SiegelProduct(self.level, self.sign ** (m % 2) if m >= 0 else self.sign ** (-m % 2),
                             self.exponent * m, (self.root * m) % 1, self.core ** m)

    @property
    def working_level(self) -> int:
        return math.lcm(2 * self.level ** 2, self.level, self.root.denominator)

    def leading_coefficient(self) -> CyclotomicNumber:
        F = CyclotomicField(self.working_level)
        unit = F.root_of_unity(int(self.root * F.level)) * self.sign
        return unit * self.core.coefficient(0).embed(F.level)

    def series(self) -> FractionalQSeries:
        """Exact expansion with coefficients in Q(zeta_L), L = lcm(2N^2, N)."""
        L = self.working_level
        unit = CyclotomicField(L).root_of_unity(int(self.root * L)) * self.sign
        return self.core.embed(L).scale(unit).shift(self.exponent)

    def normalized(self) -> tuple[FractionalQSeries, CyclotomicNumber]:
        """(zeta * series over Q(zeta_N), zeta) with the leading coefficient forced to 1.

        The series is materialized at the working level and then descended,
        which raises if the descent is not lossless.
        """
        full = self.series()
        lead = self.leading_coefficient()
        zeta = lead.inverse() if self.core.coefficient(0) != 1 else \
            CyclotomicField(lead.level).root_of_unity(-int(self.root * lead.level)) * self.sign
        return full.scale(zeta).descend(self.level), zeta


def _binomial_core(N: int, length: int, k1: int, k2: int) -> np.ndarray:
    """Coefficients (rows: q^(i/N), cols: zeta_N^e) of (1-q_z) prod (1-q^n q_z)(1-q^n/q_z)."""
    arr = _obj_zeros((length, N))
    arr[0, 0] = 1
    factors = [(k1, k2 % N)]
    n = 1
    while n * N - k1 < length:
        factors.append((n * N + k1, k2 % N))
        factors.append((n * N - k1, (-k2) % N))
        n += 1
    for shift, e in factors:
        if shift >= length:
            continue
        # multiply by (1 - zeta^e x^shift): roll the zeta axis, shift the q axis
        moved = np.roll(arr[:length - shift], e, axis=1)
        arr[shift:] = arr[shift:] - moved
    return arr


def siegel_product(pairs, N: int, precision) -> SiegelProduct:
    """Product of g_a over the given pairs (k1, k2) mod N in A_N, truncated at q^precision."""
    length = int(math.ceil(Fraction(precision) * N))
    if length <= 0:
        raise PrecisionTooSmall("precision must be positive")
    F = CyclotomicField(N)
    arr = _obj_zeros((length, N))
    arr[0, 0] = 1
    exponent = Fraction(0)
    root = Fraction(0)
    sign = 1
    for k1, k2 in pairs:
        core = _binomial_core(N, length, k1, k2)
        prod = _obj_zeros((length, 2 * N - 1))
        nz_a = [i for i in range(N) if any(arr[:, i])]
        nz_b = [j for j in range(N) if any(core[:, j])]
        for i in nz_a:
            for j in nz_b:
                prod[:, i + j] += np.convolve(arr[:, i], core[:, j])[:length]
        arr = prod[:, :N]
        arr[:, :N - 1] += prod[:, N:]
        exponent += siegel_leading_exponent((Fraction(k1, N), Fraction(k2, N)))
        root += Fraction(k2 * (k1 - N), 2 * N * N)
        sign = -sign
    series = FractionalQSeries(F, N, 0, F.reduce_rows(arr), 1)
    if not any(series.num[0]):
        raise PrecisionTooSmall("core series vanished")
    return SiegelProduct(N, sign, exponent, root % 1, series)


def orbit_product(orbits: OrbitSet, i: int, precision) -> SiegelProduct:
    return siegel_product(orbits.orbits[i], orbits.level, precision)


def orbit_product_series(orbits: OrbitSet, i: int, precision) -> FractionalQSeries:
    """The exact truncated expansion of g_O for the i-th orbit, over Q(zeta_{2N^2})."""
    return orbit_product(orbits, i, precision).series()


# ---------------------------------------------------------------- divisors

def divisor_of_orbit_power(orbits: OrbitSet, i: int, cusps: list[CuspDatum]) -> list[int]:
    """Order of g_O^(12N) at each cusp, in the order of `cusps`."""
    N = orbits.level
    out = []
    for cusp in cusps:
        p, _, r, _ = cusp.matrix
        total = Fraction(0)
        for a1, a2 in orbits.pairs(i):
            x = (a1 * p + a2 * r) % 1
            total += bernoulli2(x)
        val = 6 * N * cusp.width * total
        if val.denominator != 1:
            raise AssertionError(f"non-integral divisor coefficient {val}")
        out.append(int(val))
    return out


def divisor_matrix(orbits: OrbitSet, cusps: list[CuspDatum]) -> list[list[int]]:
    return [divisor_of_orbit_power(orbits, i, cusps) for i in range(len(orbits))]


def hauptmodul_target(N: int, ncusps: int, p1: int = 0, p2: int = 1) -> list[int]:
    t = [0] * ncusps
    t[p1] = -12 * N
    t[p2] = 12 * N
    return t


def solve_hauptmodul(divisors: list[list[int]], target: list[int], genus: int = 0,
                     max_norm: int = 6) -> list[int] | None:
    """Integer m with sum m_i D_i = target of least sup-norm, then 1-norm, then lexicographic.

    Returns None when the system has no rational solution or no integer
    solution of sup-norm at most `max_norm`.
    """
    if genus != 0:
        raise NotGenusZero(f"curve has genus {genus}")
    n = len(divisors)
    ncols = len(target)
    if not any(target):
        return [0] * n
    cols = [[divisors[i][c] for i in range(n)] for c in range(ncols)]
    if solve(cols, target, n) is None:
        return None
    for bound in range(1, max_norm + 1):
        found = _bounded_solutions(divisors, target, bound)
        if found:
            return min(found, key=lambda m: (sum(abs(x) for x in m), m))
    return None


def _bounded_solutions(D: list[list[int]], target: list[int], bound: int) -> list[list[int]]:
    """All m in [-bound, bound]^n with m D = target and sup-norm exactly `bound`.

    Depth-first with interval pruning on every coordinate.
    """
    n, k = len(D), len(target)
    order = sorted(range(n), key=lambda i: -sum(abs(x) for x in D[i]))
    # reach[j][c]: max |contribution| of variables order[j:] to column c
    reach = [[0] * k for _ in range(n + 1)]
    for j in range(n - 1, -1, -1):
        row = D[order[j]]
        reach[j] = [reach[j + 1][c] + bound * abs(row[c]) for c in range(k)]
    out: list[list[int]] = []
    m = [0] * n

    def rec(j: int, resid: list[int], hit: bool) -> None:
        if any(abs(resid[c]) > reach[j][c] for c in range(k)):
            return
        if j == n:
            if hit and not any(resid):
                out.append(list(m))
            return
        row = D[order[j]]
        for v in range(-bound, bound + 1):
            m[order[j]] = v
            rec(j + 1, [resid[c] - v * row[c] for c in range(k)], hit or abs(v) == bound)
        m[order[j]] = 0

    rec(0, list(target), False)
    return out


@dataclass
class Hauptmodul:
    series: FractionalQSeries
    zeta: CyclotomicNumber
    exponents: list[int]
    orbits: OrbitSet
    cusps: list[CuspDatum]


def find_hauptmodul(G: FiniteMatrixGroup, precision) -> Hauptmodul:
    """A hauptmodul for the group +-(G cap SL2) with its pole at infinity and zero at P2."""
    inv = modular_invariants(G)
    if inv.genus != 0:
        raise NotGenusZero(f"curve has genus {inv.genus}")
    N = G.modulus
    H = G.sl2_part()
    orbits = build_orbits(H, N)
    cusps = inv.cusp_data
    D = divisor_matrix(orbits, cusps)
    m = None
    for p2 in range(1, len(cusps)):
        m = solve_hauptmodul(D, hauptmodul_target(N, len(cusps), 0, p2))
        if m is not None:
            break
    if m is None:
        raise NoRelation("no orbit combination has divisor -12N P1 + 12N P2")
    prod = None
    for i, e in enumerate(m):
        if e:
            term = orbit_product(orbits, i, precision) ** e
            prod = term if prod is None else prod * term
    h, zeta = prod.normalized()
    return Hauptmodul(h, zeta, m, orbits, cusps)


# ---------------------------------------------------------------- j and relations

def _sigma3(n: int) -> int:
    return sum(d ** 3 for d in range(1, n + 1) if n % d == 0)


def eisenstein_e4(length: int) -> FractionalQSeries:
    return FractionalQSeries.from_integer_coeffs([1] + [240 * _sigma3(n) for n in range(1, length)])


def eta_product_24(length: int) -> FractionalQSeries:
    """prod (1 - q^n)^24 as an integer series."""
    arr = np.zeros(length, dtype=object)
    arr[:] = 0
    arr[0] = 1
    for n in range(1, length):
        for _ in range(24):
            arr[n:] = arr[n:] - arr[:length - n].copy()
    return FractionalQSeries.from_integer_coeffs(list(arr))


def j_expansion(precision) -> FractionalQSeries:
    """j = E4^3 / Delta with Delta = q prod (1 - q^n)^24, exact to q^precision."""
    length = int(math.ceil(Fraction(precision))) + 1
    if length < 1:
        raise PrecisionTooSmall("precision must be at least one term")
    e4 = eisenstein_e4(length)
    delta = eta_product_24(length)
    return ((e4 ** 3) * delta.inverse()).shift(-1)


@dataclass
class Relation:
    f: RationalFunction
    degrees: tuple[int, int]
    equations: int
    verified_to: Fraction


def find_relation(h: FractionalQSeries, k: int, l: int, j: FractionalQSeries | None = None,
                  slack: float = 0.25) -> Relation:
    """Rational f with f(h) = j, from a_0 + ... + a_k h^k = (b_0 + ... + b_l h^l) j.

    The unknowns are solved from the first part of the matched exponents and
    the result is checked on the remaining `slack` fraction as well.
    """
    N = h.level
    v = h.valuation()
    if j is None:
        # enough of j so that h^l * j is as precise as h^k
        need = h.truncation - v + max(k * v, -1 + l * v) + 2
        j = j_expansion(max(need, 1))
    j = j.embed(math.lcm(N, j.level)) if j.level != N else j
    cols = []
    hp = FractionalQSeries.one(h.field, h.D, h.truncation - v + (0 if v >= 0 else 0))
    hp = hp.truncate(h.truncation - v)
    powers = []
    cur = None
    for i in range(max(k, l) + 1):
        cur = hp if i == 0 else cur * h
        powers.append(cur)
    for i in range(k + 1):
        cols.append(powers[i])
    for i in range(l + 1):
        cols.append(-(powers[i] * j))
    lo = min(c._stripped().start / c.D if c.first_index() is not None else c.truncation
             for c in cols)
    D = max(c.D for c in cols)
    cols = [c.with_denominator(D) if c.D != D else c for c in cols]
    top = min(c.truncation for c in cols)
    lo_k = int(Fraction(lo) * D)
    top_k = int(top * D)
    nrows = top_k - lo_k
    unknowns = k + l + 2
    solve_rows = int(math.floor(nrows / (1 + slack)))
    if solve_rows <= unknowns:
        raise InsufficientPrecision(
            f"{nrows} exponents available, need more than {int(math.ceil(unknowns * (1 + slack)))}")
    phi = h.field.degree
    rational = all(c.is_rational() for c in cols)
    width = 1 if rational else phi
    mats = [_coefficient_block(c, lo_k, top_k) for c in cols]
    # each column block: list over exponents of phi integer coords (common den per column)
    rows_all = _expand_equations(mats, h.field, width)
    basis = nullspace(rows_all[:solve_rows * width], unknowns * width)
    if not basis:
        raise NoRelation(f"no relation with degrees ({k}, {l})")
    vec = basis[0]
    coeffs = _collect_unknowns(vec, unknowns, width, h.field)
    full_ok = all(sum(r[c] * vec[c] for c in range(len(vec))) == 0 for r in rows_all)
    if not full_ok:
        raise InsufficientPrecision("relation fails on the check exponents")
    ring = None if rational else h.field
    num = Poly(coeffs[:k + 1], ring)
    den = Poly(coeffs[k + 1:], ring)
    if den.is_zero():
        raise NoRelation("degenerate relation with zero denominator")
    f = RationalFunction(num, den)
    if ring is not None and f.is_rational():
        f = f.to_rational()
    return Relation(f, (k, l), nrows, top)


def _coefficient_block(s: FractionalQSeries, lo_k: int, top_k: int):
    rows = []
    for kk in range(lo_k, top_k):
        i = kk - s.start
        if 0 <= i < s.length:
            rows.append([Fraction(int(x), s.den) for x in s.num[i]])
        else:
            rows.append([Fraction(0)] * s.field.degree)
    return rows


def _expand_equations(mats, field: CyclotomicField, width: int) -> list[list[Fraction]]:
    """Rational equations: row (exponent, coord) over unknowns (column, coord)."""
    nexp = len(mats[0])
    out = []
    if width == 1:
        for e in range(nexp):
            out.append([m[e][0] for m in mats])
        return out
    # multiplication matrices over the power basis
    for e in range(nexp):
        blocks = [CyclotomicNumber(field, m[e]).multiplication_matrix() for m in mats]
        for r in range(width):
            out.append([blocks[c][r][s] for c in range(len(mats)) for s in range(width)])
    return out


def _collect_unknowns(vec, count: int, width: int, field: CyclotomicField):
    if width == 1:
        return [Fraction(x) for x in vec]
    return [CyclotomicNumber(field, vec[i * width:(i + 1) * width]) for i in range(count)]


def relation_degrees(G: FiniteMatrixGroup) -> tuple[int, int]:
    """Starting degrees (k, l) for a hauptmodul with a simple pole at infinity."""
    inv = modular_invariants(G)
    w = inv.cusp_data[0].width
    return inv.index, inv.index - w


def find_relation_sweep(h: FractionalQSeries, k0: int, l0: int, max_extra: int = 4) -> Relation:
    """Sweep degrees upward from (k0, l0) until a verified relation appears."""
    last: Exception | None = None
    for extra in range(max_extra + 1):
        for dk, dl in ((extra, 0), (0, extra), (extra, extra)):
            try:
                return find_relation(h, k0 + dk, l0 + dl)
            except NoRelation as exc:
                last = exc
    raise NoRelation(f"no relation up to degree ({k0 + max_extra}, {l0 + max_extra}): {last}")


# ---------------------------------------------------------------- moebius recalibration

def moebius_through(t1, t2, t3):
    """(alpha, beta, gamma, delta) of the Moebius map t -> (alpha t + beta)/(gamma t + delta)
    sending t1, t2, t3 to 0, 1, infinity.  None stands for infinity.
    """
    pts = [t1, t2, t3]
    finite = [p for p in pts if p is not None]
    if len(finite) < 2 or any(a == b for a, b in itertools.combinations(finite, 2)):
        raise DegeneratePoints("points must be distinct with at most one at infinity")
    if t3 is None:
        return (1, -t1, 0, t2 - t1)
    if t1 is None:
        return (0, t2 - t3, 1, -t3)
    if t2 is None:
        return (1, -t1, 1, -t3)
    return (t2 - t3, -t1 * (t2 - t3), t2 - t1, -t3 * (t2 - t1))


def moebius_recalibrate(h: FractionalQSeries, t1, t2, t3) -> FractionalQSeries:
    """mu(h) for the Moebius mu sending (t1, t2, t3) to (0, 1, infinity)."""
    al, be, ga, de = moebius_through(t1, t2, t3)
    if ga == 0:
        # affine: no division, so no precision is lost
        return h.scale(Fraction(al) / de) + Fraction(be) / de
    num = h.scale(al) + be if al != 0 else h.scale(0) + be
    den = h.scale(ga) + de if ga != 0 else h.scale(0) + de
    return num / den
