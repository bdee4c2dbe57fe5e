"""Exact linear algebra over Q with fraction-free integer row reduction."""
from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce


def _primitive(row: list[int]) -> list[int]:
    g = reduce(math.gcd, row, 0)
    return [x // g for x in row] if g > 1 else row


def _as_int_rows(rows) -> list[list[int]]:
    out = []
    for r in rows:
        r = [Fraction(x) for x in r]
        den = reduce(math.lcm, (x.denominator for x in r), 1)
        out.append(_primitive([int(x * den) for x in r]))
    return out


def row_echelon(rows, ncols: int | None = None):
    """Reduced echelon form with integer rows; returns (rows, pivot columns).

    Each row is kept primitive, so entries stay as small as the data allows.
    """
    A = [r for r in _as_int_rows(rows) if any(r)]
    if not A:
        return [], []
    ncols = ncols or len(A[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = None
        best = None
        for i in range(r, len(A)):
            if A[i][c]:
                size = abs(A[i][c])
                if best is None or size < best:
                    p, best = i, size
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        piv = A[r]
        pc = piv[c]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                g = math.gcd(pc, f)
                a, b = pc // g, f // g
                A[i] = _primitive([a * x - b * y for x, y in zip(A[i], piv)])
        pivots.append(c)
        r += 1
        A = A[:r] + [row for row in A[r:] if any(row)]
        if r == len(A):
            break
    return A[:r], pivots


def nullspace(rows, ncols: int) -> list[list[Fraction]]:
    """Basis of {x : A x = 0} over Q."""
    R, pivots = row_echelon(rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(R, pivots):
            v[pc] = Fraction(-row[f], row[pc])
        basis.append(v)
    return basis


def rank(rows, ncols: int | None = None) -> int:
    return len(row_echelon(rows, ncols)[1])


def solve(rows, rhs, ncols: int) -> list[Fraction] | None:
    """One rational solution of A x = rhs, or None if inconsistent."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    R, pivots = row_echelon(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, pc in zip(R, pivots):
        x[pc] = Fraction(row[ncols], row[pc])
    return x
