"""Search for groups representing unexplained (p, q)-entanglements at level pq.

Every subgroup of GL2(Z/pq) is a fibre product A x_theta B of its two
projections, glued along an isomorphism theta : A/M_A -> B/M_B.  Conjugacy
classes correspond to N(A) x N(B)-orbits of triples (M_A, M_B, theta), so
enumerating those orbits lists each class exactly once.  Cheap invariants
(determinant image, complex conjugation, the explained/unexplained index
test) are read off the quotient data before any group is materialised.
"""
from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from .congruence import modular_invariants
from .entangle import _report, has_complex_conjugation, select_maximal, type_string
from .errors import MissingRankFact, UnsupportedLevel
from .finite_groups import AbstractGroup, identify_abstract, isomorphisms, matrix_quotient
from .gl2 import (
    FiniteMatrixGroup,
    Gluing,
    ResidueMatrix,
    _closure,
    _greedy_generators,
    conj_codes,
    det_codes,
    factorize,
    gl2_codes,
    goursat_product,
    identity_code,
    mul_codes,
    normalizer,
    trace_codes,
    units,
)
from .lattice import subgroup_lattice

SUPPORTED_LEVELS = (6, 10, 14, 15, 21, 22, 26, 33, 39)
MAX_QUOTIENT = 48  # quotients of subgroups of GL2(Z/3Z) never exceed this

COUNT_KEYS = ("candidates", "admissible", "entangled", "unexplained", "genus_ok", "rank_ok")


# ---------------------------------------------------------------- per-prime data

@dataclass
class QuotientData:
    kernel: FiniteMatrixGroup
    labels: np.ndarray
    reps: np.ndarray
    table: AbstractGroup
    auts: list
    det_by_label: list
    cc_labels: frozenset
    kernel_det_size: int


@dataclass
class Component:
    p: int
    group: FiniteMatrixGroup
    normalizer: FiniteMatrixGroup
    quotients: list = field(default_factory=list)


def _conjugacy_classes(G: FiniteMatrixGroup) -> list[np.ndarray]:
    n = G.modulus
    el = G.elements
    free = np.ones(el.size, dtype=bool)
    out = []
    while free.any():
        x = el[np.flatnonzero(free)[0]]
        cls = np.unique(conj_codes(el, x, n))
        free[np.searchsorted(el, cls)] = False
        out.append(cls)
    return out


def _normal_closure(cls_codes: np.ndarray, n: int) -> np.ndarray:
    gens = [int(cls_codes[0])]
    K = _closure(np.array(gens), n)
    while True:
        missing = cls_codes[~np.isin(cls_codes, K)]
        if missing.size == 0:
            return K
        gens.append(int(missing[0]))
        K = _closure(np.array(gens), n)


def normal_subgroups(G: FiniteMatrixGroup, max_index: int | None = None) -> list[FiniteMatrixGroup]:
    n = G.modulus
    closures = {}
    for cls in _conjugacy_classes(G):
        K = _normal_closure(cls, n)
        closures[K.tobytes()] = K
    found = dict(closures)
    frontier = list(found.values())
    base = list(closures.values())
    while frontier:
        nxt = []
        for A in frontier:
            for B in base:
                if np.all(np.isin(B, A)):
                    continue
                gens = list(_greedy_generators(A, n)) + list(_greedy_generators(B, n))
                C = _closure(np.array(gens, dtype=np.int64), n)
                key = C.tobytes()
                if key not in found:
                    found[key] = C
                    nxt.append(C)
        frontier = nxt
    out = [FiniteMatrixGroup(n, elements=K) for K in found.values()]
    if max_index is not None:
        out = [K for K in out if G.order // K.order <= max_index]
    return sorted(out, key=lambda K: -K.order)


def _cc_mask(codes: np.ndarray, p: int) -> np.ndarray:
    """Elements with trace 0, det -1 fixing a nonzero vector mod p."""
    mask = (trace_codes(codes, p) == 0) & (det_codes(codes, p) == (-1) % p)
    out = np.zeros(codes.size, dtype=bool)
    for i in np.flatnonzero(mask):
        out[i] = has_complex_conjugation(FiniteMatrixGroup(p, elements=[identity_code(p), codes[i]]))
    return out


def _stabilizer_generators(N: FiniteMatrixGroup, M: FiniteMatrixGroup) -> list[int]:
    n = N.modulus
    el = N.elements
    ok = np.ones(el.size, dtype=bool)
    for g in M.generator_codes:
        ok &= M.contains_codes(conj_codes(el, g, n))
    return _greedy_generators(el[ok], n)


def _quotient_data(A: FiniteMatrixGroup, N: FiniteMatrixGroup, M: FiniteMatrixGroup) -> QuotientData:
    p = A.modulus
    from .finite_groups import coset_labels
    labels, reps = coset_labels(A, M)
    reps = np.array(reps, dtype=np.int64)
    el = A.elements
    Q = AbstractGroup(labels[np.searchsorted(el, mul_codes(reps[:, None], reps[None, :], p))])
    auts = []
    for s in _stabilizer_generators(N, M):
        img = conj_codes(s, reps, p)
        auts.append(labels[np.searchsorted(el, img)])
    dets = det_codes(el, p)
    det_by_label = [frozenset(np.unique(dets[labels == k]).tolist()) for k in range(reps.size)]
    cc = _cc_mask(el, p)
    cc_labels = frozenset(np.unique(labels[cc]).tolist())
    kdet = np.unique(det_codes(M.elements, p)).size
    return QuotientData(M, labels, reps, Q, auts, det_by_label, cc_labels, kdet)


def _orbit_reps_of_normals(A: FiniteMatrixGroup, N: FiniteMatrixGroup, normals) -> list:
    p = A.modulus
    keys = {K.elements.tobytes(): i for i, K in enumerate(normals)}
    ngens = _greedy_generators(N.elements, p)
    seen = set()
    reps = []
    for i, K in enumerate(normals):
        if i in seen:
            continue
        reps.append(K)
        orbit = {i}
        frontier = [K.elements]
        while frontier:
            nxt = []
            for el in frontier:
                for g in ngens:
                    img = np.sort(conj_codes(g, el, p))
                    j = keys[img.tobytes()]
                    if j not in orbit:
                        orbit.add(j)
                        nxt.append(img)
            frontier = nxt
        seen |= orbit
    return reps


def _component_ok(G: FiniteMatrixGroup, genus_bound: int) -> bool:
    p = G.modulus
    if not G.has_surjective_det():
        return False
    if not has_complex_conjugation(G):
        return False
    return modular_invariants(G).genus <= genus_bound


@lru_cache(maxsize=None)
def components(p: int, genus_bound: int) -> tuple:
    out = []
    allg = FiniteMatrixGroup(p, elements=gl2_codes(p))
    for G in subgroup_lattice(p):
        if not _component_ok(G, genus_bound):
            continue
        N = normalizer(G, allg)
        normals = normal_subgroups(G, MAX_QUOTIENT)
        comp = Component(p, G, N)
        for M in _orbit_reps_of_normals(G, N, normals):
            comp.quotients.append(_quotient_data(G, N, M))
        out.append(comp)
    return tuple(out)


# ---------------------------------------------------------------- gluing orbits

def _iso_orbits(qa: QuotientData, qb: QuotientData) -> list[np.ndarray]:
    isos = [tuple(phi.tolist()) for phi in isomorphisms(qa.table, qb.table)]
    if not isos:
        return []
    index = {t: i for i, t in enumerate(isos)}
    k = qa.table.order
    a_inv = [np.argsort(a) for a in qa.auts]
    seen = set()
    reps = []
    for t in isos:
        if t in seen:
            continue
        reps.append(np.array(t))
        seen.add(t)
        frontier = [t]
        while frontier:
            nxt = []
            for u in frontier:
                arr = np.array(u)
                moves = [tuple(arr[ai].tolist()) for ai in a_inv]
                moves += [tuple(b[arr].tolist()) for b in qb.auts]
                for m in moves:
                    if m in index and m not in seen:
                        seen.add(m)
                        nxt.append(m)
            frontier = nxt
    return reps


@dataclass
class Survivor:
    group: FiniteMatrixGroup
    genus: int
    type: str
    pair: tuple
    labels: tuple


def _glue(ca: Component, qa: QuotientData, cb: Component, qb: QuotientData, theta: np.ndarray):
    A, B = ca.group, cb.group
    pairs = []
    first = {}
    for k in range(qb.reps.size):
        first[k] = int(qb.reps[k])
    for g in A.generators:
        la = int(qa.labels[np.searchsorted(A.elements, g.code)])
        pairs.append((g, ResidueMatrix.from_code(first[int(theta[la])], B.modulus)))
    return goursat_product(A, B, Gluing(qa.kernel, qb.kernel, tuple(pairs)))


def _process_pair(args):
    p, q, ia, ib, genus_bound = args
    ca = components(p, genus_bound)[ia]
    cb = components(q, genus_bound)[ib]
    counts = dict.fromkeys(COUNT_KEYS, 0)
    found = []
    units_count = len(units(p)) * len(units(q))
    for qa in ca.quotients:
        for qb in cb.quotients:
            if qa.table.order != qb.table.order:
                continue
            for theta in _iso_orbits(qa, qb):
                counts["candidates"] += 1
                dets = set()
                for la in range(qa.table.order):
                    lb = int(theta[la])
                    dets |= {(x, y) for x in qa.det_by_label[la] for y in qb.det_by_label[lb]}
                is_full = qa.table.order == 1 and ca.group.order == len(gl2_codes(p)) \
                    and cb.group.order == len(gl2_codes(q))
                if len(dets) != units_count or is_full:
                    continue
                if not any(int(theta[la]) in qb.cc_labels for la in qa.cc_labels):
                    continue
                counts["admissible"] += 1
                if qa.table.order == 1:
                    continue
                counts["entangled"] += 1
                det_index = units_count // (qa.kernel_det_size * qb.kernel_det_size)
                if det_index == qa.table.order:
                    continue
                counts["unexplained"] += 1
                G = _glue(ca, qa, cb, qb, theta)
                inv = modular_invariants(G)
                if inv.genus > genus_bound:
                    continue
                counts["genus_ok"] += 1
                T = identify_abstract(qa.table)
                H = G.sl2_part()
                T2 = _report(H, p, q).type
                if T2 is None:
                    T2 = identify_abstract(AbstractGroup([[0]]))
                found.append({
                    "generators": [list(g.entries) for g in G.generators],
                    "genus": inv.genus,
                    "type": type_string(T, T2),
                    "components": [ia, ib],
                })
    return counts, found


def _all_quotients(p: int) -> list[Component]:
    out = []
    allg = FiniteMatrixGroup(p, elements=gl2_codes(p))
    for G in subgroup_lattice(p):
        N = normalizer(G, allg)
        comp = Component(p, G, N)
        for M in _orbit_reps_of_normals(G, N, normal_subgroups(G)):
            comp.quotients.append(_quotient_data(G, N, M))
        out.append(comp)
    return out


def goursat_classes(p: int, q: int) -> list[FiniteMatrixGroup]:
    """One representative per conjugacy class of subgroups of GL2(Z/pq), unfiltered.

    Each class is a fibre product over one N(A) x N(B)-orbit of gluings.
    """
    out = []
    ca, cb = _all_quotients(p), _all_quotients(q)
    for A in ca:
        for B in cb:
            for qa in A.quotients:
                for qb in B.quotients:
                    if qa.table.order != qb.table.order:
                        continue
                    for theta in _iso_orbits(qa, qb):
                        out.append(_glue(A, qa, B, qb, theta))
    return out


# ---------------------------------------------------------------- the pipeline

@dataclass
class PipelineReport:
    level: int
    genus_bound: int
    counts: dict
    buckets: dict
    maximal: dict
    timing: dict
    rank_notes: list = field(default_factory=list)

    def bucket_key_string(self, key) -> str:
        g, pair, t = key
        return f"genus {g}, {pair}, {t}"

    def to_json(self) -> dict:
        def grp(G):
            return {
                "order": G.order,
                "generators": [list(g.entries) for g in G.generators],
                "has_minus_I": G.has_minus_identity(),
            }
        return {
            "schema_version": 1,
            "level": self.level,
            "genus_bound": self.genus_bound,
            "counts": self.counts,
            "buckets": [
                {"genus": k[0], "pair": list(k[1]), "type": k[2],
                 "size": len(v), "groups": [grp(G) for G in v],
                 "maximal": [grp(G) for G in self.maximal.get(k, [])]}
                for k, v in sorted(self.buckets.items())
            ],
            "rank_notes": self.rank_notes,
            "timing": self.timing,
        }


def _factor_pair(n: int) -> tuple[int, int]:
    f = factorize(n)
    if sorted(f.values()) != [1, 1]:
        raise UnsupportedLevel(f"{n} is not a product of two distinct primes")
    p, q = sorted(f)
    return p, q


def run_pipeline(n: int, genus_bound: int = 1, rank_facts=None, jobs: int = 1,
                 checkpoint: str | Path | None = None) -> PipelineReport:
    if n not in SUPPORTED_LEVELS:
        raise UnsupportedLevel(f"level {n} is outside {SUPPORTED_LEVELS}")
    if genus_bound not in (0, 1):
        raise UnsupportedLevel("genus bound must be 0 or 1")
    p, q = _factor_pair(n)
    t0 = time.time()
    ca = components(p, genus_bound)
    cb = components(q, genus_bound)
    t1 = time.time()
    tasks = [(p, q, i, j, genus_bound) for i in range(len(ca)) for j in range(len(cb))]
    done: dict = {}
    ckpt = Path(checkpoint) if checkpoint else None
    if ckpt and ckpt.exists():
        for line in ckpt.read_text().splitlines():
            rec = json.loads(line)
            done[tuple(rec["task"])] = (rec["counts"], rec["found"])
    todo = [t for t in tasks if (t[2], t[3]) not in done]
    if jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_process_pair, todo))
    else:
        results = []
        for t in todo:
            results.append(_process_pair(t))
            if ckpt:
                with ckpt.open("a") as fh:
                    fh.write(json.dumps({"task": [t[2], t[3]], "counts": results[-1][0],
                                         "found": results[-1][1]}) + "\n")
    for t, r in zip(todo, results):
        done[(t[2], t[3])] = r
    counts = dict.fromkeys(COUNT_KEYS, 0)
    survivors = []
    for key in sorted(done):
        c, found = done[key]
        for k in COUNT_KEYS[:-1]:
            counts[k] += c[k]
        survivors.extend(found)
    t2 = time.time()
    buckets: dict = {}
    rank_notes = []
    for rec in survivors:
        G = FiniteMatrixGroup(n, [ResidueMatrix.of(n, e) for e in rec["generators"]])
        if rec["genus"] == 1:
            verdict = _rank_verdict(G, rank_facts, buckets, rec)
            rank_notes.append(verdict[1])
            if not verdict[0]:
                continue
        counts["rank_ok"] += 1
        buckets.setdefault((rec["genus"], (p, q), rec["type"]), []).append(G)
    maximal = {k: select_maximal(sorted(v, key=lambda G: -G.order)) for k, v in buckets.items()}
    t3 = time.time()
    timing = {"components": round(t1 - t0, 3), "gluing": round(t2 - t1, 3),
              "maximal": round(t3 - t2, 3), "total": round(t3 - t0, 3)}
    return PipelineReport(n, genus_bound, counts, buckets, maximal, timing, rank_notes)


def _rank_verdict(G: FiniteMatrixGroup, rank_facts, buckets, rec) -> tuple[bool, str]:
    """Keep a genus-1 group only if its curve has positive rank per the stored facts."""
    from .catalog import match_rank_fact
    if rank_facts is None:
        raise MissingRankFact("genus-1 survivors need rank facts")
    fact = match_rank_fact(G, rank_facts)
    if fact is None:
        gens = ";".join(",".join(map(str, g)) for g in rec["generators"])
        raise MissingRankFact(f"no rank fact for genus-1 group <{gens}> at level {G.modulus}")
    return fact["rank"] > 0, f"{fact['id']}: rank {fact['rank']}"
