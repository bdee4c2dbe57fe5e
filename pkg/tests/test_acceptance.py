"""Acceptance criteria 1-8, one pass/fail line each.

Every comparison is exact unless a tolerance is named below.  Runtime
budgets: criterion 1 under 300 s, criterion 4 under 1800 s, criterion 7
under 600 s.  The only floating-point check is the numeric Siegel oracle in
criterion 4, pinned at 1e-25 with 40 working digits.

Run with pytest, or as a script for the lines alone.
"""
import random
import sys
import time
from fractions import Fraction as F
from pathlib import Path

import mpmath
import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

import oracles  # noqa: E402
from conftest import ACCEPTANCE_LINES, CONSTELLATION, LEVEL14_SIEGEL, MAXGROUPS, group  # noqa: E402
from entanglement_atlas.catalog import (  # noqa: E402
    distinct_curves,
    entry_by_id,
    load_catalog,
    load_rank_facts,
    verify_catalog,
)
from entanglement_atlas.congruence import modular_invariants  # noqa: E402
from entanglement_atlas.entangle import isogeny_dual_compatible  # noqa: E402
from entanglement_atlas.gl2 import ResidueMatrix, are_conjugate  # noqa: E402
from entanglement_atlas.pipeline import goursat_classes, run_pipeline  # noqa: E402
from entanglement_atlas.poly import Poly, RationalFunction as R, compose  # noqa: E402
from entanglement_atlas.report import pair_inventory, report_document  # noqa: E402
from entanglement_atlas.siegel import (  # noqa: E402
    build_orbits,
    divisor_of_orbit_power,
    find_relation,
    orbit_product,
)
from entanglement_atlas.weierstrass import (  # noqa: E402
    WeierstrassModel,
    q_isomorphic,
    quadratic_twist,
    quartic_to_weierstrass,
    square_class,
)
from test_properties import EXAMPLES, LEVELS, check_group, random_group  # noqa: E402
from test_siegel import H_PRINTED, J1_PRINTED, S_PRINTED  # noqa: E402

MODEL_196 = WeierstrassModel.of(0, -4, 0, 3, 1)


def record(k, title, checks, start, budget=None, notes=()):
    """Print and store the criterion line, then fail the test on any false check."""
    elapsed = time.time() - start
    if budget is not None:
        checks[f"runtime < {budget} s"] = elapsed < budget
    ok = all(checks.values())
    failed = [name for name, v in checks.items() if not v]
    line = f"criterion {k}: {'PASS' if ok else 'FAIL'}  {title}  [{elapsed:.1f} s, {len(checks)} checks]"
    if failed:
        line += "  failed: " + "; ".join(failed)
    for note in notes:
        line += f"\n    note: {note}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def conjugate_count(groups, H):
    return sum(1 for G in groups if G.order == H.order and are_conjugate(G, H))


# ---------------------------------------------------------------- 1

def test_criterion_1_level6_search():
    t0 = time.time()
    r = run_pipeline(6, 1, load_rank_facts())
    key = (0, (2, 3), "(S3,Z/3)")
    groups, maximal = r.buckets.get(key, []), r.maximal.get(key, [])
    M = {i: group(6, *g) for i, g in MAXGROUPS.items()}
    checks = {
        "4 classes": len(groups) == 4,
        "orders 48, 12, 6, 6": sorted((G.order for G in groups), reverse=True) == [48, 12, 6, 6],
        "maximal set of size 1": len(maximal) == 1,
        "maximal element is G1": len(maximal) == 1 and are_conjugate(maximal[0], M[1]),
        "each printed G_i found once": all(conjugate_count(groups, M[i]) == 1 for i in M),
        "G2 = <-I, G3>": np.array_equal(M[3].with_minus_identity().elements, M[2].elements),
        "G2 = <-I, G4>": np.array_equal(M[4].with_minus_identity().elements, M[2].elements),
    }
    record(1, "level-6 (2,3)-(S3,Z/3) search", checks, t0, budget=300)


# ---------------------------------------------------------------- 2

def test_criterion_2_level10_constellation():
    t0 = time.time()
    doc = report_document(run_pipeline(10, 1, load_rank_facts()))
    labels = [g["labels"][1] for b in doc["buckets"] if b["type"] == "Z/2" for g in b["maximal"]]
    C = {i: group(10, *g) for i, g in CONSTELLATION.items()}

    def same_pm(a, b):
        return np.array_equal(C[a].with_minus_identity().elements, C[b].with_minus_identity().elements)

    checks = {
        "2 maximal [GL2, 5B.4.1]": labels.count("5B.4.1") == 2,
        "2 maximal [GL2, 5B.4.2]": labels.count("5B.4.2") == 2,
        "(G1, G2) isogeny-dual": isogeny_dual_compatible(C[1], C[2], 5),
        "(G3, G4) isogeny-dual": isogeny_dual_compatible(C[3], C[4], 5),
        "(G1, G4) not isogeny-dual": not isogeny_dual_compatible(C[1], C[4], 5),
        "<G1,-I> = <G4,-I>": same_pm(1, 4),
        "<G2,-I> = <G3,-I>": same_pm(2, 3),
        "<G1,-I> != <G2,-I>": not same_pm(1, 2),
    }
    record(2, "level-10 fine labels, isogeny and twist pairing", checks, t0)


# ---------------------------------------------------------------- 3

def test_criterion_3_level14_genus_one():
    t0 = time.time()
    cat = load_catalog()
    r = run_pipeline(14, 1, load_rank_facts())
    maximal = r.maximal.get((1, (2, 7), "Z/2"), [])
    gs, gn = entry_by_id(cat, "G_s"), entry_by_id(cat, "G_n")
    C = Poly.parse("-(t - 3)(t^3 - 7t^2 + 7t + 7)")
    checks = {
        "exactly 2 positive-rank maximal groups": len(maximal) == 2,
        "one is G_s": conjugate_count(maximal, gs.group()) == 1,
        "one is G_n": conjugate_count(maximal, gn.group()) == 1,
        "G_s genus 1": modular_invariants(gs.group()).genus == 1,
        "G_n genus 1": modular_invariants(gn.group()).genus == 1,
        "G_s model Q-isomorphic to y^2 = x^3 - 4x^2 + 3x + 1": q_isomorphic(gs.genus1_model(), MODEL_196),
        "G_n model Q-isomorphic to y^2 = x^3 - 4x^2 + 3x + 1": q_isomorphic(gn.genus1_model(), MODEL_196),
        "quartic C reduces to the same curve": q_isomorphic(quartic_to_weierstrass(C, (3, 0)), MODEL_196),
        "G_s and G_n models Q-isomorphic": q_isomorphic(gs.genus1_model(), gn.genus1_model()),
    }
    record(3, "level-14 genus-1 positive-rank groups G_s, G_n", checks, t0)


# ---------------------------------------------------------------- 4

def test_criterion_4_siegel_golden():
    t0 = time.time()
    G = group(14, *LEVEL14_SIEGEL)
    inv = modular_invariants(G)
    orbits = build_orbits(G.sl2_part(), 14)
    i = orbits.index_of((F(3, 14), 0))
    div = divisor_of_orbit_power(orbits, i, inv.cusp_data)
    h, _ = orbit_product(orbits, i, 14).normalized()
    printed = h - 1
    terms_ok = [printed.coefficient(e) == h.field(c) for e, c in H_PRINTED.items()]
    others_zero = all(printed.coefficient(F(k, 14)) == 0
                      for k in range(-1, 14) if F(k, 14) not in H_PRINTED)
    rel = find_relation(printed, 48, 34)
    root = F(119, 392) + F(1, 2)
    with mpmath.workdps(40):
        exact = oracles.siegel_numeric(orbits.pairs(i), root, 1j)
        approx = sum(mpmath.mpf(c.rational().numerator) / c.rational().denominator
                     * mpmath.exp(-2 * mpmath.pi * mpmath.mpf(e.numerator) / e.denominator)
                     for e, c in h.terms().items())
        numeric_ok = abs(exact - approx) < mpmath.mpf(10) ** -25
    checks = {
        "9 orbits": len(orbits) == 9,
        "printed representatives hit every orbit": sorted(orbits.index_of(a) for a in S_PRINTED) == list(range(9)),
        "divisor -168 P1 + 168 P2": sorted(div) == [-168, 0, 0, 0, 0, 168] and div.count(0) == 4,
        "9 printed q-expansion terms exact": len(terms_ok) == 9 and all(terms_ok),
        "no other terms below q^1": others_zero,
        "orbit product = numeric oracle (tol 1e-25)": numeric_ok,
        "g_O has constant term 0": h.coefficient(0) == 0,
        "find_relation gives printed J1 exactly": rel.f == R.parse(J1_PRINTED),
    }
    notes = ["the printed expansion and printed J1 are those of g_O - 1; the orbit product "
             "normalised to leading coefficient 1 has constant term 0, confirmed by the numeric oracle"]
    record(4, "Siegel units at level 14", checks, t0, budget=1800, notes=notes)


# ---------------------------------------------------------------- 5

def test_criterion_5_symbolic_identities():
    t0 = time.time()
    E_t = WeierstrassModel.short(R.parse("-27t^4 + 324t^3 - 378t^2 - 324t - 27"),
                                 R.parse("54t^6 - 972t^5 + 4050t^4 + 4050t^2 + 972t + 54"))
    d = R.parse("t(t^2 - 11t - 1)")
    tw = quadratic_twist(E_t, d)
    printed_a4 = R.parse("-27t^2(t^2 - 11t - 1)^2(t^4 - 12t^3 + 14t^2 + 12t + 1)")
    printed_a6 = R.parse("54t^3(t^2 - 11t - 1)^3(t^4 - 12t^3 + 14t^2 + 12t + 1)(t^2 + 1)")
    corrected_a6 = R.parse("54t^3(t^2 - 11t - 1)^3(t^4 - 18t^3 + 74t^2 + 18t + 1)(t^2 + 1)")
    sc = square_class(E_t.discriminant)
    nn3 = WeierstrassModel.of(1, 0, 0, R.parse("-36/(t^3 - 1728)"), R.parse("-1/(t^3 - 1728)"))
    sc6 = square_class(nn3.discriminant)
    cat = load_catalog()
    s4 = entry_by_id(cat, "g0-10-S3-1")
    j_h = R.parse("t^5 + 5t^4 + 40t^3")
    cover = R.parse("(8t^6 + 8t^5 - 20t^4 - 50t^3 + 80t^2 - 12t + 3)/((t + 1)^2(t^2 - 3t + 1)^2)")
    by_id = {e.id: e for e in cat}
    pairs = {tuple(sorted((e.id, e.twist_of))) for e in cat if e.twist_of}
    at10 = tw.evaluate(10)
    checks = {
        "square_class(Delta(E_t)) = t(t^2 - 11t - 1)": sc.constant == 1 and sc.poly == Poly.parse("t^3 - 11t^2 - t"),
        "twist a4 = printed a4": tw.a4 == printed_a4,
        "twist a6 = a6(E_t) d^3": tw.a6 == E_t.a6 * d ** 3 == corrected_a6,
        "printed a6 differs only in the quartic factor": printed_a6 / corrected_a6
        == R.parse("(t^4 - 12t^3 + 14t^2 + 12t + 1)/(t^4 - 18t^3 + 74t^2 + 18t + 1)"),
        "t = 10 member has Delta = -110 mod squares": square_class(at10.discriminant).constant == -110,
        "square_class(Delta) of the 3Nn-family curve = (t - 12)(t^2 + 12t + 144)":
            sc6.constant == 1 and sc6.poly == Poly.parse("(t - 12)(t^2 + 12t + 144)"),
        "j_H o cover = catalog (2,5)-(S3,Z/3) j-map": compose(j_h, cover) == s4.j_map(),
        "6 twist pairs": len(pairs) == 6,
        "twist pairs share j": all(by_id[a].j_map() == by_id[b].j_map() for a, b in pairs),
    }
    notes = ["the printed a6 of the twisted family repeats the quartic factor of a4; the twist of the "
             "printed E_t has t^4 - 18t^3 + 74t^2 + 18t + 1 there, and only that version gives "
             "Delta = -110 mod squares at t = 10"]
    record(5, "symbolic identities", checks, t0, notes=notes)


# ---------------------------------------------------------------- 6

def test_criterion_6_catalog():
    t0 = time.time()
    cat = load_catalog()
    verdicts = verify_catalog(cat)
    d = distinct_curves(cat)
    checks = {
        "30 entries": len(cat) == 30,
        "all entries pass": all(v.passed for v in verdicts),
        "24 distinct curves": d["curves"] == 24,
        "22 genus 0": d["genus0"] == 22,
        "2 genus 1": d["genus1"] == 2,
    }
    failing = [v.entry_id for v in verdicts if not v.passed]
    record(6, "catalog verification", checks, t0, notes=[f"failing: {failing}"] if failing else ())


# ---------------------------------------------------------------- 7

def test_criterion_7_goursat_vs_brute_force():
    t0 = time.time()
    univ = oracles.all_gl2(6)
    ours = {oracles.conjugacy_canon(frozenset(ResidueMatrix.from_code(int(c), 6).entries for c in G.elements), 6, univ)
            for G in goursat_classes(2, 3)}
    brute = oracles.subgroup_classes(6)
    checks = {
        "universe of order 288": len(univ) == 288,
        "same number of classes": len(ours) == len(brute),
        "same class sets": ours == brute,
    }
    record(7, f"Goursat classes of GL2(Z/6) = brute force ({len(brute)} classes)", checks, t0, budget=600)


# ---------------------------------------------------------------- 8

def test_criterion_8_properties():
    t0 = time.time()
    checks = {}
    for n in sorted(LEVELS):
        rng = random.Random(20240 + n)
        violations = []
        for _ in range(EXAMPLES):
            violations += check_group(random_group(rng, n), rng)
        checks[f"level {n}: {EXAMPLES} groups, 0 violations"] = not violations
    record(8, "property suites", checks, t0)


# ---------------------------------------------------------------- pair inventory

@pytest.mark.slow
def test_pair_inventory_across_levels():
    t0 = time.time()
    facts = load_rank_facts()
    levels = (6, 10, 14, 15, 21, 22, 26, 33, 39)
    inv = pair_inventory([run_pipeline(n, 1, facts) for n in levels])
    line = (f"inventory: levels {list(levels)} give {inv['count']} distinct ((p,q), T) pairs, "
            f"{inv['count_by_genus']} when genus 0 and genus 1 occurrences of one pair count separately "
            f"[{time.time() - t0:.1f} s]")
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert (inv["count"], inv["count_by_genus"]) == (8, 9)


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                pass
