"""Regenerate data/catalog.json and data/labels.json from the transcribed tables below.

Formulas are kept as text exactly as transcribed (with corrections noted per
entry) and converted to exact coefficient arrays here, so the JSON stays
auditable against the text.
"""
from __future__ import annotations

import json
from pathlib import Path

from entanglement_atlas.poly import parse_rational_function

DATA = Path(__file__).resolve().parents[1] / "src" / "entanglement_atlas" / "data"

P1 = "(8t^6 + 8t^5 - 20t^4 - 50t^3 + 80t^2 - 12t + 3)"
P2 = "(t^12 + 8t^11 + 25t^10 + 34t^9 + 6t^8 - 30t^7 - 17t^6 + 6t^5 - 4t^3 + 3t^2 + 4t + 1)"
P3 = "(t^12 + 18t^11 + 131t^10 + 480t^9 + 1032t^8 + 1242t^7 + 805t^6 + 306t^5 + 132t^4 + 60t^3 - t^2 - 6t + 1)"
P4 = ("(t^12 - 8t^11 + 265t^10 - 1474t^9 + 5046t^8 - 10050t^7 + 11263t^6 - 7206t^5 + 2880t^4"
      " - 956t^3 + 243t^2 - 4t + 1)")
P5 = ("(t^12 - 9t^11 + 39t^10 - 75t^9 + 75t^8 - 114t^7 + 26t^6 + 114t^5 + 75t^4 + 75t^3"
      " + 39t^2 + 9t + 1)")
P6 = ("(211t^12 - 189t^11 - 501t^10 - 135t^9 + 345t^8 + 966t^7 + 146t^6 - 966t^5 + 345t^4"
      " + 135t^3 - 501t^2 + 189t + 211)")

# "23^6" and "23^3" in the source tables are 2*3^6 and 2*3^3
Q1 = "3^5 t^2(t + 1)(t + 3)(t^2 + 3)(t^2 + 3t + 3)^2"
R1 = "2*3^6 t^3(t^2 - 3)(t^2 + 3t + 3)^3(t^4 + 6t^3 + 18t^2 + 18t + 9)"
Q2 = "3^3 t^2(t^2 - 11t - 1)^2(t^4 - 12t^3 + 14t^2 + 12t + 1)"
R2 = "2*3^3 t^3(t^2 - 11t - 1)^3(t^2 + 1)(t^4 - 18t^3 + 74t^2 + 18t + 1)"
Q3 = "3^3 t^2(t^2 - 11t - 1)^2(t^4 + 228t^3 + 494t^2 - 228t + 1)"
R3 = "2*3^3 t^3(t^2 - 11t - 1)^3(t^2 + 1)(t^4 - 522t^3 - 10006t^2 + 522t + 1)"
Q4 = "3^3 7^2 t^2(t^2 + 13t + 49)^3(t^2 + 245t + 2401)"
R4 = "2*3^3 7^3 t^3(t^2 + 13t + 49)^4(t^4 - 490t^3 - 21609t^2 - 235298t - 823543)"
Q5 = ("3^3 13^2 t^2(t^2 - 3t - 1)^2(t^4 - t^3 + 5t^2 + t + 1)^3"
      "(t^8 - 5t^7 + 7t^6 - 5t^5 + 5t^3 + 7t^2 + 5t + 1)")
R5 = ("2*3^3 13^3 t^3(t^2 - 3t - 1)^3(t^2 + 1)(t^4 - t^3 + 5t^2 + t + 1)^4"
      "(t^12 - 8t^11 + 25t^10 - 44t^9 + 40t^8 + 18t^7 - 40t^6 - 18t^5 + 40t^4 + 44t^3 + 25t^2 + 8t + 1)")
Q6 = ("3^3 t^2(t^2 - 3t - 1)^2(t^4 - t^3 + 5t^2 + t + 1)^3"
      "(t^8 + 235t^7 + 1207t^6 + 955t^5 + 3840t^4 - 955t^3 + 1207t^2 - 235t + 1)")
R6 = ("2*3^3 t^3(t^2 - 3t - 1)^3(t^2 + 1)(t^4 - t^3 + 5t^2 + t + 1)^4"
      "(t^12 - 512t^11 - 13079t^10 - 32300t^9 - 104792t^8 - 111870t^7 - 419368t^6 + 111870t^5"
      " - 104792t^4 + 32300t^3 - 13079t^2 + 512t + 1)")

J_S = ("x(x+1)^3(x^2-5x+1)^3(x^2-5x+8)^3(x^4 - 5x^3 + 8x^2 - 7x + 7)^3"
       "/(x^3 - 4x^2 + 3x + 1)^7")
J_N = "64 x^3(x^2-7x+14)^3(5x^2-14x-7)^3(x^2+7)^3/(x^3 - 7x^2 + 7x + 7)^7"
J_N_TABLE_P = ("(x^6 - 20/3x^5 + 148/9x^4 - 181/9x^3 + 134/9x^2 - 56/9x + 14/9)"
               "(x^6 - 20/3x^5 + 148/9x^4 - 160/9x^3 + 64/9x^2 + 7/9)"
               "(x^6 - 20/3x^5 + 148/9x^4 - 842/45x^3 + 92/9x^2 - 112/45x - 7/45)")
J_N_TABLE_Q = ("(x^9 - 10x^8 + 124/3x^7 - 2503/27x^6 + 1132/9x^5 - 2956/27x^4 + 551/9x^3"
               " - 518/27x^2 + 56/27x + 7/27)")
J_N_TABLE = f"8000/27 x^3(x-2)^3(x-4/3)^3{J_N_TABLE_P}^3/{J_N_TABLE_Q}^7"


# the (2,3) 3B family lies over a cyclic cubic cover of X_G = X_0(3)
X03 = {"outer": "(t + 27)(t + 3)^3/t", "inner": "3t^3/(t^2 + 3t + 3)",
       "note": "j of the family is the X_0(3) j-map composed with a degree-3 map, "
               "so the family is not a generic parametrization of X_G"}


def jmap(text):
    return {"kind": "jmap", "text": text, "j": parse_rational_function(text).to_json()}


def ainv(q_text, r_text, q_scale="1", r_scale="1"):
    q = parse_rational_function(q_text) * parse_rational_function(q_scale)
    r = parse_rational_function(r_text) * parse_rational_function(r_scale)
    return {"kind": "ainvariants", "convention": "y^2 = x^3 - Q x + R",
            "text": [f"{q_scale} * {q_text}", f"{r_scale} * {r_text}"],
            "Q": q.to_json(), "R": r.to_json()}


def genus1(jtext, curve=None):
    out = {"kind": "genus1", "weierstrass": [0, -4, 0, 3, 1],
           "jmap_on": curve or "weierstrass",
           "jmap_text": jtext,
           "j": parse_rational_function(jtext, var="x").to_json()}
    return out


def entry(eid, level, pair, typ, labels, gens, minus_i, genus, model, example, **extra):
    e = {"id": eid, "level": level, "pair": list(pair), "type": typ, "labels": list(labels),
         "generators": [[[a, b], [c, d]] for a, b, c, d in gens],
         "has_minus_I": minus_i, "genus": genus, "model": model, "example_curve": example}
    e.update(extra)
    return e


def entries():
    E = []
    # genus 0 with -I
    E.append(entry("g0-6-Z2-1", 6, (2, 3), "Z/2", ("GL2", "3Ns"),
                   [(3, 5, 4, 3), (5, 3, 3, 2), (2, 3, 3, 1)], True, 0,
                   jmap("(t - 3)^3(t + 3)^3(t^2 + 3)^3/t^6"), "6627e1"))
    E.append(entry("g0-6-Z2-2", 6, (2, 3), "Z/2", ("GL2", "3Nn"),
                   [(5, 1, 4, 1), (5, 1, 5, 2)], True, 0, jmap("(t^2 + 12)^3"), "1369e1"))
    E.append(entry("g0-6-Z2-3", 6, (2, 3), "Z/2", ("GL2", "3Nn"),
                   [(0, 1, 1, 3), (3, 5, 1, 0), (5, 4, 5, 5)], True, 0,
                   jmap("-3^3(t - 2)^3(t + 2)^3"), "31046b2",
                   corrections=["transcribed as 3^3(t - 2)^3(t + 2)^3, which is unramified over 1728; "
                                "the sign is fixed (equal to (-t^2/3 + 12)^3 after t -> t/3)"]))
    E.append(entry("g0-6-S3-1", 6, (2, 3), "(S3,Z/3)", ("GL2", "GL3"),
                   [(5, 1, 4, 3), (4, 1, 1, 0)], True, 0, jmap("2^10 3^3 t^3(1 - 4t^3)"), "300a1",
                   corrections=["transcribed as 2^10 3^3 t^3(4t^3 - 1), which is unramified over 1728; "
                                "with (1 - 4t^3), j - 1728 = -1728(8t^3 - 1)^2"]))
    E.append(entry("g0-10-Z2-1", 10, (2, 5), "Z/2", ("GL2", "5B"),
                   [(9, 5, 1, 2), (4, 5, 1, 9), (8, 5, 1, 8)], True, 0,
                   jmap("(t^4 + 10t^2 + 5)^3/t^2"), "1369e1"))
    E.append(entry("g0-10-Z2-2", 10, (2, 5), "Z/2", ("GL2", "5B"),
                   [(9, 5, 9, 4), (7, 5, 9, 4), (2, 5, 7, 2)], True, 0,
                   jmap("(t^4 + 50t^2 + 125)^3/(5^5 t^2)"), "1369e2"))
    E.append(entry("g0-10-Z2-3", 10, (2, 5), "Z/2", ("GL2", "5Nn"),
                   [(7, 7, 9, 8), (4, 3, 3, 8)], True, 0,
                   jmap("2^15 5^4 t^3(20t^2 - 20t + 1)(400t^4 + 200t^3 + 80t^2 + 10t + 1)^3"
                        "/(20t^2 - 1)^10"), "4900l1"))
    E.append(entry("g0-10-Z2-4", 10, (2, 5), "Z/2", ("GL2", "5Nn"),
                   [(7, 2, 9, 3), (9, 3, 3, 8), (4, 3, 3, 3)], True, 0,
                   jmap("(-5)^3 (t - 1)(5t - 1)(5t^2 - 10t + 1)^3(5t^2 + 3)^3(15t^2 + 1)^3"
                        "/(5t^2 - 1)^10"), "27a1"))
    E.append(entry("g0-10-S3-1", 10, (2, 5), "(S3,Z/3)", ("GL2", "5S4"),
                   [(2, 9, 7, 1), (6, 3, 1, 7), (4, 9, 9, 6)], True, 0,
                   jmap(f"(2t^2 - t + 2)^3{P1}^3(18t^6 - 12t^5 - 70t^4 + 25t^3 + 130t^2 - 52t + 8)"
                        "/((t + 1)^10(t^2 - 3t + 1)^10)"), "3240a1",
                   cover={"j_H": "x^5 + 5x^4 + 40x^3",
                          "x": "(8t^6 + 8t^5 - 20t^4 - 50t^3 + 80t^2 - 12t + 3)/((t+1)^2(t^2-3t+1)^2)"}))
    E.append(entry("g0-14-Z3-1", 14, (2, 7), "Z/3", ("2Cn", "7B"),
                   [(10, 7, 5, 11), (2, 7, 3, 3), (5, 7, 9, 12)], True, 0,
                   jmap(f"(t^2 + t + 1)^3(t^6 + 5t^5 + 12t^4 + 9t^3 + 2t^2 + t + 1){P2}^3"
                        "/(t^14 (t + 1)^14 (t^3 + 2t^2 - t - 1)^2)"), "1922e1"))
    E.append(entry("g0-14-Z3-2", 14, (2, 7), "Z/3", ("2Cn", "7B"),
                   [(5, 0, 8, 5), (3, 0, 8, 11), (9, 7, 7, 10)], True, 0,
                   jmap(f"7^4 (t^2 + t + 1)^3(9t^6 + 39t^5 + 64t^4 + 23t^3 + 4t^2 + 15t + 9){P3}^3"
                        "/((t^3 + t^2 - 2t - 1)^14 (t^3 + 8t^2 + 5t - 1)^2)"), "3969c2"))
    E.append(entry("g0-14-Z3-3", 14, (2, 7), "Z/3", ("2Cn", "7B"),
                   [(9, 7, 3, 10), (5, 7, 9, 12)], True, 0,
                   jmap(f"(t^2 - t + 1)^3(t^6 - 5t^5 + 12t^4 - 9t^3 + 2t^2 - t + 1){P4}^3"
                        "/((t - 1)^2 t^2 (t^3 - 2t^2 - t + 1)^14)"), "1922e2"))
    E.append(entry("g0-26-Z2-1", 26, (2, 13), "Z/2", ("GL2", "13B"),
                   [(21, 6, 21, 17), (5, 23, 22, 7), (12, 15, 25, 17), (11, 11, 12, 13)], True, 0,
                   jmap("(13t^4 + 5t^2 + 1)(28561t^8 + 15379t^6 + 3380t^4 + 247t^2 + 1)^3/t^2"),
                   "9025j2",
                   corrections=["transcribed with denominator 7t^2, which is unramified over 1728; the map "
                                "is F(13t^2) for the F of the companion row, so the denominator is t^2"]))
    E.append(entry("g0-26-Z2-2", 26, (2, 13), "Z/2", ("GL2", "13B"),
                   [(5, 18, 12, 9), (17, 20, 5, 21), (14, 21, 15, 0)], True, 0,
                   jmap("(t^4 + 5t^2 + 13)(t^8 + 7t^6 + 20t^4 + 19t^2 + 1)^3/t^2"), "9025j1"))
    E.append(entry("g0-15-Z2-1", 15, (3, 5), "Z/2", ("3Nn", "5B"),
                   [(10, 7, 8, 4), (10, 8, 4, 4), (11, 2, 8, 10), (13, 5, 1, 7), (1, 11, 4, 13)],
                   True, 0, jmap(f"2^12 {P5}^3/((t - 1)^15 (t + 1)^15 (t^2 - 4t - 1)^3)"), "1369e1"))
    E.append(entry("g0-15-Z2-2", 15, (3, 5), "Z/2", ("3Nn", "5B"),
                   [(1, 2, 13, 10), (14, 5, 7, 2), (11, 1, 14, 8), (11, 11, 13, 14), (10, 8, 2, 11)],
                   True, 0, jmap(f"2^12 {P6}^3/((t - 1)^3 (t + 1)^3 (t^2 - 4t - 1)^15)"), "1369e2"))

    # genus 0 without -I: twist pairs share <G,-I>
    E.append(entry("g0n-6-Z2-1", 6, (2, 3), "Z/2", ("GL2", "3B"),
                   [(5, 5, 0, 5), (2, 5, 3, 2), (2, 1, 3, 1)], False, 0, ainv(Q1, R1), "73926l2",
                   twist_of="g0n-6-Z2-2", factorization=X03))
    E.append(entry("g0n-6-Z2-2", 6, (2, 3), "Z/2", ("GL2", "3B"),
                   [(2, 5, 3, 2), (1, 3, 3, 2)], False, 0, ainv(Q1, R1, "1/3^2", "1/3^3"), "73926x1",
                   twist_of="g0n-6-Z2-1", factorization=X03))
    E.append(entry("g0n-10-Z2-1", 10, (2, 5), "Z/2", ("GL2", "5B.4.2"),
                   [(6, 5, 3, 1), (6, 5, 7, 3), (9, 0, 3, 9)], False, 0, ainv(Q2, R2), "371522f1",
                   twist_of="g0n-10-Z2-2"))
    E.append(entry("g0n-10-Z2-2", 10, (2, 5), "Z/2", ("GL2", "5B.4.2"),
                   [(9, 5, 5, 8), (6, 5, 1, 1), (9, 0, 3, 9)], False, 0, ainv(Q2, R2, "5^2", "5^3"),
                   "1225j2", twist_of="g0n-10-Z2-1"))
    E.append(entry("g0n-10-Z2-3", 10, (2, 5), "Z/2", ("GL2", "5B.4.1"),
                   [(6, 5, 3, 1), (3, 5, 9, 6), (9, 0, 3, 9)], False, 0, ainv(Q3, R3), "371522f2",
                   twist_of="g0n-10-Z2-4"))
    E.append(entry("g0n-10-Z2-4", 10, (2, 5), "Z/2", ("GL2", "5B.4.1"),
                   [(6, 5, 1, 1), (2, 5, 5, 9), (9, 0, 3, 9)], False, 0, ainv(Q3, R3, "5^2", "5^3"),
                   "1225j2", twist_of="g0n-10-Z2-3",
                   corrections=["a-invariants transcribed as [5^2 R3, 5^3 Q3]; Q3 and R3 exchanged "
                                "so that the row shares j with its twist partner"]))
    E.append(entry("g0n-14-Z2-1", 14, (2, 7), "Z/2", ("GL2", "7B"),
                   [(11, 7, 1, 10), (10, 7, 1, 10), (3, 0, 5, 3), (5, 7, 6, 11)], False, 0,
                   ainv(Q4, R4), "19600db2", twist_of="g0n-14-Z2-2"))
    E.append(entry("g0n-14-Z2-2", 14, (2, 7), "Z/2", ("GL2", "7B"),
                   [(5, 7, 8, 5), (10, 7, 5, 1), (12, 7, 3, 12)], False, 0,
                   ainv(Q4, R4, "1/7^2", "1/7^3"), "19600by2", twist_of="g0n-14-Z2-1"))
    E.append(entry("g0n-26-Z2-1", 26, (2, 13), "Z/2", ("GL2", "13B.4.1"),
                   [(8, 7, 5, 12), (20, 25, 21, 14), (5, 3, 4, 3)], False, 0, ainv(Q5, R5),
                   "74529q1", twist_of="g0n-26-Z2-2"))
    E.append(entry("g0n-26-Z2-2", 26, (2, 13), "Z/2", ("GL2", "13B.4.1"),
                   [(0, 23, 21, 25), (15, 15, 20, 5), (25, 24, 19, 9), (5, 16, 9, 5)], False, 0,
                   ainv(Q5, R5, "1/13^2", "1/13^3"), "355008ej1", twist_of="g0n-26-Z2-1"))
    E.append(entry("g0n-26-Z2-3", 26, (2, 13), "Z/2", ("GL2", "13B.4.2"),
                   [(15, 15, 20, 5), (22, 23, 9, 24), (7, 10, 25, 5), (7, 1, 14, 1)], False, 0,
                   ainv(Q6, R6), "355008ej2", twist_of="g0n-26-Z2-4"))
    E.append(entry("g0n-26-Z2-4", 26, (2, 13), "Z/2", ("GL2", "13B.4.2"),
                   [(18, 7, 3, 16), (22, 23, 9, 24), (19, 14, 23, 1)], False, 0,
                   ainv(Q6, R6, "13^2", "13^3"), "74529q2", twist_of="g0n-26-Z2-3"))

    # genus 1
    E.append(entry("G_s", 14, (2, 7), "Z/2", ("GL2", "7Ns"),
                   [(3, 2, 5, 11), (2, 13, 1, 12), (0, 9, 5, 0), (13, 12, 9, 1)], True, 1,
                   genus1(J_S), "361a1", rank_fact="G_s",
                   corrections=["table generators (2,13;1,2) and (13,12;0,1) generate all of "
                                "GL2(Z/14); the generators (2,13;1,12), (13,12;9,1) are used",
                                "quartic factor of j_s carries exponent 3 (degree 28 = index of 7Ns)"]))
    g_n = genus1(J_N, curve="-(x-3)(x^3-7x^2+7x+7)")
    g_n["tabulated_jmap_text"] = J_N_TABLE
    g_n["tabulated_jmap_note"] = ("degree 63 in x with an unramified fiber over 1728, so not a j-map; "
                                  "kept for reference, not verified")
    g_n["tabulated_jmap"] = parse_rational_function(J_N_TABLE, var="x").to_json()
    E.append(entry("G_n", 14, (2, 7), "Z/2", ("GL2", "7Nn"),
                   [(12, 11, 11, 3), (0, 9, 9, 13), (8, 9, 1, 6)], True, 1, g_n, "121b1",
                   rank_fact="G_n",
                   corrections=["j_n constant is 64; with 1600 the fiber over 1728 is unramified",
                                "the j-map is x -> j_n(x) on the quartic model C; composing with the "
                                "x-coordinate of y^2 = x^3 - 4x^2 + 3x + 1 instead gives 6 poles of "
                                "order 7, not the 3 cusps of width 14 of G_n"]))
    return E


LABELS = {
    "schema_version": 1,
    "note": "Fine labels resolved by conjugacy against these generator sets; coarse labels "
            "(B, Cs, Ns, Cn, Nn, GL) are constructed in code.",
    "labels": {
        "5B.4.1": {"p": 5, "generators": [[[1, 1], [0, 1]], [[4, 0], [0, 1]], [[1, 0], [0, 2]]]},
        "5B.4.2": {"p": 5, "generators": [[[1, 1], [0, 1]], [[2, 0], [0, 1]], [[1, 0], [0, 4]]]},
        "13B.4.1": {"p": 13, "generators": [[[1, 1], [0, 1]], [[4, 0], [0, 1]], [[1, 0], [0, 2]]]},
        "13B.4.2": {"p": 13, "generators": [[[1, 1], [0, 1]], [[2, 0], [0, 1]], [[1, 0], [0, 4]]]},
    },
}


def main():
    doc = {"schema_version": 1, "entries": entries()}
    (DATA / "catalog.json").write_text(json.dumps(doc, indent=1) + "\n")
    (DATA / "labels.json").write_text(json.dumps(LABELS, indent=1) + "\n")
    print(f"wrote {len(doc['entries'])} entries")


if __name__ == "__main__":
    main()
