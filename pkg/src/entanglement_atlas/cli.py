"""Command-line interface: entanglement-atlas <subcommand> ...

Exit status is 0 only when every requested check passes, 1 when a check
fails and 2 on bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .catalog import (
    distinct_curves,
    entry_by_id,
    load_catalog,
    load_rank_facts,
    ramification,
    verify_catalog,
    verify_entry,
)
from .congruence import modular_invariants
from .entangle import admissible_check, entanglement_report, primitivity_check
from .errors import AtlasError
from .gl2 import generate_group, parse_generators
from .pipeline import run_pipeline
from .report import FORMATS, emit_report
from .siegel import (
    build_orbits,
    divisor_of_orbit_power,
    orbit_product,
    siegel_leading_exponent,
    siegel_product,
)


def _group(args):
    return generate_group(parse_generators(args.gens, args.modulus), args.modulus)


def _pair(text: str) -> tuple[int, int]:
    a, b = (int(x) for x in text.split(","))
    return a, b


def _write(data: bytes, out: str | None) -> None:
    if out:
        Path(out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def cmd_verify_catalog(args) -> int:
    entries = load_catalog(args.catalog)
    verdicts = verify_catalog(entries, jobs=args.jobs)
    failed = 0
    for e, v in zip(entries, verdicts):
        status = "PASS" if v.passed else "FAIL"
        print(f"{status} {e.id:<14} {e.label:<20} {e.type}")
        for line in v.failures():
            print(f"     {line}")
        failed += not v.passed
    curves = distinct_curves(entries)
    print(f"{len(entries)} entries, {len(entries) - failed} pass; "
          f"{curves['curves']} distinct curves ({curves['genus0']} genus 0, {curves['genus1']} genus 1)")
    return 0 if failed == 0 else 1


def cmd_pipeline(args) -> int:
    facts = load_rank_facts(args.rank_facts) if args.max_genus >= 1 else None
    report = run_pipeline(args.level, args.max_genus, facts, jobs=args.jobs, checkpoint=args.checkpoint)
    _write(emit_report(report, args.format, with_timing=args.timing), args.out)
    print(f"timing {json.dumps(report.timing)}", file=sys.stderr)
    return 0


def cmd_analyze(args) -> int:
    G = _group(args)
    a, b = _pair(args.pair)
    ok, reason = admissible_check(G)
    rep = entanglement_report(G, a, b)
    prim = primitivity_check(G)
    out = {
        "modulus": G.modulus,
        "order": G.order,
        "has_minus_I": G.has_minus_identity(),
        "admissible": ok,
        "admissible_reason": reason,
        "report": rep.summary(),
        "primitive": prim.primitive,
    }
    print(json.dumps(out, indent=2, sort_keys=True, default=str))
    return 0


def cmd_invariants(args) -> int:
    G = _group(args)
    inv = modular_invariants(G)
    out = inv.as_dict()
    print(json.dumps(out, indent=2, sort_keys=True, default=str))
    return 0


def _orbit_rep(text: str, N: int) -> tuple[int, int]:
    """'3/0' -> (3, 0), numerators over N; '3/14,0' -> fractions."""
    if "," in text:
        a1, a2 = (Fraction(x) for x in text.split(","))
        if (a1 * N).denominator != 1 or (a2 * N).denominator != 1:
            raise ValueError(f"{text} is not in (1/{N})Z^2")
        return int(a1 * N) % N, int(a2 * N) % N
    k1, k2 = (int(x) for x in text.split("/"))
    return k1 % N, k2 % N


def cmd_siegel(args) -> int:
    N = args.level
    k1, k2 = _orbit_rep(args.orbit_rep, N)
    a = (Fraction(k1, N), Fraction(k2, N))
    print(f"a = ({a[0]}, {a[1]})  leading exponent {siegel_leading_exponent(a)}")
    if args.gens:
        G = generate_group(parse_generators(args.gens, N), N)
        orbits = build_orbits(G.sl2_part(), N)
        i = orbits.index_of(a)
        cusps = modular_invariants(G).cusp_data
        print(f"orbit {i} of {len(orbits)}: {[(str(x), str(y)) for x, y in orbits.pairs(i)]}")
        print(f"divisor of g_O^(12N): {divisor_of_orbit_power(orbits, i, cusps)}")
        prod = orbit_product(orbits, i, args.prec)
    else:
        prod = siegel_product([(k1, k2)], N, args.prec)
    h, zeta = prod.normalized()
    print(f"normalizing root of unity: {zeta}")
    sys.stdout.write(h.dump())
    return 0


def cmd_jmap_check(args) -> int:
    entries = load_catalog(args.catalog)
    e = entry_by_id(entries, args.entry)
    v = verify_entry(e, entries)
    kind = e.model["kind"]
    print(f"{e.id} {e.label} type {e.type} genus {e.genus} model {kind}")
    if kind != "genus1":
        r = ramification(e.j_map())
        print(f"j-map degree {r['degree']}; over infinity {r['inf']}, over 0 {r['0']}, over 1728 {r['1728']}")
    for name, (ok, detail) in v.checks.items():
        print(f"  {'PASS' if ok else 'FAIL'} {name}: {detail}")
    return 0 if v.passed else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="entanglement-atlas")
    ap.add_argument("--jobs", type=int, default=1, help="worker processes")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-catalog", help="verify every catalog entry")
    p.add_argument("--catalog", default=None)
    p.set_defaults(func=cmd_verify_catalog)

    p = sub.add_parser("pipeline", help="search for unexplained entanglements at level pq")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--max-genus", type=int, choices=(0, 1), default=1)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=FORMATS, default="text")
    p.add_argument("--rank-facts", default=None)
    p.add_argument("--checkpoint", default=None)
    p.add_argument("--timing", action="store_true", help="include timings in the report")
    p.set_defaults(func=cmd_pipeline)

    for name, func, helptext in (("analyze", cmd_analyze, "entanglement report for one group"),
                                 ("invariants", cmd_invariants, "modular curve invariants")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--modulus", type=int, required=True)
        p.add_argument("--gens", required=True, help="a,b,c,d;a,b,c,d;...")
        if name == "analyze":
            p.add_argument("--pair", required=True, help="P,Q")
        p.set_defaults(func=func)

    p = sub.add_parser("siegel", help="orbit products of Siegel functions")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--orbit-rep", required=True, help="K1/K2 for (K1/N, K2/N), or A1,A2 as fractions")
    p.add_argument("--prec", type=Fraction, default=Fraction(2))
    p.add_argument("--gens", default=None, help="group whose SL2 part defines the orbits")
    p.set_defaults(func=cmd_siegel)

    p = sub.add_parser("jmap-check", help="check one entry's model and j-map")
    p.add_argument("--entry", required=True)
    p.add_argument("--catalog", default=None)
    p.set_defaults(func=cmd_jmap_check)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (AtlasError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
