"""Deterministic JSON and text renderings of pipeline reports."""
from __future__ import annotations

import json

from .catalog import load_catalog, match_catalog, name_image
from .gl2 import FiniteMatrixGroup, reduce_mod
from .pipeline import PipelineReport

FORMATS = ("json", "text")


def empty_report(level: int = 0, genus_bound: int = 1) -> PipelineReport:
    return PipelineReport(level, genus_bound, {}, {}, {}, {})


def _group_record(G: FiniteMatrixGroup, pair, entries) -> dict:
    p, q = pair
    hit = match_catalog(G, entries) if entries is not None else None
    gens = [g for g in G.generators if g.entries != (1, 0, 0, 1)]
    return {
        "order": G.order,
        "has_minus_I": G.has_minus_identity(),
        "labels": [name_image(reduce_mod(G, p)), name_image(reduce_mod(G, q))],
        "generators": [[[g.entries[0], g.entries[1]], [g.entries[2], g.entries[3]]] for g in gens],
        "catalog": hit.id if hit else None,
    }


def report_document(report: PipelineReport, with_catalog: bool = True, with_timing: bool = False) -> dict:
    """The schema-versioned JSON object; timing is left out unless asked for so bytes are reproducible."""
    entries = load_catalog() if with_catalog and report.buckets else None
    buckets = []
    for key in sorted(report.buckets):
        genus, pair, t = key
        buckets.append({
            "genus": genus,
            "pair": list(pair),
            "type": t,
            "size": len(report.buckets[key]),
            "orders": sorted((G.order for G in report.buckets[key]), reverse=True),
            "maximal": [_group_record(G, pair, entries) for G in report.maximal.get(key, [])],
        })
    doc = {
        "schema_version": 1,
        "level": report.level,
        "genus_bound": report.genus_bound,
        "counts": dict(report.counts),
        "buckets": buckets,
        "rank_notes": sorted(report.rank_notes),
    }
    if with_timing:
        doc["timing"] = dict(report.timing)
    return doc


def _text(doc: dict) -> str:
    lines = [f"level {doc['level']}  genus <= {doc['genus_bound']}"]
    if doc["counts"]:
        lines.append("  ".join(f"{k} {v}" for k, v in doc["counts"].items()))
    for b in doc["buckets"]:
        p, q = b["pair"]
        lines.append("")
        lines.append(f"({p},{q})-entanglements of type {b['type']}, genus {b['genus']}: "
                     f"{b['size']} groups, {len(b['maximal'])} maximal")
        lines.append(f"  {'Label':<20} {'-I':<3} {'order':>6}  {'catalog':<14} Generators")
        for g in b["maximal"]:
            label = f"[{g['labels'][0]}, {g['labels'][1]}]"
            gens = ", ".join(f"[{m[0][0]},{m[0][1]};{m[1][0]},{m[1][1]}]" for m in g["generators"])
            flag = "y" if g["has_minus_I"] else "n"
            lines.append(f"  {label:<20} {flag:<3} {g['order']:>6}  {g['catalog'] or '-':<14} {gens}")
    for note in doc["rank_notes"]:
        lines.append(f"rank: {note}")
    return "\n".join(lines) + "\n"


def emit_report(report: PipelineReport | None, fmt: str = "json", with_timing: bool = False) -> bytes:
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}")
    doc = report_document(report if report is not None else empty_report(), with_timing=with_timing)
    if fmt == "json":
        return (json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n").encode("utf-8")
    return _text(doc).encode("utf-8")


def pair_inventory(reports) -> dict:
    """Distinct ((p, q), T) across pipeline reports, counted two ways.

    `pairs` merges genus; `by_genus` keeps a pair occurring in genus 0 and
    genus 1 as two items.
    """
    by_genus = sorted({(k[0], tuple(k[1]), k[2]) for r in reports for k in r.buckets})
    pairs = sorted({(p, t) for _, p, t in by_genus})
    return {
        "pairs": [[list(p), t] for p, t in pairs],
        "by_genus": [[g, list(p), t] for g, p, t in by_genus],
        "count": len(pairs),
        "count_by_genus": len(by_genus),
    }
