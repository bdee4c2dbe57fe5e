"""The table catalog: loading, label resolution and per-entry verification."""
from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .congruence import modular_invariants
from .entangle import admissible_check, entanglement_report
from .errors import CatalogIoError, SchemaError
from .gl2 import (
    FiniteMatrixGroup,
    ResidueMatrix,
    are_conjugate,
    conjugate_into,
    generate_group,
    gl2_group,
    reduce_mod,
)
from .lattice import (
    borel,
    exceptional_preimage,
    nonsplit_cartan,
    nonsplit_cartan_normalizer,
    split_cartan,
    split_cartan_normalizer,
)
from .poly import Poly, RationalFunction, compose, parse_rational_function, poly_gcd, squarefree_decomposition
from .weierstrass import WeierstrassModel, q_isomorphic, quartic_to_weierstrass

SCHEMA_VERSION = 1
MODEL_KINDS = ("jmap", "ainvariants", "genus1")


def data_path(name: str) -> Path:
    return Path(str(resources.files("entanglement_atlas") / "data" / name))


# ---------------------------------------------------------------- entries

@dataclass
class CatalogEntry:
    id: str
    level: int
    pair: tuple[int, int]
    type: str
    labels: tuple[str, str]
    generators: tuple[tuple[int, int, int, int], ...]
    has_minus_I: bool
    genus: int
    model: dict
    example_curve: str
    twist_of: str | None = None
    rank_fact: str | None = None
    cover: dict | None = None
    factorization: dict | None = None
    corrections: list = field(default_factory=list)

    @property
    def label(self) -> str:
        return f"[{self.labels[0]}, {self.labels[1]}]"

    def group(self) -> FiniteMatrixGroup:
        return _group(self.level, self.generators)

    def j_map(self) -> RationalFunction:
        """The j-map as a rational function of the model's coordinate t (or x)."""
        kind = self.model["kind"]
        if kind == "ainvariants":
            return self.weierstrass_family().j_invariant()
        return RationalFunction.from_json(self.model["j"])

    def weierstrass_family(self) -> WeierstrassModel:
        """y^2 = x^3 - Q x + R over Q(t), for entries without -I."""
        if self.model["kind"] != "ainvariants":
            raise ValueError(f"{self.id} has no a-invariant model")
        Q = RationalFunction.from_json(self.model["Q"])
        R = RationalFunction.from_json(self.model["R"])
        return WeierstrassModel.short(-Q, R)

    def genus1_model(self) -> WeierstrassModel:
        if self.model["kind"] != "genus1":
            raise ValueError(f"{self.id} is not a genus-1 entry")
        return WeierstrassModel.of(*self.model["weierstrass"])


@lru_cache(maxsize=None)
def _group(level: int, gens: tuple) -> FiniteMatrixGroup:
    return generate_group([ResidueMatrix.of(level, g) for g in gens], level)


def _matrix(obj, where: str) -> tuple[int, int, int, int]:
    if isinstance(obj, list) and len(obj) == 2 and all(isinstance(r, list) and len(r) == 2 for r in obj):
        flat = [obj[0][0], obj[0][1], obj[1][0], obj[1][1]]
    elif isinstance(obj, list) and len(obj) == 4:
        flat = list(obj)
    else:
        raise SchemaError(f"{where}: matrix must be [[a,b],[c,d]] or [a,b,c,d]")
    if not all(isinstance(x, int) for x in flat):
        raise SchemaError(f"{where}: matrix entries must be integers")
    return tuple(flat)


_REQUIRED = {"id": str, "level": int, "pair": list, "type": str, "labels": list,
             "generators": list, "has_minus_I": bool, "genus": int, "model": dict,
             "example_curve": str}


def _parse_entry(raw: dict, k: int) -> CatalogEntry:
    eid = raw.get("id", f"#{k}") if isinstance(raw, dict) else f"#{k}"
    if not isinstance(raw, dict):
        raise SchemaError(f"entry {eid}: not an object")
    for key, typ in _REQUIRED.items():
        if key not in raw:
            raise SchemaError(f"entry {eid}: missing field {key}")
        if not isinstance(raw[key], typ):
            raise SchemaError(f"entry {eid}: field {key} must be {typ.__name__}")
    n = raw["level"]
    if len(raw["pair"]) != 2 or raw["pair"][0] * raw["pair"][1] != n:
        raise SchemaError(f"entry {eid}: field pair must multiply to the level")
    if len(raw["labels"]) != 2:
        raise SchemaError(f"entry {eid}: field labels must have two entries")
    gens = []
    for i, g in enumerate(raw["generators"]):
        m = _matrix(g, f"entry {eid}: generators[{i}]")
        if not ResidueMatrix.of(n, m).is_invertible():
            raise SchemaError(f"entry {eid}: generators[{i}] = {list(m)} is not invertible mod {n}")
        gens.append(tuple(x % n for x in m))
    if raw["genus"] not in (0, 1):
        raise SchemaError(f"entry {eid}: field genus must be 0 or 1")
    kind = raw["model"].get("kind")
    if kind not in MODEL_KINDS:
        raise SchemaError(f"entry {eid}: model.kind must be one of {MODEL_KINDS}")
    needed = {"jmap": ("j",), "ainvariants": ("Q", "R"), "genus1": ("weierstrass", "j")}[kind]
    for key in needed:
        if key not in raw["model"]:
            raise SchemaError(f"entry {eid}: missing field model.{key}")
    try:
        for key in needed:
            if key in ("j",):
                RationalFunction.from_json(raw["model"][key])
            elif key in ("Q", "R"):
                RationalFunction.from_json(raw["model"][key])
    except (ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
        raise SchemaError(f"entry {eid}: model: {exc}") from exc
    return CatalogEntry(
        id=raw["id"], level=n, pair=tuple(raw["pair"]), type=raw["type"],
        labels=tuple(raw["labels"]), generators=tuple(gens), has_minus_I=raw["has_minus_I"],
        genus=raw["genus"], model=raw["model"], example_curve=raw["example_curve"],
        twist_of=raw.get("twist_of"), rank_fact=raw.get("rank_fact"), cover=raw.get("cover"),
        factorization=raw.get("factorization"), corrections=list(raw.get("corrections", [])))


def load_catalog(path: str | Path | None = None) -> list[CatalogEntry]:
    path = Path(path) if path is not None else data_path("catalog.json")
    try:
        text = path.read_text()
    except OSError as exc:
        raise CatalogIoError(f"{path}: {exc}") from exc
    if not text.strip():
        raise SchemaError(f"{path}: empty file")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("entries"), list):
        raise SchemaError(f"{path}: expected an object with an entries list")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise SchemaError(f"{path}: schema_version must be {SCHEMA_VERSION}")
    entries = [_parse_entry(raw, k) for k, raw in enumerate(doc["entries"])]
    ids = Counter(e.id for e in entries)
    dup = [i for i, c in ids.items() if c > 1]
    if dup:
        raise SchemaError(f"duplicate entry ids {dup}")
    return entries


def entry_by_id(entries, eid: str) -> CatalogEntry:
    for e in entries:
        if e.id == eid:
            return e
    raise KeyError(eid)


# ---------------------------------------------------------------- labels

_LABEL = re.compile(r"^(\d+)(B|Cs|Ns|Cn|Nn|S4)(\.\d+\.\d+)?$")


@lru_cache(maxsize=None)
def _fine_labels() -> dict:
    return json.loads(data_path("labels.json").read_text())["labels"]


@lru_cache(maxsize=None)
def label_group(label: str) -> FiniteMatrixGroup:
    """The subgroup of GL2(F_p) named by a label such as GL3, 7Ns, 5S4 or 5B.4.1."""
    m = re.match(r"^GL(\d+)$", label)
    if m:
        return gl2_group(int(m.group(1)))
    m = _LABEL.match(label)
    if not m:
        raise ValueError(f"unknown label {label!r}")
    p, kind, fine = int(m.group(1)), m.group(2), m.group(3)
    if fine:
        spec = _fine_labels().get(label)
        if spec is None:
            raise ValueError(f"no stored generators for {label!r}")
        return generate_group([ResidueMatrix.of(p, _matrix(g, label)) for g in spec["generators"]], p)
    build = {"B": borel, "Cs": split_cartan, "Ns": split_cartan_normalizer,
             "Cn": nonsplit_cartan, "Nn": nonsplit_cartan_normalizer,
             "S4": lambda q: exceptional_preimage(q, "S4")}[kind]
    return build(p)


def coarse_label(label: str) -> str:
    """5B.4.1 -> 5B; other labels are already coarse."""
    return label.split(".")[0]


def label_matches(G: FiniteMatrixGroup, label: str) -> tuple[bool, str]:
    """Whether G (a subgroup of GL2(F_p)) is conjugate to the labelled group."""
    ref = label_group(label)
    if ref.modulus != G.modulus:
        return False, f"{label} lives mod {ref.modulus}, image is mod {G.modulus}"
    if not are_conjugate(G, ref):
        return False, f"image of order {G.order} is not conjugate to {label} (order {ref.order})"
    coarse = coarse_label(label)
    if coarse != label and conjugate_into(G, label_group(coarse)) is None:
        return False, f"image not inside {coarse}"
    return True, f"conjugate to {label}"


def name_image(G: FiniteMatrixGroup) -> str:
    """A label for a subgroup of GL2(F_p): GLp, a stored fine label, or a coarse one.

    Unnamed images print as p?k with k the order.
    """
    p = G.modulus
    fine = sorted(k for k in _fine_labels() if int(_LABEL.match(k).group(1)) == p)
    names = [f"GL{p}"] + fine + [f"{p}{k}" for k in ("B", "Cs", "Ns", "Cn", "Nn", "S4")]
    for name in names:
        try:
            ref = label_group(name)
        except (ValueError, KeyError):
            continue
        if ref.order == G.order and are_conjugate(G, ref):
            return name
    return f"{p}?{G.order}"


def match_catalog(G: FiniteMatrixGroup, entries: list[CatalogEntry]) -> CatalogEntry | None:
    """The catalog entry whose group, or its extension by -I, is conjugate to G."""
    for e in entries:
        if e.level != G.modulus:
            continue
        for H in (e.group(), e.group().with_minus_identity()):
            if H.order == G.order and are_conjugate(G, H):
                return e
    return None


# ---------------------------------------------------------------- ramification

def _fiber(f: RationalFunction, value) -> list[tuple[int, int]]:
    """(number of geometric points, multiplicity) pairs of f^-1(value) on P^1."""
    out = []
    if value is None:
        for s, m in squarefree_decomposition(f.den):
            if s.degree > 0:
                out.append((s.degree, m, s))
        if f.num.degree > f.den.degree:
            out.append((1, f.num.degree - f.den.degree, None))
        return out
    g = f.num - f.den * value
    for s, m in squarefree_decomposition(g):
        if s.degree > 0:
            out.append((s.degree, m, s))
    if g.degree < f.degree and f.den.degree >= f.num.degree:
        out.append((1, f.degree - g.degree, None))
    return out


def _lift_to_cover(fiber, q: Poly, f: RationalFunction) -> list[tuple[int, int]]:
    """Pull a fiber back along the double cover y^2 = q(x) -> P^1."""
    out = []
    for count, m, s in fiber:
        if s is None:
            if q.degree % 2:
                out.append((1, 2 * m))
            else:
                out.append((2, m))
            continue
        g = poly_gcd(s, q)
        if g.degree > 0:
            out.append((g.degree, 2 * m))
        rest = s.degree - g.degree
        if rest:
            out.append((2 * rest, m))
    return out


def ramification(f: RationalFunction, q: Poly | None = None) -> dict:
    """Multiplicity patterns of a j-map over infinity, 0 and 1728.

    With `q`, f is a function of x on the curve y^2 = q(x).
    """
    out = {}
    for key, v in (("inf", None), ("0", 0), ("1728", 1728)):
        fib = _fiber(f, v)
        pts = _lift_to_cover(fib, q, f) if q is not None else [(c, m) for c, m, _ in fib]
        counter = Counter()
        for c, m in pts:
            counter[m] += c
        out[key] = dict(sorted(counter.items()))
    deg = f.degree * (2 if q is not None else 1)
    return {"degree": deg, **out}


def ramification_matches(f: RationalFunction, G: FiniteMatrixGroup, q: Poly | None = None) -> tuple[bool, str]:
    """Compare the j-map's ramification with the cusp widths and elliptic points of G."""
    inv = modular_invariants(G)
    r = ramification(f, q)
    widths = Counter(c.width for c in inv.cusp_data)
    problems = []
    if r["degree"] != inv.index:
        problems.append(f"degree {r['degree']} vs index {inv.index}")
    if dict(sorted(widths.items())) != r["inf"]:
        problems.append(f"poles {r['inf']} vs cusp widths {dict(sorted(widths.items()))}")
    if set(r["0"]) - {1, 3} or r["0"].get(1, 0) != inv.e3:
        problems.append(f"fiber over 0 {r['0']} vs e3 = {inv.e3}")
    if set(r["1728"]) - {1, 2} or r["1728"].get(1, 0) != inv.e2:
        problems.append(f"fiber over 1728 {r['1728']} vs e2 = {inv.e2}")
    if problems:
        return False, "; ".join(problems)
    return True, f"degree {inv.index}, {inv.cusps} cusps, e2 = {inv.e2}, e3 = {inv.e3}"


# ---------------------------------------------------------------- verification

@dataclass
class Verdict:
    entry_id: str
    checks: dict = field(default_factory=dict)

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks[name] = (bool(ok), detail)

    @property
    def passed(self) -> bool:
        return all(ok for ok, _ in self.checks.values())

    def failures(self) -> list[str]:
        return [f"{k}: {d}" for k, (ok, d) in self.checks.items() if not ok]

    def to_json(self) -> dict:
        return {"id": self.entry_id, "passed": self.passed,
                "checks": {k: {"ok": ok, "detail": d} for k, (ok, d) in self.checks.items()}}


def _try(verdict: Verdict, name: str, fn) -> None:
    try:
        ok, detail = fn()
    except Exception as exc:  # failures are data here
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    verdict.add(name, ok, detail)


def verify_entry(e: CatalogEntry, entries: list[CatalogEntry] | None = None) -> Verdict:
    v = Verdict(e.id)
    try:
        G = e.group()
    except Exception as exc:
        v.add("generate", False, f"{type(exc).__name__}: {exc}")
        return v
    v.add("generate", True, f"order {G.order}")
    p, q = e.pair
    _try(v, "admissible", lambda: admissible_check(G))

    def classify():
        rep = entanglement_report(G, p, q)
        ok = rep.unexplained and rep.type_string == e.type
        return ok, f"type {rep.type_string}, unexplained={rep.unexplained}"
    _try(v, "entanglement", classify)

    def genus():
        inv = modular_invariants(G)
        return inv.genus == e.genus, f"genus {inv.genus} (index {inv.index}, {inv.cusps} cusps)"
    _try(v, "genus", genus)
    v.add("minus_I", G.has_minus_identity() == e.has_minus_I,
          f"-I in G: {G.has_minus_identity()}")
    for prime, label, key in ((p, e.labels[0], "label_p"), (q, e.labels[1], "label_q")):
        _try(v, key, lambda prime=prime, label=label: label_matches(reduce_mod(G, prime), label))
    _try(v, "model", lambda: _check_model(e, G, entries))
    return v


def _check_model(e: CatalogEntry, G: FiniteMatrixGroup, entries) -> tuple[bool, str]:
    kind = e.model["kind"]
    pm = G.with_minus_identity()
    notes = []
    if kind == "jmap":
        ok, d = ramification_matches(e.j_map(), pm)
        notes.append(d)
        if ok and e.cover:
            jh = parse_rational_function(e.cover["j_H"], var="x")
            x = parse_rational_function(e.cover["x"])
            same = compose(jh, x) == e.j_map()
            notes.append("j_H o cover equals the j-map" if same else "j_H o cover differs")
            ok = ok and same
        return ok, "; ".join(notes)
    if kind == "ainvariants":
        ok, d = ramification_matches(e.j_map(), pm)
        notes.append(d)
        if not ok and e.factorization:
            # a non-generic family: j = (j-map of X_G) o (map of degree > 1)
            outer = parse_rational_function(e.factorization["outer"])
            inner = parse_rational_function(e.factorization["inner"])
            ok_outer, d_outer = ramification_matches(outer, pm)
            same = compose(outer, inner) == e.j_map()
            ok = ok_outer and same
            notes[-1] = (f"non-generic family: j = J o phi with deg phi = {inner.degree}; "
                         f"J matches <G,-I>: {d_outer}; composition exact: {same}")
        if e.twist_of and entries is not None:
            other = entry_by_id(entries, e.twist_of)
            same_j = other.j_map() == e.j_map()
            same_curve = are_conjugate(pm, other.group().with_minus_identity())
            notes.append(f"twist partner {other.id}: equal j {same_j}, same <G,-I> {same_curve}")
            ok = ok and same_j and same_curve
        return ok, "; ".join(notes)
    # genus 1
    E = e.genus1_model()
    target = WeierstrassModel.of(0, -4, 0, 3, 1)
    ok = q_isomorphic(E, target)
    notes.append("model is Q-isomorphic to y^2 = x^3 - 4x^2 + 3x + 1" if ok else "model mismatch")
    curve = e.model.get("jmap_on", "weierstrass")
    if curve == "weierstrass":
        cover_poly = Poly.parse("x^3 - 4x^2 + 3x + 1", var="x")
    else:
        cover_poly = Poly.parse(curve, var="x")
        W = quartic_to_weierstrass(cover_poly, (3, 0))
        iso = q_isomorphic(W, target)
        notes.append(f"y^2 = {curve} reduces to a Q-isomorphic model: {iso}")
        ok = ok and iso
    rok, d = ramification_matches(e.j_map(), pm, cover_poly)
    notes.append(d)
    return ok and rok, "; ".join(notes)


def verify_catalog(entries: list[CatalogEntry] | None = None, jobs: int = 1) -> list[Verdict]:
    entries = entries if entries is not None else load_catalog()
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(_verify_one, [(e, entries) for e in entries]))
    return [verify_entry(e, entries) for e in entries]


def _verify_one(args):
    e, entries = args
    return verify_entry(e, entries)


def distinct_curves(entries: list[CatalogEntry]) -> dict:
    """Entries grouped by the conjugacy class of <G,-I>; twist pairs collapse."""
    classes: list[tuple[FiniteMatrixGroup, list[str], int]] = []
    for e in entries:
        pm = e.group().with_minus_identity()
        for G, ids, _ in classes:
            if G.modulus == pm.modulus and are_conjugate(G, pm):
                ids.append(e.id)
                break
        else:
            classes.append((pm, [e.id], e.genus))
    by_genus = Counter(g for _, _, g in classes)
    return {"curves": len(classes), "genus0": by_genus.get(0, 0), "genus1": by_genus.get(1, 0),
            "classes": [ids for _, ids, _ in classes]}


# ---------------------------------------------------------------- rank facts

def load_rank_facts(path: str | Path | None = None) -> list[dict]:
    path = Path(path) if path is not None else data_path("rank_facts.json")
    try:
        doc = json.loads(path.read_text())
    except OSError as exc:
        raise CatalogIoError(f"{path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON: {exc}") from exc
    facts = doc.get("facts") if isinstance(doc, dict) else None
    if not isinstance(facts, list):
        raise SchemaError(f"{path}: expected a facts list")
    for f in facts:
        for key in ("id", "level", "rank", "generators"):
            if key not in f:
                raise SchemaError(f"{path}: rank fact {f.get('id', '?')} missing {key}")
    return facts


def match_rank_fact(G: FiniteMatrixGroup, facts: list[dict]) -> dict | None:
    """The stored fact covering a genus-1 group G, if any.

    A fact for H covers G when <G,-I> is conjugate into H: X_G then covers
    X_H, and two genus-1 curves related by a cover have isogenous Jacobians.
    """
    pm = G.with_minus_identity()
    for f in facts:
        if f["level"] != G.modulus:
            continue
        H = _group(f["level"], tuple(tuple(g) for g in f["generators"]))
        if H.order % pm.order == 0 and conjugate_into(pm, H) is not None:
            return f
    return None
