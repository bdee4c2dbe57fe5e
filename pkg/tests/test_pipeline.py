import json

import pytest

from entanglement_atlas.catalog import load_rank_facts, match_catalog
from entanglement_atlas.errors import MissingRankFact, UnsupportedLevel
from entanglement_atlas.gl2 import are_conjugate, reduce_mod
from entanglement_atlas.pipeline import COUNT_KEYS, run_pipeline
from entanglement_atlas.report import emit_report, empty_report, pair_inventory, report_document


@pytest.fixture(scope="module")
def facts():
    return load_rank_facts()


@pytest.fixture(scope="module")
def reports(facts):
    return {n: run_pipeline(n, 1, facts) for n in (6, 10, 14, 15)}


def bucket(report, t, genus=0):
    p, q = sorted(report.buckets)[0][1]
    return report.buckets.get((genus, (p, q), t), []), report.maximal.get((genus, (p, q), t), [])


# ---------------------------------------------------------------- level 6

def test_level6_s3_bucket(reports, maxgroups):
    groups, maximal = bucket(reports[6], "(S3,Z/3)")
    assert sorted(G.order for G in groups) == [6, 6, 12, 48]
    assert len(maximal) == 1 and are_conjugate(maximal[0], maxgroups[1])
    for i in (2, 3, 4):
        assert sum(1 for G in groups if G.order == maxgroups[i].order and are_conjugate(G, maxgroups[i])) == 1


def test_level6_z2_bucket_contains_nabg(reports, nabg):
    groups, maximal = bucket(reports[6], "Z/2")
    assert len(groups) == 12 and len(maximal) == 5
    for i in (1, 2):
        assert sum(1 for G in maximal if G.order == nabg[i].order and are_conjugate(G, nabg[i])) == 1


def test_level6_text_table_lists_five(reports):
    text = emit_report(reports[6], "text").decode()
    assert "(2,3)-entanglements of type Z/2, genus 0: 12 groups, 5 maximal" in text
    assert "(2,3)-entanglements of type (S3,Z/3), genus 0: 4 groups, 1 maximal" in text


def test_counts_are_monotone(reports):
    for r in reports.values():
        values = [r.counts[k] for k in COUNT_KEYS]
        assert values == sorted(values, reverse=True)


# ---------------------------------------------------------------- level 10

def test_level10_fine_labels(reports):
    doc = report_document(reports[10])
    labels = [g["labels"][1] for b in doc["buckets"] if b["type"] == "Z/2" for g in b["maximal"]]
    assert labels.count("5B.4.1") == 2
    assert labels.count("5B.4.2") == 2


def test_level10_s3_bucket(reports):
    groups, maximal = bucket(reports[10], "(S3,Z/3)")
    assert [G.order for G in maximal] == [96]
    assert reduce_mod(maximal[0], 5).order == 96


# ---------------------------------------------------------------- level 14

def test_level14_genus1_positive_rank(reports, g_s, g_n):
    _, maximal = bucket(reports[14], "Z/2", genus=1)
    assert len(maximal) == 2
    for H in (g_s, g_n):
        assert sum(1 for G in maximal if G.order == H.order and are_conjugate(G, H)) == 1
    assert "G_s: rank 1" in reports[14].rank_notes and "G_n: rank 1" in reports[14].rank_notes


def test_level14_z3_bucket(reports):
    groups, maximal = bucket(reports[14], "Z/3")
    assert len(groups) == 9 and len(maximal) == 3


# ---------------------------------------------------------------- catalog correspondence

@pytest.mark.parametrize("n", [6, 10, 14, 15])
def test_maximal_groups_match_catalog(reports, catalog, n):
    found = []
    for maximal in reports[n].maximal.values():
        for G in maximal:
            e = match_catalog(G, catalog)
            assert e is not None, f"level {n}: maximal group of order {G.order} not in the catalog"
            found.append(e.id)
    expected = sorted(e.id for e in catalog if e.level == n)
    assert sorted(found) == expected


def test_pair_inventory(reports):
    inv = pair_inventory(reports.values())
    assert inv["count"] == 7 and inv["count_by_genus"] == 8
    assert [1, [2, 7], "Z/2"] in inv["by_genus"] and [0, [2, 7], "Z/2"] in inv["by_genus"]


# ---------------------------------------------------------------- errors

@pytest.mark.parametrize("n", [12, 34, 35, 7])
def test_unsupported_level(n):
    with pytest.raises(UnsupportedLevel):
        run_pipeline(n, 0)


def test_bad_genus_bound():
    with pytest.raises(UnsupportedLevel):
        run_pipeline(6, 2)


def test_missing_rank_facts():
    with pytest.raises(MissingRankFact):
        run_pipeline(10, 1, None)
    with pytest.raises(MissingRankFact, match="no rank fact"):
        run_pipeline(10, 1, [])


def test_genus0_bound_needs_no_facts():
    r = run_pipeline(10, 0, None)
    assert all(k[0] == 0 for k in r.buckets)
    assert not r.rank_notes


# ---------------------------------------------------------------- reports

def test_emit_is_deterministic(facts, reports):
    a = emit_report(reports[6], "json")
    b = emit_report(run_pipeline(6, 1, facts), "json")
    assert a == b
    assert emit_report(reports[6], "text") == emit_report(reports[6], "text")


def test_parallel_run_matches_serial(facts, reports):
    assert emit_report(run_pipeline(10, 1, facts, jobs=2)) == emit_report(reports[10])


def test_checkpoint_resume(tmp_path, facts, reports):
    ck = tmp_path / "level6.jsonl"
    first = run_pipeline(6, 1, facts, checkpoint=ck)
    lines = ck.read_text().splitlines()
    assert lines
    # drop the last task so the resumed run recomputes it
    ck.write_text("\n".join(lines[:-1]) + "\n")
    resumed = run_pipeline(6, 1, facts, checkpoint=ck)
    assert emit_report(first) == emit_report(resumed) == emit_report(reports[6])


def test_empty_report():
    doc = json.loads(emit_report(None))
    assert doc == {"schema_version": 1, "level": 0, "genus_bound": 1, "counts": {},
                   "buckets": [], "rank_notes": []}
    assert emit_report(empty_report(), "text").decode().startswith("level 0")


def test_timing_only_on_request(reports):
    assert "timing" not in json.loads(emit_report(reports[6]))
    assert set(json.loads(emit_report(reports[6], with_timing=True))["timing"]) == \
        {"components", "gluing", "maximal", "total"}


def test_bad_format(reports):
    with pytest.raises(ValueError):
        emit_report(reports[6], "xml")


def test_json_matrices_are_row_major(reports):
    doc = json.loads(emit_report(reports[6]))
    m = doc["buckets"][0]["maximal"][0]["generators"][0]
    assert len(m) == 2 and all(len(row) == 2 for row in m)


@pytest.mark.slow
def test_remaining_levels_match_catalog(facts, catalog, reports):
    more = {n: run_pipeline(n, 1, facts) for n in (21, 22, 26)}
    assert not more[21].buckets and not more[22].buckets
    found = sorted(match_catalog(G, catalog).id for m in more[26].maximal.values() for G in m)
    assert found == sorted(e.id for e in catalog if e.level == 26)
    inv = pair_inventory([*reports.values(), *more.values()])
    # a pair seen in genus 0 and genus 1 counts once or twice depending on the reading
    assert (inv["count"], inv["count_by_genus"]) == (8, 9)
