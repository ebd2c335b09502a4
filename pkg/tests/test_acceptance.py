"""End-to-end acceptance checks.

Each test records one line per criterion through the ``acceptance`` fixture;
the lines are printed in the terminal summary.
"""

import random
import subprocess
import sys
import time
from importlib import resources
from pathlib import Path

import pytest

from prodquot.catalog import GroupId, identify, load_catalog
from prodquot.classify import classify_mixed, classify_unmixed, count_components
from prodquot.facts import (
    extension_subgroup_report,
    groups_with_normal_subgroup,
    noncentral_derived_involutions,
    nonabelian_generated,
    nonsplit_extension_pairs,
    one_two_generated,
)
from prodquot.presentation import presentation_from_file
from prodquot.signatures import BranchSignature, enumerate_admissible_tuples
from prodquot.todd_coxeter import group_from_presentation
from prodquot.vectors import ALL, find_generating_vectors

import expected_tables as ref
import test_groups
import test_moduli
import test_vectors

PRES_DIR = resources.files("prodquot") / "data" / "presentations"

# rows whose computed N differs from the printed value; see the decisions ledger
KNOWN_N_MISMATCH = {
    ("unmixed", (36, 9), (3, 4, 4)): 1,
    ("unmixed", (64, 32), (2, 4, 8)): 1,
    ("mixed", (16, 6), (8, 2)): 1,
}


class Timed:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.start


@pytest.fixture(scope="module")
def classified(catalog):
    out = {}
    timings = {}
    for g_F in (3, 4, 5):
        with Timed() as t:
            out[g_F] = classify_unmixed(g_F, catalog)
        timings[g_F] = t.seconds
    with Timed() as t:
        out["mixed"] = classify_mixed(catalog)
    timings["mixed"] = t.seconds
    return out, timings


def unmixed_rows(result):
    return sorted((tuple(r.group_id), r.m.periods, r.g_C, r.dimension) for r in result.records)


def expected_unmixed(g_F):
    return sorted((gid, m, g_C, D) for gid, m, g_C, D, _ in ref.UNMIXED_ROWS[g_F])


# -- 1 ------------------------------------------------------------------------------


def test_mixed_classification(catalog, classified, acceptance):
    needed = [8, 16, 18, 32, 36, 64]
    assert all(catalog.is_complete(o) for o in needed)
    results, timings = classified
    res = results["mixed"]
    rows = sorted((tuple(r.subgroup_id), tuple(r.group_id)) for r in res.records)
    expected = sorted((sub, gid) for gid, sub, _, _ in ref.MIXED_ROWS)
    per_case = {c[0]: classify_mixed(catalog, cases=[c]).records for c in
                [(5, (2, 2), 16), (7, (3,), 36), (9, (2,), 64)]}
    ok = (
        rows == expected
        and res.exhaustive
        and not per_case[7]
        and not per_case[9]
        and len(per_case[5]) == 3
        and timings["mixed"] < 300
    )
    acceptance("1 mixed classification", ok, f"{len(rows)} rows, {timings['mixed']:.1f}s")
    assert ok


# -- 2, 3 ----------------------------------------------------------------------------


def test_unmixed_genus_3(classified, acceptance):
    results, timings = classified
    res = results[3]
    rows = unmixed_rows(res)
    abelian = {r[0] for r in rows if r[0] in ref.ABELIAN_G3}
    g_c_abelian = sorted(r[2] for r in rows if r[0] in ref.ABELIAN_G3)
    ok = (
        rows == expected_unmixed(3)
        and abelian == ref.ABELIAN_G3
        and g_c_abelian == [3, 5, 5, 9]
        and timings[3] < 1800
    )
    acceptance(
        "2 unmixed g_F=3",
        ok,
        f"{len(rows)} rows ({len(rows) - len(abelian)} nonabelian), {res.status}, {timings[3]:.1f}s",
    )
    assert ok


@pytest.mark.parametrize("g_F", [4, 5])
def test_unmixed_genus_4_5(g_F, classified, acceptance):
    results, timings = classified
    res = results[g_F]
    rows = unmixed_rows(res)
    ok = rows == expected_unmixed(g_F)
    detail = f"g_F={g_F}: {len(rows)} rows, {res.status}, {timings[g_F]:.1f}s"
    if not res.exhaustive:
        detail += f", incomplete orders {res.incomplete_orders}"
    acceptance("3 unmixed g_F=4,5", ok and res.exhaustive, detail)
    assert ok
    assert res.exhaustive, "catalog does not cover every required order"


# -- 4 ---------------------------------------------------------------------------


def test_fact_one_two_generated_32(catalog, acceptance):
    found = one_two_generated(catalog, 32)
    ok = found == ref.ONE_TWO_GENERATED_32
    acceptance("4 computational facts", ok, "(a) (1|2)-generated order 32")
    assert ok


def test_fact_nonsplit_pairs(catalog, acceptance):
    with Timed() as t:
        containing = groups_with_normal_subgroup(catalog, 64, GroupId(32, 2))
        seven = [gid.id for gid in containing if catalog.group(*gid).count_elements_of_order(2) == 7]
        pairs = nonsplit_extension_pairs(catalog, ref.ONE_TWO_GENERATED_32, 32)
    t2_row = [s for t_, s in ref.NONSPLIT_PAIRS if t_ == 2]
    ok = (
        [g.id for g in containing] == ref.CONTAINING_32_2
        and seven == t2_row
        and [s for t_, s in pairs if t_ == 2] == t2_row
    )
    acceptance("4 computational facts", ok, f"(b) t=2 row, {t.seconds:.1f}s")
    assert ok
    # the remaining rows are reproduced as well
    assert pairs == ref.NONSPLIT_PAIRS


def test_fact_noncentral_derived_involutions(catalog, acceptance):
    candidates = sorted({s for _, s in ref.NONSPLIT_PAIRS})
    found = [s for s in candidates if noncentral_derived_involutions(catalog.group(64, s))]
    ok = found == ref.NONCENTRAL_DERIVED_64
    acceptance("4 computational facts", ok, "(c) ids 5,33,35,37")
    assert ok


def test_fact_extension_subgroups(catalog, acceptance):
    ok = True
    for name, (gid, sub_ids, labelled) in sorted(ref.EXTENSION_SUBGROUPS.items()):
        p = presentation_from_file(PRES_DIR / name)
        report = extension_subgroup_report(p, catalog, [GroupId(*s) for s in sub_ids])
        subs = report["subgroups"]
        ok &= tuple(report["group_id"]) == gid
        ok &= {s["generated_by"]: tuple(s["id"]) for s in subs} == labelled
        ok &= len(subs) == 2
        ok &= all(s["derived_is_vu"] and s["derived_order"] == 4 for s in subs)
        ok &= all(s["outside_element_centralizes"] for s in subs)
    acceptance("4 computational facts", ok, "(d) subgroups of G(64,33/35/37)")
    assert ok


# -- 5 -------------------------------------------------------------------------------


def test_script_parity(catalog, acceptance):
    with Timed() as t:
        first = nonabelian_generated(catalog, 24, (2, 4, 12))
        second = groups_with_normal_subgroup(catalog, 36, GroupId(18, 3))
    out1 = " ".join(f"[{g.order},{g.id}]" for g in first)
    out2 = " ".join(f"[{g.order},{g.id}]" for g in second)
    ok = out1 == "[24,5]" and out2 == "[36,10] [36,12]"
    acceptance("5 script parity", ok, f"{out1} / {out2}, {t.seconds:.1f}s")
    assert ok


# -- 6 ---------------------------------------------------------------------------------


def test_signature_arithmetic(acceptance):
    with Timed() as t:
        found = enumerate_admissible_tuples(84)
    ok = len(found) == 30 and set(found) == ref.ADMISSIBLE_84 and t.seconds < 1
    acceptance("6 signature arithmetic", ok, f"{len(found)} tuples, {t.seconds * 1000:.0f}ms")
    assert ok


# -- 7 ------------------------------------------------------------------------------


def _record(results, kind, gid, m_or_sub):
    if kind == "mixed":
        recs = [r for r in results["mixed"].records
                if tuple(r.group_id) == gid and tuple(r.subgroup_id) == m_or_sub]
    else:
        recs = [r for g_F in (3, 4, 5) for r in results[g_F].records
                if tuple(r.group_id) == gid and r.m.periods == m_or_sub]
    assert len(recs) >= 1
    return recs


def _n_rows():
    rows = []
    for g_F, table in ref.UNMIXED_ROWS.items():
        for gid, m, _, _, n in table:
            rows.append(("unmixed", g_F, gid, m, n))
    for gid, sub, _, n in ref.MIXED_ROWS:
        rows.append(("mixed", 5, gid, sub, n))
    return rows


CRITERION_7_ROWS = {
    ("unmixed", 3, (8, 3), (2, 2, 4, 4)),
    ("unmixed", 3, (8, 2), (2, 2, 4, 4)),
    ("unmixed", 4, (18, 3), (2, 2, 3, 3)),
    ("unmixed", 4, (18, 3), (3, 6, 6)),
    ("unmixed", 4, (36, 9), (3, 4, 4)),
    ("unmixed", 5, (12, 3), (3, 3, 3, 3)),
    ("unmixed", 5, (16, 3), (2, 2, 4, 4)),
    ("mixed", 5, (16, 8), (8, 3)),
    ("mixed", 5, (16, 6), (8, 2)),
    ("mixed", 5, (16, 3), (8, 5)),
}


def _n_params():
    out = []
    for kind, g_F, gid, key, n in _n_rows():
        marks = []
        if (kind, gid, key) in KNOWN_N_MISMATCH:
            marks.append(pytest.mark.xfail(strict=True, reason="computed N differs from the printed value"))
        listed = (kind, g_F, gid, key) in CRITERION_7_ROWS
        tag = f"{kind}-gF{g_F}-G{gid[0]}_{gid[1]}-{'_'.join(map(str, key))}"
        out.append(pytest.param(kind, g_F, gid, key, n, listed, marks=marks, id=tag))
    return out


@pytest.mark.parametrize("kind, g_F, gid, key, expected, listed", _n_params())
def test_component_counts(kind, g_F, gid, key, expected, listed, catalog, classified, acceptance):
    results, _ = classified
    rec = next(r for r in _record(results, kind, gid, key) if r.g_F == g_F)
    with Timed() as t:
        res = count_components(rec, catalog)
    ok = res.components == expected and t.seconds < 600
    label = "7 orbit counts" if listed else "7 orbit counts, remaining rows"
    mark = "" if ok else f" computed {res.components}"
    acceptance(label, ok, f"G({gid[0]},{gid[1]}) {kind} N={expected}{mark}" if not ok else "")
    assert res.components == expected
    assert t.seconds < 600


# -- 8 -------------------------------------------------------------------------------


def test_property_suites(catalog, classified, acceptance):
    checks = {}
    checks["axioms"] = all(G.verify_axioms() for G in test_groups.small_zoo())
    for order in catalog.orders():
        for _, G in catalog.groups_of_order(order):
            checks["axioms"] &= G.verify_axioms()
        catalog.forget_tables(order)

    braid_cases = []
    rng = random.Random(2024)
    for G, m in test_moduli.BRAID_CASES:
        vs = [v.branch for v in find_generating_vectors(G, BranchSignature(0, m), ALL)]
        braid_cases.append((G, rng.choices(vs, k=100)))
    try:
        test_moduli.test_braid_relations(braid_cases)
        checks["braid"] = True
    except AssertionError:
        checks["braid"] = False

    results, _ = classified
    records = [r for k in (3, 4, 5, "mixed") for r in results[k].records]
    checks["invariants"] = all(
        r.K2 == 8 * r.chi == 8 and r.group_id.order == (r.g_C - 1) * (r.g_F - 1) for r in records
    )

    try:
        test_vectors.test_vector_counts_match_oracle(catalog)
        checks["vector counts"] = True
    except AssertionError:
        checks["vector counts"] = False

    expected_ids = {
        "d283.pres": (16, 8), "d285.pres": (16, 6), "z4_z2z2.pres": (16, 3), "g32_5.pres": (32, 5),
        "g64_33.pres": (64, 33), "g64_35.pres": (64, 35), "g64_37.pres": (64, 37),
    }
    checks["presentations"] = all(
        identify(group_from_presentation(presentation_from_file(PRES_DIR / f)), catalog) == gid
        for f, gid in expected_ids.items()
    )

    checks["aut orders"] = (
        test_groups.brute_force_aut_count_elementary8() == 168
        and len(test_groups.brute_force_automorphisms(test_groups.symmetric(3))) == 6
        and len(test_groups.automorphism_group(test_groups.elementary8())) == 168
        and len(test_groups.automorphism_group(test_groups.symmetric(3))) == 6
    )
    failed = [k for k, v in checks.items() if not v]
    acceptance("8 property suites", not failed, ", ".join(failed) or f"{len(checks)} suites")
    assert not failed


# -- 9 ---------------------------------------------------------------------------------


def test_partial_coverage(catalog, classified, tmp_path, acceptance):
    raw = Path(catalog.path).read_bytes().decode()
    kept = [line for line in raw.splitlines() if '"order":192,' not in line]
    path = tmp_path / "no192.jsonl"
    path.write_text("\n".join(kept) + "\n", encoding="utf-8")
    partial = load_catalog(path)
    assert not partial.ids_of_order(192)

    res = classify_unmixed(5, partial)
    results, _ = classified
    full_rows = unmixed_rows(results[5])
    ok = (
        res.status == "partial"
        and res.incomplete_orders == [192]
        and unmixed_rows(res) == full_rows
    )
    proc = subprocess.run(
        [sys.executable, "-m", "prodquot.cli", "--catalog", str(path), "classify", "unmixed",
         "--gf", "5", "--require-exhaustive"],
        capture_output=True,
        text=True,
    )
    ok &= proc.returncode == 3 and "incomplete for orders 192" in proc.stderr
    ok &= "coverage partial" in proc.stdout
    acceptance("9 partial coverage", ok, f"{res.status}, exit {proc.returncode}")
    assert ok
