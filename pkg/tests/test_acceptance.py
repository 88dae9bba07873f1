"""Acceptance suite.

Each test enforces one numbered criterion at its stated tolerance and prints a
single [AC#] PASS/FAIL line.  Published per-order class counts are asserted
exactly; time limits are asserted against wall-clock measurements.
"""

import itertools
import json
import random
import time

import numpy as np

from gaq.automorphisms import automorphism_group
from gaq.catalog import load_catalog, load_entries, validate_catalog
from gaq.cli import main as cli_main
from gaq.iso import (
    brute_force_quandle_iso,
    fingerprint,
    gaq_isomorphic,
    intertwining_isomorphisms,
    match_coset_displacements,
)
from gaq.pipeline import classify_order
from gaq.quandles import generalized_alexander, quandle_power

EXPECTED_COUNTS = {
    1: 1, 2: 1, 3: 2, 4: 3, 5: 4, 6: 3, 7: 6, 8: 9, 9: 11, 10: 5, 11: 10,
    12: 11, 13: 12, 14: 7, 15: 8,
    16: 29,
    17: 16, 18: 17, 19: 18, 20: 15, 21: 13, 22: 11, 23: 22, 24: 32, 25: 39,
    26: 13, 27: 51, 28: 20, 29: 28, 30: 15, 31: 30,
}


def _report(tag: str, ok: bool, detail: str) -> None:
    print(f"[{tag}] {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"{tag}: {detail}"


def _instances_by_order(orders):
    """(group_id, twist) instances per order, one twist per conjugacy class."""
    out = {}
    for order in orders:
        instances = []
        for gid, grp in enumerate(load_catalog(order, check_distinct=False)):
            auts = automorphism_group(grp)
            for twist in auts.conjugacy_class_representatives():
                instances.append((gid, generalized_alexander(grp, twist)))
        out[order] = instances
    return out


def test_ac1_small_band_via_cli(tmp_path, capsys):
    out_json = tmp_path / "reports.json"
    started = time.perf_counter()
    code = cli_main(["classify", "--orders", "1..15", "--json", str(out_json)])
    elapsed = time.perf_counter() - started
    capsys.readouterr()
    payload = json.loads(out_json.read_text(encoding="utf-8"))
    got = [r["class_count"] for r in payload["reports"]]
    want = [EXPECTED_COUNTS[n] for n in range(1, 16)]
    _report("AC1", code == 0 and got == want and elapsed < 60,
            f"orders 1..15 -> {got} in {elapsed:.1f}s (limit 60s)")


def test_ac2_order_sixteen():
    started = time.perf_counter()
    report = classify_order(16)
    elapsed = time.perf_counter() - started
    _report("AC2", report.class_count == 29 and elapsed < 300,
            f"order 16 -> {report.class_count} classes in {elapsed:.1f}s "
            f"(want 29, limit 300s)")


def test_ac3_extended_band():
    started = time.perf_counter()
    got = {}
    partial = []
    for order in range(17, 32):
        report = classify_order(order)
        if report.partial:
            partial.append(order)
        got[order] = report.class_count
    elapsed = time.perf_counter() - started
    want = {n: EXPECTED_COUNTS[n] for n in range(17, 32)}
    _report("AC3", got == want and not partial and elapsed < 1800,
            f"orders 17..31 exact={got == want}, partial={partial or 'none'}, "
            f"{elapsed:.1f}s (limit 1800s)")


def test_ac4_worked_pair_regression(worked_pair):
    q1, q1p, q2, q2p = worked_pair.instances()
    first_factor = [worked_pair.idx(a, 0) for a in range(8)]
    checks = []

    for inst in (q1, q1p, q2, q2p):
        checks.append(list(map(int, inst.disp_subgroup.members)) == first_factor)
    checks.append(not q1.second_disp_covered)
    checks.append(not q1p.second_disp_covered)

    w1 = gaq_isomorphic(q1, q1p)
    checks.append(w1 is not None and w1.verify(q1, q1p))
    w2 = gaq_isomorphic(q2, q2p)
    checks.append(w2 is not None and w2.verify(q2, q2p))

    powered = quandle_power(q2.quandle, 2)
    square = generalized_alexander(worked_pair.direct,
                                   worked_pair.twist2_direct.power(2))
    checks.append(np.array_equal(powered.table, square.quandle.table))
    checks.append(gaq_isomorphic(square, q1) is not None)

    powered_p = quandle_power(q2p.quandle, 2)
    square_p = generalized_alexander(worked_pair.twisted,
                                     worked_pair.twist2_twisted.power(2))
    checks.append(np.array_equal(powered_p.table, square_p.quandle.table))
    checks.append(gaq_isomorphic(square_p, q1p) is not None)

    _report("AC4", all(checks),
            f"order-16 worked pairs: {sum(checks)}/{len(checks)} checks")


def test_ac5_oracle_equivalence():
    started = time.perf_counter()
    instances = _instances_by_order(range(1, 13))
    pairs = 0
    mismatches = []
    for order, insts in instances.items():
        for (ga, a), (gb, b) in itertools.combinations(insts, 2):
            engine = gaq_isomorphic(a, b) is not None
            brute = brute_force_quandle_iso(a.quandle, b.quandle) is not None
            pairs += 1
            if engine != brute:
                mismatches.append((order, ga, gb))
    elapsed = time.perf_counter() - started
    _report("AC5", not mismatches and elapsed < 600,
            f"{pairs} pairs over orders 1..12, {len(mismatches)} disagreements, "
            f"{elapsed:.1f}s (limit 600s)")


def test_ac6_property_suite():
    rng = random.Random(987654321)
    axiom_checks = 0
    instances = _instances_by_order(range(1, 13))
    for order, insts in instances.items():
        for _, inst in insts:
            # construction already validates the axioms; re-assert the rest
            assert np.array_equal(inst.quandle.table[:, 0], inst.twist.images)
            assert inst.disp_subgroup is not None  # normal + subquandle verified
            axiom_checks += 1

    trials = 0
    merged = 0
    witness_ok = 0
    cache = {}
    while trials < 200:
        order = rng.randint(2, 24)
        groups = load_catalog(order, check_distinct=False)
        gid = rng.randrange(len(groups))
        grp = groups[gid]
        key = (order, gid)
        if key not in cache:
            cache[key] = automorphism_group(grp)
        auts = cache[key]
        twist = rng.choice(auts.elements)
        alpha = rng.choice(auts.elements)
        conj = alpha.compose(twist).compose(alpha.inverse())
        a = generalized_alexander(grp, twist)
        b = generalized_alexander(grp, conj)
        witness = gaq_isomorphic(a, b)
        trials += 1
        if witness is not None:
            merged += 1
            if witness.verify(a, b):
                witness_ok += 1
        f = alpha.images
        assert np.array_equal(f[a.quandle.table], b.quandle.table[np.ix_(f, f)])
    _report("AC6", merged == 200 and witness_ok == 200,
            f"axioms+identity-symmetry+subgroup checks on {axiom_checks} "
            f"instances; {merged}/200 conjugate merges, {witness_ok} verified "
            f"witnesses")


def _naive_coset_pairing_exists(inst_a, inst_b, h_parent) -> bool:
    """Direct enumeration over all coset bijections and representative pairs."""
    blocks_a = inst_a.cosets.blocks
    blocks_b = inst_b.cosets.blocks
    if len(blocks_a) != len(blocks_b):
        return False
    da, db = inst_a.displacement, inst_b.displacement
    for sigma in itertools.permutations(range(len(blocks_b))):
        if all(any(int(h_parent[da[a]]) == int(db[a_dst])
                   for a in blocks_a[i] for a_dst in blocks_b[sigma[i]])
               for i in range(len(blocks_a))):
            return True
    return False


def test_ac7_naive_matching_crosscheck():
    instances = []
    for order in range(2, 17):
        for _, inst in _instances_by_order([order])[order]:
            if 1 < len(inst.cosets) <= 3:
                instances.append(inst)

    checked = 0
    agreements = 0
    by_fp = {}
    for inst in instances:
        by_fp.setdefault(fingerprint(inst), []).append(inst)
    pair_pool = []
    for insts in by_fp.values():
        pair_pool.extend((a, b) for a, b in itertools.product(insts, repeat=2))

    for inst_a, inst_b in pair_pool:
        if checked >= 50:
            break
        taken = 0
        for h_abs in intertwining_isomorphisms(inst_a.disp_group, inst_b.disp_group,
                                               inst_a.disp_twist, inst_b.disp_twist):
            h_parent = np.full(inst_a.group.order, -1, dtype=np.int32)
            h_parent[inst_a.disp_to_parent] = inst_b.disp_to_parent[h_abs]
            fast = match_coset_displacements(inst_a, inst_b, h_parent)
            naive = _naive_coset_pairing_exists(inst_a, inst_b, h_parent)
            if (fast is not None) == naive:
                agreements += 1
            if fast is not None:
                for a, a_dst in fast.pairing.items():
                    assert int(h_parent[inst_a.displacement[a]]) == \
                           int(inst_b.displacement[a_dst])
            checked += 1
            taken += 1
            if taken >= 2 or checked >= 50:
                break
    _report("AC7", checked >= 50 and agreements == checked,
            f"{agreements}/{checked} matcher decisions agree with direct "
            f"enumeration (instances with at most 3 cosets)")


def test_ac8_catalog_validation(tmp_path):
    started = time.perf_counter()
    bad = [order for order in range(1, 64) if not validate_catalog(order).ok]
    elapsed = time.perf_counter() - started

    # corrupting the data must fail loudly, never skew a count silently
    entries = load_entries(order=6)
    lines = [json.loads(e.to_json_line()) for e in entries]
    # deleting an entry -> count mismatch
    path1 = tmp_path / "missing.jsonl"
    path1.write_text(json.dumps(lines[0]) + "\n", encoding="utf-8")
    report1 = validate_catalog(6, str(path1))
    count_caught = (not report1.ok
                    and report1.problems[0].kind == "count_mismatch")

    # duplicating a definition under another id -> isomorphic duplicates
    clone = dict(lines[0])
    clone["id"] = 1
    path2 = tmp_path / "dup.jsonl"
    path2.write_text(json.dumps(lines[0]) + "\n" + json.dumps(clone) + "\n",
                     encoding="utf-8")
    report2 = validate_catalog(6, str(path2))
    dup_caught = (not report2.ok
                  and any(p.kind == "isomorphic_duplicates"
                          for p in report2.problems))

    # corrupting one generator -> order mismatch or duplicates, never silence
    broken = [dict(obj) for obj in lines]
    broken[1]["gens"] = [list(range(6))] + [list(g) for g in broken[1]["gens"][1:]]
    path3 = tmp_path / "corrupt.jsonl"
    path3.write_text("".join(json.dumps(obj) + "\n" for obj in broken),
                     encoding="utf-8")
    report3 = validate_catalog(6, str(path3))
    gen_caught = not report3.ok

    _report("AC8", not bad and count_caught and dup_caught and gen_caught,
            f"orders 1..63 validate in {elapsed:.1f}s; corruption detected: "
            f"count={count_caught}, duplicates={dup_caught}, generator={gen_caught}")
