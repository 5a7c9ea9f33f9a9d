"""Acceptance criteria, each at its stated tolerance and time budget.

Every test records one pass/fail line, printed in the terminal summary.
"""
from __future__ import annotations

import time

import numpy as np
import pytest
from conftest import ACCEPTANCE

from beauville import action as ac
from beauville import automorphism as am
from beauville import beauville as bv
from beauville import formulas as fm
from beauville.beauville import Structure
from beauville.groups import Family, Group, GroupSpec
from beauville.residue import is_prime


def record(n: int, ok: bool, detail: str):
    ACCEPTANCE[n] = (bool(ok), detail)
    assert ok, detail


def u_closed_form(G: Group) -> int:
    p = G.p
    return (p + 1) * p * (p - 1) ** 3 * (p - 2) * (p - 3) * (p - 4) * G.frattini_order() ** 4


def test_criterion_01_orbits_abelian5(ab5):
    t0 = time.perf_counter()
    res = ac.orbit_partition(ab5)
    dt = time.perf_counter() - t0
    ok = res.states == u_closed_form(ab5) == 11520 and res.orbit_count == fm.theorem_A(5, 1) == 1 and dt < 60
    record(1, ok, f"C5xC5: {res.states} structures, {res.orbit_count} orbit(s), theorem_A(5,1)="
                  f"{fm.theorem_A(5, 1)}, {dt:.1f} s")


def test_criterion_02_orbits_abelian7(ab7):
    t0 = time.perf_counter()
    res = ac.orbit_partition(ab7)
    dt = time.perf_counter() - t0
    ok = (res.states == 725760 and res.orbit_count == fm.theorem_A(7, 1) == 7 and dt < 600
          and res.peak_mb < 2048)
    record(2, ok, f"C7xC7: {res.states} structures, {res.orbit_count} orbits, theorem_A(7,1)="
                  f"{fm.theorem_A(7, 1)}, {dt:.1f} s, peak {res.peak_mb:.0f} MB")


def test_criterion_03_structure_counts(ab5, ab7, split125):
    counts = {}
    for G in (ab5, ab7):
        counts[str(G.spec)] = (int(bv.enumerate_structure_keys(G).size), u_closed_form(G))
    t0 = time.perf_counter()
    streamed = bv.stream_count_structures(split125)
    dt = time.perf_counter() - t0
    counts[str(split125.spec)] = (streamed, u_closed_form(split125))
    ok = all(a == b for a, b in counts.values()) and streamed == 7_200_000 and dt < 900
    record(3, ok, f"enumerated vs closed form {counts}; streamed in {dt:.1f} s")


def test_criterion_04_automorphisms():
    rows = []
    ok = True
    for spec, expected in ((GroupSpec.metacyclic(5, 2, 1), 4 * 5**5), (GroupSpec.split(5, 1, 1), 6 * 16 * 5**3)):
        G = Group(spec)
        s = spec
        formula = ((s.p - 1) * s.p ** (2 * s.e + 2 * s.i - 1) if spec.family is Family.METACYCLIC
                   else (s.p + 1) * (s.p - 1) ** 2 * s.p ** (4 * s.e + 2 * s.j - 3))
        t0 = time.perf_counter()
        maps = list(am.enumerate_aut(G))
        valid = all(am.validate(t) for t in maps)
        distinct = len({(t.A, t.B) for t in maps})
        dt = time.perf_counter() - t0
        ok &= len(maps) == distinct == formula == expected and valid and dt < 120
        rows.append(f"{spec}: {len(maps)} maps (formula {formula}), all valid={valid}, {dt:.1f} s")
    record(4, ok, "; ".join(rows))


def test_criterion_05_out_involutions(meta625, fused):
    t0 = time.perf_counter()
    meta = am.count_out_involutions_brute(meta625)
    A, B = am.out_representatives(fused)
    n_out = A.size
    fused_count = am.count_out_involutions_by_conjugation(fused)
    dt = time.perf_counter() - t0
    ok = meta == 5**2 and n_out == 4 * 5**7 and fused_count == 5 ** (2 * 2 - 2) and dt < 600
    record(5, ok, f"metacyclic(5,2,1): {meta} (expected 25); fused(5,3,2,2,1): |Out|={n_out}, "
                  f"{fused_count} involutions (expected 25); {dt:.1f} s")


def _instances(limit: int = 5**5):
    out = []
    for p in (q for q in range(5, 60) if is_prime(q)):
        for e in range(1, 6):
            cands = [GroupSpec.abelian(p, e)]
            cands += [GroupSpec.metacyclic(p, e, i) for i in range(1, e)]
            cands += [GroupSpec.split(p, e, j) for j in range(1, e + 1)]
            cands += [GroupSpec.fused(p, e, i, j, k) for i in range(1, e + 1) for j in range(1, i + 1)
                      for k in range(1, j) if e == i + j - k]
            out += [s for s in cands if s.order <= limit]
    return out


def test_criterion_06_centres():
    t0 = time.perf_counter()
    bad = []
    specs = _instances()
    for s in specs:
        G = Group(s)
        brute = int(G.brute_center().size)
        if s.family is Family.ABELIAN:
            expected = s.order
        elif s.family is Family.METACYCLIC:
            q = s.p ** (s.e - s.i)
            gens = [G.pow(G.a, q), G.pow(G.b, q)]
            expected = int(G.generated_subgroup(gens).size)
            assert expected == s.p ** (2 * s.i)
        elif s.family is Family.SPLIT:
            expected = s.p ** (2 * s.e - s.j)
        else:
            expected = s.p ** (s.e + s.i - s.j)
        if brute != expected:
            bad.append((str(s), brute, expected))
    dt = time.perf_counter() - t0
    fams = sorted({s.family.value for s in specs})
    record(6, not bad and dt < 60, f"{len(specs)} instances ({', '.join(fams)}), mismatches {bad}, {dt:.1f} s")


def test_criterion_07_oracle_equivalence(ab5, split125, meta625):
    t0 = time.perf_counter()
    rows = []
    x, y = ab5.generating_pairs()
    i = np.repeat(np.arange(x.size), x.size)
    j = np.tile(np.arange(x.size), x.size)
    fast = bv.is_beauville_fast_codes(ab5, x[i], y[i], x[j], y[j])
    direct = bv.is_beauville_direct_batch(ab5, x[i], y[i], x[j], y[j])
    rows.append((str(ab5.spec), int(fast.size), int(fast.sum()), int(np.count_nonzero(fast != direct))))
    for G in (split125, meta625):
        rng = np.random.default_rng(0)
        x, y = G.generating_pairs()
        i, j = rng.integers(0, x.size, (2, 10**5))
        fast = bv.is_beauville_fast_codes(G, x[i], y[i], x[j], y[j])
        direct = bv.is_beauville_direct_batch(G, x[i], y[i], x[j], y[j])
        rows.append((str(G.spec), int(fast.size), int(fast.sum()), int(np.count_nonzero(fast != direct))))
    dt = time.perf_counter() - t0
    ok = all(r[3] == 0 and r[2] > 0 for r in rows) and rows[0][2] == 11520 and dt < 600
    record(7, ok, "; ".join(f"{g}: {n} candidates, {b} Beauville, {d} disagreements" for g, n, b, d in rows)
           + f"; {dt:.1f} s")


def test_criterion_08_composition_table(ab5, split125, meta625):
    t0 = time.perf_counter()
    rows = []
    for G in (ab5, split125, meta625):
        table = ac.verify_composition_table(G)
        rows.append((str(G.spec), sum(table.values()), ac.verify_s3_quotient(G)))
    dt = time.perf_counter() - t0
    ok = all(n == 36 and s3 for _, n, s3 in rows) and dt < 600
    record(8, ok, "; ".join(f"{g}: {n}/36 identities, S3 quotient {s3}" for g, n, s3 in rows) + f"; {dt:.1f} s")


def _first_congruence_count(G: Group, keys: np.ndarray, chunk: int = 1 << 20) -> int:
    q = G.pe
    total = 0
    for lo in range(0, keys.size, chunk):
        k, l, m, n, _, _ = bv.profile_arrays(G, *bv.decode_keys(G, keys[lo:lo + chunk]))
        total += int(np.count_nonzero(((m + l) % q == 0) & ((n + l - k) % q == 0)))
    return total


def test_criterion_09_congruence_counts(ab5, ab7, split125):
    t0 = time.perf_counter()
    rows = []
    for G, expected in ((ab5, 5760), (ab7, 36288), (split125, 3_600_000)):
        p = G.p
        branch = (p - 2) if p % 3 == 2 else (p - 4)
        formula = (p + 1) * p * (p - 1) ** 3 * branch * G.frattini_order() ** 3 * G.derived_order()
        got = _first_congruence_count(G, bv.enumerate_structure_keys(G))
        rows.append((str(G.spec), got, formula, expected))
    dt = time.perf_counter() - t0
    ok = all(g == f == e for _, g, f, e in rows) and dt < 1200
    record(9, ok, "; ".join(f"{s}: filtered {g}, formula {f}" for s, g, f, _ in rows) + f"; {dt:.1f} s")


def _stabilizer_check(G: Group):
    res = ac.orbit_partition(G, keep_labels=True)
    au = ac.a_u_order(G)
    j2 = ac.j_group_order(G) ** 2
    sizes = np.bincount(res.labels)[res.labels]
    stab = au // sizes
    assert np.all(stab * sizes == au)
    direct = ac.abelian_stabilizer_sizes(G, res.keys)
    allowed = {j2, 2 * j2, 3 * j2, 6 * j2}
    cases = {"Case1": 0, "Case2": 0, "swap": 0}
    q = G.pe
    x1, y1, x2, y2 = bv.decode_keys(G, res.keys)
    k, l, m, n, _, _ = bv.profile_arrays(G, x1, y1, x2, y2)
    case_mask = bv.is_first_case(k, l, m, n, q) | bv.is_second_case(k, l, m, n, q)
    swap_mask = bv.is_swap_case(k, l, m, n, q)
    for idx in np.flatnonzero(case_mask | swap_mask).tolist():
        s = Structure.from_codes(G, int(x1[idx]), int(y1[idx]), int(x2[idx]), int(y2[idx]))
        if case_mask[idx]:
            w = ac.build_case_stabilizer_witness(G, s)
            assert w is not None and w.apply(G, s) == s
            cases[ac.classify_stabilizer(G, s)] += 1
        if swap_mask[idx]:
            w = ac.build_swap_witness(G, s)
            assert w is not None and w.apply(G, s) == s
            cases["swap"] += 1
    return {
        "allowed": set(np.unique(stab).tolist()) <= allowed,
        "direct_match": bool(np.array_equal(stab, direct)),
        "burnside": int(stab.sum()) == res.orbit_count * au,
        "sum": int(stab.sum()),
        "orbits": res.orbit_count,
        "witnesses": cases,
        "stab_values": sorted(set(np.unique(stab).tolist())),
    }


def test_criterion_10_stabilizers(ab5, ab7):
    t0 = time.perf_counter()
    out = {str(G.spec): _stabilizer_check(G) for G in (ab5, ab7)}
    dt = time.perf_counter() - t0
    ok = all(r["allowed"] and r["direct_match"] and r["burnside"] for r in out.values()) and dt < 900
    detail = "; ".join(f"{g}: |Stab| in {r['stab_values']}, sum {r['sum']} = {r['orbits']}*|A_U|, "
                       f"witnesses {r['witnesses']}" for g, r in out.items())
    record(10, ok, detail + f"; {dt:.1f} s")


def test_criterion_11_orbits_split125(split125):
    t0 = time.perf_counter()
    res = ac.orbit_partition(split125)
    dt = time.perf_counter() - t0
    ok = (res.states == u_closed_form(split125) and res.orbit_count == fm.theorem_A(5, 1) == 1
          and dt < 7200 and res.peak_mb < 8192)
    record(11, ok, f"{split125.spec}: {res.states} structures, {res.orbit_count} orbit(s), {dt:.1f} s, "
                   f"peak {res.peak_mb:.0f} MB")


def test_criterion_12_exactness_sweep():
    t0 = time.perf_counter()
    n = 0
    bad = []
    for p in (q for q in range(5, 201) if is_prime(q)):
        for e in range(1, 7):
            nums = [("A", e, fm.theorem_A_numerator(p, e))]
            nums += [("B", e, fm.theorem_B_numerator(p, e, j)) for j in fm.fused_j_range(e)]
            if e >= 2:
                nums.append(("C", e, fm.theorem_C_numerator(p, e)))
            for name, ee, v in nums:
                n += 1
                if v % 72:
                    bad.append((name, p, ee))
    dt = time.perf_counter() - t0
    record(12, not bad and dt < 10, f"{n} numerators checked, {len(bad)} not divisible by 72, {dt:.2f} s")


@pytest.mark.parametrize("spec", [GroupSpec.metacyclic(5, 2, 1), GroupSpec.fused(5, 3, 2, 2, 1)], ids=str)
def test_large_families_out_of_reach(spec):
    # orbit enumeration for these families is beyond desk scale; the checks above substitute for it
    assert bv.count_structures(Group(spec)) >= 10**9
