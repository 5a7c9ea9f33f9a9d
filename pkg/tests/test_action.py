from __future__ import annotations

import numpy as np
import pytest

from beauville import action as ac
from beauville import automorphism as am
from beauville import beauville as bv
from beauville.beauville import Structure, Triple
from beauville.groups import Group, GroupSpec


def test_sigma_basics(split125):
    G = split125
    x, y = G.generating_pairs()
    assert all(np.array_equal(u, v) for u, v in zip(ac.apply_sigma_pairs(G, 0, x, y), (x, y)))
    p1 = ac.apply_sigma_pairs(G, 1, *ac.apply_sigma_pairs(G, 1, *ac.apply_sigma_pairs(G, 1, x, y)))
    assert np.array_equal(p1[0], x) and np.array_equal(p1[1], y)


def test_sigma_keeps_product_one(meta625):
    G = meta625
    rng = np.random.default_rng(13)
    for _ in range(50):
        t = bv.random_structure(G, rng).first
        for i in range(6):
            out = ac.apply_sigma(G, i, t)
            assert out.is_valid(G)
            assert out == Triple.from_pair(G, out.g1, out.g2)
            u, v = ac.apply_sigma_pairs(G, i, t.g1, t.g2)
            assert (out.g1, out.g2) == (u, v)


@pytest.mark.parametrize("spec", [GroupSpec.abelian(5), GroupSpec.split(5, 1, 1)], ids=str)
def test_composition_table(spec):
    G = Group(spec)
    assert all(ac.verify_composition_table(G).values())
    assert ac.verify_s3_quotient(G)


def test_table_shape():
    assert len(set(ac.SIGMA_POSITIONS)) == 6
    ks = [[k for _, k in row] for row in ac.COMPOSITION_TABLE]
    assert all(sorted(row) == list(range(6)) for row in ks)


@pytest.mark.parametrize("spec,j", [(GroupSpec.abelian(5), 1), (GroupSpec.split(5, 1, 1), 25),
                                    (GroupSpec.metacyclic(5, 2, 1), 25)], ids=str)
def test_j_group(spec, j):
    G = Group(spec)
    closure = ac.j_group_closure(G)
    assert closure.exhaustive
    assert closure.order == ac.j_group_order(G) == j
    assert ac.beta_permutations_distinct(G, closure)


def test_a_u_order(ab5, split125, meta625):
    assert ac.a_u_order(ab5) == 34560
    assert ac.a_u_order(split125) == 72 * 625 * 12000 * 25 == 13_500_000_000
    assert ac.a_u_order(meta625) == 72 * 625 * 12500 * 25


@pytest.mark.parametrize("spec", [GroupSpec.abelian(7), GroupSpec.split(5, 1, 1), GroupSpec.split(5, 2, 1),
                                  GroupSpec.metacyclic(5, 2, 1)], ids=str)
def test_generators_preserve_structures(spec):
    G = Group(spec)
    rng = np.random.default_rng(14)
    S = [bv.random_structure(G, rng) for _ in range(300)]
    codes = [np.array(t, dtype=np.int64) for t in zip(*(s.codes for s in S))]
    for gen in ac.au_generators(G, include_inner_diagonals=True):
        img = gen.apply(G, *codes)
        assert np.all(bv.is_beauville_fast_codes(G, *img)), gen.name


def test_tau_involution(ab5):
    s = bv.random_structure(ab5, np.random.default_rng(15))
    t = ac.Tau()
    assert t.apply(ab5, *t.apply(ab5, *s.codes)) == s.codes


def test_single_orbit_abelian5(ab5):
    res = ac.orbit_partition(ab5)
    assert res.orbit_count == 1 and res.sizes == {11520: 1}
    s = bv.random_structure(ab5, np.random.default_rng(16))
    assert ac.orbit_of(ab5, s) == (11520, True)


def test_orbits_abelian7(ab7):
    res = ac.orbit_partition(ab7, keep_labels=True)
    assert res.orbit_count == 7
    assert all(ac.a_u_order(ab7) % size == 0 for size in res.sizes)
    assert sum(k * v for k, v in res.sizes.items()) == 725760
    rng = np.random.default_rng(17)
    members = np.flatnonzero(res.labels == res.labels[rng.integers(res.labels.size)])
    sizes = set()
    for idx in rng.choice(members, 5, replace=False).tolist():
        s = Structure.from_codes(ab7, *(int(t) for t in bv.decode_keys(ab7, res.keys[idx])))
        sizes.add(ac.orbit_of(ab7, s))
    assert sizes == {(members.size, True)}


def test_inner_diagonals_redundant(ab7):
    plain = ac.orbit_partition(ab7)
    extended = ac.orbit_partition(ab7, gens=ac.au_generators(ab7, include_inner_diagonals=True))
    assert plain.sizes == extended.sizes


def test_inner_diagonals_redundant_split(split125):
    # inner diagonal moves map each structure into its own orbit under the other generators
    G = split125
    rng = np.random.default_rng(18)
    s = bv.random_structure(G, rng)
    for g in (G.a, G.b):
        img = ac.Diag(am.inner(G, g)).apply(G, *s.codes)
        u = Structure.from_codes(G, *(int(t) for t in img))
        # conjugating both triples by g equals a product of beta moves up to the centre
        bx = ac.BetaFirst("X"), ac.BetaFirst("Y"), ac.BetaSecond("X"), ac.BetaSecond("Y")
        seen = {s.codes}
        frontier = {s.codes}
        while frontier:
            step = {tuple(int(t) for t in b.apply(G, *c)) for c in frontier for b in bx}
            frontier = step - seen
            seen |= frontier
        assert len(seen) == ac.j_group_order(G) ** 2
        assert u.codes in seen


def test_threads_and_checkpoint(ab7, tmp_path):
    ref = ac.orbit_partition(ab7)
    threaded = ac.orbit_partition(ab7, threads=2)
    assert threaded.sizes == ref.sizes
    path = tmp_path / "ck.npz"
    first = ac.orbit_partition(ab7, checkpoint=path)
    assert path.exists()
    resumed = ac.orbit_partition(ab7, checkpoint=path)
    assert first.sizes == resumed.sizes == ref.sizes
    # a checkpoint written for another group is ignored
    other = ac.orbit_partition(Group(GroupSpec.abelian(5)), checkpoint=path)
    assert other.orbit_count == 1


def test_budget(ab7, meta625):
    with pytest.raises(ac.BudgetExceeded):
        ac.orbit_partition(ab7, max_states=1000)
    with pytest.raises(ac.BudgetExceeded):
        ac.orbit_partition(ab7, memory_mb=1)
    s = bv.random_structure(meta625, np.random.default_rng(19))
    size, exact = ac.orbit_of(meta625, s, budget=2000)
    assert size > 2000 and not exact


def test_stabilizer_witnesses_abelian5(ab5):
    G = ab5
    counts = {"Case1": 0, "Case2": 0, "Generic": 0}
    for s in bv.iter_structures(G):
        case = ac.classify_stabilizer(G, s)
        counts[case] += 1
        w = ac.build_case_stabilizer_witness(G, s)
        assert (w is None) == (case == "Generic")
        if w is not None:
            assert w.apply(G, s) == s
    assert counts == {"Case1": 5760, "Case2": 5760, "Generic": 0}


def test_generic_gets_no_witness(ab7):
    G = ab7
    rng = np.random.default_rng(20)
    found = 0
    while found < 20:
        s = bv.random_structure(G, rng)
        if ac.classify_stabilizer(G, s) == "Generic":
            assert ac.build_case_stabilizer_witness(G, s) is None
            found += 1


def test_split_case1_witnesses(split125):
    G = split125
    rng = np.random.default_rng(21)
    done = 0
    while done < 100:
        s = bv.random_structure(G, rng)
        if ac.classify_stabilizer(G, s) == "Case1":
            w = ac.build_case_stabilizer_witness(G, s)
            assert w.apply(G, s) == s
            # the witness is not the identity move
            assert w.first.sigma == 2
            done += 1


def test_abelian_stabilizers(ab5):
    keys = bv.enumerate_structure_keys(ab5)
    stab = ac.abelian_stabilizer_sizes(ab5, keys)
    assert set(stab.tolist()) == {3}
    assert stab.sum() == ac.a_u_order(ab5)
