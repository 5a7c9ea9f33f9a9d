from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from beauville import formulas as fm
from beauville.groups import GroupSpec
from beauville.residue import is_prime

PRIMES = [p for p in range(5, 201) if is_prime(p)]


def test_theorem_values():
    assert fm.theorem_A(5, 1) == 1
    assert fm.theorem_A(7, 1) == 7
    assert fm.theorem_B(5, 3, 2) == 125000
    assert fm.theorem_C(5, 2) == 200
    assert fm.theorem_C(7, 2) == 11788


def test_theorem_B_p7():
    num = 7**6 * 8 * 36 * 5 * 4 * 3 + 6 * 7 * 6 * 4 * 2
    assert fm.theorem_B_numerator(7, 3, 2) == num
    assert fm.theorem_B(7, 3, 2) == num // 72


def test_hand_evaluations():
    assert fm.theorem_A_numerator(5, 1) == 24 + (4 * 4 * 3 + 6 * 2 * 0)
    assert fm.theorem_A_numerator(7, 1) == 360 + (4 * 6 * 3 + 6 * 4 * 2) + 24
    assert fm.theorem_C_numerator(7, 2) == 846720 + 2016


def test_second_term_vanishes_only_at_5():
    for p in PRIMES[:10]:
        head = p ** (4 * 3 - 6) * (p + 1) * (p - 1) ** 2 * (p - 2) * (p - 3) * (p - 4)
        assert (fm.theorem_B_numerator(p, 3, 2) == head) == (p == 5)


def test_legal_parameters():
    assert list(fm.fused_j_range(3)) == [2]
    assert list(fm.fused_j_range(2)) == []
    with pytest.raises(ValueError):
        fm.theorem_B(5, 2, 2)
    with pytest.raises(ValueError):
        fm.theorem_B(5, 4, 4)
    with pytest.raises(ValueError):
        fm.theorem_C(5, 1)
    with pytest.raises(ValueError):
        fm.theorem_A(9, 1)


def test_fused_j_range_matches_specs():
    # j is legal for exponent e exactly when some fused group with that (e, j) exists
    for e in range(1, 7):
        legal = set()
        for i in range(1, e + 1):
            for j in range(1, i + 1):
                for k in range(1, j):
                    if e == i + j - k:
                        legal.add(j)
        assert legal == set(fm.fused_j_range(e))


@pytest.mark.parametrize("p", PRIMES)
def test_exactness_sweep(p):
    for e in range(1, 7):
        assert fm.theorem_A_numerator(p, e) % 72 == 0
        for j in fm.fused_j_range(e):
            assert fm.theorem_B_numerator(p, e, j) % 72 == 0
        if e >= 2:
            assert fm.theorem_C_numerator(p, e) % 72 == 0


@given(st.sampled_from(PRIMES), st.integers(1, 5))
def test_monotone_in_e(p, e):
    assert fm.theorem_A(p, e + 1) > fm.theorem_A(p, e)
    if e >= 2:
        assert fm.theorem_C(p, e + 1) > fm.theorem_C(p, e)
    if e >= 3:
        assert fm.theorem_B(p, e + 1, 2) > fm.theorem_B(p, e, 2)


def test_no_float_drift():
    # a large argument evaluated exactly
    v = fm.theorem_A(199, 6)
    assert isinstance(v, int)
    assert Fraction(fm.theorem_A_numerator(199, 6), 72) == v


def test_independence_notes():
    a0 = fm.orbit_count_report(GroupSpec.abelian(5))
    a1 = fm.orbit_count_report(GroupSpec.split(5, 1, 1))
    assert a0.value == a1.value == 1
    assert any("j" in n for n in a1.notes)
    c1 = fm.orbit_count_report(GroupSpec.metacyclic(5, 3, 1))
    c2 = fm.orbit_count_report(GroupSpec.metacyclic(5, 3, 2))
    assert c1.value == c2.value
    assert any("i" in n for n in c1.notes)
    assert fm.orbit_count_report(GroupSpec.fused(5, 3, 2, 2, 1)).value == 125000


def test_order_formula():
    ab = GroupSpec.abelian(5)
    assert fm.order_formula("u_count", ab) == 11520
    assert fm.order_formula("a_u_order", ab) == 34560
    assert fm.order_formula("aut_order", ab) == 480
    assert fm.order_formula("center_order", GroupSpec.split(5, 1, 1)) == 5
    assert fm.order_formula("lemma53", ab) == 5760
    assert fm.order_formula("out_involutions", GroupSpec.metacyclic(5, 2, 1)) == 25
    assert fm.order_formula("out_involutions", GroupSpec.fused(5, 3, 2, 2, 1)) == 25
    with pytest.raises(ValueError):
        fm.order_formula("nope", ab)
    with pytest.raises(ValueError):
        fm.order_formula("out_involutions", ab)


def test_table_rows():
    rows = fm.table_rows([5, 7, 11, 13], [1, 2])
    assert sum(r.name == "theorem_A" for r in rows) == 8
    assert all(r.inputs["e"] >= 2 for r in rows if r.name == "theorem_C")
    assert rows[0].to_dict()["value"] == 1
