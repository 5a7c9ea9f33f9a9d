from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from beauville.residue import (
    Modulus,
    count_norm_one_pairs,
    is_prime,
    is_unit,
    primitive_root,
    solve_quadratic,
)

PRIMES = [p for p in range(5, 60) if is_prime(p)]


def test_is_unit_examples():
    assert is_unit(3, Modulus(5, 2))
    assert not is_unit(10, Modulus(5, 2))
    assert not is_unit(0, Modulus(7, 1))


@pytest.mark.parametrize("p,e", [(4, 1), (3, 2), (2, 1), (5, 0), (9, 1), (1_000_003, 1)])
def test_modulus_rejects(p, e):
    with pytest.raises(ValueError):
        Modulus(p, e)


def test_modulus_too_large():
    with pytest.raises(ValueError, match="2\\^62"):
        Modulus(5, 40)


def test_quadratic_examples():
    assert solve_quadratic(3, 0, 1, Modulus(7, 1)) == [3, 4]
    assert solve_quadratic(3, 0, 1, Modulus(5, 1)) == []
    assert solve_quadratic(1, 0, -1, Modulus(5, 2)) == [1, 24]


def test_quadratic_identically_zero():
    with pytest.raises(ValueError):
        solve_quadratic(5, 10, 15, Modulus(5, 2))


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(PRIMES[:4]), st.integers(1, 3), st.integers(-50, 50), st.integers(-50, 50),
       st.integers(-50, 50))
def test_quadratic_matches_scan(p, e, A, B, C):
    m = Modulus(p, e)
    q = m.value
    if A % p == 0 and B % p == 0 and C % p == 0:
        return
    scan = [x for x in range(q) if (A * x * x + B * x + C) % q == 0]
    assert solve_quadratic(A, B, C, m) == scan


@pytest.mark.parametrize("p,e", [(5, 1), (7, 1), (5, 2), (11, 1), (13, 1)])
def test_norm_one_pairs_double_loop(p, e):
    q = p**e
    brute = sum((k * k + l * l - k * l - 1) % q == 0 for k in range(q) for l in range(q))
    assert count_norm_one_pairs(Modulus(p, e)) == brute


@pytest.mark.parametrize("p", PRIMES[:8])
@pytest.mark.parametrize("e", [1, 2, 3])
def test_primitive_root_generates(p, e):
    q = p**e
    g = primitive_root(Modulus(p, e))
    order = q - q // p
    seen, x = set(), 1
    for _ in range(order):
        x = x * g % q
        seen.add(x)
    assert len(seen) == order
