"""Arithmetic modulo prime powers.

Residues are always reported in the canonical window ``0 .. p**e - 1``.
"""
from __future__ import annotations

from dataclasses import dataclass

MAX_MODULUS = 2**62
ENUMERATION_LIMIT = 10**6


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Modulus:
    """The modulus ``p**e`` for a prime ``p >= 5``."""

    p: int
    e: int

    def __post_init__(self):
        if self.p > ENUMERATION_LIMIT or not is_prime(self.p):
            raise ValueError(f"p={self.p} is not a prime below {ENUMERATION_LIMIT}")
        if self.p < 5:
            raise ValueError(f"p={self.p} must be at least 5")
        if self.e < 1:
            raise ValueError(f"exponent e={self.e} must be positive")
        if self.p**self.e > MAX_MODULUS:
            raise ValueError(f"{self.p}^{self.e} exceeds 2^62")

    @property
    def value(self) -> int:
        return self.p**self.e

    def __int__(self) -> int:
        return self.value


def is_unit(n: int, m: Modulus) -> bool:
    return n % m.p != 0


def _poly(A: int, B: int, C: int, x: int) -> int:
    return (A * x + B) * x + C


def solve_quadratic(A: int, B: int, C: int, m: Modulus) -> list[int]:
    """All ``X`` in ``0 .. p**e - 1`` with ``A*X**2 + B*X + C == 0 (mod p**e)``.

    Roots modulo ``p`` are found by scanning and then lifted one power of ``p``
    at a time. A simple root lifts uniquely (Newton step); a repeated root is
    lifted by trying all ``p`` candidates at each level.
    """
    p = m.p
    if A % p == 0 and B % p == 0 and C % p == 0:
        raise ValueError("congruence is identically zero modulo p")
    roots = [x for x in range(p) if _poly(A, B, C, x) % p == 0]
    mod = p
    for _ in range(m.e - 1):
        nxt = mod * p
        lifted = []
        for r in roots:
            deriv = (2 * A * r + B) % p
            if deriv:
                # f(r + t*mod) = f(r) + t*mod*f'(r)  (mod mod*p)
                t = (-(_poly(A, B, C, r) // mod) * pow(deriv, -1, p)) % p
                lifted.append(r + t * mod)
            else:
                lifted.extend(
                    r + t * mod for t in range(p) if _poly(A, B, C, r + t * mod) % nxt == 0
                )
        roots = lifted
        mod = nxt
    return sorted(roots)


def count_norm_one_pairs(m: Modulus) -> int:
    """Number of pairs ``(k, l)`` modulo ``p**e`` with ``k^2 + l^2 - k*l == 1``."""
    q = m.value
    if q > ENUMERATION_LIMIT:
        raise ValueError(f"p^e={q} is above the enumeration guard {ENUMERATION_LIMIT}")
    # for fixed k: l^2 - k*l + (k^2 - 1) == 0
    return sum(len(solve_quadratic(1, -k, k * k - 1, m)) for k in range(q))


def primitive_root(m: Modulus) -> int:
    """A generator of the unit group modulo ``p**e`` (cyclic for odd p)."""
    p = m.p
    factors = [f for f in range(2, p) if (p - 1) % f == 0 and is_prime(f)]
    for g in range(2, p):
        if all(pow(g, (p - 1) // f, p) != 1 for f in factors):
            break
    if m.e > 1 and pow(g, p - 1, p * p) == 1:
        g += p
    return g
