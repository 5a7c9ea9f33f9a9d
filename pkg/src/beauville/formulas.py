"""Exact closed-form counts.

Everything is evaluated in Python integers. The orbit counts are a numerator
divided by 72; a nonzero remainder raises, since it can only come from a
mistyped expression.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field

from . import automorphism as am
from .beauville import count_lemma53, count_structures
from .groups import Family, Group, GroupSpec
from .residue import Modulus


@dataclass(frozen=True)
class CountReport:
    name: str
    inputs: dict
    value: int
    branch: str | None = None
    notes: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        d = asdict(self)
        d["notes"] = list(self.notes)
        return d


def _exact72(numerator: int, label: str) -> int:
    q, r = divmod(numerator, 72)
    if r:
        raise ArithmeticError(f"{label}: numerator {numerator} is not divisible by 72")
    return q


def _check_prime(p: int, e: int):
    Modulus(p, e)


def theorem_A_numerator(p: int, e: int) -> int:
    _check_prime(p, e)
    head = p ** (4 * e - 4) * (p - 1) * (p - 2) * (p - 3) * (p - 4)
    if p % 3 == 2:
        return head + p ** (2 * e - 2) * (4 * (p - 1) * (p - 2) + 6 * (p - 3) * (p - 5))
    return head + p ** (2 * e - 2) * (4 * (p - 1) * (p - 4) + 6 * (p - 3) * (p - 5)) + 24


def theorem_A(p: int, e: int) -> int:
    """Orbit count for the split class-two family (and C_{p^e} x C_{p^e}); independent of j."""
    return _exact72(theorem_A_numerator(p, e), f"theorem_A({p},{e})")


def fused_j_range(e: int) -> range:
    """Values of j for which some i, k give a fused group with exponent p^e."""
    # i = e - j + k with 0 < k < j <= i  forces 2 <= j <= e - 1
    return range(2, e)


def theorem_B_numerator(p: int, e: int, j: int) -> int:
    _check_prime(p, e)
    if j not in fused_j_range(e):
        raise ValueError(f"no fused group has e={e}, j={j}")
    return (p ** (4 * e - 6) * (p + 1) * (p - 1) ** 2 * (p - 2) * (p - 3) * (p - 4)
            + 6 * p ** (2 * e - j - 3) * (p - 1) * (p - 3) * (p - 5))


def theorem_B(p: int, e: int, j: int) -> int:
    """Orbit count for the fused class-two family."""
    return _exact72(theorem_B_numerator(p, e, j), f"theorem_B({p},{e},{j})")


def theorem_C_numerator(p: int, e: int) -> int:
    _check_prime(p, e)
    if e < 2:
        raise ValueError("the metacyclic family needs e >= 2")
    return (p ** (4 * e - 6) * (p + 1) * (p - 1) ** 2 * (p - 2) * (p - 3) * (p - 4)
            + 6 * p ** (2 * e - 3) * (p - 1) * (p - 3) * (p - 5))


def theorem_C(p: int, e: int) -> int:
    """Orbit count for the metacyclic family; independent of i."""
    return _exact72(theorem_C_numerator(p, e), f"theorem_C({p},{e})")


def branch(p: int) -> str:
    return "p=1 mod 3" if p % 3 == 1 else "p=-1 mod 3"


def orbit_count_report(spec: GroupSpec) -> CountReport:
    """The closed-form orbit count that applies to ``spec``."""
    p, e = spec.p, spec.e
    fam = spec.family
    inputs = spec.to_dict()
    if fam in (Family.ABELIAN, Family.SPLIT):
        note = "value does not depend on j" + ("; j=0 is the abelian group" if fam is Family.ABELIAN else "")
        return CountReport("theorem_A", inputs, theorem_A(p, e), branch(p), (note,))
    if fam is Family.FUSED:
        return CountReport("theorem_B", inputs, theorem_B(p, e, spec.j), None,
                           ("value depends on (p, e, j) only",))
    return CountReport("theorem_C", inputs, theorem_C(p, e), None, ("value does not depend on i",))


def out_involutions_formula(spec: GroupSpec) -> int:
    """Stated number of involutions in Out(G): p^(2i) (metacyclic), p^(2i-j) (fused)."""
    if spec.family is Family.METACYCLIC:
        return spec.p ** (2 * spec.i)
    if spec.family is Family.FUSED:
        return spec.p ** (2 * spec.i - spec.j)
    raise ValueError("no closed form for this family")


FORMULA_NAMES = ("aut_order", "center_order", "u_count", "lemma53", "out_involutions", "a_u_order",
                 "orbit_count")


def order_formula(name: str, spec: GroupSpec) -> int:
    """Uniform entry point to the closed forms owned by the other modules."""
    from .action import a_u_order

    G = Group(spec)
    if name == "aut_order":
        return am.aut_order(G)
    if name == "center_order":
        return G.center_order()
    if name == "u_count":
        return count_structures(G)
    if name == "lemma53":
        return count_lemma53(G)
    if name == "out_involutions":
        return out_involutions_formula(spec)
    if name == "a_u_order":
        return a_u_order(G)
    if name == "orbit_count":
        return orbit_count_report(spec).value
    raise ValueError(f"unknown formula {name!r}; choose from {', '.join(FORMULA_NAMES)}")


def table_rows(primes, exponents) -> list[CountReport]:
    """theorem_A/B/C values over a parameter grid, one row per legal combination."""
    rows = []
    for p in primes:
        for e in exponents:
            rows.append(CountReport("theorem_A", {"p": p, "e": e}, theorem_A(p, e), branch(p)))
            for j in fused_j_range(e):
                rows.append(CountReport("theorem_B", {"p": p, "e": e, "j": j}, theorem_B(p, e, j)))
            if e >= 2:
                rows.append(CountReport("theorem_C", {"p": p, "e": e}, theorem_C(p, e)))
    return rows
