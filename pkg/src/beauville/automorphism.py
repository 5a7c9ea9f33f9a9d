"""Automorphisms of the four families, stored by their parameter tuples.

Parameter windows, with ``q = p^(e-i)``:

    metacyclic (m, n, r, s):  a -> b^(m q) a^n,        b -> b^(1 + r q) a^s
                              m, r mod p^i;  n, s mod p^e;  p does not divide n
    fused (m, n, r, s, za, zb):
                              a -> a^(1 + m q) b^n c^za, b -> a^(r q) b^s c^zb
                              m, n, r, s mod p^i;  za, zb mod p^j;  p does not divide s
    split (r, m, s, n, wa, wb):
                              a -> a^r b^m wa,         b -> a^s b^n wb
                              r, m, s, n mod p with (r m; s n) invertible;  wa, wb in Phi(G)
    abelian (r, m, s, n):     a -> a^r b^m,            b -> a^s b^n     (mod p^e, unit determinant)

An ``AutMap`` also caches the images of ``a`` and ``b``; everything else is
derived from those two codes.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Iterator

import numpy as np

from .groups import Family, Group
from .residue import Modulus, primitive_root

log = logging.getLogger(__name__)

DEFAULT_AUT_BOUND = 10**7
BRUTE_OUT_BOUND = 10**5


def image(G: Group, A, B, g):
    """Image of ``g`` under the endomorphism sending ``a -> A``, ``b -> B``.

    All three arguments broadcast, so one map can act on many elements or many
    maps on one element.
    """
    x, y, z = G.decode(g)
    if G.family is Family.METACYCLIC:
        return G.mul(G.pow(B, y), G.pow(A, x))
    out = G.mul(G.pow(A, x), G.pow(B, y))
    if G.family is Family.ABELIAN:
        return out
    return G.mul(out, G.pow(G.comm(B, A), z))


def is_automorphism(G: Group, A, B):
    """Relators hold for the images and the images generate ``G``."""
    return G.relators_hold(A, B) & G.is_generating_pair(A, B)


def _windows(G: Group):
    s = G.spec
    p, e, i, j = s.p, s.e, s.i, s.j
    fam = G.family
    if fam is Family.METACYCLIC:
        return (p**i, p**e, p**i, p**e)
    if fam is Family.FUSED:
        return (p**i, p**i, p**i, p**i, p**j, p**j)
    if fam is Family.SPLIT:
        return (p, p, p, p, G.order, G.order)
    return (p**e,) * 4


def images_from_params(G: Group, params):
    """Images of ``a`` and ``b`` for parameter tuples (scalars or arrays)."""
    s = G.spec
    p, e, i = s.p, s.e, s.i
    fam = G.family
    if fam is Family.METACYCLIC:
        m, n, r, sp = params
        q = p ** (e - i)
        A = G.encode(n, m * q)
        B = G.encode(sp, 1 + r * q)
        return A, B
    if fam is Family.FUSED:
        m, n, r, sp, za, zb = params
        q = p ** (e - i)
        return G.encode(1 + m * q, n, za), G.encode(r * q, sp, zb)
    if fam is Family.SPLIT:
        r, m, sp, n, wa, wb = params
        return G.mul(G.encode(r, m), wa), G.mul(G.encode(sp, n), wb)
    r, m, sp, n = params
    return G.encode(r, m), G.encode(sp, n)


def params_from_images(G: Group, A: int, B: int) -> tuple:
    """Read the canonical parameter tuple back from the images of ``a`` and ``b``.

    Raises ``ValueError`` if the images are outside the parametrized family.
    """
    s = G.spec
    p, e, i = s.p, s.e, s.i
    fam = G.family
    xa, ya, za = (int(t) for t in G.decode(A))
    xb, yb, zb = (int(t) for t in G.decode(B))
    if fam is Family.METACYCLIC:
        q = p ** (e - i)
        if ya % q or (yb - 1) % q:
            raise ValueError("images outside the metacyclic parameter window")
        return (ya // q, xa, (yb - 1) // q, xb)
    if fam is Family.FUSED:
        q = p ** (e - i)
        if (xa - 1) % q or xb % q:
            raise ValueError("images outside the fused parameter window")
        return ((xa - 1) // q, ya, xb // q, yb, za, zb)
    if fam is Family.SPLIT:
        r, m, sp, n = xa % p, ya % p, xb % p, yb % p
        wa = int(G.mul(G.inv(G.encode(r, m)), A))
        wb = int(G.mul(G.inv(G.encode(sp, n)), B))
        return (r, m, sp, n, wa, wb)
    return (xa, ya, xb, yb)


@dataclass(frozen=True)
class AutMap:
    """An automorphism given by its parameters; ``A``, ``B`` are the images of ``a``, ``b``."""

    group: Group = field(repr=False, compare=False)
    params: tuple
    A: int = field(default=-1, repr=False)
    B: int = field(default=-1, repr=False)

    def __post_init__(self):
        if self.A < 0:
            A, B = images_from_params(self.group, self.params)
            object.__setattr__(self, "A", int(A))
            object.__setattr__(self, "B", int(B))

    @classmethod
    def from_params(cls, G: Group, *params) -> AutMap:
        win = _windows(G)
        if len(params) != len(win):
            raise ValueError(f"{G.family.value} automorphisms take {len(win)} parameters")
        A, B = images_from_params(G, tuple(int(t) for t in params))
        return cls.from_images(G, int(A), int(B))

    @classmethod
    def from_images(cls, G: Group, A: int, B: int) -> AutMap:
        return cls(G, params_from_images(G, A, B), int(A), int(B))

    @classmethod
    def identity(cls, G: Group) -> AutMap:
        return cls.from_images(G, G.a, G.b)

    @property
    def family(self) -> Family:
        return self.group.family

    def __call__(self, g):
        return image(self.group, self.A, self.B, g)

    def to_dict(self) -> dict:
        return {"family": self.family.value, "params": [int(t) for t in self.params]}


def apply(theta: AutMap, g):
    return theta(g)


def validate(theta: AutMap, G: Group | None = None) -> bool:
    G = G or theta.group
    return bool(is_automorphism(G, theta.A, theta.B))


def compose(t1: AutMap, t2: AutMap) -> AutMap:
    """``t1 o t2`` (apply ``t2`` first)."""
    G = t1.group
    try:
        return AutMap.from_images(G, int(t1(t2.A)), int(t1(t2.B)))
    except ValueError as exc:  # closure of the parametrized family failed
        raise AssertionError(f"composition left the parameter window: {exc}") from exc


def power(theta: AutMap, n: int) -> AutMap:
    result, base = AutMap.identity(theta.group), theta
    while n:
        if n & 1:
            result = compose(result, base)
        base = compose(base, base)
        n >>= 1
    return result


TABLE_LIMIT = 10**6


def invert(theta: AutMap) -> AutMap:
    G = theta.group
    if G.order <= TABLE_LIMIT:
        table = theta(G.elements())
        inverse = np.empty_like(table)
        inverse[table] = G.elements()
        return AutMap.from_images(G, int(inverse[G.a]), int(inverse[G.b]))
    # the order of theta divides |Aut(G)|
    return power(theta, aut_order(G) - 1)


def pair_automorphism(G: Group, x: int, y: int, u: int, v: int) -> AutMap | None:
    """The automorphism sending ``x -> u`` and ``y -> v``, if there is one."""
    try:
        src = AutMap.from_images(G, int(x), int(y))
        dst = AutMap.from_images(G, int(u), int(v))
    except ValueError:
        return None
    if not (validate(src) and validate(dst)):
        return None
    theta = compose(dst, invert(src))
    assert theta(x) == u and theta(y) == v
    return theta


def inner(G: Group, g: int) -> AutMap:
    """Conjugation ``h -> h^g``."""
    return AutMap.from_images(G, int(G.conj(G.a, g)), int(G.conj(G.b, g)))


def aut_order(G: Group) -> int:
    s = G.spec
    p, e, i, j = s.p, s.e, s.i, s.j
    fam = G.family
    if fam is Family.METACYCLIC:
        return (p - 1) * p ** (2 * e + 2 * i - 1)
    if fam is Family.FUSED:
        return (p - 1) * p ** (4 * i + 2 * j - 1)
    if fam is Family.SPLIT:
        return (p + 1) * (p - 1) ** 2 * p ** (4 * e + 2 * j - 3)
    return (p * p - 1) * (p * p - p) * p ** (4 * (e - 1))


def out_order(G: Group) -> int:
    return aut_order(G) // G.inner_order()


def _param_grid(win_ranges, unit_positions, p) -> list[np.ndarray]:
    axes = [np.arange(w, dtype=np.int64) for w in win_ranges]
    for pos in unit_positions:
        axes[pos] = axes[pos][axes[pos] % p != 0]
    grids = np.meshgrid(*axes, indexing="ij")
    return [g.ravel() for g in grids]


def all_automorphisms(G: Group, bound: int = DEFAULT_AUT_BOUND) -> tuple[np.ndarray, np.ndarray]:
    """Images ``(A, B)`` of every automorphism, in parameter order."""
    total = aut_order(G)
    if total > bound:
        raise ValueError(f"|Aut(G)|={total} exceeds the enumeration bound {bound}")
    p = G.p
    fam = G.family
    if fam is Family.METACYCLIC:
        params = _param_grid(_windows(G), [1], p)
    elif fam is Family.FUSED:
        params = _param_grid(_windows(G), [3], p)
    elif fam is Family.SPLIT:
        frat = G.elements()[G.in_frattini(G.elements())]
        r, m, sp, n, wa, wb = _param_grid((p, p, p, p, frat.size, frat.size), [], p)
        ok = (r * n - m * sp) % p != 0
        params = [r[ok], m[ok], sp[ok], n[ok], frat[wa[ok]], frat[wb[ok]]]
    else:
        r, m, sp, n = _param_grid(_windows(G), [], p)
        ok = (r * n - m * sp) % p != 0
        params = [r[ok], m[ok], sp[ok], n[ok]]
    A, B = images_from_params(G, params)
    assert A.size == total, (A.size, total)
    return np.asarray(A, dtype=np.int64), np.asarray(B, dtype=np.int64)


def enumerate_aut(G: Group, bound: int = DEFAULT_AUT_BOUND) -> Iterator[AutMap]:
    A, B = all_automorphisms(G, bound)
    for x, y in zip(A.tolist(), B.tolist()):
        yield AutMap.from_images(G, x, y)


# -- inner automorphisms and Out(G) ------------------------------------------


def inner_pairs(G: Group) -> tuple[np.ndarray, np.ndarray]:
    """Images ``(a^g, b^g)`` for ``g`` over a transversal of ``Z(G)``; one per inner automorphism."""
    T = G.transversal_mod_center()
    return G.conj(G.a, T), G.conj(G.b, T)


def pair_key(G: Group, A, B):
    return np.asarray(A, dtype=np.int64) * G.order + np.asarray(B, dtype=np.int64)


def is_inner_by_conjugation(G: Group, A, B):
    """Membership in Inn(G) by lookup in the set of all conjugation pairs."""
    IA, IB = inner_pairs(G)
    return np.isin(pair_key(G, A, B), pair_key(G, IA, IB))


def is_inner_by_window(G: Group, A, B):
    """Membership in Inn(G) from the closed-form description of inner maps.

    Metacyclic: ``a -> a^(1 + u p^i)``, ``b -> b a^(v p^i)``.
    Class two: ``a -> a c_a``, ``b -> b c_b`` with ``c_a, c_b`` in ``G'``.
    """
    if G.family is Family.ABELIAN:
        return (np.asarray(A) == G.a) & (np.asarray(B) == G.b)
    if G.family is Family.METACYCLIC:
        pi = G.p**G.spec.i
        xa, ya, _ = G.decode(A)
        xb, yb, _ = G.decode(B)
        return (ya == 0) & ((xa - 1) % pi == 0) & (yb == 1) & (xb % pi == 0)
    return G.in_derived(G.mul(G.inv(G.a), A)) & G.in_derived(G.mul(G.inv(G.b), B))


def out_representatives(G: Group, bound: int = DEFAULT_AUT_BOUND) -> tuple[np.ndarray, np.ndarray]:
    """One automorphism per coset of Inn(G), from parameter windows taken modulo the inner ones."""
    p = G.p
    s = G.spec
    fam = G.family
    total = out_order(G)
    if total > bound:
        raise ValueError(f"|Out(G)|={total} exceeds the enumeration bound {bound}")
    if fam is Family.METACYCLIC:
        pi = p**s.i
        params = _param_grid((pi, pi, pi, pi), [1], p)
    elif fam is Family.FUSED:
        pi = p**s.i
        m, n, r, sp = _param_grid((pi, pi, pi, pi), [3], p)
        zero = np.zeros_like(m)
        params = [m, n, r, sp, zero, zero]
    elif fam is Family.ABELIAN:
        return all_automorphisms(G, bound)
    else:
        # quotient of the split family by Inn: a -> a^r b^m, b -> a^s b^n mod G'
        pe = p**s.e
        r, m, sp, n = _param_grid((pe,) * 4, [], p)
        ok = (r * n - m * sp) % p != 0
        A = G.encode(r[ok], m[ok])
        B = G.encode(sp[ok], n[ok])
        assert A.size == total
        return A, B
    A, B = images_from_params(G, params)
    assert A.size == total, (A.size, total)
    return np.asarray(A, dtype=np.int64), np.asarray(B, dtype=np.int64)


def square_images(G: Group, A, B):
    """Images of ``a``, ``b`` under ``theta o theta``."""
    return image(G, A, B, A), image(G, A, B, B)


def count_out_involutions(G: Group, bound: int = DEFAULT_AUT_BOUND, chunk: int = 1 << 16) -> int:
    """Elements of order two in Out(G), over the parameter-class representatives.

    A coset ``theta Inn(G)`` counts when ``theta`` is not inner but
    ``theta^2`` is. Inner membership uses the closed-form window test.
    """
    A, B = out_representatives(G, bound)
    count = 0
    for lo in range(0, A.size, chunk):
        a, b = A[lo:lo + chunk], B[lo:lo + chunk]
        a2, b2 = square_images(G, a, b)
        count += int(np.count_nonzero(~is_inner_by_window(G, a, b) & is_inner_by_window(G, a2, b2)))
    return count


def count_out_involutions_by_conjugation(G: Group, bound: int = DEFAULT_AUT_BOUND,
                                         chunk: int = 1 << 16) -> int:
    """Same count as ``count_out_involutions`` with Inn(G) given by explicit conjugation pairs."""
    A, B = out_representatives(G, bound)
    IA, IB = inner_pairs(G)
    inner_keys = np.sort(pair_key(G, IA, IB))
    count = 0
    for lo in range(0, A.size, chunk):
        a, b = A[lo:lo + chunk], B[lo:lo + chunk]
        a2, b2 = square_images(G, a, b)
        not_inner = ~np.isin(pair_key(G, a, b), inner_keys)
        sq_inner = np.isin(pair_key(G, a2, b2), inner_keys)
        count += int(np.count_nonzero(not_inner & sq_inner))
    return count


def coset_keys(G: Group, A, B) -> np.ndarray:
    """Smallest pair key over ``theta Inn(G)``; ``theta o iota_g = iota_{theta(g)} o theta``
    so the coset is ``{(A^h, B^h)}`` over all ``h``."""
    T = G.transversal_mod_center()
    keys = pair_key(G, G.conj(np.asarray(A)[:, None], T[None, :]),
                    G.conj(np.asarray(B)[:, None], T[None, :]))
    return keys.min(axis=1)


def count_out_involutions_brute(G: Group, bound: int = BRUTE_OUT_BOUND) -> int:
    """Coset sifting over the whole of Aut(G)."""
    if out_order(G) > bound:
        raise ValueError(f"|Out(G)|={out_order(G)} exceeds the brute-force bound {bound}")
    A, B = all_automorphisms(G)
    cos = coset_keys(G, A, B)
    reps = np.unique(cos, return_index=True)[1]
    assert reps.size == out_order(G), (reps.size, out_order(G))
    A, B = A[reps], B[reps]
    identity_key = int(pair_key(G, G.a, G.b))
    a2, b2 = square_images(G, A, B)
    not_inner = cos[reps] != identity_key
    sq_inner = coset_keys(G, a2, b2) == identity_key
    return int(np.count_nonzero(not_inner & sq_inner))


def involution_witness(G: Group, theta: AutMap) -> int | None:
    """Some ``h`` with ``theta^2 = conjugation by h``, or None."""
    t2 = compose(theta, theta)
    T = G.transversal_mod_center()
    hit = np.flatnonzero((G.conj(G.a, T) == t2.A) & (G.conj(G.b, T) == t2.B))
    return int(T[hit[0]]) if hit.size else None


# -- action on G / Phi(G) ----------------------------------------------------


def induced_matrix(theta: AutMap) -> np.ndarray:
    """Matrix over F_p of the action on G/Phi(G); column t is the image of generator t."""
    G = theta.group
    xa, ya, _ = G.decode(theta.A)
    xb, yb, _ = G.decode(theta.B)
    return np.array([[xa, xb], [ya, yb]], dtype=np.int64) % G.p


def fixed_lines(theta: AutMap) -> set:
    from .groups import Line

    M = induced_matrix(theta)
    p = theta.group.p
    out = set()
    for u, v in [(1, s) for s in range(p)] + [(0, 1)]:
        w = M @ np.array([u, v])
        if (int(w[0]) * v - int(w[1]) * u) % p == 0:
            out.add(Line(u, v))
    return out


# -- generating set for the diagonal action ----------------------------------


def aut_generators(G: Group, include_inner: bool = True) -> list[AutMap]:
    """A small generating set of Aut(G); one parameter moved away from the identity at a time."""
    s = G.spec
    p = G.p
    fam = G.family
    gens: list[AutMap] = []
    if fam is Family.METACYCLIC:
        g = primitive_root(Modulus(p, s.e))
        for params in [(0, g, 0, 0), (1, 1, 0, 0), (0, 1, 1, 0), (0, 1, 0, 1)]:
            gens.append(AutMap.from_params(G, *params))
    elif fam is Family.FUSED:
        g = primitive_root(Modulus(p, s.i))
        for params in [(0, 0, 0, g, 0, 0), (1, 0, 0, 1, 0, 0), (0, 1, 0, 1, 0, 0),
                       (0, 0, 1, 1, 0, 0)]:
            gens.append(AutMap.from_params(G, *params))
    else:
        g = primitive_root(Modulus(p, s.e))
        # a -> a^g ; a -> a b ; b -> a b  (elementary generators of GL(2, Z/p^e))
        for A, B in [(G.encode(g, 0), G.b), (G.mul(G.a, G.b), G.b), (G.a, G.mul(G.a, G.b))]:
            gens.append(AutMap.from_images(G, int(A), int(B)))
    if include_inner and fam is not Family.ABELIAN:
        gens += [inner(G, G.a), inner(G, G.b)]
    return gens


def closure_size(G: Group, gens: list[AutMap], bound: int = DEFAULT_AUT_BOUND) -> int:
    """Order of the subgroup of Aut(G) generated by ``gens``."""
    seen = np.array([pair_key(G, G.a, G.b)], dtype=np.int64)
    fA, fB = np.array([G.a]), np.array([G.b])
    while fA.size:
        newA = np.concatenate([t(fA) for t in gens])
        newB = np.concatenate([t(fB) for t in gens])
        keys, idx = np.unique(pair_key(G, newA, newB), return_index=True)
        fresh = ~np.isin(keys, seen)
        seen = np.union1d(seen, keys[fresh])
        fA, fB = newA[idx[fresh]], newB[idx[fresh]]
        if seen.size > bound:
            raise ValueError("closure exceeded bound")
    return int(seen.size)
