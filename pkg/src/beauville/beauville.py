"""Generating triples, the Sigma sets and Beauville structures.

A triple ``(x, y, (xy)^-1)`` is stored by its first two entries. A structure
is a pair of triples, i.e. four element codes ``(x1, y1, x2, y2)``. When
``|G|^4 < 2^63`` a structure also has an int64 key

    key = ((x1 * N + y1) * N + x2) * N + y2,        N = |G|

so the sorted key array of all structures is lexicographic in the codes.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .groups import Family, Group

log = logging.getLogger(__name__)

ORACLE_LIMIT = 10**6
DEFAULT_STRUCTURE_BOUND = 2 * 10**7


@dataclass(frozen=True)
class Triple:
    g1: int
    g2: int
    g3: int

    @classmethod
    def from_pair(cls, G: Group, x: int, y: int) -> Triple:
        return cls(int(x), int(y), int(G.inv(G.mul(x, y))))

    def is_valid(self, G: Group) -> bool:
        prod = G.mul(G.mul(self.g1, self.g2), self.g3)
        return prod == G.identity and bool(G.is_generating_pair(self.g1, self.g2))


@dataclass(frozen=True)
class Structure:
    first: Triple
    second: Triple

    @classmethod
    def from_codes(cls, G: Group, x1, y1, x2, y2) -> Structure:
        return cls(Triple.from_pair(G, x1, y1), Triple.from_pair(G, x2, y2))

    @property
    def codes(self) -> tuple[int, int, int, int]:
        return self.first.g1, self.first.g2, self.second.g1, self.second.g2

    def elements(self) -> tuple[int, ...]:
        f, s = self.first, self.second
        return f.g1, f.g2, f.g3, s.g1, s.g2, s.g3


@dataclass(frozen=True)
class StructureProfile:
    """Second triple written over the first: ``(x^k y^l c, x^m y^n d)`` with ``c, d`` in G'."""

    k: int
    l: int
    m: int
    n: int
    c: int
    d: int


# -- keys and serialization --------------------------------------------------


def keys_supported(G: Group) -> bool:
    return G.order**4 < 2**63


def structure_key(G: Group, x1, y1, x2, y2):
    N = G.order
    return ((np.asarray(x1, dtype=np.int64) * N + y1) * N + x2) * N + y2


def decode_keys(G: Group, keys):
    N = G.order
    keys = np.asarray(keys, dtype=np.int64)
    y2 = keys % N
    rest = keys // N
    x2 = rest % N
    rest //= N
    return rest // N, rest % N, x2, y2


def element_width(G: Group) -> int:
    """Bytes per element code in the packed encoding."""
    return max(1, ((G.order - 1).bit_length() + 7) // 8)


def pack(G: Group, s: Structure) -> bytes:
    """Six element codes, little-endian, fixed width."""
    w = element_width(G)
    return b"".join(int(g).to_bytes(w, "little") for g in s.elements())


def unpack(G: Group, data: bytes) -> Structure:
    w = element_width(G)
    if len(data) != 6 * w:
        raise ValueError(f"expected {6 * w} bytes, got {len(data)}")
    g = [int.from_bytes(data[t * w:(t + 1) * w], "little") for t in range(6)]
    s = Structure(Triple(*g[:3]), Triple(*g[3:]))
    if not (s.first.is_valid(G) and s.second.is_valid(G)):
        raise ValueError("packed data does not hold two generating triples")
    return s


def to_json(G: Group, s: Structure) -> str:
    return json.dumps([G.format(g) for g in s.elements()])


def from_json(G: Group, text: str) -> Structure:
    g = [G.parse(t) for t in json.loads(text)]
    if len(g) != 6:
        raise ValueError("a structure has six elements")
    s = Structure(Triple(*g[:3]), Triple(*g[3:]))
    if s != Structure.from_codes(G, g[0], g[1], g[3], g[4]):
        raise ValueError("third entries are not (xy)^-1")
    return s


# -- Sigma sets and the two recognizers --------------------------------------


def _require_oracle(G: Group):
    if G.order > ORACLE_LIMIT:
        raise ValueError(f"|G|={G.order} exceeds the oracle guard {ORACLE_LIMIT}")


def cyclic_subgroup(G: Group, g: int) -> np.ndarray:
    return np.unique(G.pow(np.full(G.order_of(g), g, dtype=np.int64),
                           np.arange(G.order_of(g), dtype=np.int64)))


def sigma_set(G: Group, x: int, y: int, conjugators: str = "transversal") -> np.ndarray:
    """Union of all conjugates of <x>, <y> and <xy>.

    ``conjugators`` is ``"transversal"`` (one element per coset of Z(G)) or
    ``"all"`` (every element of G).
    """
    _require_oracle(G)
    if conjugators == "transversal":
        T = G.transversal_mod_center()
    elif conjugators == "all":
        T = G.elements()
    else:
        raise ValueError(f"unknown conjugator set {conjugators!r}")
    gens = np.concatenate([cyclic_subgroup(G, g) for g in (x, y, G.mul(x, y))])
    return np.unique(G.conj(gens[:, None], T[None, :]))


def is_beauville_direct(G: Group, s: Structure) -> bool:
    """Definition check: the two Sigma sets meet only in the identity."""
    if not (s.first.is_valid(G) and s.second.is_valid(G)):
        return False
    s1 = sigma_set(G, s.first.g1, s.first.g2)
    s2 = sigma_set(G, s.second.g1, s.second.g2)
    common = np.intersect1d(s1, s2)
    return common.size == 1 and common[0] == G.identity


def _sigma_rows(G: Group, x, y, T) -> np.ndarray:
    """Sigma sets of many pairs at once, one (unsorted, repeating) row per pair."""
    e = np.arange(G.exponent, dtype=np.int64)
    gens = np.concatenate([G.pow(x[:, None], e[None, :]), G.pow(y[:, None], e[None, :]),
                           G.pow(G.mul(x, y)[:, None], e[None, :])], axis=1)
    return G.conj(gens[:, :, None], T[None, None, :]).reshape(x.size, -1)


def is_beauville_direct_batch(G: Group, x1, y1, x2, y2, batch: int = 512) -> np.ndarray:
    """Vectorized form of ``is_beauville_direct`` for pairs that are generating."""
    _require_oracle(G)
    x1, y1, x2, y2 = (np.asarray(t, dtype=np.int64) for t in (x1, y1, x2, y2))
    T = G.transversal_mod_center()
    out = np.empty(x1.size, dtype=bool)
    N = G.order
    for lo in range(0, x1.size, batch):
        sl = slice(lo, lo + batch)
        r1 = _sigma_rows(G, x1[sl], y1[sl], T)
        r2 = _sigma_rows(G, x2[sl], y2[sl], T)
        rows = np.arange(r1.shape[0], dtype=np.int64)[:, None]
        k1 = (rows * N + r1).ravel()
        k2 = (rows * N + r2)
        shared = np.isin(k2, k1) & (r2 != G.identity)
        out[sl] = ~shared.any(axis=1)
    gen = G.is_generating_pair(x1, y1) & G.is_generating_pair(x2, y2)
    return out & gen


def six_lines(G: Group, x1, y1, x2, y2) -> np.ndarray:
    """Line indices of the six entries, stacked on the last axis."""
    z1 = G.inv(G.mul(x1, y1))
    z2 = G.inv(G.mul(x2, y2))
    return np.stack([G.line_index(t) for t in (x1, y1, z1, x2, y2, z2)], axis=-1)


def is_beauville_fast_codes(G: Group, x1, y1, x2, y2):
    """The six entries lie in six different maximal subgroups and both pairs generate."""
    L = np.sort(six_lines(G, x1, y1, x2, y2), axis=-1)
    distinct = np.all(L[..., 1:] != L[..., :-1], axis=-1) & (L[..., 0] >= 0)
    return distinct & G.is_generating_pair(x1, y1) & G.is_generating_pair(x2, y2)


def is_beauville_fast(G: Group, s: Structure) -> bool:
    if not (s.first.is_valid(G) and s.second.is_valid(G)):
        return False
    return bool(is_beauville_fast_codes(G, *s.codes))


# -- counting and enumeration ------------------------------------------------


def abelian_core_count(p: int) -> int:
    return (p + 1) * p * (p - 1) ** 3 * (p - 2) * (p - 3) * (p - 4)


def count_structures(G: Group) -> int:
    """Closed form ``|Phi(G)|^4 (p+1) p (p-1)^3 (p-2)(p-3)(p-4)``."""
    return G.frattini_order() ** 4 * abelian_core_count(G.p)


def pair_masks(G: Group, x, y) -> np.ndarray:
    """Bitmask of the three lines met by the triple of each generating pair."""
    z = G.inv(G.mul(x, y))
    one = np.int64(1)
    return (one << G.line_index(x)) | (one << G.line_index(y)) | (one << G.line_index(z))


def enumerate_structure_keys(G: Group, bound: int = DEFAULT_STRUCTURE_BOUND) -> np.ndarray:
    """Sorted keys of every Beauville structure, via disjoint line masks."""
    total = count_structures(G)
    if total > bound:
        raise ValueError(f"|U(G)|={total} exceeds the enumeration bound {bound}")
    if not keys_supported(G):
        raise ValueError("group too large for int64 structure keys")
    x, y = G.generating_pairs()
    pk = x * G.order + y
    masks = pair_masks(G, x, y)
    uniq = np.unique(masks)
    groups = {int(m): pk[masks == m] for m in uniq}
    N2 = G.order * G.order
    parts = []
    for m1, k1 in groups.items():
        for m2, k2 in groups.items():
            if m1 & m2 == 0:
                parts.append((k1[:, None] * N2 + k2[None, :]).ravel())
    keys = np.sort(np.concatenate(parts))
    assert keys.size == total, (keys.size, total)
    return keys


def stream_count_structures(G: Group, chunk: int = 64) -> int:
    """Count Beauville structures by testing every ordered pair of generating pairs.

    Nothing is stored; runs over first pairs in blocks of ``chunk``.
    """
    x, y = G.generating_pairs()
    L = np.stack([G.line_index(x), G.line_index(y), G.line_index(G.inv(G.mul(x, y)))], axis=1)
    total = 0
    for lo in range(0, x.size, chunk):
        A = L[lo:lo + chunk]
        # entries of the second triple must avoid all three lines of the first
        clash = np.zeros((A.shape[0], x.size), dtype=bool)
        for a in range(3):
            for b in range(3):
                clash |= A[:, a, None] == L[None, :, b]
        total += int(np.count_nonzero(~clash))
    return total


def random_structure(G: Group, rng: np.random.Generator) -> Structure:
    """A uniformly random Beauville structure, by rejection sampling on element codes."""
    def pair():
        while True:
            x, y = (int(t) for t in rng.integers(0, G.order, 2))
            if G.is_generating_pair(x, y):
                return x, y

    x1, y1 = pair()
    m1 = int(pair_masks(G, x1, y1))
    while True:
        x2, y2 = pair()
        if m1 & int(pair_masks(G, x2, y2)) == 0:
            return Structure.from_codes(G, x1, y1, x2, y2)


def iter_structures(G: Group, bound: int = DEFAULT_STRUCTURE_BOUND) -> Iterator[Structure]:
    """All Beauville structures in lexicographic order of their codes."""
    for x1, y1, x2, y2 in zip(*(t.tolist() for t in decode_keys(G, enumerate_structure_keys(G, bound)))):
        yield Structure.from_codes(G, x1, y1, x2, y2)


enumerate_structures = iter_structures


# -- profiles -----------------------------------------------------------------


def unit_conditions(k, l, m, n, p: int):
    """The nine unit conditions together with invertibility of (k l; m n) modulo p."""
    vals = [k, l, m, n, k + m, l + n, k - l, m - n, k + m - l - n, k * n - l * m]
    ok = True
    for v in vals:
        ok = ok & (np.asarray(v) % p != 0)
    return ok


def _homocyclic(G: Group) -> bool:
    return G.family in (Family.ABELIAN, Family.SPLIT)


def _inv_mod(a, q: int, phi: int):
    """Inverse modulo q of unit residues (array-friendly)."""
    a = np.asarray(a, dtype=np.int64) % q
    result = np.ones_like(a)
    n = phi - 1
    base = a.copy()
    while n:
        if n & 1:
            result = (result * base) % q
        base = (base * base) % q
        n >>= 1
    return result


def solve_coordinates(G: Group, x, y, u):
    """``(k, l)`` modulo p^e with ``u = x^k y^l`` modulo G' (homocyclic families)."""
    if not _homocyclic(G):
        raise ValueError("coordinates mod G' are only linear for the abelian and split families")
    q = G.pe
    phi = q - q // G.p
    xa, xb, _ = G.decode(x)
    ya, yb, _ = G.decode(y)
    ua, ub, _ = G.decode(u)
    det = (xa * yb - xb * ya) % q
    dinv = _inv_mod(det, q, phi)
    k = ((ua * yb - ub * ya) % q * dinv) % q
    l = ((xa * ub - xb * ua) % q * dinv) % q
    return k, l


def profile_arrays(G: Group, x1, y1, x2, y2):
    """Vectorized profile ``(k, l, m, n, c, d)`` of structures given by codes."""
    if _homocyclic(G):
        k, l = solve_coordinates(G, x1, y1, x2)
        m, n = solve_coordinates(G, x1, y1, y2)
    else:
        k, l = _search_coordinates(G, x1, y1, x2)
        m, n = _search_coordinates(G, x1, y1, y2)
    c = G.mul(G.inv(G.mul(G.pow(x1, k), G.pow(y1, l))), x2)
    d = G.mul(G.inv(G.mul(G.pow(x1, m), G.pow(y1, n))), y2)
    return k, l, m, n, c, d


def _search_coordinates(G: Group, x, y, u):
    """Smallest ``(k, l)`` (lexicographically) with ``(x^k y^l)^-1 u`` in G'."""
    q = G.pe
    x, y, u = (np.atleast_1d(np.asarray(t, dtype=np.int64)) for t in (x, y, u))
    kk = np.arange(q, dtype=np.int64)
    found_k = np.full(x.size, -1, dtype=np.int64)
    found_l = np.full(x.size, -1, dtype=np.int64)
    for i in range(x.size):
        xk = G.pow(np.full(q, x[i]), kk)
        yl = G.pow(np.full(q, y[i]), kk)
        w = G.mul(xk[:, None], yl[None, :])
        hit = np.flatnonzero(G.in_derived(G.mul(G.inv(w), u[i])).ravel())
        if hit.size == 0:
            raise ValueError("element not reachable from the pair modulo G'")
        found_k[i], found_l[i] = divmod(int(hit[0]), q)
    return found_k, found_l


def profile_of(G: Group, s: Structure) -> StructureProfile:
    x1, y1, x2, y2 = s.codes
    vals = profile_arrays(G, np.array([x1]), np.array([y1]), np.array([x2]), np.array([y2]))
    return StructureProfile(*(int(np.asarray(v).ravel()[0]) for v in vals))


def structure_from_profile(G: Group, first: Triple, prof: StructureProfile) -> Structure:
    x, y = first.g1, first.g2
    u = G.mul(G.mul(G.pow(x, prof.k), G.pow(y, prof.l)), prof.c)
    v = G.mul(G.mul(G.pow(x, prof.m), G.pow(y, prof.n)), prof.d)
    return Structure(first, Triple.from_pair(G, u, v))


def profile_table_mod_p(p: int) -> np.ndarray:
    """All (k, l, m, n) modulo p passing the unit conditions."""
    k, l, m, n = (t.ravel() for t in np.meshgrid(*(np.arange(p),) * 4, indexing="ij"))
    ok = unit_conditions(k, l, m, n, p)
    return np.stack([k[ok], l[ok], m[ok], n[ok]], axis=1)


def enumerate_structure_keys_by_profile(G: Group, bound: int = DEFAULT_STRUCTURE_BOUND) -> np.ndarray:
    """Sorted keys built as first pair times admissible profile times (c, d) in G'^2.

    Independent of the line-mask enumeration; only for the abelian and split families.
    """
    if not _homocyclic(G):
        raise ValueError("profile enumeration needs a homocyclic abelianization")
    total = count_structures(G)
    if total > bound:
        raise ValueError(f"|U(G)|={total} exceeds the enumeration bound {bound}")
    p, q = G.p, G.pe
    base = profile_table_mod_p(p)
    # lift residues mod p to residues mod p^e
    lifts = np.arange(q // p, dtype=np.int64) * p
    prof = base
    for col in range(4):
        prof = np.repeat(prof, lifts.size, axis=0)
        prof[:, col] += np.tile(lifts, prof.shape[0] // lifts.size)
    derived = G.elements()[G.in_derived(G.elements())]
    x, y = G.generating_pairs()
    parts = []
    for xi, yi in zip(x.tolist(), y.tolist()):
        k, l, m, n = prof.T
        u0 = G.mul(G.pow(np.full(k.size, xi), k), G.pow(np.full(k.size, yi), l))
        v0 = G.mul(G.pow(np.full(m.size, xi), m), G.pow(np.full(m.size, yi), n))
        u = G.mul(u0[:, None], derived[None, :]).ravel()
        v = G.mul(v0[:, None], derived[None, :]).ravel()
        uu = np.repeat(u.reshape(k.size, derived.size), derived.size, axis=1).ravel()
        vv = np.tile(v.reshape(k.size, derived.size), (1, derived.size)).ravel()
        parts.append(structure_key(G, np.full(uu.size, xi), np.full(uu.size, yi), uu, vv))
    keys = np.sort(np.concatenate(parts))
    assert keys.size == total, (keys.size, total)
    return keys


def triple_type(G: Group, t: Triple) -> tuple[int, int, int]:
    return G.order_of(t.g1), G.order_of(t.g2), G.order_of(t.g3)


# -- stabilizer congruence classes -------------------------------------------


def is_first_case(k, l, m, n, q: int):
    """``l + m == 0`` and ``n + l - k == 0`` modulo q."""
    return ((l + m) % q == 0) & ((n + l - k) % q == 0)


def is_second_case(k, l, m, n, q: int):
    """``k + n == 0`` and ``k + m - l == 0`` modulo q."""
    return ((k + n) % q == 0) & ((k + m - l) % q == 0)


def is_swap_case(k, l, m, n, q: int):
    """``n == -k`` and ``k^2 + l m == 1`` modulo q."""
    return ((n + k) % q == 0) & ((k * k + l * m - 1) % q == 0)


def count_lemma53(G: Group, congruence_case: str = "first") -> int:
    """Closed-form number of structures in the ``"first"`` or ``"second"`` congruence case.

    Both cases have the same size; enumeration confirms it for each of them separately.
    """
    if congruence_case not in ("first", "second"):
        raise ValueError(f"congruence_case must be 'first' or 'second', got {congruence_case!r}")
    p = G.p
    if G.family not in (Family.ABELIAN, Family.SPLIT):
        raise ValueError("the congruence count is stated for the abelian and split families")
    tail = (p - 2) if p % 3 == 2 else (p - 4)
    return (p + 1) * p * (p - 1) ** 3 * tail * G.frattini_order() ** 3 * G.derived_order()


def profile_case_counts(G: Group, keys: np.ndarray, chunk: int = 1 << 20) -> dict[str, int]:
    """Number of structures in each congruence class, from their profiles."""
    q = G.pe
    counts = {"first": 0, "second": 0, "swap": 0, "both": 0, "units_fail": 0}
    for lo in range(0, keys.size, chunk):
        x1, y1, x2, y2 = decode_keys(G, keys[lo:lo + chunk])
        k, l, m, n, _, _ = profile_arrays(G, x1, y1, x2, y2)
        f = is_first_case(k, l, m, n, q)
        s = is_second_case(k, l, m, n, q)
        counts["first"] += int(f.sum())
        counts["second"] += int(s.sum())
        counts["both"] += int((f & s).sum())
        counts["swap"] += int(is_swap_case(k, l, m, n, q).sum())
        counts["units_fail"] += int((~unit_conditions(k, l, m, n, G.p)).sum())
    return counts
