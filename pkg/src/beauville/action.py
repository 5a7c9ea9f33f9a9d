"""The action group on Beauville structures and its orbits.

Triples ``(x, y, z)`` with ``z = (xy)^-1`` are handled through their first two
entries. The six permutations are::

    s0 (x, y, z)   s1 (y, z, x)   s2 (z, x, y)
    s3 (z, y, x^y) s4 (y, x, z^x) s5 (x, z, y^z)

and ``beta_w`` conjugates the whole triple by ``w(x, y)``. Conjugation is
``g^h = h^-1 g h`` throughout.
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import automorphism as am
from .beauville import (
    Structure,
    Triple,
    decode_keys,
    enumerate_structure_keys,
    is_first_case,
    is_second_case,
    is_swap_case,
    profile_of,
    structure_key,
)
from .groups import Family, Group

log = logging.getLogger(__name__)

DEFAULT_MAX_STATES = 2 * 10**7
CHECKPOINT_SCHEMA = 1

# output position t of s_i holds the original entry SIGMA_POSITIONS[i][t] (up to conjugation)
SIGMA_POSITIONS = ((0, 1, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0), (1, 0, 2), (0, 2, 1))

# s_i o s_j = beta_w o s_k, stored as (w, k); w is None when no conjugation appears
COMPOSITION_TABLE = (
    ((None, 0), (None, 1), (None, 2), (None, 3), (None, 4), (None, 5)),
    ((None, 1), (None, 2), (None, 0), ("X", 4), ("X", 5), ("X", 3)),
    ((None, 2), (None, 0), (None, 1), ("Y^-1", 5), ("Y^-1", 3), ("Y^-1", 4)),
    ((None, 3), (None, 5), (None, 4), ("Y", 0), ("Y", 2), ("Y", 1)),
    ((None, 4), (None, 3), (None, 5), (None, 1), (None, 0), (None, 2)),
    ((None, 5), (None, 4), (None, 3), ("X^-1", 2), ("X^-1", 1), ("X^-1", 0)),
)


class BudgetExceeded(RuntimeError):
    pass


# -- sigma and beta on pairs -------------------------------------------------


def apply_sigma_pairs(G: Group, i: int, x, y):
    """First two entries of ``s_i(x, y, (xy)^-1)``."""
    if i == 0:
        return x, y
    z = G.inv(G.mul(x, y))
    return {1: (y, z), 2: (z, x), 3: (z, y), 4: (y, x), 5: (x, z)}[i]


def apply_sigma(G: Group, i: int, t: Triple) -> Triple:
    """``s_i`` on a full triple, using the conjugated third entry."""
    x, y, z = t.g1, t.g2, t.g3
    out = {
        0: (x, y, z),
        1: (y, z, x),
        2: (z, x, y),
        3: (z, y, G.conj(x, y)),
        4: (y, x, G.conj(z, x)),
        5: (x, z, G.conj(y, z)),
    }[i]
    return Triple(*(int(g) for g in out))


def word_value(G: Group, w: str, x, y):
    return {"X": x, "Y": y, "X^-1": G.inv(x), "Y^-1": G.inv(y)}[w]


def apply_beta_pairs(G: Group, w: str, x, y):
    c = word_value(G, w, x, y)
    return G.conj(x, c), G.conj(y, c)


# -- generators of the action ------------------------------------------------


class ActionGen:
    name = "gen"

    def apply(self, G: Group, x1, y1, x2, y2):
        raise NotImplementedError

    def __repr__(self) -> str:
        return self.name


@dataclass(repr=False)
class SigmaPair(ActionGen):
    i: int
    j: int

    def __post_init__(self):
        self.name = f"SigmaPair({self.i},{self.j})"

    def apply(self, G, x1, y1, x2, y2):
        return (*apply_sigma_pairs(G, self.i, x1, y1), *apply_sigma_pairs(G, self.j, x2, y2))


@dataclass(repr=False)
class BetaFirst(ActionGen):
    word: str

    def __post_init__(self):
        self.name = f"BetaFirst({self.word})"

    def apply(self, G, x1, y1, x2, y2):
        return (*apply_beta_pairs(G, self.word, x1, y1), x2, y2)


@dataclass(repr=False)
class BetaSecond(ActionGen):
    word: str

    def __post_init__(self):
        self.name = f"BetaSecond({self.word})"

    def apply(self, G, x1, y1, x2, y2):
        return (x1, y1, *apply_beta_pairs(G, self.word, x2, y2))


@dataclass(repr=False)
class Diag(ActionGen):
    theta: am.AutMap
    _table: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self.name = f"Diag{tuple(int(t) for t in self.theta.params)}"

    def _map(self, G, g):
        if G.order <= am.TABLE_LIMIT:
            if self._table is None:
                self._table = np.asarray(self.theta(G.elements()), dtype=np.int64)
            return self._table[g]
        return self.theta(g)

    def apply(self, G, x1, y1, x2, y2):
        return tuple(self._map(G, g) for g in (x1, y1, x2, y2))


class Tau(ActionGen):
    name = "Tau"

    def apply(self, G, x1, y1, x2, y2):
        return x2, y2, x1, y1


def au_generators(G: Group, include_inner_diagonals: bool = False) -> list[ActionGen]:
    gens: list[ActionGen] = [SigmaPair(1, 0), SigmaPair(4, 0), SigmaPair(0, 1), SigmaPair(0, 4),
                             BetaFirst("X"), BetaFirst("Y"), BetaSecond("X"), BetaSecond("Y")]
    gens += [Diag(t) for t in am.aut_generators(G, include_inner=include_inner_diagonals)]
    gens.append(Tau())
    return gens


def generator_hash(gens: list[ActionGen]) -> str:
    return hashlib.sha256(json.dumps([g.name for g in gens]).encode()).hexdigest()[:16]


# -- composite moves (used for stabilizer witnesses) -------------------------


@dataclass(frozen=True)
class TripleOp:
    """``theta o iota_h o s_i`` on one triple, where ``iota_h(g) = g^h``."""

    sigma: int
    conj: int = 0
    theta: am.AutMap | None = None

    def apply_pair(self, G: Group, x, y):
        x, y = apply_sigma_pairs(G, self.sigma, x, y)
        x, y = G.conj(x, self.conj), G.conj(y, self.conj)
        if self.theta is not None:
            x, y = self.theta(x), self.theta(y)
        return x, y


@dataclass(frozen=True)
class Move:
    """``(first, second)``, preceded by the swap of the two triples when ``swap`` is set."""

    first: TripleOp
    second: TripleOp
    swap: bool = False

    def apply(self, G: Group, s: Structure) -> Structure:
        x1, y1, x2, y2 = s.codes
        if self.swap:
            x1, y1, x2, y2 = x2, y2, x1, y1
        u1, v1 = self.first.apply_pair(G, x1, y1)
        u2, v2 = self.second.apply_pair(G, x2, y2)
        return Structure.from_codes(G, int(u1), int(v1), int(u2), int(v2))


# -- composition table and the S3 quotient -----------------------------------


def _all_pairs(G: Group, limit: int = 10**7):
    n = G.frattini_order() ** 2 * (G.p**2 - 1) * (G.p**2 - G.p)
    if n > limit:
        raise ValueError(f"|T(G)|={n} exceeds the guard {limit}")
    return G.generating_pairs()


def verify_composition_table(G: Group) -> dict[tuple[int, int], bool]:
    """Check every entry ``s_i o s_j = beta_w o s_k`` as a permutation of T(G)."""
    x, y = _all_pairs(G)
    out = {}
    for i in range(6):
        for j in range(6):
            w, k = COMPOSITION_TABLE[i][j]
            lhs = apply_sigma_pairs(G, i, *apply_sigma_pairs(G, j, x, y))
            rhs = apply_sigma_pairs(G, k, x, y)
            if w is not None:
                rhs = apply_beta_pairs(G, w, *rhs)
            out[(i, j)] = bool(np.array_equal(lhs[0], rhs[0]) and np.array_equal(lhs[1], rhs[1]))
    return out


def _compose_positions(pi, pj):
    return tuple(pj[pi[t]] for t in range(3))


def verify_s3_quotient(G: Group) -> bool:
    """Cosets of J(G) for s_0..s_5 are distinct and multiply as S3.

    Every beta_w keeps each entry in its maximal subgroup, so two sigmas whose
    images put some entry in a different maximal subgroup lie in different cosets.
    """
    x, y = _all_pairs(G)
    z = G.inv(G.mul(x, y))
    lines = [G.line_index(t) for t in (x, y, z)]
    # betas preserve lines entrywise
    for w in ("X", "Y"):
        bx, by = apply_beta_pairs(G, w, x, y)
        if not (np.array_equal(G.line_index(bx), lines[0]) and np.array_equal(G.line_index(by), lines[1])):
            return False
    images = []
    for i in range(6):
        u, v = apply_sigma_pairs(G, i, x, y)
        images.append(np.stack([G.line_index(u), G.line_index(v)]))
    for i in range(6):
        for k in range(i + 1, 6):
            if np.array_equal(images[i], images[k]):
                return False
    # the position maps form S3 and match the table modulo J
    perms = set(SIGMA_POSITIONS)
    if len(perms) != 6:
        return False
    for i in range(6):
        for j in range(6):
            _, k = COMPOSITION_TABLE[i][j]
            if _compose_positions(SIGMA_POSITIONS[i], SIGMA_POSITIONS[j]) != SIGMA_POSITIONS[k]:
                return False
    if not all(verify_composition_table(G).values()):
        return False
    # s4 o s1 o s4 (x, y, z) = (z, x, y)^x; the conjugator is the second entry of s2's output
    lhs = apply_sigma_pairs(G, 4, *apply_sigma_pairs(G, 1, *apply_sigma_pairs(G, 4, x, y)))
    rhs = apply_beta_pairs(G, "Y", *apply_sigma_pairs(G, 2, x, y))
    return bool(np.array_equal(lhs[0], rhs[0]) and np.array_equal(lhs[1], rhs[1]))


# -- J(G) --------------------------------------------------------------------


@dataclass
class BetaSignature:
    """Conjugator modulo Z(G) of one element of J(G), evaluated on a fixed list of pairs."""

    values: np.ndarray

    def key(self) -> bytes:
        return self.values.tobytes()


@dataclass
class JClosure:
    order: int
    signatures: list[BetaSignature]
    test_pairs: int
    exhaustive: bool
    faithful: bool | None


def _beta_gens(G: Group, x, y):
    return [G.center_rep(x), G.center_rep(y)]


def j_group_closure(G: Group, max_pairs: int = 10**6, sample: int = 20000, seed: int = 0,
                    limit: int = 10**6) -> JClosure:
    """Close {beta_X, beta_Y} under composition using conjugator signatures.

    ``beta_v o beta_w`` conjugates by ``v(x, y) w(x, y)``, so signatures
    multiply pointwise. When every generating pair is used the signatures are
    exactly the permutations of T(G); otherwise the closure from a sample is
    replayed on all pairs (if feasible) to confirm it.
    """
    n_pairs = G.frattini_order() ** 2 * (G.p**2 - 1) * (G.p**2 - G.p)
    full = n_pairs <= max_pairs
    if full:
        x, y = G.generating_pairs()
    else:
        rng = np.random.default_rng(seed)
        g = G.elements() if G.order <= 10**7 else None
        outside = g[~G.in_frattini(g)]
        x = rng.choice(outside, sample)
        y = rng.choice(outside, sample)
        ok = G.is_generating_pair(x, y)
        x, y = x[ok], y[ok]
    gens = _beta_gens(G, x, y)
    ident = np.zeros(x.size, dtype=np.int64)
    seen = {ident.tobytes(): 0}
    sigs = [ident]
    parents: list[tuple[int, int]] = [(-1, -1)]
    frontier = [0]
    while frontier:
        nxt = []
        for idx in frontier:
            for gi, gv in enumerate(gens):
                new = G.center_rep(G.mul(gv, sigs[idx]))
                kb = new.tobytes()
                if kb not in seen:
                    seen[kb] = len(sigs)
                    sigs.append(new)
                    parents.append((idx, gi))
                    nxt.append(len(sigs) - 1)
                    if len(sigs) > limit:
                        raise ValueError("J(G) closure exceeded its limit")
        frontier = nxt
    faithful = True if full else None
    if not full and n_pairs <= 10**7:
        faithful = _replay_closure(G, parents)
    return JClosure(len(sigs), [BetaSignature(s) for s in sigs], int(x.size), full, faithful)


def _replay_closure(G: Group, parents) -> bool:
    x, y = G.generating_pairs()
    gens = _beta_gens(G, x, y)
    sigs = [np.zeros(x.size, dtype=np.int64)]
    for idx, gi in parents[1:]:
        sigs.append(G.center_rep(G.mul(gens[gi], sigs[idx])))
    keys = {s.tobytes() for s in sigs}
    if len(keys) != len(sigs):
        return False
    return all(G.center_rep(G.mul(g, s)).tobytes() in keys for s in sigs for g in gens)


def beta_permutations_distinct(G: Group, closure: JClosure) -> bool:
    """The elements found act as pairwise distinct permutations of T(G)."""
    if not closure.exhaustive:
        raise ValueError("needs signatures over every generating pair")
    x, y = G.generating_pairs()
    seen = set()
    for sig in closure.signatures:
        keys = np.stack([G.conj(x, sig.values), G.conj(y, sig.values)])
        seen.add(keys.tobytes())
    return len(seen) == closure.order


def derived_exponent_log(G: Group) -> int | None:
    """``m`` with exp(G') = p^m when G has class at most two, else None."""
    s = G.spec
    if G.family is Family.ABELIAN:
        return 0
    if G.family is Family.METACYCLIC:
        return s.e - s.i if 2 * s.i >= s.e else None
    return s.j


def j_group_order(G: Group) -> int:
    """|J(G)|: ``p^(2m)`` in class two (``G/Z(G) = C_{p^m} x C_{p^m}``), else by closure."""
    m = derived_exponent_log(G)
    if m is not None:
        return G.p ** (2 * m)
    closure = j_group_closure(G)
    log.warning("|J(G)| for %s rests on a sampled closure (faithful=%s)", G.spec, closure.faithful)
    return closure.order


def a_u_order(G: Group) -> int:
    return 72 * j_group_order(G) ** 2 * am.aut_order(G) * G.inner_order()


# -- orbit partition ---------------------------------------------------------


@dataclass
class OrbitResult:
    orbit_count: int
    sizes: dict[int, int]
    states: int
    elapsed_s: float
    peak_mb: float
    labels: np.ndarray | None = field(default=None, repr=False)
    keys: np.ndarray | None = field(default=None, repr=False)


def _peak_mb() -> float:
    try:
        import resource

        return resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024.0
    except (ImportError, OSError):
        return float("nan")


def generator_images(G: Group, gen: ActionGen, keys: np.ndarray, threads: int = 1,
                     chunk: int = 1 << 20) -> np.ndarray:
    """Indices into ``keys`` of the images of every state under ``gen``."""
    def work(lo):
        part = keys[lo:lo + chunk]
        img = structure_key(G, *gen.apply(G, *decode_keys(G, part)))
        idx = np.searchsorted(keys, img)
        idx[idx == keys.size] = 0
        if not np.array_equal(keys[idx], img):
            raise AssertionError(f"{gen.name} leaves the set of Beauville structures")
        return idx

    starts = range(0, keys.size, chunk)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, starts))
    else:
        parts = [work(lo) for lo in starts]
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


def _merge(labels: np.ndarray, idx: np.ndarray) -> np.ndarray:
    n = labels.size
    graph = coo_matrix((np.ones(n, dtype=np.int8), (labels, labels[idx])), shape=(n, n))
    _, comp = connected_components(graph, directed=False)
    return comp[labels].astype(np.int64)


def _checkpoint_header(G: Group, gens) -> dict:
    from .beauville import element_width

    return {"schema": CHECKPOINT_SCHEMA, "group": G.spec.to_dict(), "width": element_width(G),
            "generators": generator_hash(gens)}


def _save_checkpoint(path: Path, header: dict, done: int, keys: np.ndarray, labels: np.ndarray):
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "wb") as fh:
        np.savez(fh, header=np.array(json.dumps({**header, "done": done})), keys=keys, labels=labels)
    os.replace(tmp, path)


def _load_checkpoint(path: Path, header: dict, keys: np.ndarray):
    if not path.exists():
        return 0, None
    with np.load(path) as data:
        saved = json.loads(str(data["header"]))
        done = saved.pop("done")
        if saved != header or not np.array_equal(data["keys"], keys):
            log.warning("checkpoint %s does not match this run; ignoring it", path)
            return 0, None
        return int(done), data["labels"].copy()


def estimate_memory_mb(states: int) -> float:
    # keys, labels, image indices, four decoded arrays and their images per chunk
    return states * 8 * 4 / 2**20 + 200.0


def orbit_partition(G: Group, gens: list[ActionGen] | None = None, keys: np.ndarray | None = None,
                    max_states: int = DEFAULT_MAX_STATES, memory_mb: float | None = None,
                    threads: int = 1, checkpoint: str | os.PathLike | None = None,
                    keep_labels: bool = False) -> OrbitResult:
    """Orbits of the action on all Beauville structures.

    Each generator contributes the edges ``t -> gen(t)``; merging the connected
    components generator by generator gives the orbits after one pass.
    """
    t0 = time.perf_counter()
    from .beauville import count_structures

    total = count_structures(G)
    if total > max_states:
        raise BudgetExceeded(f"|U(G)|={total} exceeds max_states={max_states}")
    if memory_mb is not None and estimate_memory_mb(total) > memory_mb:
        raise BudgetExceeded(f"|U(G)|={total} needs about {estimate_memory_mb(total):.0f} MB")
    gens = gens if gens is not None else au_generators(G)
    if keys is None:
        keys = enumerate_structure_keys(G, bound=max_states)
    header = _checkpoint_header(G, gens)
    path = Path(checkpoint) if checkpoint else None
    done, labels = (0, None)
    if path is not None:
        done, labels = _load_checkpoint(path, header, keys)
        if done:
            log.info("resuming from %s after %d generators", path, done)
    if labels is None:
        labels = np.arange(keys.size, dtype=np.int64)
    for n, gen in enumerate(gens):
        if n < done:
            continue
        idx = generator_images(G, gen, keys, threads=threads)
        labels = _merge(labels, idx)
        log.info("%s: %d components after %s", G.spec, np.unique(labels).size, gen.name)
        if path is not None:
            _save_checkpoint(path, header, n + 1, keys, labels)
    _, compact, counts = np.unique(labels, return_inverse=True, return_counts=True)
    sizes = dict(sorted(Counter(counts.tolist()).items()))
    return OrbitResult(int(counts.size), sizes, int(keys.size), time.perf_counter() - t0, _peak_mb(),
                       compact.astype(np.int64) if keep_labels else None, keys if keep_labels else None)


def orbit_of(G: Group, s: Structure, gens: list[ActionGen] | None = None,
             budget: int = DEFAULT_MAX_STATES) -> tuple[int, bool]:
    """Size of the orbit of ``s`` by breadth-first search.

    Returns ``(size, exact)``; when the budget is hit ``size`` is a lower bound.
    """
    gens = gens if gens is not None else au_generators(G)
    start = structure_key(G, *s.codes)
    seen = np.array([start], dtype=np.int64)
    frontier = seen.copy()
    while frontier.size:
        imgs = np.concatenate([structure_key(G, *g.apply(G, *decode_keys(G, frontier))) for g in gens])
        imgs = np.unique(imgs)
        frontier = imgs[~np.isin(imgs, seen, assume_unique=True)]
        seen = np.union1d(seen, frontier)
        if seen.size > budget:
            return int(seen.size), False
    return int(seen.size), True


# -- stabilizers ---------------------------------------------------------------


def classify_stabilizer(G: Group, s: Structure) -> str:
    if G.family not in (Family.ABELIAN, Family.SPLIT):
        raise ValueError("stabilizer cases are defined for the abelian and split families")
    prof = profile_of(G, s)
    q = G.pe
    if is_first_case(prof.k, prof.l, prof.m, prof.n, q):
        return "Case1"
    if is_second_case(prof.k, prof.l, prof.m, prof.n, q):
        return "Case2"
    return "Generic"


def _conjugator_for(G: Group, src: tuple, dst: tuple) -> int | None:
    """Some ``g`` with ``src_i^g = dst_i`` for both entries, or None."""
    T = G.transversal_mod_center()
    hit = np.flatnonzero((G.conj(src[0], T) == dst[0]) & (G.conj(src[1], T) == dst[1]))
    return int(T[hit[0]]) if hit.size else None


def build_case_stabilizer_witness(G: Group, s: Structure) -> Move | None:
    """An explicit element of order three in the stabilizer of a Case1 or Case2 structure.

    Takes ``alpha`` with ``alpha(x) = y`` and ``alpha(y) = (xy)^-1`` (so
    ``alpha o s_2`` fixes the first triple) and searches for the inner
    correction ``h`` on the second triple. Returns None for Generic structures.
    """
    case = classify_stabilizer(G, s)
    if case == "Generic":
        return None
    x, y, z = s.first.g1, s.first.g2, s.first.g3
    alpha = am.pair_automorphism(G, x, y, y, z)
    if alpha is None:
        raise AssertionError("no automorphism rotating the first triple")
    j = 2 if case == "Case1" else 1
    u, v = s.second.g1, s.second.g2
    src = tuple(alpha(t) for t in apply_sigma_pairs(G, j, u, v))
    g = _conjugator_for(G, src, (u, v))
    if g is None:
        raise AssertionError(f"commutator equation unsolvable for a {case} structure")
    h = int(am.invert(alpha)(g))
    move = Move(TripleOp(2, 0, alpha), TripleOp(j, h, alpha))
    if move.apply(G, s) != s:
        raise AssertionError("constructed witness does not fix the structure")
    return move


def build_swap_witness(G: Group, s: Structure) -> Move | None:
    """``(theta o iota_g, theta) o tau`` fixing ``s``, where ``theta`` maps the first triple to the second."""
    x, y = s.first.g1, s.first.g2
    u, v = s.second.g1, s.second.g2
    theta = am.pair_automorphism(G, x, y, u, v)
    if theta is None:
        return None
    g = _conjugator_for(G, (theta(u), theta(v)), (x, y))
    if g is None:
        return None
    move = Move(TripleOp(0, int(am.invert(theta)(g)), theta), TripleOp(0, 0, theta), swap=True)
    if move.apply(G, s) != s:
        raise AssertionError("constructed swap witness does not fix the structure")
    return move


def _inv2_mod(a, b, c, d, q: int, p: int):
    """Inverse of the matrix (a b; c d) modulo q = p^e, entrywise arrays."""
    from .beauville import _inv_mod

    det = (a * d - b * c) % q
    di = _inv_mod(det, q, q - q // p)
    return (d * di) % q, (-b * di) % q, (-c * di) % q, (a * di) % q


def abelian_stabilizer_sizes(G: Group, keys: np.ndarray) -> np.ndarray:
    """Stabilizer orders computed element by element in the abelian case.

    Every element of the action group is ``(alpha s_i, alpha s_j)`` or that
    composed with the swap; the first triple forces ``alpha``, so each of the
    72 choices of ``(i, j, swap)`` contributes at most one element.
    """
    if G.family is not Family.ABELIAN:
        raise ValueError("direct stabilizers are implemented for the abelian family")
    q = G.pe
    x1, y1, x2, y2 = decode_keys(G, keys)

    def vec(g):
        a, b, _ = G.decode(g)
        return a, b

    def forced_map(src, dst):
        # M with M*src_k = dst_k for the two basis vectors (columns)
        (ua, ub), (va, vb) = vec(src[0]), vec(src[1])
        (xa, xb), (ya, yb) = vec(dst[0]), vec(dst[1])
        i11, i12, i21, i22 = _inv2_mod(ua, va, ub, vb, q, G.p)
        m11 = (xa * i11 + ya * i21) % q
        m12 = (xa * i12 + ya * i22) % q
        m21 = (xb * i11 + yb * i21) % q
        m22 = (xb * i12 + yb * i22) % q
        return m11, m12, m21, m22

    def maps_to(M, src, dst):
        m11, m12, m21, m22 = M
        ok = True
        for g, h in zip(src, dst):
            a, b = vec(g)
            c, d = vec(h)
            ok = ok & ((m11 * a + m12 * b - c) % q == 0) & ((m21 * a + m22 * b - d) % q == 0)
        return ok

    count = np.zeros(keys.size, dtype=np.int64)
    first, second = (x1, y1), (x2, y2)
    for i in range(6):
        s1 = apply_sigma_pairs(G, i, x1, y1)
        s2i = apply_sigma_pairs(G, i, x2, y2)
        for j in range(6):
            s2 = apply_sigma_pairs(G, j, x2, y2)
            s1j = apply_sigma_pairs(G, j, x1, y1)
            # (alpha s_i, alpha s_j): alpha s_i T1 = T1 and alpha s_j T2 = T2
            M = forced_map(s1, first)
            count += maps_to(M, s2, second)
            # swap first: alpha s_i T2 = T1 and alpha s_j T1 = T2
            M = forced_map(s2i, first)
            count += maps_to(M, s1j, second)
    return count
