"""Two-generator p-groups given by power-commutator presentations.

Four families are supported::

    abelian     C_{p^e} x C_{p^e}
    metacyclic  <a, b | a^{p^e} = b^{p^e} = 1, [a, b] = a^{p^i}>,   1 <= i <= e-1
    split       <a, b | a^{p^e} = b^{p^e} = [b,a]^{p^j} = 1, class 2>,   0 < j <= e
    fused       <a, b | a^{p^e} = [b,a]^{p^j} = 1, b^{p^i} = [b,a]^{p^k}, class 2>,
                0 < k < j <= i <= e,  e = i + j - k

Elements are stored as non-negative integer codes of their normal form, so
every operation below works equally on Python ints and on numpy arrays.
Normal forms are ``a^x b^y c^z`` with ``c = [b, a]`` for the class-2 families
and ``b^y a^x`` for the metacyclic family (where ``G' = <a^{p^i}>`` is absorbed
by the a-exponent).

Commutators are ``[g, h] = g^-1 h^-1 g h`` and conjugates ``g^h = h^-1 g h``.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .residue import Modulus

# Vectorized arithmetic multiplies two residues in int64.
MAX_EXPONENT_MODULUS = 2**31
BRUTE_FORCE_LIMIT = 10**6


class Family(str, enum.Enum):
    ABELIAN = "abelian"
    METACYCLIC = "metacyclic"
    SPLIT = "split"
    FUSED = "fused"


@dataclass(frozen=True)
class GroupSpec:
    """Family tag plus the integer parameters of its presentation."""

    family: Family
    p: int
    e: int
    i: int = 0
    j: int = 0
    k: int = 0

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        Modulus(self.p, self.e)  # validates p prime >= 5, e >= 1
        p, e, i, j, k = self.p, self.e, self.i, self.j, self.k
        fam = self.family
        if fam is Family.ABELIAN:
            if i or j or k:
                raise ValueError("abelian family takes no i, j, k")
        elif fam is Family.METACYCLIC:
            if not 1 <= i <= e - 1:
                raise ValueError(f"metacyclic family needs 1 <= i <= e-1 (got i={i}, e={e})")
            if j or k:
                raise ValueError("metacyclic family takes no j, k")
        elif fam is Family.SPLIT:
            if not 0 < j <= e:
                raise ValueError(f"split family needs 0 < j <= e (got j={j}, e={e})")
            if i or k:
                raise ValueError("split family takes no i, k")
        elif fam is Family.FUSED:
            if not 0 < k < j <= i <= e:
                raise ValueError(f"fused family needs 0 < k < j <= i <= e (got k={k}, j={j}, i={i}, e={e})")
            if e != i + j - k:
                raise ValueError(f"fused family needs e = i + j - k (got {e} != {i + j - k})")
        if p**e >= MAX_EXPONENT_MODULUS:
            raise ValueError(f"p^e = {p**e} is too large for vectorized arithmetic")

    @classmethod
    def abelian(cls, p: int, e: int = 1) -> GroupSpec:
        return cls(Family.ABELIAN, p, e)

    @classmethod
    def metacyclic(cls, p: int, e: int, i: int) -> GroupSpec:
        return cls(Family.METACYCLIC, p, e, i=i)

    @classmethod
    def split(cls, p: int, e: int, j: int) -> GroupSpec:
        return cls(Family.SPLIT, p, e, j=j)

    @classmethod
    def fused(cls, p: int, e: int, i: int, j: int, k: int) -> GroupSpec:
        return cls(Family.FUSED, p, e, i=i, j=j, k=k)

    @property
    def log_order(self) -> int:
        e, i, j = self.e, self.i, self.j
        return {
            Family.ABELIAN: 2 * e,
            Family.METACYCLIC: 2 * e,
            Family.SPLIT: 2 * e + j,
            Family.FUSED: e + i + j,
        }[self.family]

    @property
    def order(self) -> int:
        return self.p**self.log_order

    def to_dict(self) -> dict:
        return {"family": self.family.value, "p": self.p, "e": self.e,
                "i": self.i, "j": self.j, "k": self.k}

    @classmethod
    def from_dict(cls, d: dict) -> GroupSpec:
        return cls(Family(d["family"]), int(d["p"]), int(d["e"]),
                   int(d.get("i", 0)), int(d.get("j", 0)), int(d.get("k", 0)))

    def __str__(self) -> str:
        extra = {Family.ABELIAN: "", Family.METACYCLIC: f", i={self.i}",
                 Family.SPLIT: f", j={self.j}",
                 Family.FUSED: f", i={self.i}, j={self.j}, k={self.k}"}[self.family]
        return f"{self.family.value}(p={self.p}, e={self.e}{extra})"


@dataclass(frozen=True)
class Element:
    """Exponent tuple of a normal form; ``z`` is the exponent of ``c = [b, a]``."""

    x: int
    y: int
    z: int = 0


class Line(NamedTuple):
    """A point of P^1(F_p), i.e. a maximal subgroup; normalized to (1:s) or (0:1)."""

    u: int
    v: int


_TERM = re.compile(r"([abc])\^?(-?\d+)?")


class Group:
    """Closed-form arithmetic for one group of the four families."""

    def __init__(self, spec: GroupSpec):
        self.spec = spec
        p, e, i, j, k = spec.p, spec.e, spec.i, spec.j, spec.k
        self.p = p
        self.family = spec.family
        self.pe = p**e
        fam = spec.family
        self.ma = self.pe
        self.mb = p**i if fam is Family.FUSED else self.pe
        self.mc = p**j if fam in (Family.SPLIT, Family.FUSED) else 1
        self.order = self.ma * self.mb * self.mc
        assert self.order == spec.order
        self.exponent = self.pe
        if fam is Family.METACYCLIC:
            # (1 + p^i) has multiplicative order p^(e-i) modulo p^e
            self._rorder = p ** (e - i)
            r = 1 + p**i
            self._rpow = np.array([pow(r, t, self.pe) for t in range(self._rorder)], dtype=np.int64)
        if fam is Family.FUSED:
            self._pk = p**k
        self.identity = 0
        self.a = self.encode(1, 0, 0)
        self.b = self.encode(0, 1, 0)
        self.c = self.comm(self.b, self.a)

    def __repr__(self) -> str:
        return f"Group({self.spec})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Group) and other.spec == self.spec

    def __hash__(self) -> int:
        return hash(self.spec)

    # -- codes ---------------------------------------------------------------

    def encode(self, x, y, z=0):
        """Code of the normal form with (possibly unreduced) exponents."""
        if self.family is Family.FUSED:
            q = y // self.mb  # b^{p^i} = c^{p^k}
            y = y - q * self.mb
            z = z + q * self._pk
        return (x % self.ma) + self.ma * ((y % self.mb) + self.mb * (z % self.mc))

    def decode(self, g):
        x = g % self.ma
        rest = g // self.ma
        return x, rest % self.mb, rest // self.mb

    def element(self, g) -> Element:
        x, y, z = self.decode(int(g))
        return Element(int(x), int(y), int(z))

    def code(self, el: Element) -> int:
        return int(self.encode(el.x, el.y, el.z))

    def elements(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    def format(self, g) -> str:
        x, y, z = self.decode(int(g))
        if self.family is Family.METACYCLIC:
            return f"b^{y} a^{x}"
        if self.family is Family.ABELIAN:
            return f"a^{x} b^{y}"
        return f"a^{x} b^{y} c^{z}"

    def parse(self, text: str) -> int:
        """Evaluate a word like ``a^3 b^-1 c^2`` (factors multiplied left to right)."""
        g = self.identity
        pos = 0
        text = text.strip()
        if text in ("", "1"):
            return self.identity
        for m in _TERM.finditer(text):
            if text[pos:m.start()].strip():
                raise ValueError(f"cannot parse element {text!r}")
            pos = m.end()
            base = {"a": self.a, "b": self.b, "c": self.c}[m.group(1)]
            n = int(m.group(2)) if m.group(2) is not None else 1
            g = self.mul(g, self.pow(base, n))
        if text[pos:].strip():
            raise ValueError(f"cannot parse element {text!r}")
        return int(g)

    # -- arithmetic ----------------------------------------------------------

    def mul(self, g, h):
        x1, y1, z1 = self.decode(g)
        x2, y2, z2 = self.decode(h)
        if self.family is Family.METACYCLIC:
            # (b^y1 a^x1)(b^y2 a^x2) = b^(y1+y2) a^(x1 (1+p^i)^y2 + x2)
            x = (x1 * self._rpow[y2 % self._rorder] + x2) % self.ma
            return self.encode(x, y1 + y2)
        if self.family is Family.ABELIAN:
            return self.encode(x1 + x2, y1 + y2)
        # b^y1 a^x2 = a^x2 b^y1 c^(y1 x2)
        return self.encode(x1 + x2, y1 + y2, z1 + z2 + (y1 * x2) % self.mc)

    def inv(self, g):
        x, y, z = self.decode(g)
        if self.family is Family.METACYCLIC:
            return self.encode((-x * self._rpow[(-y) % self._rorder]) % self.ma, -y)
        if self.family is Family.ABELIAN:
            return self.encode(-x, -y)
        return self.encode(-x, -y, -z + (x * y) % self.mc)

    def pow(self, g, n):
        """``g**n``; ``n`` may be negative and may be an array."""
        if isinstance(n, np.ndarray) or isinstance(g, np.ndarray):
            n = np.asarray(n, dtype=np.int64) % self.exponent
        else:
            n = int(n) % self.exponent
        if self.family is Family.METACYCLIC:
            return self._pow_binary(g, n)
        x, y, z = self.decode(g)
        if self.family is Family.ABELIAN:
            return self.encode(n * x, n * y)
        # (a^x b^y c^z)^n = a^(nx) b^(ny) c^(nz + xy n(n-1)/2)
        tri = (n * (n - 1) // 2) % self.mc
        return self.encode(n * x, n * y, n * z + ((x * y) % self.mc) * tri)

    def _pow_binary(self, g, n):
        if isinstance(n, np.ndarray) or isinstance(g, np.ndarray):
            g, n = np.broadcast_arrays(np.asarray(g, dtype=np.int64), n)
            result = np.zeros(g.shape, dtype=np.int64)
            base = g.copy()
            n = n.copy()
            while n.any():
                odd = (n & 1).astype(bool)
                result = np.where(odd, self.mul(result, base), result)
                base = self.mul(base, base)
                n >>= 1
            return result
        result, base = self.identity, g
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def pow_iterated(self, g, n: int):
        """``g**n`` for ``n >= 0`` by repeated multiplication (reference path)."""
        result = self.identity
        for _ in range(n):
            result = self.mul(result, g)
        return result

    def conj(self, g, h):
        """``g^h = h^-1 g h``."""
        return self.mul(self.mul(self.inv(h), g), h)

    def comm(self, g, h):
        """``[g, h] = g^-1 h^-1 g h``."""
        return self.mul(self.mul(self.inv(g), self.inv(h)), self.mul(g, h))

    def order_of(self, g) -> int:
        n = 1
        while g != self.identity:
            g = self.pow(g, self.p)
            n *= self.p
        return n

    def orders(self, g: np.ndarray) -> np.ndarray:
        g = np.asarray(g, dtype=np.int64)
        out = np.ones(g.shape, dtype=np.int64)
        while True:
            live = g != self.identity
            if not live.any():
                return out
            out[live] *= self.p
            g = np.where(live, self.pow(g, self.p), g)

    # -- structure -----------------------------------------------------------

    def exps(self, g):
        return self.decode(g)

    def in_frattini(self, g):
        x, y, _ = self.decode(g)
        return (x % self.p == 0) & (y % self.p == 0)

    def in_center(self, g):
        x, y, _ = self.decode(g)
        s = self.spec
        if self.family is Family.ABELIAN:
            return np.ones_like(x, dtype=bool) if isinstance(x, np.ndarray) else True
        if self.family is Family.METACYCLIC:
            q = self.p ** (s.e - s.i)
        else:
            q = self.p**s.j
        return (x % q == 0) & (y % q == 0)

    def in_derived(self, g):
        x, y, _ = self.decode(g)
        s = self.spec
        if self.family is Family.METACYCLIC:
            return (x % self.p**s.i == 0) & (y == 0)
        return (x == 0) & (y == 0)

    def center_order(self) -> int:
        s, p = self.spec, self.p
        return {
            Family.ABELIAN: p ** (2 * s.e),
            Family.METACYCLIC: p ** (2 * s.i),
            Family.SPLIT: p ** (2 * s.e - s.j),
            Family.FUSED: p ** (s.e + s.i - s.j),
        }[self.family]

    def derived_order(self) -> int:
        s, p = self.spec, self.p
        return {
            Family.ABELIAN: 1,
            Family.METACYCLIC: p ** (s.e - s.i),
            Family.SPLIT: p**s.j,
            Family.FUSED: p**s.j,
        }[self.family]

    def frattini_order(self) -> int:
        return self.order // self.p**2

    def inner_order(self) -> int:
        return self.order // self.center_order()

    def nilpotency_class(self) -> int:
        s = self.spec
        if self.family is Family.ABELIAN:
            return 1
        if self.family is Family.METACYCLIC:
            return -(-s.e // s.i)
        return 2

    def line_index(self, g):
        """Index of the maximal subgroup containing ``g``: ``s`` for (1:s), ``p`` for (0:1), -1 in Phi(G)."""
        x, y, _ = self.decode(g)
        p = self.p
        xr, yr = x % p, y % p
        if isinstance(xr, np.ndarray):
            inv = np.array([0] + [pow(t, -1, p) for t in range(1, p)], dtype=np.int64)
            out = np.where(xr != 0, (yr * inv[xr]) % p, p)
            return np.where((xr == 0) & (yr == 0), -1, out)
        if xr:
            return (yr * pow(int(xr), -1, p)) % p
        return p if yr else -1

    def line_of(self, g) -> Line:
        idx = self.line_index(int(g))
        if idx < 0:
            raise ValueError(f"{self.format(g)} lies in the Frattini subgroup")
        return Line(0, 1) if idx == self.p else Line(1, int(idx))

    def is_generating_pair(self, g, h):
        x1, y1, _ = self.decode(g)
        x2, y2, _ = self.decode(h)
        return (x1 * y2 - x2 * y1) % self.p != 0

    def generating_pairs(self) -> tuple[np.ndarray, np.ndarray]:
        """All ordered generating pairs, sorted by ``(x, y)`` code."""
        g = self.elements()
        outside = g[~self.in_frattini(g)]
        xs = np.repeat(outside, outside.size)
        ys = np.tile(outside, outside.size)
        ok = self.is_generating_pair(xs, ys)
        return xs[ok], ys[ok]

    def center_rep(self, g):
        """Canonical representative of the coset ``g Z(G)``."""
        if self.family is Family.ABELIAN:
            return np.zeros_like(g) if isinstance(g, np.ndarray) else 0
        s = self.spec
        q = self.p ** (s.e - s.i) if self.family is Family.METACYCLIC else self.p**s.j
        x, y, _ = self.decode(g)
        return self.encode(x % q, y % q, 0)

    def transversal_mod_center(self) -> np.ndarray:
        """One representative of each coset of Z(G)."""
        g = self.elements()
        x, y, z = self.decode(g)
        s = self.spec
        if self.family is Family.ABELIAN:
            return np.zeros(1, dtype=np.int64)
        q = self.p ** (s.e - s.i) if self.family is Family.METACYCLIC else self.p**s.j
        return g[(x < q) & (y < q) & (z == 0)]

    # -- relators ------------------------------------------------------------

    def relators_hold(self, A, B):
        """Whether images ``A``, ``B`` of ``a``, ``b`` satisfy every defining relation."""
        s, pe = self.spec, self.pe
        one = self.identity
        ok = (self.pow(A, pe) == one) & (self.pow(B, pe) == one)
        if self.family is Family.ABELIAN:
            return ok & (self.comm(A, B) == one)
        if self.family is Family.METACYCLIC:
            return ok & (self.comm(A, B) == self.pow(A, self.p**s.i))
        C = self.comm(B, A)
        ok = ok & (self.comm(C, A) == one) & (self.comm(C, B) == one)
        ok = ok & (self.pow(C, self.p**s.j) == one)
        if self.family is Family.FUSED:
            ok = ok & (self.pow(B, self.p**s.i) == self.pow(C, self.p**s.k))
        return ok

    # -- brute-force oracles -------------------------------------------------

    def _require_small(self):
        if self.order > BRUTE_FORCE_LIMIT:
            raise ValueError(f"|G|={self.order} exceeds the brute-force guard {BRUTE_FORCE_LIMIT}")

    def brute_center(self) -> np.ndarray:
        self._require_small()
        g = self.elements()
        return g[(self.comm(g, self.a) == 0) & (self.comm(g, self.b) == 0)]

    def generated_subgroup(self, gens) -> np.ndarray:
        """Subgroup generated by ``gens``, by closing under right multiplication."""
        self._require_small()
        gens = np.unique(np.asarray(gens, dtype=np.int64))
        seen = np.zeros(self.order, dtype=bool)
        seen[0] = True
        frontier = np.array([0], dtype=np.int64)
        while frontier.size:
            nxt = self.mul(frontier[:, None], gens[None, :]).ravel()
            nxt = np.unique(nxt[~seen[nxt]])
            seen[nxt] = True
            frontier = nxt
        return np.flatnonzero(seen)

    def brute_derived(self) -> np.ndarray:
        self._require_small()
        g = self.elements()
        comms = self.comm(g[:, None], g[None, :]).ravel()
        return self.generated_subgroup(np.unique(comms))

    def check_inheritance_hypotheses(self) -> bool:
        """Brute-force check of the power-structure hypotheses under which
        every Beauville structure is inherited from G/Phi(G).

        Checks ``x^q == y^q  <=>  (x y^-1)^q == 1`` for all pairs, where
        ``q = p^(e-1)`` and ``p^e`` is the exponent, and
        ``|G : Omega_{e-1}(G)| <= p^3``.
        """
        if self.order > 10**4:
            raise ValueError(f"|G|={self.order} too large for the all-pairs check")
        g = self.elements()
        q = self.exponent // self.p
        powq = self.pow(g, q)
        x, y = g[:, None], g[None, :]
        lhs = powq[x] == powq[y]
        rhs = self.pow(self.mul(x, self.inv(y)), q) == 0
        if not np.array_equal(lhs, rhs):
            return False
        small = g[powq == 0]  # elements of order at most p^(e-1)
        omega = self.generated_subgroup(small)
        return self.order // omega.size <= self.p**3
