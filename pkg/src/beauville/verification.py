"""Registry of numerical checks run by ``beauville verify``.

Every check pairs a closed form with an independent computation and declares
a tier. ``fast`` checks finish in seconds, ``full`` in minutes, ``heavy`` ones
may need most of an hour. A suite runs every applicable check of its tier and
below; a check that would exceed the configured budget is reported as skipped.
"""
from __future__ import annotations

import logging
import time
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import automorphism as am
from . import formulas
from .action import (
    BudgetExceeded,
    a_u_order,
    abelian_stabilizer_sizes,
    estimate_memory_mb,
    orbit_partition,
    verify_composition_table,
    verify_s3_quotient,
)
from .beauville import (
    count_lemma53,
    count_structures,
    enumerate_structure_keys,
    is_beauville_direct_batch,
    is_beauville_fast_codes,
    keys_supported,
    profile_case_counts,
    stream_count_structures,
)
from .groups import BRUTE_FORCE_LIMIT, Family, Group

log = logging.getLogger(__name__)

TIERS = ("fast", "full", "heavy")
SCHEMA = 1


class Skip(Exception):
    """Raised by a check that does not fit the budget."""


@dataclass
class Budget:
    max_states: int = 2 * 10**7
    memory_mb: float = 4096.0
    threads: int = 1
    seed: int = 0
    samples: int = 10**5
    checkpoint: str | None = None


@dataclass
class CheckResult:
    name: str
    anchor: str
    tier: str
    expected: object
    actual: object
    passed: bool | None
    status: str
    elapsed_ms: int
    note: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class VerificationReport:
    group: dict
    suite: str
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def summary(self) -> dict:
        return {s: sum(c.status == s for c in self.checks) for s in ("passed", "failed", "skipped")}

    @property
    def exit_code(self) -> int:
        s = self.summary
        if s["failed"]:
            return 1
        return 3 if s["skipped"] else 0

    def to_dict(self, timings: bool = True) -> dict:
        rows = [c.to_dict() for c in self.checks]
        if not timings:
            for r in rows:
                r["elapsed_ms"] = 0
        return {"schema": SCHEMA, "group": self.group, "suite": self.suite,
                "checks": rows, "summary": self.summary}


@dataclass(frozen=True)
class Check:
    name: str
    anchor: str
    tier: Callable[[Group], str] | str
    applies: Callable[[Group], bool]
    run: Callable[[Group, Budget], tuple[object, object]]

    def tier_for(self, G: Group) -> str:
        return self.tier(G) if callable(self.tier) else self.tier


REGISTRY: list[Check] = []


def check(name: str, anchor: str, tier, applies=lambda G: True):
    def deco(fn):
        REGISTRY.append(Check(name, anchor, tier, applies, fn))
        return fn
    return deco


def _small(G: Group) -> bool:
    return G.order <= BRUTE_FORCE_LIMIT


def _class2_cases(G: Group) -> bool:
    return G.family in (Family.ABELIAN, Family.SPLIT)


def _state_tier(G: Group) -> str:
    n = count_structures(G)
    if n <= 10**5:
        return "fast"
    return "full" if n <= 2 * 10**6 else "heavy"


def _count_tier(G: Group) -> str:
    n = count_structures(G)
    if n <= 10**5:
        return "fast"
    return "full" if n <= 2 * 10**7 else "heavy"


def _need_states(G: Group, budget: Budget):
    n = count_structures(G)
    if n > budget.max_states:
        raise Skip(f"|U(G)|={n} exceeds max_states={budget.max_states}")
    if estimate_memory_mb(n) > budget.memory_mb:
        raise Skip(f"|U(G)|={n} needs about {estimate_memory_mb(n):.0f} MB")
    if not keys_supported(G):
        raise Skip("structure keys do not fit in 64 bits")
    return n


# -- group core ------------------------------------------------------------------


@check("center_order", "centre order closed form vs membership scan", "fast", _small)
def _center(G, budget):
    return G.center_order(), int(G.brute_center().size)


@check("derived_order", "derived subgroup order closed form vs commutator closure", "fast",
       lambda G: G.order <= 3125)
def _derived(G, budget):
    return G.derived_order(), int(G.brute_derived().size)


@check("inheritance_hypotheses", "lines, Frattini quotient and exponent behave as for C_p x C_p",
       "fast", lambda G: G.order <= 10**4)
def _inherit(G, budget):
    return True, bool(G.check_inheritance_hypotheses())


# -- automorphisms ---------------------------------------------------------------


@check("aut_order", "automorphism count closed form vs parameter enumeration with validation",
       lambda G: "fast" if am.aut_order(G) <= 10**5 else "full")
def _aut(G, budget):
    n = am.aut_order(G)
    if n > budget.max_states:
        raise Skip(f"|Aut(G)|={n} exceeds max_states")
    A, B = am.all_automorphisms(G, bound=budget.max_states)
    ok = bool(np.all(am.is_automorphism(G, A, B)))
    distinct = np.unique(am.pair_key(G, A, B)).size
    return n, int(distinct) if ok else -1


@check("aut_generators", "the listed generators generate Aut(G)", "full",
       lambda G: am.aut_order(G) <= 10**6)
def _autgen(G, budget):
    return am.aut_order(G), am.closure_size(G, am.aut_generators(G))


@check("out_involutions", "involutions of Out(G) closed form vs coset counting", "full",
       lambda G: G.family in (Family.METACYCLIC, Family.FUSED))
def _outinv(G, budget):
    if am.out_order(G) > budget.max_states:
        raise Skip(f"|Out(G)|={am.out_order(G)} exceeds max_states")
    return formulas.out_involutions_formula(G.spec), am.count_out_involutions_by_conjugation(G)


# -- structures ------------------------------------------------------------------


@check("u_count", "number of Beauville structures closed form vs enumeration", _count_tier)
def _ucount(G, budget):
    n = count_structures(G)
    if n <= budget.max_states and estimate_memory_mb(n) <= budget.memory_mb and keys_supported(G):
        return n, int(enumerate_structure_keys(G, bound=budget.max_states).size)
    if G.order > 10**4:
        raise Skip(f"|U(G)|={n} is beyond streamed counting")
    return n, stream_count_structures(G)


@check("oracle_equivalence", "line criterion agrees with the definition on random candidates",
       lambda G: "fast" if G.order <= 125 else "full", lambda G: G.order <= 10**4)
def _oracle(G, budget):
    rng = np.random.default_rng(budget.seed)
    x, y = G.generating_pairs()
    n = budget.samples
    i, j = rng.integers(0, x.size, n), rng.integers(0, x.size, n)
    fast = is_beauville_fast_codes(G, x[i], y[i], x[j], y[j])
    direct = is_beauville_direct_batch(G, x[i], y[i], x[j], y[j])
    return 0, int(np.count_nonzero(fast != direct))


@check("lemma53", "first congruence case count closed form vs profile filter", _count_tier,
       _class2_cases)
def _lemma53(G, budget):
    _need_states(G, budget)
    keys = enumerate_structure_keys(G, bound=budget.max_states)
    return count_lemma53(G), profile_case_counts(G, keys)["first"]


# -- action ----------------------------------------------------------------------


@check("composition_table", "all 36 products of the six permutations", "fast",
       lambda G: G.order <= 625)
def _table(G, budget):
    res = verify_composition_table(G)
    return 36, sum(res.values())


@check("s3_quotient", "the permutation moves give S3 modulo conjugation", "fast",
       lambda G: G.order <= 625)
def _s3(G, budget):
    return True, bool(verify_s3_quotient(G))


def _orbits(G, budget):
    _need_states(G, budget)
    try:
        return orbit_partition(G, max_states=budget.max_states, memory_mb=budget.memory_mb,
                               threads=budget.threads, checkpoint=budget.checkpoint)
    except BudgetExceeded as exc:
        raise Skip(str(exc)) from exc


@check("orbit_count", "orbit count equals the closed form", _state_tier, _class2_cases)
def _orbit_count(G, budget):
    return formulas.orbit_count_report(G.spec).value, _orbits(G, budget).orbit_count


@check("cauchy_frobenius", "stabilizer sizes sum to orbit count times |A_U|",
       lambda G: "fast" if count_structures(G) <= 10**5 else "full",
       lambda G: G.family is Family.ABELIAN)
def _cf(G, budget):
    _need_states(G, budget)
    keys = enumerate_structure_keys(G, bound=budget.max_states)
    stab = abelian_stabilizer_sizes(G, keys)
    j2 = 1  # J(G) is trivial for abelian groups
    allowed = {j2, 2 * j2, 3 * j2, 6 * j2}
    if not set(np.unique(stab).tolist()) <= allowed:
        return sorted(allowed), sorted(set(np.unique(stab).tolist()))
    orbits = formulas.orbit_count_report(G.spec).value
    return orbits * a_u_order(G), int(stab.sum())


# -- formulas --------------------------------------------------------------------


@check("formula_exactness", "closed-form orbit count is an exact integer", "fast",
       lambda G: G.family is not Family.METACYCLIC or G.spec.e >= 2)
def _exact(G, budget):
    r = formulas.orbit_count_report(G.spec)
    return True, isinstance(r.value, int) and r.value >= 0


# -- running -----------------------------------------------------------------------


def _run_one(c: Check, G: Group, budget: Budget) -> CheckResult:
    tier = c.tier_for(G)
    t0 = time.perf_counter()
    try:
        expected, actual = c.run(G, budget)
        status = "passed" if expected == actual else "failed"
        passed, note = expected == actual, ""
    except Skip as exc:
        expected = actual = None
        status, passed, note = "skipped", None, str(exc)
    elapsed = int(round((time.perf_counter() - t0) * 1000))
    log.info("%s %s: %s (%d ms)", G.spec, c.name, status, elapsed)
    return CheckResult(c.name, c.anchor, tier, _plain(expected), _plain(actual), passed, status,
                       elapsed, note)


def _plain(v):
    if isinstance(v, np.generic):
        return v.item()
    return v


def run_suite(G: Group, suite: str = "fast", budget: Budget | None = None,
              only: list[str] | None = None) -> VerificationReport:
    if suite not in TIERS:
        raise ValueError(f"unknown suite {suite!r}")
    budget = budget or Budget()
    limit = TIERS.index(suite)
    report = VerificationReport(G.spec.to_dict(), suite)
    for c in REGISTRY:
        if only and c.name not in only:
            continue
        if not c.applies(G) or TIERS.index(c.tier_for(G)) > limit:
            continue
        report.checks.append(_run_one(c, G, budget))
    return report
