"""Command-line interface: ``beauville {info,formula,tables,verify,count-orbits}``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import automorphism as am
from . import formulas
from .action import BudgetExceeded, DEFAULT_MAX_STATES, orbit_of, orbit_partition
from .beauville import count_structures, random_structure
from .groups import BRUTE_FORCE_LIMIT, Family, Group, GroupSpec
from .residue import is_prime
from .verification import SCHEMA, TIERS, Budget, run_suite

log = logging.getLogger("beauville")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_SKIP = 0, 1, 2, 3
DEFAULT_MEMORY_MB = 4096.0
PARTIAL_STATES = 10**5


@dataclass
class RunConfig:
    command: str
    spec: GroupSpec | None
    max_states: int
    memory_mb: float
    threads: int
    fmt: str
    seed: int
    checkpoint: str | None

    def budget(self, samples: int = 10**5) -> Budget:
        return Budget(self.max_states, self.memory_mb, self.threads, self.seed, samples, self.checkpoint)


class UsageError(Exception):
    pass


def _spec_from_args(args) -> GroupSpec:
    if args.family is None or args.p is None:
        raise UsageError("--family and --p are required")
    fam = Family(args.family)
    try:
        if fam is Family.ABELIAN:
            return GroupSpec.abelian(args.p, args.e or 1)
        if fam is Family.METACYCLIC:
            return GroupSpec.metacyclic(args.p, _need(args, "e"), _need(args, "i"))
        if fam is Family.SPLIT:
            return GroupSpec.split(args.p, _need(args, "e"), _need(args, "j"))
        return GroupSpec.fused(args.p, _need(args, "e"), _need(args, "i"), _need(args, "j"), _need(args, "k"))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _need(args, name):
    v = getattr(args, name)
    if v is None:
        raise UsageError(f"--{name} is required for the {args.family} family")
    return v


def _config(args) -> RunConfig:
    memory = float(os.environ.get("BEAUVILLE_BUDGET_MB", args.memory_mb))
    if args.max_states <= 0 or memory <= 0 or args.threads <= 0:
        raise UsageError("budgets must be positive")
    needs_group = args.command in ("info", "verify", "count-orbits", "formula")
    spec = _spec_from_args(args) if needs_group else None
    return RunConfig(args.command, spec, args.max_states, memory, args.threads, args.format, args.seed,
                     args.checkpoint)


# -- output ----------------------------------------------------------------------


def _emit(rows: list[dict], fmt: str, header: dict | None = None, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        doc = {"schema": SCHEMA, **(header or {}), "rows": rows}
        out.write(json.dumps(doc, indent=2, sort_keys=True, default=_json_default) + "\n")
    elif fmt == "csv":
        out.write(rows_to_csv(rows))
    else:
        for key, val in (header or {}).items():
            out.write(f"{key}: {val}\n")
        for r in rows:
            out.write("  ".join(f"{k}={_text(v)}" for k, v in r.items()) + "\n")


def _json_default(v):
    if isinstance(v, np.generic):
        return v.item()
    raise TypeError(f"not serializable: {type(v).__name__}")


def _text(v) -> str:
    if isinstance(v, dict):
        return json.dumps(v, sort_keys=True, separators=(",", ":"))
    return str(v)


def _flat(row: dict) -> dict:
    return {k: (json.dumps(v, sort_keys=True) if isinstance(v, (dict, list, bool)) else v) for k, v in row.items()}


def rows_to_csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    fields = list(dict.fromkeys(k for r in rows for k in r))
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(_flat(r))
    return buf.getvalue()


def csv_to_rows(text: str) -> list[dict]:
    """Inverse of ``rows_to_csv`` for rows whose values are ints, bools, strings or JSON."""
    out = []
    for r in csv.DictReader(io.StringIO(text)):
        out.append({k: _parse_cell(v) for k, v in r.items()})
    return out


def _parse_cell(v: str):
    if v == "":
        return None
    try:
        return json.loads(v)
    except json.JSONDecodeError:
        return v


# -- commands ----------------------------------------------------------------------


def cmd_info(cfg: RunConfig) -> int:
    G = Group(cfg.spec)
    row = {"group": str(cfg.spec), "order": G.order, "exponent": G.exponent,
           "center_order": G.center_order(), "derived_order": G.derived_order(),
           "frattini_order": G.frattini_order(), "nilpotency_class": G.nilpotency_class(),
           "aut_order": am.aut_order(G), "out_order": am.out_order(G),
           "u_count": count_structures(G)}
    code = EXIT_OK
    if G.order <= BRUTE_FORCE_LIMIT:
        brute = int(G.brute_center().size)
        row["center_order_brute"] = brute
        if brute != row["center_order"]:
            code = EXIT_FAIL
    _emit([row], cfg.fmt)
    return code


def cmd_formula(cfg: RunConfig, name: str) -> int:
    try:
        value = formulas.order_formula(name, cfg.spec)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    row = {"formula": name, "group": cfg.spec.to_dict(), "value": value}
    if name == "orbit_count":
        rep = formulas.orbit_count_report(cfg.spec)
        row.update(theorem=rep.name, notes=list(rep.notes))
    _emit([row], cfg.fmt)
    return EXIT_OK


def _parse_range(text: str, name: str) -> list[int]:
    vals: list[int] = []
    try:
        for part in text.split(","):
            if "-" in part:
                lo, hi = (int(t) for t in part.split("-"))
                vals.extend(range(lo, hi + 1))
            else:
                vals.append(int(part))
    except ValueError as exc:
        raise UsageError(f"bad {name} range {text!r}") from exc
    return vals


def cmd_tables(cfg: RunConfig, p_range: str, e_range: str) -> int:
    primes = [p for p in _parse_range(p_range, "p") if is_prime(p) and p >= 5]
    exps = [e for e in _parse_range(e_range, "e") if e >= 1]
    if not primes or not exps:
        raise UsageError("need at least one prime p >= 5 and one exponent e >= 1")
    rows = []
    for r in formulas.table_rows(primes, exps):
        num = {"theorem_A": formulas.theorem_A_numerator, "theorem_B": formulas.theorem_B_numerator,
               "theorem_C": formulas.theorem_C_numerator}[r.name](**r.inputs)
        rows.append({"formula": r.name, "p": r.inputs["p"], "e": r.inputs["e"], "j": r.inputs.get("j"),
                     "value": r.value, "exact": num % 72 == 0})
    _emit(rows, cfg.fmt)
    return EXIT_OK


def cmd_verify(cfg: RunConfig, suite: str, samples: int, timings: bool) -> int:
    G = Group(cfg.spec)
    report = run_suite(G, suite, cfg.budget(samples))
    doc = report.to_dict(timings=timings)
    if cfg.fmt == "json":
        sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True, default=_json_default) + "\n")
    elif cfg.fmt == "csv":
        sys.stdout.write(rows_to_csv(doc["checks"]))
    else:
        print(f"{cfg.spec}  suite={suite}")
        for c in doc["checks"]:
            tag = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[c["status"]]
            line = f"{tag}  {c['name']:<24} expected={c['expected']} actual={c['actual']}"
            if timings:
                line += f"  {c['elapsed_ms']} ms"
            if c["note"]:
                line += f"  ({c['note']})"
            print(line)
        print(json.dumps(doc["summary"], sort_keys=True))
    return report.exit_code


def cmd_count_orbits(cfg: RunConfig) -> int:
    G = Group(cfg.spec)
    total = count_structures(G)
    try:
        expected = formulas.orbit_count_report(cfg.spec).value
    except ValueError:
        expected = None
    row = {"group": cfg.spec.to_dict(), "u_count": total, "formula_value": expected}
    try:
        res = orbit_partition(G, max_states=cfg.max_states, memory_mb=cfg.memory_mb, threads=cfg.threads,
                              checkpoint=cfg.checkpoint)
    except BudgetExceeded as exc:
        s = random_structure(G, np.random.default_rng(cfg.seed))
        size, exact = orbit_of(G, s, budget=min(PARTIAL_STATES, cfg.max_states))
        row.update(status="skipped",
                   message=f"U(G) = {total} exceeds budget; formula value {expected}",
                   reason=str(exc), seed_orbit_size=size, seed_orbit_exact=exact)
        _emit([row], cfg.fmt)
        print(row["message"], file=sys.stderr)
        return EXIT_SKIP
    match = res.orbit_count == expected if expected is not None else None
    row.update(status="passed" if match else "failed", orbit_count=res.orbit_count,
               sizes={str(k): v for k, v in res.sizes.items()}, match=match)
    _emit([row], cfg.fmt)
    return EXIT_OK if match else EXIT_FAIL


# -- entry point -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--family", choices=[f.value for f in Family])
    for name in ("p", "e", "i", "j", "k"):
        common.add_argument(f"--{name}", type=int)
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES)
    common.add_argument("--memory-mb", type=float, default=DEFAULT_MEMORY_MB)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--checkpoint", metavar="PATH")
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="beauville", description="Beauville structures on 2-generator p-groups")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("info", parents=[common], help="group summary")
    f = sub.add_parser("formula", parents=[common], help="evaluate one closed form")
    f.add_argument("--name", choices=formulas.FORMULA_NAMES, required=True)
    t = sub.add_parser("tables", parents=[common], help="orbit-count formulas over a grid")
    t.add_argument("--p-range", default="5,7,11,13")
    t.add_argument("--e-range", default="1,2")
    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("--suite", choices=TIERS, default="fast")
    v.add_argument("--samples", type=int, default=10**5, help="random candidates for oracle checks")
    v.add_argument("--no-timings", action="store_true", help="zero elapsed_ms for byte-stable reports")
    sub.add_parser("count-orbits", parents=[common], help="partition all structures into orbits")
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = _config(args)
        if cfg.command == "info":
            return cmd_info(cfg)
        if cfg.command == "formula":
            return cmd_formula(cfg, args.name)
        if cfg.command == "tables":
            return cmd_tables(cfg, args.p_range, args.e_range)
        if cfg.command == "verify":
            return cmd_verify(cfg, args.suite, args.samples, not args.no_timings)
        return cmd_count_orbits(cfg)
    except UsageError as exc:
        print(f"beauville: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
