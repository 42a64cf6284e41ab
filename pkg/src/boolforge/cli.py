"""Command-line front end.

    boolforge construct  --r R --m M --u U [--s S] [--l L] [--balanced] -o out.bftt
    boolforge analyze    (--table path | --r R --m M ...) [--ai] [--bent] [--all]
    boolforge conjecture --r R --m M --u (U|all) [--emit-counts]
    boolforge tables     --which (I|II)
    boolforge faa        --r R --m M --u (U|all) [--max-ed-sum K] [--budget SECONDS]

Exit codes: 0 success, 1 computation failure, 2 invalid arguments,
3 budget exhausted (partial report written).
"""

from __future__ import annotations

import argparse
import hashlib
import logging
import os
import random
import sys
import time
from pathlib import Path
from typing import Any, Callable

from . import bounds, conjecture, constructions, immunity, spectral
from .boolfn import TruthTable
from .constructions import ConstructionParams, InvalidParameters
from .gf2field import field_for
from .io import FormatError, ResultCache, canonical_json, read_table, write_manifest, write_table

log = logging.getLogger("boolforge")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

ENV_PREFIX = "BOOLFORGE_"
DEFAULTS = {"cache_dir": str(Path.home() / ".cache" / "boolforge"), "jobs": "1",
            # fraction of cache hits that are recomputed and compared
            "audit_rate": "0.05"}

# cited comparison values, reproduced verbatim rather than recomputed
TABLE_I_CITED = {
    "lb_prior1_cited": (18, 93, 429, 1858, 7762, 31808, 128949, 519628, 2086991, 8366580, 33506919),
    "lb_prior2_cited": (20, 102, 458, 1929, 7931, 32195, 129823, 521577, 2091288, 8376003, 33527429),
}
TABLE_II_ROWS = ((3, 3, 1), (3, 3, 6), (3, 4, 1), (3, 4, 14))
TABLE_II_PRIOR_CITED = {12: 1982, 16: 32508}


class UsageError(Exception):
    pass


class BudgetExhausted(Exception):
    pass


def read_config_file(path: str | os.PathLike) -> dict[str, str]:
    out = {}
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line without '=': {line!r}")
        k, v = line.split("=", 1)
        out[k.strip().lower()] = v.strip()
    return out


def resolve_settings(args: argparse.Namespace, environ: dict[str, str] | None = None) -> dict[str, str]:
    """flags > BOOLFORGE_* environment > key=value config file > defaults."""
    environ = os.environ if environ is None else environ
    settings = dict(DEFAULTS)
    cfg_path = args.config or environ.get(ENV_PREFIX + "CONFIG")
    if cfg_path:
        settings.update({k: v for k, v in read_config_file(cfg_path).items() if k in DEFAULTS})
    for k in DEFAULTS:
        v = environ.get(ENV_PREFIX + k.upper())
        if v is not None:
            settings[k] = v
    for k in DEFAULTS:
        v = getattr(args, k, None)
        if v is not None:
            settings[k] = str(v)
    try:
        if int(settings["jobs"]) < 1:
            raise ValueError
    except ValueError:
        raise UsageError(f"jobs must be a positive integer, got {settings['jobs']!r}") from None
    try:
        if not 0.0 <= float(settings["audit_rate"]) <= 1.0:
            raise ValueError
    except ValueError:
        raise UsageError(f"audit_rate must be in [0, 1], got {settings['audit_rate']!r}") from None
    return settings


def _params(args: argparse.Namespace, u: int | None = None) -> ConstructionParams:
    try:
        return ConstructionParams(args.r, args.m, args.u if u is None else u, args.s, args.l,
                                  modulus=args.modulus)
    except InvalidParameters as exc:
        raise UsageError(str(exc)) from None
    except ValueError as exc:  # non-primitive modulus
        raise UsageError(str(exc)) from None


def _u_values(args: argparse.Namespace) -> list[int]:
    if args.u == "all":
        if args.m < 2:
            raise UsageError("m must be at least 2")
        return conjecture.coprime_exponents(args.m)
    try:
        return [int(args.u)]
    except ValueError:
        raise UsageError(f"--u must be an integer or 'all', got {args.u!r}") from None


def _build(p: ConstructionParams, balanced: bool) -> TruthTable:
    return constructions.construct_balanced(p) if balanced else constructions.construct_unbalanced(p)


class Runner:
    def __init__(self, args: argparse.Namespace, settings: dict[str, str], argv: list[str]):
        self.args = args
        self.settings = settings
        self.argv = argv
        self.cache = None if args.no_cache else ResultCache(settings["cache_dir"])
        self.jobs = int(settings["jobs"])
        self.audit_rate = float(settings["audit_rate"])
        self.moduli: dict[int, int] = {}

    def note_field(self, p: ConstructionParams) -> None:
        self.moduli[p.rm] = p.indexer().field.modulus

    def cached(self, command: str, parameters: dict, compute: Callable[[], Any]) -> Any:
        """Compute or fetch.

        A hit is recomputed and compared when --verify-cache is given, and
        otherwise for a random audit_rate fraction of hits.
        """
        if self.cache is None:
            return compute()
        key = ResultCache.key(command, parameters, self.moduli)
        hit = self.cache.load(key)
        if hit is not None:
            audit = self.args.verify_cache or random.random() < self.audit_rate
            log.info("cache hit %s%s", key[:12], " (auditing)" if audit else "")
            if not audit:
                return hit
        value = compute()
        if hit is not None and canonical_json(hit) != canonical_json(value):
            raise RuntimeError(f"cache entry {key[:12]} disagrees with recomputation")
        self.cache.store(key, value)
        return value

    def emit(self, command: str, parameters: dict, payload: str, t0: float) -> None:
        out = self.args.output
        if out is None:
            sys.stdout.write(payload if payload.endswith("\n") else payload + "\n")
            return
        Path(out).write_text(payload if payload.endswith("\n") else payload + "\n")
        write_manifest(f"{out}.manifest.json", command, parameters, self.moduli, self.argv,
                       time.monotonic() - t0, str(out))


def cmd_construct(run: Runner) -> int:
    args, t0 = run.args, time.monotonic()
    p = _params(args)
    run.note_field(p)
    if args.output is None:
        raise UsageError("construct needs -o/--output")
    tt = _build(p, args.balanced)
    write_table(args.output, tt)
    params = {**p.as_dict(), "balanced": args.balanced}
    write_manifest(f"{args.output}.manifest.json", "construct", params, run.moduli, run.argv,
                   time.monotonic() - t0, str(args.output))
    print(canonical_json({"n": tt.n, "weight": tt.weight(), "output": str(args.output)}))
    return EXIT_OK


def analyze_table(tt: TruthTable, want_ai: bool, want_bent: bool, progress=None) -> dict:
    spec = spectral.walsh_spectrum(tt)
    report = {"n": tt.n, "weight": tt.weight(), "balanced": tt.is_balanced(),
              "degree": tt.degree(), "nonlinearity": spectral.nonlinearity(spec)}
    if want_bent and tt.n % 2 == 0:
        report["bent"] = spectral.is_bent(spec)
    if want_ai:
        ai = immunity.algebraic_immunity(tt, progress=progress)
        report["ai"] = ai.ai
        report["ai_side"] = ai.side
    return report


def cmd_analyze(run: Runner) -> int:
    args, t0 = run.args, time.monotonic()
    want_ai, want_bent = args.ai or args.all, args.bent or args.all
    if args.table:
        try:
            tt = read_table(args.table)
        except (OSError, FormatError) as exc:
            raise UsageError(f"cannot read table: {exc}") from None
        params = {"table_sha256": hashlib.sha256(Path(args.table).read_bytes()).hexdigest()}
    else:
        if args.r is None or args.m is None:
            raise UsageError("analyze needs --table or --r/--m")
        p = _params(args)
        run.note_field(p)
        params = {**p.as_dict(), "balanced": not args.unbalanced}
        tt = _build(p, not args.unbalanced)
    params.update({"ai": want_ai, "bent": want_bent})
    report = run.cached("analyze", params, lambda: analyze_table(tt, want_ai, want_bent, log.info))
    run.emit("analyze", params, canonical_json(report), t0)
    return EXIT_OK


def cmd_conjecture(run: Runner) -> int:
    args, t0 = run.args, time.monotonic()
    if args.r < 1 or args.r % 2 == 0:
        raise UsageError(f"r must be odd, got {args.r}")
    if args.m < 2:
        raise UsageError(f"m must be at least 2, got {args.m}")
    us = _u_values(args)
    for u in us:
        try:
            conjecture._check(args.r, args.m, u)
        except ValueError as exc:
            raise UsageError(str(exc)) from None

    def compute():
        reps = conjecture.verify_grid([(args.r, args.m, us)], jobs=run.jobs)
        return [rep.as_dict() for rep in reps]

    params = {"r": args.r, "m": args.m, "u": us}
    reports = run.cached("conjecture", params, compute)
    if args.emit_counts:
        lines = ["r,m,u,t,count,bound"]
        for rep in reports:
            lines += [f"{rep['r']},{rep['m']},{rep['u']},{t},{c},{rep['bound']}"
                      for t, c in enumerate(rep["counts"])]
        payload = "\n".join(lines)
    else:
        payload = canonical_json({"holds": all(r["holds"] for r in reports), "reports": reports})
    run.emit("conjecture", params, payload, t0)
    return EXIT_OK if all(r["holds"] for r in reports) else EXIT_FAIL


def table_one_csv() -> str:
    rows = bounds.table_one()
    lines = ["n," + ",".join(str(r.n) for r in rows),
             "lb_theorem," + ",".join(str(r.rounded) for r in rows)]
    lines += [f"{name}," + ",".join(map(str, vals)) for name, vals in TABLE_I_CITED.items()]
    return "\n".join(lines)


def table_two_rows(modulus: int | None = None) -> list[dict]:
    out = []
    for r, m, u in TABLE_II_ROWS:
        p = ConstructionParams(r, m, u, 0, 0, modulus=modulus)
        n = p.n
        out.append({
            "n": n, "u": u,
            "nl_F": spectral.nonlinearity(constructions.construct_balanced(p)),
            "nl_CF": spectral.nonlinearity(constructions.carlet_feng(field_for(n), 0)),
            "nl_prior_cited": TABLE_II_PRIOR_CITED[n],
            "bent_bound": (1 << (n - 1)) - (1 << (n // 2 - 1)),
        })
    return out


def cmd_tables(run: Runner) -> int:
    args, t0 = run.args, time.monotonic()
    if args.which == "I":
        payload = table_one_csv()
    elif args.which == "II":
        for k in (9, 12, 16):
            run.moduli[k] = field_for(k).modulus
        rows = run.cached("tables-II", {}, table_two_rows)
        cols = ["n", "u", "nl_F", "nl_CF", "nl_prior_cited", "bent_bound"]
        payload = "\n".join([",".join(cols)] + [",".join(str(r[c]) for c in cols) for r in rows])
    else:
        raise UsageError(f"unknown table {args.which!r}; choose I or II")
    run.emit("tables", {"which": args.which}, payload, t0)
    return EXIT_OK


def cmd_faa(run: Runner) -> int:
    args, t0 = run.args, time.monotonic()
    us = _u_values(args)
    plist = [_params(args, u) for u in us]
    for p in plist:
        run.note_field(p)
    n = plist[0].n
    max_sum = n - 2 if args.max_ed_sum is None else args.max_ed_sum
    results, complete = [], True
    for p in plist:
        remaining = None
        if args.budget is not None:
            remaining = args.budget - (time.monotonic() - t0)
            if remaining <= 0:
                complete = False
                break
        params = {**p.as_dict(), "max_ed_sum": max_sum}

        def compute(p=p, remaining=remaining):
            rep = immunity.faa_scan(constructions.construct_balanced(p), max_sum,
                                    budget=remaining, progress=log.info)
            return rep.as_dict()

        if remaining is None:
            rep = run.cached("faa", params, compute)
        else:
            rep = compute()
            if rep["complete"] and run.cache is not None:
                run.cache.store(ResultCache.key("faa", params, run.moduli), rep)
        results.append({"params": p.as_dict(), "report": rep})
        complete &= rep["complete"]
    payload = canonical_json({"complete": complete, "max_ed_sum": max_sum, "results": results,
                              "no_pair_found": (all(r["report"]["min_ed_sum"] is None for r in results)
                                                if complete else None)})
    run.emit("faa", {"r": args.r, "m": args.m, "u": us, "s": args.s, "l": args.l,
                     "max_ed_sum": max_sum, "budget": args.budget}, payload, t0)
    return EXIT_OK if complete else EXIT_BUDGET


def _add_construction_args(sp: argparse.ArgumentParser, u_any: bool = False, required: bool = True):
    sp.add_argument("--r", type=int, required=required)
    sp.add_argument("--m", type=int, required=required)
    if u_any:
        sp.add_argument("--u", default="1", help="exponent u, or 'all' for every u coprime to 2^m-1")
    else:
        sp.add_argument("--u", type=int, default=1)
    sp.add_argument("--s", type=int, default=0)
    sp.add_argument("--l", type=int, default=0)
    sp.add_argument("--modulus", type=lambda v: int(v, 0), default=None,
                    help="primitive polynomial of GF(2^rm) as a bit mask, e.g. 0x211")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="boolforge", description=__doc__.split("\n\n")[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", default=None)
    common.add_argument("--jobs", type=int, default=None)
    common.add_argument("--cache-dir", dest="cache_dir", default=None)
    common.add_argument("--no-cache", action="store_true")
    common.add_argument("--verify-cache", action="store_true",
                        help="recompute cached results and fail on disagreement")
    common.add_argument("--audit-rate", dest="audit_rate", type=float, default=None,
                        help="fraction of cache hits re-verified by recomputation")
    common.add_argument("--config", default=None, help="key=value settings file")
    common.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("construct", parents=[common])
    _add_construction_args(sp)
    sp.add_argument("--balanced", action="store_true")
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("analyze", parents=[common])
    sp.add_argument("--table", default=None)
    _add_construction_args(sp, required=False)
    sp.add_argument("--unbalanced", action="store_true")
    sp.add_argument("--ai", action="store_true")
    sp.add_argument("--bent", action="store_true")
    sp.add_argument("--all", action="store_true")
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("conjecture", parents=[common])
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--u", default="all")
    sp.add_argument("--emit-counts", action="store_true")
    sp.set_defaults(func=cmd_conjecture)

    sp = sub.add_parser("tables", parents=[common])
    sp.add_argument("--which", required=True)
    sp.set_defaults(func=cmd_tables)

    sp = sub.add_parser("faa", parents=[common])
    _add_construction_args(sp, u_any=True)
    sp.add_argument("--max-ed-sum", type=int, default=None)
    sp.add_argument("--budget", type=float, default=None, help="wall-clock seconds")
    sp.set_defaults(func=cmd_faa)
    return ap


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(message)s", stream=sys.stderr)
    try:
        settings = resolve_settings(args)
        return args.func(Runner(args, settings, argv))
    except UsageError as exc:
        print(f"boolforge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExhausted as exc:
        print(f"boolforge: budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except Exception as exc:  # computation failure
        log.debug("failure", exc_info=True)
        print(f"boolforge: computation failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
