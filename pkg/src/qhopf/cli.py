"""Command-line front end for Chern-number runs and verification suites.

Subcommands:

  chern   per-mu (rank, chern) records over a mu range, exact and/or numeric
  verify  structural suites (confluence, connection, idempotent,
          representations, quotient) as a pass/fail matrix
  table   the (rank, chern) = (1, mu) evidence rows for a mu range

Reports are deterministic for a fixed configuration: records are sorted by
mu and timing data lives only in the metadata section (json), the final csv
column, or the trailing text summary.  Exit codes: 0 success, 1 computation
or verification failure, 2 configuration error.
"""

import argparse
import csv
import io
import json
import logging
import os
import re
import signal
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache

from . import __version__
from .connection import (
    ell_family1,
    ell_family2,
    idempotent,
    trace_element,
    verify_connection,
)
from .fredholm import (
    chern_number,
    numeric_pairing,
    pi_minus,
    pi_plus,
    rank_pairing,
    rep_check,
    restriction_check,
    rho1,
    rho2,
    sigma1,
    sigma2,
)
from .hopf import quotient_basis
from .rewriting import check_confluence, heegaard, qsu2

log = logging.getLogger("qhopf.cli")

SAMPLED_S = (Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(1))
CSV_COLUMNS = ("family", "mu", "s", "rank", "chern", "exact_expr", "verified", "elapsed_ms")
TABLE_COLUMNS = ("family", "mu", "s", "rank", "chern")
VERIFY_COLUMNS = ("suite", "case", "ok", "detail")
CHECK_NAMES = ("confluence", "connection", "idempotent", "representations", "quotient")
_LEVELS = {"error": logging.ERROR, "warn": logging.WARNING, "info": logging.INFO, "debug": logging.DEBUG}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    family: str = "heegaard"
    mu_range: tuple = (-2, 2)
    s: object = "symbolic"
    mode: str = "exact"
    p: Fraction | None = None
    q: Fraction | None = None
    truncation: int = 64
    jobs: int = 1
    fmt: str = "text"
    out: str | None = None
    checks: tuple = ()
    time_budget: float = 300.0
    degree: int = 4


def _parse_mu_range(text):
    m = re.fullmatch(r"(-?\d+)(?:\.\.(-?\d+))?", text.strip())
    if not m:
        raise ConfigError(f"bad mu range {text!r}; expected A..B or a single integer")
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) is not None else lo
    return lo, hi


def _parse_s(text):
    if text == "symbolic":
        return "symbolic"
    try:
        v = Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise ConfigError(f"bad s value {text!r}; expected a rational or 'symbolic'") from e
    if not 0 <= v <= 1:
        raise ConfigError("s must lie in [0, 1]")
    return v


def _parse_fraction(text, name):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise ConfigError(f"bad {name} value {text!r}") from e


def build_parser():
    ap = argparse.ArgumentParser(
        prog="qhopf",
        description="Exact index pairings for quantum Heegaard and Podles sphere bundles.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        # let "--mu -3..3" pass: teach argparse that a leading-minus range is a
        # value, not an option (the stock matcher only accepts plain numbers)
        sp._negative_number_matcher = re.compile(r"^-\d+(\.\.-?\d+)?$")
        sp.add_argument("--family", choices=("heegaard", "podles"), default="heegaard")
        sp.add_argument("--mu", default="-2..2", help="inclusive range A..B, or a single integer")
        sp.add_argument("--s", default="symbolic", help="rational like 1/2, or 'symbolic'")
        sp.add_argument("--format", dest="fmt", choices=("json", "csv", "text"), default="text")
        sp.add_argument("--out", default=None, help="write the report to this file")

    sp = sub.add_parser("chern", help="compute (rank, chern) records for a mu range")
    common(sp)
    sp.add_argument("--mode", choices=("exact", "numeric", "both"), default="exact")
    sp.add_argument("--p", default=None, help="rational deformation parameter (heegaard numeric)")
    sp.add_argument("--q", default=None, help="rational deformation parameter (numeric)")
    sp.add_argument("--truncation", type=int, default=64, help="numeric matrix size")
    sp.add_argument("--jobs", type=int, default=1, help="parallel workers across mu values")
    sp.add_argument("--verify", default="", metavar="LIST",
                    help="comma list from: " + ", ".join(CHECK_NAMES))
    sp.add_argument("--time-budget-secs", type=float, default=300.0, dest="budget",
                    help="per-mu budget for the symbolic-s attempt before sampling rationals")

    sp = sub.add_parser("verify", help="run verification suites (all when none selected)")
    common(sp)
    for name in CHECK_NAMES:
        sp.add_argument("--" + name, action="store_true", help=f"run the {name} suite")
    sp.add_argument("--degree", type=int, default=4, help="quotient-coalgebra degree bound")

    sp = sub.add_parser("table", help="emit the (rank, chern) evidence rows")
    common(sp)
    return ap


def _build_config(args):
    cfg = RunConfig(command=args.command, family=args.family)
    cfg.mu_range = _parse_mu_range(args.mu)
    cfg.s = _parse_s(args.s)
    cfg.fmt = args.fmt
    cfg.out = args.out
    if args.command == "chern":
        cfg.mode = args.mode
        cfg.truncation = args.truncation
        cfg.jobs = args.jobs
        cfg.time_budget = args.budget
        checks = tuple(c.strip() for c in args.verify.split(",") if c.strip())
        for c in checks:
            if c not in CHECK_NAMES:
                raise ConfigError(f"unknown verification {c!r}; choose from {', '.join(CHECK_NAMES)}")
        cfg.checks = checks
        cfg.p = _parse_fraction(args.p, "p") if args.p is not None else None
        cfg.q = _parse_fraction(args.q, "q") if args.q is not None else None
        if cfg.mode in ("numeric", "both"):
            if cfg.q is None:
                raise ConfigError("numeric mode needs --q")
            if cfg.family == "heegaard" and cfg.p is None:
                raise ConfigError("numeric mode needs --p for the heegaard family")
            if cfg.family == "podles" and cfg.s == "symbolic":
                raise ConfigError("numeric mode needs a rational --s for the podles family")
        if cfg.family == "podles" and cfg.p is not None:
            log.debug("the podles family ignores --p")
        if cfg.truncation < 4:
            raise ConfigError("truncation must be >= 4")
        if cfg.jobs < 1:
            raise ConfigError("jobs must be >= 1")
    elif args.command == "verify":
        cfg.checks = tuple(n for n in CHECK_NAMES if getattr(args, n)) or CHECK_NAMES
        cfg.degree = args.degree
        if cfg.degree < 1:
            raise ConfigError("degree must be >= 1")
    return cfg


def _config_dict(cfg):
    return {
        "command": cfg.command,
        "family": cfg.family,
        "mu": f"{cfg.mu_range[0]}..{cfg.mu_range[1]}",
        "s": "symbolic" if cfg.s == "symbolic" else str(cfg.s),
        "mode": cfg.mode,
        "p": None if cfg.p is None else str(cfg.p),
        "q": None if cfg.q is None else str(cfg.q),
        "truncation": cfg.truncation,
        "jobs": cfg.jobs,
        "format": cfg.fmt,
        "verify": list(cfg.checks),
        "time_budget_secs": cfg.time_budget,
        "degree": cfg.degree,
    }


# ---------------------------------------------------------------------------
# per-mu pipeline


class _BudgetExceeded(Exception):
    pass


def _alarm_handler(signum, frame):
    raise _BudgetExceeded


def _with_budget(budget, fn):
    """Run fn() under a wall-clock alarm; a budget <= 0 fails immediately."""
    if budget is None:
        return fn()
    if budget <= 0:
        raise _BudgetExceeded
    old = signal.signal(signal.SIGALRM, _alarm_handler)
    signal.setitimer(signal.ITIMER_REAL, budget)
    try:
        return fn()
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, old)


@lru_cache(maxsize=None)
def _qb_cached(s_mode, d):
    return quotient_basis(s_mode, d)


def _rank_int(mu, family, s_mode):
    v = rank_pairing(mu, family, s_mode)
    n = v.as_integer()
    if n is None:
        raise ValueError(f"rank pairing {v} is not an integer")
    return n


def _mu_checks(family, mu, s_mode, wanted):
    out = {}
    if not wanted:
        return out
    if family == "heegaard":
        c = ell_family1(mu)
        if "connection" in wanted:
            out["connection"] = verify_connection(c)["ok"]
    else:
        c = ell_family2(mu, s_mode)
        if "connection" in wanted:
            qb = _qb_cached(s_mode, max(1, abs(mu)))
            out["connection"] = verify_connection(c, qb)["ok"]
    if "idempotent" in wanted:
        out["idempotent"] = idempotent(c).is_idempotent()
    return out


def _podles_symbolic(mu, wanted):
    rec = {"chern": chern_number(mu, "podles"), "rank": _rank_int(mu, "podles", "symbolic")}
    rec["exact_expr"] = str(trace_element(ell_family2(mu)))
    rec["checks"] = _mu_checks("podles", mu, "symbolic", wanted)
    return rec


def _podles_sampled(mu, wanted):
    values = {str(sv): (chern_number(mu, "podles", sv), _rank_int(mu, "podles", sv)) for sv in SAMPLED_S}
    cherns = {v[0] for v in values.values()}
    ranks = {v[1] for v in values.values()}
    if len(cherns) != 1 or len(ranks) != 1:
        raise ValueError(f"sampled s values disagree: {values}")
    rep = Fraction(1, 2)
    rec = {"chern": cherns.pop(), "rank": ranks.pop()}
    rec["exact_expr"] = str(trace_element(ell_family2(mu, rep)))
    rec["checks"] = _mu_checks("podles", mu, rep, wanted)
    rec["warnings"] = ["symbolic s exceeded the time budget; verified exactly at s in {0, 1/3, 1/2, 1}"]
    return rec


def _chern_record(task):
    """Worker for one mu; returns (mu, record, elapsed_ms). Never raises."""
    family, mu, s, mode, p, q, truncation, wanted, budget = task
    t0 = time.perf_counter()
    rec = {"family": family, "mu": mu, "s": "symbolic" if s == "symbolic" else str(s)}
    try:
        if mode in ("exact", "both"):
            if family == "heegaard":
                rec["chern"] = chern_number(mu, "heegaard")
                rec["rank"] = _rank_int(mu, "heegaard", "symbolic")
                rec["exact_expr"] = str(trace_element(ell_family1(mu)))
                rec["checks"] = _mu_checks("heegaard", mu, s, wanted)
            elif s != "symbolic":
                rec["chern"] = chern_number(mu, "podles", s)
                rec["rank"] = _rank_int(mu, "podles", s)
                rec["exact_expr"] = str(trace_element(ell_family2(mu, s)))
                rec["checks"] = _mu_checks("podles", mu, s, wanted)
            else:
                try:
                    rec.update(_with_budget(budget, lambda: _podles_symbolic(mu, wanted)))
                except _BudgetExceeded:
                    log.warning("mu=%d: symbolic s exceeded the %gs budget; sampling rationals", mu, budget)
                    rec.update(_podles_sampled(mu, wanted))
        else:
            rec["rank"] = _rank_int(mu, family, "symbolic" if family == "heegaard" else s)
            rec["checks"] = _mu_checks(family, mu, s, wanted)
        if mode in ("numeric", "both"):
            params = {"p": p, "q": q} if family == "heegaard" else {"q": q, "s": s}
            est, bound = numeric_pairing(mu, family, params, truncation)
            rec["numeric"] = {"estimate": est, "tail_bound": bound}
            if "chern" in rec:
                rec["numeric"]["agrees"] = abs(est - rec["chern"]) <= bound + 1e-9
    except Exception as e:
        rec["error"] = f"{type(e).__name__}: {e}"
    rec["verified"] = "error" not in rec and all(rec.get("checks", {}).values())
    elapsed = int(round((time.perf_counter() - t0) * 1000))
    return mu, rec, elapsed


def _global_checks(cfg):
    """Run the mu-independent suites once; results are folded into every record."""
    out = {}
    if "confluence" in cfg.checks:
        out["confluence"] = not check_confluence(heegaard()) and not check_confluence(qsu2())
    if "representations" in cfg.checks:
        try:
            ok = all(rep_check(f())["ok"] for f in (rho1, rho2, sigma1, sigma2, pi_minus, pi_plus))
            out["representations"] = ok and restriction_check()["ok"]
        except Exception as e:
            log.error("representation check failed: %s", e)
            out["representations"] = False
    if "quotient" in cfg.checks:
        d = max(1, min(4, max(abs(cfg.mu_range[0]), abs(cfg.mu_range[1]))))
        try:
            for k in range(1, d + 1):
                _qb_cached(cfg.s, k)
            out["quotient"] = True
        except Exception as e:
            log.error("quotient check failed: %s", e)
            out["quotient"] = False
    return out


def _compute_records(cfg):
    mus = list(range(cfg.mu_range[0], cfg.mu_range[1] + 1))
    shared = _global_checks(cfg)
    tasks = [
        (cfg.family, mu, cfg.s, cfg.mode, cfg.p, cfg.q, cfg.truncation, cfg.checks, cfg.time_budget)
        for mu in mus
    ]
    results = {}
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            for mu, rec, ms in pool.map(_chern_record, tasks):
                results[mu] = (rec, ms)
    else:
        for task in tasks:
            mu, rec, ms = _chern_record(task)
            results[mu] = (rec, ms)
    records, timings = [], {}
    for mu in mus:
        rec, ms = results[mu]
        if shared:
            rec.setdefault("checks", {}).update(shared)
            rec["verified"] = rec["verified"] and all(shared.values())
        records.append(rec)
        timings[str(mu)] = ms
    return records, timings


def _chern_exit(cfg, records):
    for rec in records:
        if "error" in rec or not rec["verified"]:
            return 1
        if cfg.mode in ("exact", "both") and rec.get("chern") != rec["mu"]:
            return 1
        if "numeric" in rec:
            est, bound = rec["numeric"]["estimate"], rec["numeric"]["tail_bound"]
            if abs(est - rec["mu"]) > bound + 1e-9:
                return 1
    return 0


# ---------------------------------------------------------------------------
# report emission


def _report(cfg, records, timings, total_ms):
    return {
        "meta": {
            "version": __version__,
            "config": _config_dict(cfg),
            "timings": {"per_record_ms": timings, "total_ms": total_ms},
        },
        "records": records,
    }


def _emit_csv(columns, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


def _emit_chern(cfg, report):
    if cfg.fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    timings = report["meta"]["timings"]["per_record_ms"]
    if cfg.fmt == "csv":
        rows = [
            (
                rec["family"], rec["mu"], rec["s"], rec.get("rank", ""), rec.get("chern", ""),
                rec.get("exact_expr", ""), str(rec["verified"]).lower(), timings[str(rec["mu"])],
            )
            for rec in report["records"]
        ]
        return _emit_csv(CSV_COLUMNS, rows)
    lines = [
        f"chern family={cfg.family} s={report['meta']['config']['s']} mode={cfg.mode} "
        f"mu={report['meta']['config']['mu']}",
        f"{'mu':>4}  {'rank':>4}  {'chern':>5}  verified",
    ]
    bad = 0
    for rec in report["records"]:
        if "error" in rec:
            lines.append(f"{rec['mu']:>4}  error: {rec['error']}")
            bad += 1
            continue
        flag = "yes" if rec["verified"] else "NO"
        row = f"{rec['mu']:>4}  {rec.get('rank', '-'):>4}  {rec.get('chern', '-'):>5}  {flag:>8}"
        if "numeric" in rec:
            row += f"  est={rec['numeric']['estimate']:+.12f} bound={rec['numeric']['tail_bound']:.3e}"
        for w in rec.get("warnings", ()):
            lines.append(f"      warning: {w}")
        lines.append(row)
    lines.append(f"{len(report['records'])} records, {bad} errors, {report['meta']['timings']['total_ms']} ms")
    return "\n".join(lines) + "\n"


def _emit_table(cfg, report):
    if cfg.fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    if cfg.fmt == "csv":
        rows = [
            (rec["family"], rec["mu"], rec["s"], rec.get("rank", ""), rec.get("chern", ""))
            for rec in report["records"]
        ]
        return _emit_csv(TABLE_COLUMNS, rows)
    lines = [f"positive-cone evidence, family={cfg.family}"]
    for rec in report["records"]:
        lines.append(f"  (rank, chern) = ({rec.get('rank', '?')}, {rec.get('chern', '?')})   mu={rec['mu']}")
    lines.append(f"{len(report['records'])} rows")
    return "\n".join(lines) + "\n"


def _emit_verify(cfg, report):
    if cfg.fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    rows = report["records"]
    if cfg.fmt == "csv":
        return _emit_csv(
            VERIFY_COLUMNS,
            [(r["suite"], r["case"], str(r["ok"]).lower(), r["detail"]) for r in rows],
        )
    width_s = max((len(r["suite"]) for r in rows), default=5)
    width_c = max((len(r["case"]) for r in rows), default=4)
    lines = [f"{'suite':<{width_s}}  {'case':<{width_c}}  result"]
    for r in rows:
        mark = "pass" if r["ok"] else "FAIL"
        lines.append(f"{r['suite']:<{width_s}}  {r['case']:<{width_c}}  {mark}  {r['detail']}")
    passed = sum(1 for r in rows if r["ok"])
    lines.append(f"{passed}/{len(rows)} checks passed, {report['meta']['timings']['total_ms']} ms")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# subcommands


def cmd_chern(cfg):
    t0 = time.perf_counter()
    records, timings = _compute_records(cfg)
    total = int(round((time.perf_counter() - t0) * 1000))
    report = _report(cfg, records, timings, total)
    return _chern_exit(cfg, records), _emit_chern(cfg, report)


def cmd_table(cfg):
    run = replace(cfg, mode="exact", checks=())
    t0 = time.perf_counter()
    records, timings = _compute_records(run)
    total = int(round((time.perf_counter() - t0) * 1000))
    rows = [
        {k: rec[k] for k in ("family", "mu", "s", "rank", "chern") if k in rec}
        if "error" not in rec
        else rec
        for rec in records
    ]
    report = _report(cfg, rows, timings, total)
    return _chern_exit(run, records), _emit_table(cfg, report)


def _verify_connection_suite(name, cfg):
    rows = []
    lo, hi = cfg.mu_range
    for mu in range(lo, hi + 1):
        case = f"{cfg.family} mu={mu}"
        try:
            if cfg.family == "heegaard":
                c = ell_family1(mu)
                rep = verify_connection(c) if name == "connection" else None
            else:
                c = ell_family2(mu, cfg.s)
                rep = (
                    verify_connection(c, _qb_cached(cfg.s, max(1, abs(mu))))
                    if name == "connection"
                    else None
                )
            if name == "connection":
                detail = "unit and winding" if rep["ok"] else "; ".join(rep["failures"])
                rows.append({"suite": name, "case": case, "ok": rep["ok"], "detail": detail})
            else:
                ok = idempotent(c).is_idempotent()
                rows.append({"suite": name, "case": case, "ok": ok,
                             "detail": "E^2 = E" if ok else "E^2 != E"})
        except Exception as e:
            rows.append({"suite": name, "case": case, "ok": False, "detail": f"{type(e).__name__}: {e}"})
    return rows


def _verify_suite(name, cfg):
    if name == "confluence":
        rows = []
        for pres in (heegaard(), qsu2()):
            bad = check_confluence(pres)
            rows.append({"suite": name, "case": pres.name, "ok": not bad,
                         "detail": f"{len(bad)} unresolved overlaps"})
        return rows
    if name == "representations":
        rows = []
        for factory in (rho1, rho2, sigma1, sigma2, pi_minus, pi_plus):
            try:
                report = rep_check(factory())
                rows.append({"suite": name, "case": report["rep"], "ok": report["ok"],
                             "detail": f"{len(report['relations'])} relations"})
            except Exception as e:
                rows.append({"suite": name, "case": factory.__name__, "ok": False,
                             "detail": f"{type(e).__name__}: {e}"})
        try:
            report = restriction_check()
            rows.append({"suite": name, "case": "restriction", "ok": report["ok"],
                         "detail": "f0, f1, f1* match"})
        except Exception as e:
            rows.append({"suite": name, "case": "restriction", "ok": False,
                         "detail": f"{type(e).__name__}: {e}"})
        return rows
    if name == "quotient":
        try:
            qb = _qb_cached(cfg.s, cfg.degree)
        except Exception as e:
            return [{"suite": name, "case": f"degree {cfg.degree}", "ok": False,
                     "detail": f"{type(e).__name__}: {e}"}]
        rows = []
        for k in range(cfg.degree + 1):
            dim = sum(1 for w in qb.representatives if len(w) <= k)
            rows.append({"suite": name, "case": f"degree {k}", "ok": dim == 2 * k + 1,
                         "detail": f"dimension {dim}"})
        return rows
    return _verify_connection_suite(name, cfg)


def cmd_verify(cfg):
    rows, timings = [], {}
    t0 = time.perf_counter()
    for suite in cfg.checks:
        t1 = time.perf_counter()
        rows.extend(_verify_suite(suite, cfg))
        timings[suite] = int(round((time.perf_counter() - t1) * 1000))
    total = int(round((time.perf_counter() - t0) * 1000))
    report = _report(cfg, rows, timings, total)
    code = 0 if all(r["ok"] for r in rows) else 1
    return code, _emit_verify(cfg, report)


def main(argv=None):
    level = _LEVELS.get(os.environ.get("LOG_LEVEL", "warn").lower(), logging.WARNING)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        cfg = _build_config(args)
        if cfg.command == "chern":
            code, payload = cmd_chern(cfg)
        elif cfg.command == "verify":
            code, payload = cmd_verify(cfg)
        else:
            code, payload = cmd_table(cfg)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(payload)
        log.info("wrote %s", cfg.out)
    else:
        sys.stdout.write(payload)
    return code


if __name__ == "__main__":
    sys.exit(main())
