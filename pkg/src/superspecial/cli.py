"""Command-line driver.

    superspecial census --max-p 2000
    superspecial verify --suite maps --max-p 500
    superspecial average --mode integer --X 1e4 --N 1000000
    superspecial classnum --d -164 --via-l
    superspecial charsum --X 1e5

Exit codes: 0 when every check passes, 1 on a mathematical mismatch, 2 on
usage or I/O errors.  Flags override values from ``--config FILE``
(``key=value`` lines, ``#`` comments).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Optional, Sequence

from . import average, census, classnum
from .cache import SigmaCache
from .ffield import FieldError
from .genus2 import sigma_set

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2

DEFAULTS = {
    "threads": 1,
    "cache": None,
    "out": None,
    "format": "csv",
    "max_p": None,
    "method": "deuring",
    "suite": None,
    "mode": "integer",
    "X": None,
    "N": None,
    "check_exact": False,
    "d": None,
    "via_l": False,
    "U": None,
}

_CONVERTERS = {
    "threads": int,
    "max_p": int,
    "N": int,
    "U": int,
    "d": int,
    "X": lambda v: [float(x) for x in v.replace(",", " ").split()],
    "check_exact": lambda v: v.strip().lower() in ("1", "true", "yes", "on"),
    "via_l": lambda v: v.strip().lower() in ("1", "true", "yes", "on"),
}


class UsageError(Exception):
    pass


def read_config(path: str) -> dict:
    """key=value lines; dashes in keys are read as underscores."""
    config = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in DEFAULTS:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                config[key] = _CONVERTERS.get(key, str)(value)
            except ValueError as exc:
                raise UsageError(f"{path}:{lineno}: {exc}") from exc
    return config


def _positive_float(text: str) -> float:
    value = float(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def _positive_int(text: str) -> int:
    value = int(float(text)) if "e" in text.lower() else int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=_positive_int, default=argparse.SUPPRESS,
                        help="worker processes for per-prime tasks")
    common.add_argument("--cache", default=argparse.SUPPRESS, help="Sigma_p cache file")
    common.add_argument("--config", default=argparse.SUPPRESS, help="key=value config file")

    parser = argparse.ArgumentParser(prog="superspecial", parents=[common], description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def output_opts(p):
        p.add_argument("--out", default=argparse.SUPPRESS, help="output file (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default=argparse.SUPPRESS)

    p = sub.add_parser("census", parents=[common], help="psi_p against the class-number prediction")
    p.add_argument("--max-p", dest="max_p", type=int, default=argparse.SUPPRESS)
    p.add_argument("--method", choices=("deuring", "hasse"), default=argparse.SUPPRESS)
    output_opts(p)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("--suite", choices=sorted(census.SUITES), default=argparse.SUPPRESS)
    p.add_argument("--max-p", dest="max_p", type=int, default=argparse.SUPPRESS)
    p.add_argument("--out", default=argparse.SUPPRESS)

    p = sub.add_parser("average", parents=[common], help="Lang-Trotter averages")
    p.add_argument("--mode", choices=("integer", "rational"), default=argparse.SUPPRESS)
    p.add_argument("--X", nargs="+", type=_positive_float, default=argparse.SUPPRESS,
                   help="one or more cutoffs; several give a tidy sweep")
    p.add_argument("--N", type=_positive_int, default=argparse.SUPPRESS)
    p.add_argument("--check-exact", dest="check_exact", action="store_true",
                   default=argparse.SUPPRESS)
    output_opts(p)

    p = sub.add_parser("classnum", parents=[common], help="class number of a discriminant")
    p.add_argument("--d", type=int, default=argparse.SUPPRESS)
    p.add_argument("--via-l", dest="via_l", action="store_true", default=argparse.SUPPRESS)
    p.add_argument("--U", type=_positive_int, default=argparse.SUPPRESS)
    p.add_argument("--out", default=argparse.SUPPRESS)

    p = sub.add_parser("charsum", parents=[common], help="S1, S3, S7 diagnostics")
    p.add_argument("--X", nargs="+", type=_positive_float, default=argparse.SUPPRESS)
    p.add_argument("--U", type=_positive_int, default=argparse.SUPPRESS)
    p.add_argument("--out", default=argparse.SUPPRESS)
    return parser


def resolve(args: argparse.Namespace) -> dict:
    """Merge defaults < config file < command-line flags."""
    cli = vars(args)
    config = read_config(cli["config"]) if "config" in cli else {}
    settings = dict(DEFAULTS)
    settings.update(config)
    settings.update({k: v for k, v in cli.items() if k != "config"})
    if isinstance(settings.get("X"), (int, float)):
        settings["X"] = [float(settings["X"])]
    return settings


def _require(settings: dict, *keys: str) -> None:
    missing = [k for k in keys if settings.get(k) is None]
    if missing:
        flags = ", ".join("--" + k.replace("_", "-") for k in missing)
        raise UsageError(f"{settings['command']}: missing {flags}")


@contextmanager
def _output(path: Optional[str]):
    if path is None:
        yield sys.stdout
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        yield fh


def _write_table(settings: dict, header: str, rows: list, dicts: list) -> None:
    with _output(settings["out"]) as fh:
        if settings["format"] == "json":
            json.dump(dicts, fh, indent=2)
            fh.write("\n")
            return
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header.split(","))
        writer.writerows(rows)
        fh.write(buf.getvalue())


def _sigma_source(settings: dict, primes: Sequence[int], method: str):
    """Sigma_p for the given primes, from the cache when one is configured,
    computed in parallel for the primes it lacks."""
    cache = SigmaCache(settings["cache"], method=method) if settings["cache"] else None
    known = cache.entries if cache is not None else {}
    todo = [p for p in primes if p not in known]
    fresh = dict(zip(todo, census.parallel_map(_SigmaJob(method), todo, settings["threads"])))
    if cache is not None:
        cache.update(fresh)
        cache.save()
        return cache
    return fresh.__getitem__


class _SigmaJob:
    def __init__(self, method: str):
        self.method = method

    def __call__(self, p: int) -> tuple:
        return sigma_set(p, self.method)


def cmd_census(settings: dict) -> int:
    _require(settings, "max_p")
    primes = census.census_primes(settings["max_p"])
    method = settings["method"]
    if settings["cache"]:
        sigma = _sigma_source(settings, primes, method)
        records = [census.census_record(p, sigma=sigma) for p in primes]
    else:
        records = census.verify_theorem_a(settings["max_p"], settings["threads"], method)
    _write_table(settings, census.CENSUS_HEADER, [r.row() for r in records],
                 [r.as_dict() for r in records])
    return EXIT_OK if all(r.match for r in records) else EXIT_MISMATCH


class _SuiteJob:
    def __init__(self, suite: str):
        self.suite = suite

    def __call__(self, p: int) -> dict:
        return census.run_suite(self.suite, p).as_dict()


def cmd_verify(settings: dict) -> int:
    _require(settings, "suite", "max_p")
    suite = settings["suite"]
    if suite not in census.SUITES:
        raise UsageError(f"unknown suite {suite!r}; choose from {sorted(census.SUITES)}")
    primes = [p for p in census.census_primes(settings["max_p"]) if census.suite_applies(suite, p)]
    reports = census.parallel_map(_SuiteJob(suite), primes, settings["threads"])
    failed = [r["p"] for r in reports if not r["passed"]]
    summary = {"suite": suite, "max_p": settings["max_p"], "primes": len(primes),
               "passed": not failed, "failed_primes": failed, "reports": reports}
    with _output(settings["out"]) as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    status = "PASS" if not failed else f"FAIL at p in {failed}"
    print(f"{suite}: {len(primes)} primes, {status}", file=sys.stderr)
    return EXIT_OK if not failed else EXIT_MISMATCH


def cmd_average(settings: dict) -> int:
    _require(settings, "X", "N")
    Xs, N, mode = settings["X"], settings["N"], settings["mode"]
    if mode not in ("integer", "rational"):
        raise UsageError(f"unknown mode {mode!r}")
    if min(Xs) < 5 or N < 5:
        raise UsageError("average needs X, N >= 5")
    primes = [p for p in census.census_primes(math.ceil(max(Xs)))]
    sigma = _sigma_source(settings, primes, "hasse")
    make = average.integer_report if mode == "integer" else average.rational_report
    reports = [make(X, N, settings["check_exact"], sigma) for X in sorted(Xs)]
    _write_table(settings, average.AVERAGE_HEADER, [r.row() for r in reports],
                 [r.as_dict() for r in reports])
    return EXIT_OK if all(r.consistent for r in reports) else EXIT_MISMATCH


def cmd_classnum(settings: dict) -> int:
    _require(settings, "d")
    d = settings["d"]
    forms = classnum.reduced_forms(d)
    result = {"d": d, "class_number": len(forms), "forms": [[f.a, f.b, f.c] for f in forms]}
    status = EXIT_OK
    if settings["via_l"]:
        approx, bound = classnum.class_number_via_L(d, settings["U"])
        ok = abs(approx - len(forms)) <= bound and (bound >= 0.5 or round(approx) == len(forms))
        result.update({"via_L": approx, "error_bound": bound, "consistent": ok})
        status = EXIT_OK if ok else EXIT_MISMATCH
    with _output(settings["out"]) as fh:
        json.dump(result, fh, indent=2)
        fh.write("\n")
    return status


def cmd_charsum(settings: dict) -> int:
    _require(settings, "X")
    rows = []
    for X in sorted(settings["X"]):
        s = average.char_sums(X, settings["U"])
        norm, lim = s.normalized(), s.limits()
        rows.append({"X": X, "U": s.U, "S1": s.S1, "S3": s.S3, "S7": s.S7,
                     **{f"{k}_normalized": v for k, v in norm.items()},
                     **{f"{k}_limit": v for k, v in lim.items()}})
    with _output(settings["out"]) as fh:
        json.dump(rows, fh, indent=2)
        fh.write("\n")
    return EXIT_OK


COMMANDS = {
    "census": cmd_census,
    "verify": cmd_verify,
    "average": cmd_average,
    "classnum": cmd_classnum,
    "charsum": cmd_charsum,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        settings = resolve(args)
        return COMMANDS[settings["command"]](settings)
    except (UsageError, FieldError, classnum.DiscriminantError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
