"""``domcomplex`` command line: stats, morse, homology, reproduce, export, import.

Exit codes: 0 all checks passed, 1 a check failed, 2 usage error, 3 a Morse
cycle was found, 4 file or cache-format error, 5 cell budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from typing import Any

from .complex import (
    CacheFormatError,
    ComplexSpec,
    SizeLimitError,
    UnsupportedSpecError,
    complex_stats,
    default_budget,
    dump_table,
    enumerate_complex,
    f_vector,
    read_table,
    vizing_dimension,
    wedge_count,
    write_table,
)
from .graphs import InvalidGraphError, format_mask
from .homology import DEFAULT_HOMOLOGY_BUDGET, MODES, betti
from .morse import (
    LemmaViolation,
    MatchingConflict,
    critical_census,
    d52_matching,
    dnn2_matching,
    embedded_cells,
    reference_matching,
    verify_acyclic,
    verify_no_outside_cycles,
    verify_restriction,
)

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_CYCLE, EXIT_IO, EXIT_BUDGET = 0, 1, 2, 3, 4, 5


def available_jobs() -> int:
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:  # not on Linux
        return os.cpu_count() or 1


@dataclass
class RunReport:
    command: list[str]
    spec: dict | None = None
    results: dict[str, Any] = field(default_factory=dict)
    checks: list[dict[str, Any]] = field(default_factory=list)
    exit_code: int = EXIT_OK
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return self.exit_code == EXIT_OK

    def check(self, name: str, measured, expected) -> bool:
        passed = measured == expected
        self.checks.append({"name": name, "passed": passed,
                            "measured": measured, "expected": expected})
        if not passed and self.exit_code == EXIT_OK:
            self.exit_code = EXIT_CHECK
        return passed

    def fail(self, code: int, message: str) -> None:
        self.exit_code = code
        self.results["error"] = message

    def as_dict(self) -> dict:
        return {"command": self.command, "spec": self.spec, "results": self.results,
                "checks": self.checks, "ok": self.ok, "exit_code": self.exit_code,
                "wall_time": round(self.wall_time, 6)}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True)

    def render(self) -> str:
        lines = ["domcomplex " + " ".join(self.command)]
        if self.spec:
            lines.append(f"complex: D_{{{self.spec['n']},{self.spec['k']}}}")
        for key, value in self.results.items():
            if key == "rows":
                if not self.checks:  # --list
                    lines += [f"{r['key']:<28} [{r['criterion']}] {r['title']}"
                              + ("  (heavy)" if r["heavy"] else "") for r in value]
                continue
            lines.append(f"{key}: {_human(value)}")
        for c in self.checks:
            tag = "PASS" if c["passed"] else "FAIL"
            line = f"{tag}  {c['name']}: {_human(c['measured'])}"
            if not c["passed"]:
                line += f"  (expected {_human(c['expected'])})"
            lines.append(line)
        lines.append(f"wall time: {self.wall_time:.2f}s")
        lines.append("ok" if self.ok else f"FAILED (exit {self.exit_code})")
        return "\n".join(lines)


def _human(value) -> str:
    if isinstance(value, (list, tuple)):
        return "(" + ", ".join(_human(v) for v in value) + ")"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}: {_human(v)}" for k, v in value.items()) + "}"
    return str(value)


def _spec(args) -> ComplexSpec:
    return ComplexSpec(args.n, args.k)


def _budget(args) -> int:
    return default_budget() if args.budget is None else args.budget


# -- subcommands -------------------------------------------------------------

def cmd_stats(args, report: RunReport) -> None:
    spec = _spec(args)
    report.spec = {"n": spec.n, "k": spec.k}
    stats = complex_stats(spec, budget=_budget(args), stream=args.stream, jobs=args.jobs)
    report.results["mode"] = "stream" if args.stream else "table"
    report.results["dim"] = stats.dim
    report.results["f_vector"] = list(stats.f.c)
    report.results["euler"] = stats.euler
    if stats.facet_count_by_dim is not None:
        report.results["facets_by_dim"] = {str(d): c for d, c in
                                           sorted(stats.facet_count_by_dim.items())}
    if spec.k >= 2:
        report.check("dimension bound", stats.dim, vizing_dimension(spec.n, spec.k))


def _witness_text(witness: list[int], n: int) -> str:
    parts = [format_mask(witness[0], n)]
    for i, c in enumerate(witness[1:]):
        parts.append(("^ " if i % 2 == 0 else "v ") + format_mask(c, n))
    return " ".join(parts)


def _morse_common(report: RunReport, parts, expected_census, n: int, args) -> None:
    try:
        parts.total.check(parts.table)
        well_formed = True
    except (LemmaViolation, MatchingConflict) as exc:
        well_formed = False
        report.results["well_formed_error"] = str(exc)
    census = critical_census(parts.total, parts.table)
    cycles = verify_acyclic(parts.total, parts.table)
    report.results["cells"] = len(parts.table)
    report.results["matched_pairs"] = census.matched_pairs
    report.results["census"] = list(census.counts)
    report.check("well-formed", well_formed, True)
    report.check("acyclic", cycles.acyclic, True)
    if not cycles.acyclic:
        report.results["witness"] = _witness_text(cycles.witness, n)
        report.exit_code = EXIT_CYCLE
    report.check("critical census", list(census.counts), expected_census)
    if args.matching_out:
        with open(args.matching_out, "w", encoding="ascii") as fh:
            fh.write(parts.total.export_text())
        report.results["matching_file"] = args.matching_out


def cmd_morse(args, report: RunReport) -> None:
    if args.d52:
        report.spec = {"n": 5, "k": 2}
        parts = d52_matching(enumerate_complex(ComplexSpec(5, 2), _budget(args), args.jobs))
        profile: dict[str, int] = {}
        for c in sorted(parts.r34, key=int.bit_count):
            d = str(c.bit_count() - 1)
            profile[d] = profile.get(d, 0) + 1
        report.results["r34_profile"] = profile
        report.check("R34 matching acyclic", verify_acyclic(reference_matching(), parts.r34).acyclic, True)
        _morse_common(report, parts, [1, 0, 0, 0, 0, 4, 0], 5, args)
        return
    if args.n is None:
        raise UnsupportedSpecError("morse needs --n (k = n - 2 is implied) or --d52")
    n = args.n
    if n < 4:
        raise UnsupportedSpecError("the D_{n,n-2} matching needs n >= 4")
    report.spec = {"n": n, "k": n - 2}
    big = dnn2_matching(enumerate_complex(ComplexSpec(n, n - 2), _budget(args), args.jobs))
    report.results["r12_cells"] = len(big.r12)
    _morse_common(report, big, [1, 0, wedge_count(n), 0], n, args)
    if args.check_restriction:
        if n < 5:
            raise UnsupportedSpecError("--check-restriction needs n >= 5")
        small = dnn2_matching(enumerate_complex(ComplexSpec(n - 1, n - 3), _budget(args), args.jobs))
        outside = verify_no_outside_cycles(big.q12, big.r12, embedded_cells(small.table, n))
        report.results["max_outside_path"] = outside.max_path_length
        report.check(f"restricts to n = {n - 1}", verify_restriction(big.total, small.total), True)
        report.check("no Q12 cycles outside", outside.acyclic, True)
        if not outside.acyclic:
            report.results["outside_witness"] = _witness_text(outside.witness, n)
            report.exit_code = EXIT_CYCLE
        report.check("outside V-paths have length <= 2",
                      outside.max_path_length is not None and outside.max_path_length <= 2, True)


def cmd_homology(args, report: RunReport) -> None:
    spec = _spec(args)
    report.spec = {"n": spec.n, "k": spec.k}
    table = enumerate_complex(spec, _budget(args), args.jobs)
    hbudget = DEFAULT_HOMOLOGY_BUDGET if args.budget is None else args.budget
    bv = betti(table, args.mode, budget=hbudget)
    euler = f_vector(table).euler
    report.results["mode"] = args.mode
    report.results["betti"] = list(bv.b)
    if args.mode == "int":
        report.results["torsion"] = {str(d): t for d, t in sorted(bv.torsion.items())}
    report.results["euler"] = euler
    report.check("euler check", bv.euler, euler)


def cmd_reproduce(args, report: RunReport) -> None:
    from .reproduce import build_rows, run_rows

    rows = build_rows()
    if args.list:
        report.results["rows"] = [{"key": r.key, "criterion": r.criterion, "title": r.title,
                                   "heavy": r.heavy} for r in rows]
        return
    results = run_rows(rows, heavy=args.heavy)
    report.results["rows"] = [r.as_dict() for r in results]
    for r in results:
        report.check(f"[{r.criterion}] {r.key}  {r.title}", r.measured, r.expected)
    report.results["passed"] = sum(r.passed for r in results)
    report.results["failed"] = sum(not r.passed for r in results)


def cmd_export(args, report: RunReport) -> None:
    spec = _spec(args)
    report.spec = {"n": spec.n, "k": spec.k}
    table = enumerate_complex(spec, _budget(args), args.jobs)
    write_table(table, args.path)
    report.results["path"] = args.path
    report.results["cells"] = len(table)
    report.results["f_vector"] = list(f_vector(table).c)


def cmd_import(args, report: RunReport) -> None:
    table = read_table(args.path)
    report.spec = {"n": table.n, "k": table.k}
    report.results["path"] = args.path
    report.results["cells"] = len(table)
    report.results["f_vector"] = list(f_vector(table).c)
    with open(args.path, encoding="ascii") as fh:
        original = fh.read()
    report.check("re-export byte-identical", dump_table(table) == original, True)
    if args.verify:
        fresh = enumerate_complex(ComplexSpec(table.n, table.k), _budget(args), args.jobs)
        report.check("matches fresh enumeration", table == fresh, True)


COMMANDS = {"stats": cmd_stats, "morse": cmd_morse, "homology": cmd_homology,
            "reproduce": cmd_reproduce, "export": cmd_export, "import": cmd_import}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=None,
                        help="cell budget (default: $DOMCOMPLEX_BUDGET or 10^7)")
    common.add_argument("--jobs", type=int, default=available_jobs(),
                        help="worker processes for enumeration")
    common.add_argument("--json", action="store_true", help="print the JSON report")
    common.add_argument("--out", help="write the report here instead of stdout")

    nk = argparse.ArgumentParser(add_help=False)
    nk.add_argument("--n", type=int, required=True)
    nk.add_argument("--k", type=int, required=True)

    p = argparse.ArgumentParser(prog="domcomplex",
                                description="Complexes of graphs with domination number >= k.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("stats", parents=[common, nk], help="dimension, f-vector, Euler characteristic")
    s.add_argument("--stream", action="store_true", help="count cells without storing them")

    m = sub.add_parser("morse", parents=[common], help="build and verify the Morse matching")
    m.add_argument("--n", type=int)
    m.add_argument("--d52", action="store_true", help="the matching on D_{5,2}")
    m.add_argument("--check-restriction", action="store_true",
                   help="compare against the matching on n - 1 vertices")
    m.add_argument("--matching-out", help="write the pairs as 'd tau sigma' hex lines")

    h = sub.add_parser("homology", parents=[common, nk], help="Betti numbers")
    h.add_argument("--mode", choices=MODES, default="gf2")

    r = sub.add_parser("reproduce", parents=[common], help="run the golden-value table")
    r.add_argument("--heavy", action="store_true", help="include the slow rows")
    r.add_argument("--list", action="store_true", help="list rows without running them")

    e = sub.add_parser("export", parents=[common, nk], help="write a cell cache file")
    e.add_argument("path")

    i = sub.add_parser("import", parents=[common], help="read and check a cell cache file")
    i.add_argument("path")
    i.add_argument("--verify", action="store_true", help="compare with a fresh enumeration")
    return p


def execute(args: argparse.Namespace, argv: list[str]) -> RunReport:
    report = RunReport(command=list(argv))
    start = time.perf_counter()
    try:
        COMMANDS[args.command](args, report)
    except SizeLimitError as exc:
        report.fail(EXIT_BUDGET, str(exc))
    except (CacheFormatError, OSError) as exc:
        report.fail(EXIT_IO, str(exc))
    except (UnsupportedSpecError, InvalidGraphError) as exc:
        report.fail(EXIT_USAGE, str(exc))
    report.wall_time = time.perf_counter() - start
    return report


def run(argv: list[str]) -> RunReport:
    return execute(build_parser().parse_args(argv), argv)


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(argv)
    report = execute(args, argv)
    text = report.to_json() if args.json else report.render()
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
        except OSError as exc:
            print(f"error: cannot write report: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        print(text)
    if "error" in report.results:
        print(f"error: {report.results['error']}", file=sys.stderr)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
