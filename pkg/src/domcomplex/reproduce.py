"""Golden-value rows for the published numbers, driven by ``data/expected.json``."""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Any, Callable

from .complex import (
    CellTable,
    ComplexSpec,
    enumerate_complex,
    euler_characteristic,
    f_vector,
)
from .graphs import format_mask, mask_from_edges, parse_mask
from .homology import betti
from .morse import (
    critical_census,
    d52_matching,
    dnn2_matching,
    embedded_cells,
    enumerate_r34_matchings,
    facet_contributions,
    reference_matching,
    verify_acyclic,
    verify_no_outside_cycles,
    verify_restriction,
)


def load_expected() -> dict:
    text = resources.files("domcomplex").joinpath("data/expected.json").read_text()
    return json.loads(text)


@dataclass
class Row:
    key: str
    criterion: int
    title: str
    check: Callable[[], tuple[Any, Any]]
    heavy: bool = False


@dataclass
class RowResult:
    key: str
    criterion: int
    title: str
    passed: bool
    measured: Any
    expected: Any

    def as_dict(self) -> dict:
        return {"key": self.key, "criterion": self.criterion, "title": self.title,
                "passed": self.passed, "measured": self.measured, "expected": self.expected}


@lru_cache(maxsize=None)
def _table(n: int, k: int) -> CellTable:
    return enumerate_complex(ComplexSpec(n, k))


@lru_cache(maxsize=None)
def _dnn(n: int):
    return dnn2_matching(_table(n, n - 2))


@lru_cache(maxsize=None)
def _d52():
    return d52_matching(_table(5, 2))


def _fmt_pairs(pairs, n):
    return sorted([format_mask(a, n), format_mask(b, n)] for a, b in pairs)


def _census_row(n: int, wedge: int):
    def check():
        parts = _dnn(n)
        parts.total.check(parts.table)
        census = critical_census(parts.total, parts.table)
        acyclic = verify_acyclic(parts.total, parts.table).acyclic
        return ({"census": list(census.counts), "acyclic": acyclic},
                {"census": [1, 0, wedge, 0], "acyclic": True})
    return check


def _hasse_check(exp):
    def check():
        parts = _dnn(4)
        census = critical_census(parts.total, parts.table)
        measured = {
            "q12": _fmt_pairs(parts.q12.pairs(), 4),
            "q23": _fmt_pairs(parts.q23.pairs(), 4),
            "critical_2": sorted(format_mask(c, 4) for c in census.critical[2]),
            "r12": sorted(format_mask(c, 4) for c in parts.r12),
        }
        expected = {
            "q12": sorted(exp["q12"]),
            "q23": sorted(exp["q23"]),
            "critical_2": sorted(format_mask(parse_mask(c, 4), 4) for c in exp["critical_2"]),
            "r12": sorted(format_mask(parse_mask(c, 4), 4) for c in exp["r12"]),
        }
        return measured, expected
    return check


def _restriction_row(n: int):
    def check():
        big, small = _dnn(n), _dnn(n - 1)
        restricts = verify_restriction(big.total, small.total)
        inside = embedded_cells(small.table, n)
        report = verify_no_outside_cycles(big.q12, big.r12, inside)
        measured = {"restricts": restricts, "outside_acyclic": report.acyclic,
                    "max_path_at_most_2": report.max_path_length is not None
                    and report.max_path_length <= 2}
        return measured, {"restricts": True, "outside_acyclic": True, "max_path_at_most_2": True}
    return check


def d52_facet_order(exp_tables) -> list[int]:
    """Facet masks of ``D_{5,2}`` in the order the tables list them."""
    out = []
    for t in exp_tables:
        if "k4_on" in t:
            verts = t["k4_on"]
            out.append(mask_from_edges([(a, b) for a in verts for b in verts if a < b], 5))
        else:
            out.append(((1 << 10) - 1) & ~parse_mask(t["removed"], 5))
    return out


def _tables_check(exp):
    def check():
        parts = _d52()
        blocks = facet_contributions(parts.r12, d52_facet_order(exp["facet_tables"]))
        measured = [{str(d): sorted(format_mask(c, 5) for c in cells) for d, cells in b.items()}
                    for b in blocks]
        expected = [{d: sorted(format_mask(parse_mask(c, 5), 5) for c in cells)
                     for d, cells in t["cells"].items()} for t in exp["facet_tables"]]
        return ({"tables": measured, "r12_size": len(parts.r12)},
                {"tables": expected, "r12_size": exp["r12_size"]})
    return check


def _r34_profile_check(exp):
    def check():
        parts = _d52()
        prof: dict[str, int] = {}
        for c in sorted(parts.r34, key=int.bit_count):
            key = str(c.bit_count() - 1)
            prof[key] = prof.get(key, 0) + 1
        return prof, exp["r34_profile"]
    return check


def _d52_matching_check(exp):
    def check():
        parts = _d52()
        parts.total.check(parts.table)
        fig = verify_acyclic(reference_matching(), parts.r34).acyclic
        whole = verify_acyclic(parts.total, parts.table).acyclic
        census = list(critical_census(parts.total, parts.table).counts)
        return ({"reference_acyclic": fig, "total_acyclic": whole, "census": census},
                {"reference_acyclic": True, "total_acyclic": True, "census": exp["census"]})
    return check


@lru_cache(maxsize=None)
def _r34_enum():
    return enumerate_r34_matchings(_d52().r34)


def _r34_count_check(exp, reading: str):
    def check():
        found = _r34_enum()
        chosen = getattr(found, reading)
        fig = reference_matching()
        r34 = _d52().r34
        return ({"count": len(chosen), "contains_reference": any(m == fig for m in chosen),
                 "all_acyclic": all(verify_acyclic(m, r34).acyclic for m in chosen)},
                {"count": exp["r34_pairings"], "contains_reference": True, "all_acyclic": True})
    return check


def _fvec_check(n, exp):
    return lambda: (list(f_vector(_table(n, n - 2)).c), exp)


def _euler_check(n, k, exp):
    return lambda: (euler_characteristic(ComplexSpec(n, k)), exp)


def _betti_check(n, k, mode, exp):
    return lambda: (list(betti(_table(n, k), mode).b), exp)


def build_rows(expected: dict | None = None) -> list[Row]:
    exp = load_expected() if expected is None else expected
    wedge = {int(k): v for k, v in exp["wedge_counts"].items()}
    rows: list[Row] = []
    for n_text, f in exp["f_vectors_k_n_minus_2"].items():
        n = int(n_text)
        rows.append(Row(f"fvec-{n}", 1, f"f-vector of D_{{{n},{n - 2}}}", _fvec_check(n, f)))
    for n, w in sorted(wedge.items()):
        rows.append(Row(f"euler-{n}-{n - 2}", 2, f"chi(D_{{{n},{n - 2}}}) = N_{n} + 1",
                        _euler_check(n, n - 2, w + 1)))
    for e in exp["euler"]:
        rows.append(Row(f"euler-{e['n']}-{e['k']}", 2, f"chi(D_{{{e['n']},{e['k']}}})",
                        _euler_check(e["n"], e["k"], e["value"]), heavy=e["heavy"]))
    for n in range(4, 9):
        rows.append(Row(f"morse-{n}", 3, f"matching on D_{{{n},{n - 2}}}: census and acyclicity",
                        _census_row(n, wedge[n])))
    rows.append(Row("hasse-4", 4, "Q12/Q23 pairs and critical 2-cells for n = 4",
                    _hasse_check(exp["hasse_n4"])))
    for n in range(5, 8):
        rows.append(Row(f"restrict-{n}", 5, f"D_{{{n},{n - 2}}} restricts to n = {n - 1}",
                        _restriction_row(n)))
    d52 = exp["d52"]
    rows += [
        Row("d52-tables", 6, "R12 of D_{5,2} by contributing facet", _tables_check(d52)),
        Row("d52-r34", 6, "R34 dimension profile (4, 12, 4)", _r34_profile_check(d52)),
        Row("d52-matching", 6, "P12 + P34 + R34 on D_{5,2}", _d52_matching_check(d52)),
        Row("d52-r34-acyclic-count", 6, "acyclic complete R34 matchings = 16",
            _r34_count_check(d52, "acyclic")),
        Row("d52-r34-shared-down-count", 6, "R34 matchings pairing shared 5-cells down = 16",
            _r34_count_check(d52, "shared_down")),
    ]
    for b in exp["betti"]:
        rows.append(Row(f"betti-{b['n']}-{b['k']}-{b['mode']}", 7,
                        f"Betti(D_{{{b['n']},{b['k']}}}) over {b['mode']}",
                        _betti_check(b["n"], b["k"], b["mode"], b["value"]), heavy=b["heavy"]))
    return rows


def run_rows(rows: list[Row], heavy: bool = False) -> list[RowResult]:
    out = []
    for row in rows:
        if row.heavy and not heavy:
            continue
        measured, expected = row.check()
        out.append(RowResult(row.key, row.criterion, row.title, measured == expected,
                             measured, expected))
    return out
