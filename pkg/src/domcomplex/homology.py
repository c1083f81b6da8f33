"""Boundary matrices and Betti numbers of enumerated complexes.

Two coefficient modes: ``"gf2"`` (ranks over the two-element field, columns
packed into Python ints) and ``"int"`` (ranks over the rationals by
fraction-free integer elimination, plus elementary divisors for torsion on
small instances).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .complex import CellTable, SizeLimitError

MODES = ("gf2", "int")
DEFAULT_HOMOLOGY_BUDGET = 200_000
TORSION_CELL_LIMIT = 10_000


@dataclass
class BoundaryMatrix:
    """Sparse ``∂_d``: rows are (d-1)-cells, columns d-cells, both sorted."""

    d: int
    mode: str
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    columns: list[dict[int, int]]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=np.int64)
        for c, col in enumerate(self.columns):
            for r, v in col.items():
                out[r, c] = v
        return out

    def column_bits(self) -> list[int]:
        out = []
        for col in self.columns:
            bits = 0
            for r, v in col.items():
                if v % 2:
                    bits |= 1 << r
            out.append(bits)
        return out


def boundary_matrix(cells: CellTable, d: int, mode: str = "int") -> BoundaryMatrix:
    """Deleting the r-th smallest edge (r = 0, 1, ...) carries sign ``(-1)^r``."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if not 1 <= d <= cells.dim:
        raise ValueError(f"boundary dimension {d} outside 1..{cells.dim}")
    rows = cells.cells[d - 1]
    cols = cells.cells[d]
    row_of = {c: i for i, c in enumerate(rows)}
    columns = []
    for sigma in cols:
        col = {}
        rest, r = sigma, 0
        while rest:
            low = rest & -rest
            face = sigma ^ low
            if face in row_of:
                col[row_of[face]] = 1 if mode == "gf2" or r % 2 == 0 else -1
            rest ^= low
            r += 1
        columns.append(col)
    return BoundaryMatrix(d, mode, rows, cols, columns)


def rank_gf2(columns: list[int]) -> int:
    """Rank over GF(2) of bit-packed columns, keyed by leading bit."""
    pivots: dict[int, int] = {}
    rank = 0
    for col in columns:
        while col:
            top = col.bit_length() - 1
            piv = pivots.get(top)
            if piv is None:
                pivots[top] = col
                rank += 1
                break
            col ^= piv
    return rank


def _normalise(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    return {k: v // g for k, v in row.items()} if g > 1 else row


def rank_rational(columns: list[dict[int, int]]) -> int:
    """Rank over Q by fraction-free sparse elimination on integer columns.

    Each column is reduced against pivot columns with
    ``col <- p * col - a * pivot``; content is divided out to keep entries
    small.  Python ints never overflow.
    """
    pivots: dict[int, dict[int, int]] = {}
    rank = 0
    for col in columns:
        col = {k: v for k, v in col.items() if v}
        while col:
            top = max(col)
            piv = pivots.get(top)
            if piv is None:
                pivots[top] = _normalise(col)
                rank += 1
                break
            p, a = piv[top], col[top]
            new = {k: p * v for k, v in col.items()}
            for k, v in piv.items():
                x = new.get(k, 0) - a * v
                if x:
                    new[k] = x
                else:
                    new.pop(k, None)
            col = _normalise(new)
    return rank


def elementary_divisors(matrix: BoundaryMatrix) -> list[int]:
    """Nonzero invariant factors of an integer boundary matrix.

    Unit pivots are eliminated exactly over Z first; whatever dense block
    remains goes to sympy's Smith normal form.
    """
    if matrix.mode != "int":
        raise ValueError("elementary divisors need an integer-mode matrix")
    rows: dict[int, dict[int, int]] = {}
    for c, col in enumerate(matrix.columns):
        for r, v in col.items():
            rows.setdefault(r, {})[c] = v
    cols: dict[int, dict[int, int]] = {c: dict(col) for c, col in enumerate(matrix.columns) if col}
    units = 0
    progress = True
    while progress:
        progress = False
        for c in list(cols):
            col = cols.get(c)
            if not col:
                cols.pop(c, None)
                continue
            r = next((r for r, v in col.items() if abs(v) == 1), None)
            if r is None:
                continue
            # pivot (r, c): clear row r and column c, which is exact over Z
            pv = col[r]
            prow = rows[r]
            for c2, a in list(prow.items()):
                if c2 == c:
                    continue
                f = a * pv  # pv = +-1 so a / pv == a * pv
                target = cols[c2]
                for r2, v in col.items():
                    x = target.get(r2, 0) - f * v
                    if x:
                        target[r2] = x
                        rows.setdefault(r2, {})[c2] = x
                    else:
                        target.pop(r2, None)
                        rows.get(r2, {}).pop(c2, None)
            for r2 in col:
                rows[r2].pop(c, None)
            rows.pop(r, None)
            for c2 in list(cols):
                cols[c2].pop(r, None)
            cols.pop(c)
            units += 1
            progress = True
    divisors = [1] * units
    cols = {c: col for c, col in cols.items() if col}
    if cols:
        from sympy import Matrix, ZZ
        from sympy.matrices.normalforms import invariant_factors

        live_rows = sorted({r for col in cols.values() for r in col})
        rindex = {r: i for i, r in enumerate(live_rows)}
        dense = [[0] * len(cols) for _ in live_rows]
        for j, col in enumerate(cols.values()):
            for r, v in col.items():
                dense[rindex[r]][j] = v
        divisors += [abs(int(x)) for x in invariant_factors(Matrix(dense), domain=ZZ) if x]
    return sorted(divisors)


@dataclass
class BettiVector:
    b: tuple[int, ...]
    mode: str
    torsion: dict[int, list[int]] = field(default_factory=dict)

    @property
    def euler(self) -> int:
        return sum((-1) ** i * x for i, x in enumerate(self.b))

    def __iter__(self):
        return iter(self.b)

    def __getitem__(self, i):
        return self.b[i]


def boundary_ranks(cells: CellTable, mode: str = "gf2") -> list[int]:
    """``ranks[d]`` = rank of ``∂_d``; ``ranks[0] = 0``."""
    ranks = [0]
    for d in range(1, cells.dim + 1):
        bm = boundary_matrix(cells, d, mode)
        ranks.append(rank_gf2(bm.column_bits()) if mode == "gf2" else rank_rational(bm.columns))
    return ranks


def betti(cells: CellTable, mode: str = "gf2", budget: int = DEFAULT_HOMOLOGY_BUDGET,
          torsion: bool | None = None) -> BettiVector:
    """Unreduced Betti numbers; ``b_0`` counts connected components.

    In ``"int"`` mode torsion is computed when the complex has at most
    ``TORSION_CELL_LIMIT`` cells (or when ``torsion`` forces it).
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if len(cells) > budget:
        raise SizeLimitError(
            f"{len(cells)} cells exceed the homology budget of {budget}; "
            "use the Euler characteristic (stats --stream) instead")
    if cells.dim < 0:
        return BettiVector((), mode)
    ranks = boundary_ranks(cells, mode) + [0]
    b = tuple(len(cells.cells[d]) - ranks[d] - ranks[d + 1] for d in range(cells.dim + 1))
    tors: dict[int, list[int]] = {}
    if mode == "int" and (torsion or (torsion is None and len(cells) <= TORSION_CELL_LIMIT)):
        for d in range(1, cells.dim + 1):
            nontrivial = [x for x in elementary_divisors(boundary_matrix(cells, d, "int")) if x > 1]
            if nontrivial:
                tors[d - 1] = nontrivial
    return BettiVector(b, mode, tors)


def betti_report(cells: CellTable, bv: BettiVector, euler: int) -> str:
    return json.dumps({"n": cells.n, "k": cells.k, "mode": bv.mode, "betti": list(bv.b),
                       "euler_check": bv.euler == euler}, sort_keys=True)
