"""Enumeration of the complexes ``D_{n,k}`` of graphs with domination number >= k.

Cells are edge masks (see :mod:`domcomplex.graphs`).  The empty graph is not
a cell, so a cell of dimension ``d`` is a mask with ``d + 1`` set bits.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Callable, Iterable, Iterator

from .graphs import (
    LabeledGraph,
    check_vertex_count,
    edge_bit,
    edge_list,
    mask_edges,
    num_edges,
)

DEFAULT_BUDGET = 10**7
CACHE_VERSION = "v1"


class SizeLimitError(RuntimeError):
    pass


class UnsupportedSpecError(ValueError):
    pass


class CacheFormatError(ValueError):
    pass


def default_budget() -> int:
    env = os.environ.get("DOMCOMPLEX_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


@dataclass(frozen=True)
class ComplexSpec:
    n: int
    k: int

    def __post_init__(self):
        check_vertex_count(self.n)
        if self.n < 2:
            raise UnsupportedSpecError(f"need n >= 2, got n={self.n}")
        if not 0 <= self.k <= self.n:
            raise UnsupportedSpecError(f"need 0 <= k <= n, got k={self.k}, n={self.n}")

    def __str__(self):
        return f"D_{{{self.n},{self.k}}}"


def vizing_dimension(n: int, k: int) -> int:
    """Dimension of ``D_{n,k}`` for ``2 <= k <= n``."""
    return (n - k + 2) * (n - k) // 2 - 1


def wedge_count(n: int) -> int:
    """``N_n = (n-2)(n-3)(3n^2-7n-2) / 12``: spheres in the wedge ``D_{n,n-2}``."""
    return (n - 2) * (n - 3) * (3 * n * n - 7 * n - 2) // 12


# -- subset-tree walk -------------------------------------------------------

@lru_cache(maxsize=None)
def _subsets_through(n: int, size: int) -> tuple[tuple[int, ...], ...]:
    """Per vertex ``v``: the vertex index-tuples of size ``size`` containing v."""
    per = [[] for _ in range(n)]
    for combo in combinations(range(n), size):
        for v in combo:
            per[v].append(combo)
    return tuple(tuple(p) for p in per)


def _make_extension_test(n: int, k: int) -> Callable[[list, int, int], bool]:
    """Return ``ok(nbr, i, j)``: does the graph stay in ``D_{n,k}`` after edge ij?

    ``nbr`` already includes the new edge; the parent had no dominating set
    of size ``k - 1``, so only sets through ``i`` or ``j`` need checking.
    """
    full = (1 << n) - 1
    size = k - 1
    if size <= 0:
        return lambda nbr, i, j: True
    if size == 1:
        return lambda nbr, i, j: nbr[i] != full and nbr[j] != full
    if size == 2:
        def ok2(nbr, i, j):
            ni, nj = nbr[i], nbr[j]
            for x in nbr:
                if ni | x == full or nj | x == full:
                    return False
            return True
        return ok2
    through = _subsets_through(n, size)

    def ok(nbr, i, j):
        for v in (i, j):
            for combo in through[v]:
                acc = 0
                for u in combo:
                    acc |= nbr[u]
                if acc == full:
                    return False
        return True
    return ok


def _walk(n: int, k: int, roots: Iterable[int], visit: Callable[[int, int], None]) -> None:
    """Depth-first walk of the subset tree of ``D_{n,k}``.

    Children add an edge of larger index than any present, so each cell is
    reached once.  A failing child is pruned with its whole subtree, which is
    sound because the complex is closed under taking faces.
    """
    if k > n:
        return
    pairs = [(i - 1, j - 1) for i, j in edge_list(n)]
    m = len(pairs)
    ok = _make_extension_test(n, k)
    base = [1 << v for v in range(n)]

    def rec(mask, nbr, start, dim):
        visit(mask, dim)
        for e in range(start, m):
            i, j = pairs[e]
            child = nbr.copy()
            child[i] |= 1 << j
            child[j] |= 1 << i
            if ok(child, i, j):
                rec(mask | (1 << e), child, e + 1, dim + 1)

    for e in roots:
        i, j = pairs[e]
        nbr = base.copy()
        nbr[i] |= 1 << j
        nbr[j] |= 1 << i
        if ok(nbr, i, j):
            rec(1 << e, nbr, e + 1, 0)


def _branch_counts(args) -> list[int]:
    n, k, roots = args
    counts: list[int] = []

    def visit(mask, dim):
        if dim == len(counts):
            counts.append(0)
        counts[dim] += 1

    _walk(n, k, roots, visit)
    return counts


def _branch_cells(args) -> list[list[int]]:
    n, k, roots, budget = args
    cells: list[list[int]] = []
    total = 0

    def visit(mask, dim):
        nonlocal total
        total += 1
        if total > budget:
            raise SizeLimitError(
                f"D_{{{n},{k}}} exceeds the cell budget of {budget}; "
                "raise the budget or use streaming counts")
        while dim >= len(cells):
            cells.append([])
        cells[dim].append(mask)

    _walk(n, k, roots, visit)
    return cells


def _split_roots(n: int, jobs: int) -> list[list[int]]:
    m = num_edges(n)
    jobs = max(1, min(jobs, m))
    return [list(range(r, m, jobs)) for r in range(jobs)]


def _run_branches(fn, argsets, jobs):
    if jobs <= 1 or len(argsets) == 1:
        return [fn(a) for a in argsets]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, argsets))


def count_cells(spec: ComplexSpec, jobs: int = 1) -> list[int]:
    """Per-dimension cell counts without materialising any cell list."""
    parts = _run_branches(_branch_counts,
                          [(spec.n, spec.k, r) for r in _split_roots(spec.n, jobs)], jobs)
    width = max((len(p) for p in parts), default=0)
    return [sum(p[d] for p in parts if d < len(p)) for d in range(width)]


# -- materialised tables ----------------------------------------------------

@dataclass(frozen=True)
class FVector:
    c: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.c) - 1

    @property
    def euler(self) -> int:
        return sum((-1) ** i * x for i, x in enumerate(self.c))

    def __iter__(self):
        return iter(self.c)

    def __len__(self):
        return len(self.c)

    def __getitem__(self, i):
        return self.c[i]


@dataclass(frozen=True)
class ComplexStats:
    spec: ComplexSpec
    f: FVector
    euler: int
    dim: int
    facet_count_by_dim: dict[int, int] | None = None


class CellTable:
    """The cells of one complex, per dimension, sorted by mask.

    ``table.cells[d]`` is the tuple of ``d``-cells; ``table.id_of(mask)``
    gives ``(d, ordinal)``.
    """

    def __init__(self, n: int, k: int | None, cells: Iterable[Iterable[int]]):
        self.n = n
        self.k = k
        self.cells = tuple(tuple(sorted(set(level))) for level in cells)
        while self.cells and not self.cells[-1]:
            self.cells = self.cells[:-1]
        self._index = {c: (d, i) for d, level in enumerate(self.cells) for i, c in enumerate(level)}

    @classmethod
    def from_masks(cls, n: int, masks: Iterable[int], k: int | None = None) -> "CellTable":
        levels: list[list[int]] = []
        for m in masks:
            d = m.bit_count() - 1
            if d < 0:
                raise ValueError("the empty graph is not a cell")
            while d >= len(levels):
                levels.append([])
            levels[d].append(m)
        return cls(n, k, levels)

    @property
    def dim(self) -> int:
        return len(self.cells) - 1

    def __len__(self):
        return len(self._index)

    def __contains__(self, mask) -> bool:
        return mask in self._index

    def __iter__(self) -> Iterator[int]:
        for level in self.cells:
            yield from level

    def __eq__(self, other):
        if not isinstance(other, CellTable):
            return NotImplemented
        return (self.n, self.k, self.cells) == (other.n, other.k, other.cells)

    def cells_of_dim(self, d: int) -> tuple[int, ...]:
        return self.cells[d] if 0 <= d < len(self.cells) else ()

    def id_of(self, mask: int) -> tuple[int, int]:
        return self._index[mask]

    def cellset(self) -> frozenset[int]:
        return frozenset(self._index)

    def graph(self, mask: int) -> LabeledGraph:
        return LabeledGraph(self.n, mask)

    def __repr__(self):
        return f"CellTable(n={self.n}, k={self.k}, f={tuple(len(c) for c in self.cells)})"


def enumerate_complex(spec: ComplexSpec, budget: int | None = None, jobs: int = 1) -> CellTable:
    """All simplices of ``D_{n,k}``, found by the pruned subset-tree walk."""
    budget = default_budget() if budget is None else budget
    per_job = [(spec.n, spec.k, r, budget) for r in _split_roots(spec.n, jobs)]
    parts = _run_branches(_branch_cells, per_job, jobs)
    width = max((len(p) for p in parts), default=0)
    levels = [[m for p in parts if d < len(p) for m in p[d]] for d in range(width)]
    if sum(map(len, levels)) > budget:
        raise SizeLimitError(f"{spec} exceeds the cell budget of {budget}")
    return CellTable(spec.n, spec.k, levels)


def f_vector(table: CellTable) -> FVector:
    return FVector(tuple(len(level) for level in table.cells))


def euler_characteristic(spec: ComplexSpec, jobs: int = 1) -> int:
    """Alternating sum of the per-dimension counts; never stores cells."""
    return sum((-1) ** d * c for d, c in enumerate(count_cells(spec, jobs)))


def facets(table: CellTable) -> list[LabeledGraph]:
    """Maximal cells, ordered by dimension then mask."""
    m = num_edges(table.n)
    out = []
    for level in table.cells:
        for c in level:
            free = ~c & ((1 << m) - 1)
            maximal = True
            while free:
                low = free & -free
                if c | low in table:
                    maximal = False
                    break
                free ^= low
            if maximal:
                out.append(LabeledGraph(table.n, c))
    return out


def complex_stats(spec: ComplexSpec, budget: int | None = None, stream: bool = False,
                  jobs: int = 1) -> ComplexStats:
    if stream:
        counts = tuple(count_cells(spec, jobs))
        f = FVector(counts)
        return ComplexStats(spec, f, f.euler, f.dim)
    table = enumerate_complex(spec, budget, jobs)
    f = f_vector(table)
    by_dim: dict[int, int] = {}
    for g in facets(table):
        by_dim[g.dim] = by_dim.get(g.dim, 0) + 1
    return ComplexStats(spec, f, f.euler, f.dim, by_dim)


def x12_r12_split(table: CellTable) -> tuple[frozenset[int], frozenset[int]]:
    """Split ``D_{n,n-2}`` into ``X12 = {s : s + 12 in D}`` and the rest ``R12``."""
    if table.k != table.n - 2:
        raise UnsupportedSpecError(f"X12/R12 split needs k = n - 2, got n={table.n}, k={table.k}")
    e12 = edge_bit(1, 2, table.n)
    x12, r12 = [], []
    for c in table:
        (x12 if (c | e12) in table else r12).append(c)
    return frozenset(x12), frozenset(r12)


def embed_mask(mask: int, n_old: int, n_new: int) -> int:
    """Same edge set, re-indexed for ``n_new >= n_old`` vertices."""
    out = 0
    for i, j in mask_edges(mask, n_old):
        out |= edge_bit(i, j, n_new)
    return out


def embed_add_isolated(g: LabeledGraph, n_new: int) -> LabeledGraph:
    """``g + (1)``: add vertex ``n_new`` as an isolated vertex."""
    if n_new != g.n + 1:
        raise ValueError(f"expected n_new = {g.n + 1}, got {n_new}")
    return LabeledGraph(n_new, embed_mask(g.edges, g.n, n_new))


def touches_vertex(mask: int, n: int, v: int) -> bool:
    return any(v in e for e in mask_edges(mask, n))


# -- cache file -------------------------------------------------------------

def dump_table(table: CellTable) -> str:
    if table.k is None:
        raise CacheFormatError("only tables of a D_{n,k} can be cached")
    width = max(1, -(-num_edges(table.n) // 4))
    counts = ",".join(str(len(level)) for level in table.cells)
    lines = [f"domcomplex {CACHE_VERSION} n={table.n} k={table.k} dims={counts}"]
    for c in sorted(table):
        lines.append(f"{c:0{width}x}")
    return "\n".join(lines) + "\n"


def load_table(text: str) -> CellTable:
    lines = text.splitlines()
    if not lines:
        raise CacheFormatError("empty cache file")
    head = lines[0].split()
    if len(head) != 5 or head[0] != "domcomplex":
        raise CacheFormatError(f"not a domcomplex cache header: {lines[0]!r}")
    if head[1] != CACHE_VERSION:
        raise CacheFormatError(f"unsupported cache version {head[1]!r} (expected {CACHE_VERSION})")
    try:
        fields = dict(tok.split("=", 1) for tok in head[2:])
        n, k = int(fields["n"]), int(fields["k"])
        dims = [int(x) for x in fields["dims"].split(",") if x]
    except (KeyError, ValueError) as exc:
        raise CacheFormatError(f"bad header fields in {lines[0]!r}") from exc
    width = max(1, -(-num_edges(n) // 4))
    masks = []
    for ln in lines[1:]:
        if not ln:
            continue
        if len(ln) != width:
            raise CacheFormatError(f"cell line {ln!r} is not {width} hex digits")
        masks.append(int(ln, 16))
    if masks != sorted(set(masks)):
        raise CacheFormatError("cell lines must be strictly ascending")
    table = CellTable.from_masks(n, masks, k)
    if [len(level) for level in table.cells] != dims:
        raise CacheFormatError("header dims do not match the cell lines")
    return table


def write_table(table: CellTable, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(dump_table(table))


def read_table(path) -> CellTable:
    with open(path, encoding="ascii") as fh:
        return load_table(fh.read())
