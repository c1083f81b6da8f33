"""Discrete Morse matchings on ``D_{n,n-2}`` and ``D_{5,2}``, and their checks.

A matching is a set of pairs ``(tau, sigma)`` with ``tau`` a facet of
``sigma``; cells are edge masks.  Acyclicity is decided on the modified Hasse
diagram, one dimension layer at a time.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator

from .complex import CellTable, UnsupportedSpecError, embed_mask, x12_r12_split
from .graphs import edge_bit, edge_list, format_mask, parse_mask


class MatchingConflict(ValueError):
    """A cell was paired twice."""

    def __init__(self, cell: int, message: str):
        super().__init__(message)
        self.cell = cell


class LemmaViolation(RuntimeError):
    """A structural fact the construction relies on did not hold."""


def facets_of(mask: int) -> Iterator[int]:
    rest = mask
    while rest:
        low = rest & -rest
        yield mask ^ low
        rest ^= low


def is_facet(tau: int, sigma: int) -> bool:
    return tau & ~sigma == 0 and (sigma ^ tau).bit_count() == 1


def _cellset(cells) -> frozenset[int]:
    if isinstance(cells, CellTable):
        return cells.cellset()
    return cells if isinstance(cells, frozenset) else frozenset(cells)


class Matching:
    """Pairs ``(tau, sigma)`` kept as two inverse maps ``up`` and ``down``."""

    def __init__(self, n: int, pairs: Iterable[tuple[int, int]] = ()):
        self.n = n
        self.up: dict[int, int] = {}
        self.down: dict[int, int] = {}
        for tau, sigma in pairs:
            self.add(tau, sigma)

    def add(self, tau: int, sigma: int) -> None:
        if not is_facet(tau, sigma):
            raise ValueError(f"{self.fmt(tau)} is not a facet of {self.fmt(sigma)}")
        for c in (tau, sigma):
            if c in self.up or c in self.down:
                raise MatchingConflict(c, f"cell {self.fmt(c)} is already paired")
        self.up[tau] = sigma
        self.down[sigma] = tau

    def remove(self, tau: int) -> int:
        sigma = self.up.pop(tau)
        del self.down[sigma]
        return sigma

    def partner(self, cell: int) -> int | None:
        if cell in self.up:
            return self.up[cell]
        return self.down.get(cell)

    def __contains__(self, cell: int) -> bool:
        return cell in self.up or cell in self.down

    def __len__(self):
        return len(self.up)

    def pairs(self) -> list[tuple[int, int]]:
        """Pairs sorted by dimension of ``tau`` then by mask."""
        return sorted(self.up.items(), key=lambda p: (p[0].bit_count(), p[0]))

    def copy(self) -> "Matching":
        return Matching(self.n, self.up.items())

    def __eq__(self, other):
        if not isinstance(other, Matching):
            return NotImplemented
        return self.n == other.n and self.up == other.up

    def fmt(self, cell: int) -> str:
        return format_mask(cell, self.n)

    def __repr__(self):
        return f"Matching(n={self.n}, pairs={len(self)})"

    def check(self, cells=None) -> None:
        """Raise unless the pairs are facet pairs, disjoint and inside ``cells``."""
        seen = set()
        inside = None if cells is None else _cellset(cells)
        for tau, sigma in self.up.items():
            if self.down.get(sigma) != tau:
                raise LemmaViolation(f"up/down maps disagree at {self.fmt(tau)}")
            if not is_facet(tau, sigma):
                raise LemmaViolation(f"{self.fmt(tau)} is not a facet of {self.fmt(sigma)}")
            for c in (tau, sigma):
                if c in seen:
                    raise MatchingConflict(c, f"cell {self.fmt(c)} is paired twice")
                seen.add(c)
                if inside is not None and c not in inside:
                    raise LemmaViolation(f"paired cell {self.fmt(c)} is not in the complex")

    def export_text(self) -> str:
        width = max(1, -(-len(edge_list(self.n)) // 4))
        return "".join(f"{tau.bit_count() - 1} {tau:0{width}x} {sigma:0{width}x}\n"
                       for tau, sigma in self.pairs())


# -- constructions ----------------------------------------------------------

def inclusion_exclusion_matching(e: tuple[int, int], family, n: int) -> Matching:
    """Pair ``s`` with ``s + e`` whenever both lie in ``family``."""
    bit = edge_bit(*e, n)
    fam = _cellset(family)
    m = Matching(n)
    for s in sorted(fam):
        if not s & bit and s and (s | bit) in fam:
            m.add(s, s | bit)
    return m


def q12_matching(r12, n: int) -> Matching:
    """Pair each 1-cell of ``R12`` with ``s + ij`` for the first edge ``ij``,
    ``i < j < n``, keeping the result in ``R12``."""
    r12 = _cellset(r12)
    scan = [(edge_bit(i, j, n), (i, j)) for i, j in edge_list(n) if j < n]
    m = Matching(n)
    for s in sorted(c for c in r12 if c.bit_count() == 2):
        for bit, _ in scan:
            if not s & bit and (s | bit) in r12:
                m.add(s, s | bit)
                break
        else:
            raise LemmaViolation(f"no admissible edge for 1-cell {format_mask(s, n)} of R12")
    return m


def q23_matching(r12, n: int, q12: Matching | None = None, cells=None) -> Matching:
    """Pair each 3-cell of ``R12`` with the face missing its first edge.

    With ``q12`` given, a partner already used there is a conflict; with
    ``cells`` given, each partner must be a free face (one cofacet in cells).
    """
    r12 = _cellset(r12)
    everything = None if cells is None else _cellset(cells)
    m = Matching(n)
    for s in sorted(c for c in r12 if c.bit_count() == 4):
        tau = s ^ (s & -s)
        if tau not in r12:
            raise LemmaViolation(f"{format_mask(tau, n)} is not in R12")
        if q12 is not None and tau in q12:
            raise MatchingConflict(tau, f"{format_mask(tau, n)} is already Q12-paired")
        if everything is not None and cofacet_count(tau, everything, n) != 1:
            raise LemmaViolation(f"{format_mask(tau, n)} is not a free face")
        m.add(tau, s)
    return m


def cofacet_count(tau: int, cells, n: int) -> int:
    cells = _cellset(cells)
    total = 0
    for b in range(len(edge_list(n))):
        bit = 1 << b
        if not tau & bit and (tau | bit) in cells:
            total += 1
    return total


def assemble(matchings: Iterable[Matching], n: int | None = None) -> Matching:
    matchings = list(matchings)
    if n is None:
        if not matchings:
            raise ValueError("pass n when assembling no matchings")
        n = matchings[0].n
    out = Matching(n)
    for part in matchings:
        for tau, sigma in part.up.items():
            out.add(tau, sigma)
    return out


@dataclass
class DnnParts:
    """The pieces of the matching on ``D_{n,n-2}``."""

    table: CellTable
    x12: frozenset
    r12: frozenset
    p12: Matching
    q12: Matching
    q23: Matching
    total: Matching


def dnn2_matching(table: CellTable) -> DnnParts:
    """``P12 u Q12 u Q23`` on ``D_{n,n-2}``."""
    n = table.n
    x12, r12 = x12_r12_split(table)
    p12 = inclusion_exclusion_matching((1, 2), table, n)
    q12 = q12_matching(r12, n)
    q23 = q23_matching(r12, n, q12=q12, cells=table)
    total = assemble([p12, q12, q23])
    return DnnParts(table, x12, r12, p12, q12, q23, total)


# -- acyclicity -------------------------------------------------------------

@dataclass
class CycleReport:
    """``witness`` is ``[t0, s1, t1, ..., sk, tk]`` with ``tk == t0``."""

    acyclic: bool
    witness: list[int] | None = None
    max_path_length: int | None = None

    def __bool__(self):
        return self.acyclic


def _layer_graph(m: Matching, fam: frozenset, skip: frozenset = frozenset()):
    """Arcs ``tau -> tau'`` with ``tau'`` a facet of ``up[tau]`` other than tau.

    Only cells of ``fam`` outside ``skip`` are used.
    """
    adj: dict[int, list[int]] = {}
    for tau, sigma in m.up.items():
        if tau not in fam or sigma not in fam or tau in skip or sigma in skip:
            continue
        adj[tau] = [t for t in facets_of(sigma) if t != tau and t in fam and t not in skip]
    return adj


def _find_cycle(adj: dict[int, list[int]]) -> list[int] | None:
    """Iterative three-colour DFS over matched cells; returns a node cycle."""
    WHITE, GREY, BLACK = 0, 1, 2
    colour = dict.fromkeys(adj, WHITE)
    for root in sorted(adj, key=lambda c: (c.bit_count(), c)):
        if colour[root] != WHITE:
            continue
        stack = [(root, iter(adj[root]))]
        path = [root]
        colour[root] = GREY
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if nxt not in adj:
                    continue
                if colour[nxt] == GREY:
                    return path[path.index(nxt):] + [nxt]
                if colour[nxt] == WHITE:
                    colour[nxt] = GREY
                    stack.append((nxt, iter(adj[nxt])))
                    path.append(nxt)
                    advanced = True
                    break
            if not advanced:
                colour[node] = BLACK
                stack.pop()
                path.pop()
    return None


def _witness(m: Matching, nodes: list[int]) -> list[int]:
    out = [nodes[0]]
    for t in nodes[1:]:
        out += [m.up[out[-1]], t]
    return out


def verify_acyclic(m: Matching, cells) -> CycleReport:
    fam = _cellset(cells)
    cycle = _find_cycle(_layer_graph(m, fam))
    if cycle is None:
        return CycleReport(True)
    return CycleReport(False, _witness(m, cycle))


def validate_witness(m: Matching, witness: list[int]) -> bool:
    """Re-check a reported cycle directly against the face relation."""
    if len(witness) < 5 or len(witness) % 2 == 0 or witness[0] != witness[-1]:
        return False
    taus = witness[0::2]
    sigmas = witness[1::2]
    k = len(sigmas)
    if len(set(taus[1:])) != k:
        return False
    for idx, s in enumerate(sigmas):
        t_in, t_out = taus[idx], taus[idx + 1]
        if m.up.get(t_in) != s:
            return False
        if t_out == t_in or t_out | s != s or (s ^ t_out).bit_count() != 1:
            return False
    return True


def verify_no_outside_cycles(m: Matching, cells, inside) -> CycleReport:
    """Cycle search among cells of ``cells`` not in ``inside``.

    Also reports the longest V-path there: the number of up-steps, each of
    which must land (down-step) on a node that is still outside ``inside``.
    """
    fam = _cellset(cells)
    skip = _cellset(inside)
    adj = _layer_graph(m, fam, skip)
    cycle = _find_cycle(adj)
    if cycle is not None:
        return CycleReport(False, _witness(m, cycle))
    memo: dict[int, int] = {}
    for root in adj:
        if root in memo:
            continue
        stack = [root]
        while stack:
            node = stack[-1]
            pending = [t for t in adj[node] if t in adj and t not in memo]
            if pending:
                stack.extend(pending)
                continue
            stack.pop()
            memo[node] = max((1 + memo.get(t, 0) for t in adj[node]), default=0)
    return CycleReport(True, None, max(memo.values(), default=0))


# -- census and restriction -------------------------------------------------

@dataclass
class MorseCensus:
    counts: tuple[int, ...]
    critical: dict[int, list[int]] = field(default_factory=dict)
    matched_pairs: int = 0

    def to_json(self, acyclic: bool | None = None) -> str:
        payload = {"critical": {str(d): c for d, c in enumerate(self.counts)},
                   "matched_pairs": self.matched_pairs}
        if acyclic is not None:
            payload["acyclic"] = acyclic
        return json.dumps(payload, sort_keys=True)


def critical_census(m: Matching, cells) -> MorseCensus:
    if isinstance(cells, CellTable):
        levels = cells.cells
    else:
        levels = CellTable.from_masks(m.n, cells).cells
    critical = {}
    for d, level in enumerate(levels):
        critical[d] = [c for c in level if c not in m]
    counts = tuple(len(critical[d]) for d in range(len(levels)))
    present = {c for level in levels for c in level}
    paired = sum(1 for t, s in m.up.items() if t in present and s in present)
    return MorseCensus(counts, critical, paired)


def verify_restriction(m_big: Matching, m_small: Matching) -> bool:
    """Does ``m_big`` restrict to ``m_small`` under ``s -> s + (1)``?

    (a) every small pair embeds to a big pair; (b) no cell avoiding the new
    vertex is paired with one that touches it.
    """
    n_big, n_small = m_big.n, m_small.n
    if n_big != n_small + 1:
        raise ValueError("matchings must live on n and n - 1 vertices")
    for tau, sigma in m_small.up.items():
        if m_big.up.get(embed_mask(tau, n_small, n_big)) != embed_mask(sigma, n_small, n_big):
            return False
    new_vertex_edges = 0
    for i in range(1, n_big):
        new_vertex_edges |= edge_bit(i, n_big, n_big)
    for tau, sigma in m_big.up.items():
        if (tau & new_vertex_edges == 0) != (sigma & new_vertex_edges == 0):
            return False
    return True


def embedded_cells(table_small: CellTable, n_big: int) -> frozenset[int]:
    return frozenset(embed_mask(c, table_small.n, n_big) for c in table_small)


def facet_contributions(family, facet_masks: Iterable[int]) -> list[dict[int, list[int]]]:
    """For facets in the given order, the ``family`` cells that are faces of
    each facet and of no earlier one, grouped by dimension."""
    fam = _cellset(family)
    seen: set[int] = set()
    out = []
    for f in facet_masks:
        block: dict[int, list[int]] = {}
        for c in sorted(fam):
            if c & ~f == 0 and c not in seen:
                block.setdefault(c.bit_count() - 1, []).append(c)
        for level in block.values():
            seen.update(level)
        out.append(block)
    return out


# -- D_{5,2} ---------------------------------------------------------------

R34_LABELS = {
    "a": "13|14|15|23|35", "b": "13|14|15|24|45", "c": "13|23|24|25|35", "d": "14|23|24|25|45",
    "e": "13|14|15|23|24|35", "f": "13|14|15|23|24|45", "g": "13|14|15|23|25|35",
    "h": "13|14|15|23|35|45", "i": "13|14|15|24|25|45", "j": "13|14|15|24|35|45",
    "k": "13|14|23|24|25|35", "l": "13|14|23|24|25|45", "m": "13|15|23|24|25|35",
    "n": "13|23|24|25|35|45", "p": "14|15|23|24|25|45", "q": "14|23|24|25|35|45",
    "r": "13|14|15|23|24|25|35", "s": "13|14|15|23|24|25|45", "t": "13|14|15|23|24|35|45",
    "u": "13|14|23|24|25|35|45",
}

REFERENCE_PAIRS = [("a", "e"), ("b", "f"), ("c", "k"), ("d", "l"),
              ("g", "r"), ("i", "s"), ("j", "t"), ("n", "u")]


def r34_cell(label: str) -> int:
    return parse_mask(R34_LABELS[label], 5)


def r34_label(mask: int) -> str:
    for key, text in R34_LABELS.items():
        if parse_mask(text, 5) == mask:
            return key
    raise KeyError(format_mask(mask, 5))


def reference_matching() -> Matching:
    return Matching(5, [(r34_cell(a), r34_cell(b)) for a, b in REFERENCE_PAIRS])


@dataclass
class D52Parts:
    table: CellTable
    x12: frozenset
    r12: frozenset
    p12: Matching
    p34: Matching
    r34: frozenset
    r34_matching: Matching
    total: Matching


def d52_matching(table: CellTable, r34_matching: Matching | None = None) -> D52Parts:
    """``P12 u P34 u R34`` on ``D_{5,2}``; ``R34`` defaults to the hand-built pairs."""
    if (table.n, table.k) != (5, 2):
        raise UnsupportedSpecError("this matching is specific to D_{5,2}")
    e12 = edge_bit(1, 2, 5)
    x12 = frozenset(c for c in table if (c | e12) in table)
    r12 = table.cellset() - x12
    p12 = inclusion_exclusion_matching((1, 2), table, 5)
    p34 = inclusion_exclusion_matching((3, 4), r12, 5)
    r34 = frozenset(c for c in r12 if c not in p34)
    rm = reference_matching() if r34_matching is None else r34_matching
    total = assemble([p12, p34, rm])
    return D52Parts(table, x12, r12, p12, p34, r34, rm, total)


@dataclass
class R34Enumeration:
    """Complete matchings on ``R34`` under three successively narrower filters.

    ``complete``: every bottom cell paired up, every top cell paired down.
    ``acyclic``: the acyclic ones among those.
    ``shared_down``: those pairing downward every middle cell that is a face
    of two top cells (these are automatically acyclic).
    """

    complete: list[Matching]
    acyclic: list[Matching]
    shared_down: list[Matching]

    def counts(self) -> dict[str, int]:
        return {"complete": len(self.complete), "acyclic": len(self.acyclic),
                "shared_down": len(self.shared_down)}


def enumerate_r34_matchings(r34) -> R34Enumeration:
    fam = _cellset(r34)
    dims = sorted({c.bit_count() - 1 for c in fam})
    if len(dims) != 3 or dims[2] != dims[0] + 2:
        raise ValueError("expected cells in three consecutive dimensions")
    lo, mid, hi = dims
    bottom = sorted(c for c in fam if c.bit_count() - 1 == lo)
    middle = sorted(c for c in fam if c.bit_count() - 1 == mid)
    top = sorted(c for c in fam if c.bit_count() - 1 == hi)
    up_choices = [[s for s in middle if is_facet(t, s)] for t in bottom]
    down_choices = [[t for t in facets_of(s) if t in fam] for s in top]
    shared = {c for c in middle if sum(is_facet(c, s) for s in top) > 1}
    complete, acyclic, shared_down = [], [], []
    for ups in product(*up_choices):
        if len(set(ups)) != len(ups):
            continue
        for downs in product(*down_choices):
            used = set(ups) | set(downs)
            if len(used) != len(ups) + len(downs):
                continue
            m = Matching(5, list(zip(bottom, ups)) + list(zip(downs, top)))
            complete.append(m)
            if verify_acyclic(m, fam).acyclic:
                acyclic.append(m)
            if shared <= set(ups):
                shared_down.append(m)
    return R34Enumeration(complete, acyclic, shared_down)
