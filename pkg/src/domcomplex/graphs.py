"""Labeled graphs on vertices 1..n stored as edge bit-masks, plus domination.

Edges ``ij`` (``i < j``) are ranked lexicographically, so for ``n = 4`` the
order is ``12, 13, 14, 23, 24, 34`` and bit ``r`` of a mask is the edge of
rank ``r``.  Vertex sets are masks too, with vertex ``v`` at bit ``v - 1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

MAX_VERTICES = 16


class InvalidEdgeError(ValueError):
    pass


class InvalidGraphError(ValueError):
    pass


def check_vertex_count(n: int) -> int:
    if not isinstance(n, int) or isinstance(n, bool):
        raise InvalidGraphError(f"vertex count must be an int, got {n!r}")
    if not 0 <= n <= MAX_VERTICES:
        raise InvalidGraphError(f"vertex count {n} outside 0..{MAX_VERTICES}")
    return n


def num_edges(n: int) -> int:
    return n * (n - 1) // 2


@lru_cache(maxsize=None)
def edge_list(n: int) -> tuple[tuple[int, int], ...]:
    """All pairs ``(i, j)`` with ``1 <= i < j <= n`` in rank order."""
    check_vertex_count(n)
    return tuple(combinations(range(1, n + 1), 2))


def edge_index(i: int, j: int, n: int) -> int:
    check_vertex_count(n)
    if not (1 <= i < j <= n):
        raise InvalidEdgeError(f"invalid edge ({i},{j}) for n={n}")
    return (i - 1) * n - (i - 1) * i // 2 + (j - i - 1)


def edge_from_index(r: int, n: int) -> tuple[int, int]:
    pairs = edge_list(n)
    if not 0 <= r < len(pairs):
        raise InvalidEdgeError(f"edge index {r} out of range for n={n}")
    return pairs[r]


def edge_bit(i: int, j: int, n: int) -> int:
    if i > j:
        i, j = j, i
    return 1 << edge_index(i, j, n)


def mask_edges(mask: int, n: int) -> list[tuple[int, int]]:
    pairs = edge_list(n)
    out = []
    while mask:
        low = mask & -mask
        out.append(pairs[low.bit_length() - 1])
        mask ^= low
    return out


def mask_from_edges(edges: Iterable[Sequence[int]], n: int) -> int:
    mask = 0
    for i, j in edges:
        mask |= edge_bit(i, j, n)
    return mask


def format_mask(mask: int, n: int) -> str:
    """Render as the bar notation ``13|14|23|24`` (``-`` for no edges)."""
    if not mask:
        return "-"
    sep = "" if n < 10 else ","
    return "|".join(f"{i}{sep}{j}" for i, j in mask_edges(mask, n))


def parse_mask(text: str, n: int) -> int:
    """Inverse of :func:`format_mask`.  ``"12|34"`` or ``"1,2|3,4"``."""
    text = text.strip()
    if text in ("", "-"):
        return 0
    edges = []
    for tok in text.split("|"):
        tok = tok.strip()
        if "," in tok:
            a, b = tok.split(",")
        elif len(tok) == 2:
            a, b = tok[0], tok[1]
        else:
            raise InvalidEdgeError(f"cannot parse edge {tok!r}; use 'i,j' when n >= 10")
        edges.append((int(a), int(b)))
    mask = 0
    for a, b in edges:
        if a == b:
            raise InvalidEdgeError(f"loop {a}{b} is not an edge")
        mask |= edge_bit(a, b, n)
    return mask


def vertex_mask(vertices: Iterable[int]) -> int:
    out = 0
    for v in vertices:
        out |= 1 << (v - 1)
    return out


def closed_neighborhoods(mask: int, n: int) -> list[int]:
    """Closed neighbourhood vertex-masks, index ``v - 1`` for vertex ``v``."""
    nbr = [1 << v for v in range(n)]
    for i, j in mask_edges(mask, n):
        nbr[i - 1] |= 1 << (j - 1)
        nbr[j - 1] |= 1 << (i - 1)
    return nbr


def degrees(mask: int, n: int) -> list[int]:
    deg = [0] * n
    for i, j in mask_edges(mask, n):
        deg[i - 1] += 1
        deg[j - 1] += 1
    return deg


@dataclass(frozen=True, order=True)
class LabeledGraph:
    """A graph on ``{1..n}``; also names a simplex of ``D_{n,k}``."""

    n: int
    edges: int = 0

    def __post_init__(self):
        check_vertex_count(self.n)
        if self.edges < 0 or self.edges >> num_edges(self.n):
            raise InvalidGraphError(f"edge mask {self.edges:#x} has bits beyond n={self.n}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "LabeledGraph":
        return cls(n, mask_from_edges(edges, n))

    @classmethod
    def parse(cls, text: str, n: int) -> "LabeledGraph":
        return cls(n, parse_mask(text, n))

    @property
    def size(self) -> int:
        return self.edges.bit_count()

    @property
    def dim(self) -> int:
        return self.size - 1

    def edge_pairs(self) -> list[tuple[int, int]]:
        return mask_edges(self.edges, self.n)

    def neighborhoods(self) -> list[int]:
        return closed_neighborhoods(self.edges, self.n)

    def degrees(self) -> list[int]:
        return degrees(self.edges, self.n)

    def __add__(self, other: "LabeledGraph") -> "LabeledGraph":
        if other.n != self.n:
            raise InvalidGraphError("graphs live on different vertex counts")
        return LabeledGraph(self.n, self.edges | other.edges)

    def __str__(self) -> str:
        return format_mask(self.edges, self.n)


def _as_mask(g) -> tuple[int, int]:
    if isinstance(g, LabeledGraph):
        return g.edges, g.n
    mask, n = g
    return mask, n


def dominates(D: int, g) -> bool:
    """True iff the vertex set ``D`` (a mask) dominates ``g``.

    ``g`` is a :class:`LabeledGraph` or a ``(mask, n)`` pair.
    """
    mask, n = _as_mask(g)
    full = (1 << n) - 1
    covered = 0
    for v, nb in enumerate(closed_neighborhoods(mask, n)):
        if D >> v & 1:
            covered |= nb
    return covered == full


@lru_cache(maxsize=None)
def vertex_subsets(n: int, size: int) -> tuple[int, ...]:
    return tuple(vertex_mask(c) for c in combinations(range(1, n + 1), size))


def _has_dominating_set(nbr: Sequence[int], n: int, size: int) -> bool:
    full = (1 << n) - 1
    if size >= n:
        return True
    if size <= 0:
        return n == 0
    if size == 1:
        return full in nbr
    if size == 2:
        for a in range(n):
            na = nbr[a]
            for b in range(a + 1, n):
                if na | nbr[b] == full:
                    return True
        return False
    for combo in combinations(nbr, size):
        acc = 0
        for nb in combo:
            acc |= nb
        if acc == full:
            return True
    return False


def domination_number(g) -> int:
    mask, n = _as_mask(g)
    nbr = closed_neighborhoods(mask, n)
    for size in range(n + 1):
        if _has_dominating_set(nbr, n, size):
            return size
    return n  # pragma: no cover


def domination_at_least(g, k: int) -> bool:
    """``gamma(g) >= k``, stopping at the first dominating set of size ``k - 1``.

    Supersets of dominating sets dominate, so only size ``k - 1`` is tried.
    """
    mask, n = _as_mask(g)
    if k <= 0:
        return True
    if k > n:
        return False
    return not _has_dominating_set(closed_neighborhoods(mask, n), n, k - 1)
