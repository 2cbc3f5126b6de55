"""Non-crossing spanning trees on the collinear points 0..n.

Edges are pairs ``(a, b)`` with ``a < b``; two edges cross iff
``a < c < b < d``. Every subtree of a non-crossing tree spans an interval of
consecutive points, written ``[lo, hi]``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable

from .config import check_cap
from .errors import Crossing, EdgeNotInTree, EmptyTree, NotSpanning

Edge = tuple[int, int]


def crosses(e: Edge, f: Edge) -> bool:
    (a, b), (c, d) = e, f
    return a < c < b < d or c < a < d < b


class _DSU:
    def __init__(self, points):
        self.parent = {p: p for p in points}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x, y) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        self.parent[rx] = ry
        return True


@dataclass(frozen=True, order=True)
class Ncst:
    n: int
    edges: tuple[Edge, ...]

    def __contains__(self, e) -> bool:
        return _norm(e) in self.edge_set

    @property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    def __str__(self) -> str:
        return format_tree(self)


def _norm(e) -> Edge:
    a, b = int(e[0]), int(e[1])
    return (a, b) if a < b else (b, a)


def make_tree(n: int, edges: Iterable) -> Ncst:
    """Build without validation; callers guarantee the invariants."""
    return Ncst(n, tuple(sorted(_norm(e) for e in edges)))


def validate_tree(n: int, edges: Iterable) -> Ncst:
    edges = [_norm(e) for e in edges]
    if len(set(edges)) != len(edges):
        raise NotSpanning("duplicate edge")
    for a, b in edges:
        if a == b or a < 0 or b > n:
            raise NotSpanning(f"edge {(a, b)} is not a pair of distinct points in 0..{n}")
    if len(edges) != n:
        raise NotSpanning(f"expected {n} edges, got {len(edges)}")
    dsu = _DSU(range(n + 1))
    for a, b in edges:
        if not dsu.union(a, b):
            raise NotSpanning(f"edge {(a, b)} closes a cycle")
    ordered = sorted(edges)
    for i, e in enumerate(ordered):
        for f in ordered[i + 1:]:
            if crosses(e, f):
                raise Crossing(e, f)
    return Ncst(n, tuple(ordered))


def is_valid_tree(n: int, edges: Iterable) -> bool:
    try:
        validate_tree(n, edges)
    except (NotSpanning, Crossing):
        return False
    return True


# -- text / JSON ----------------------------------------------------------

def format_tree(t: Ncst) -> str:
    return ",".join(f"{a}-{b}" for a, b in t.edges)


def parse_tree(text: str, n: int | None = None) -> Ncst:
    text = text.strip()
    edges = []
    if text:
        for tok in text.split(","):
            a, _, b = tok.strip().partition("-")
            try:
                edges.append((int(a), int(b)))
            except ValueError:
                raise NotSpanning(f"malformed edge token {tok!r}") from None
    if n is None:
        n = len(edges)
    return validate_tree(n, edges)


def tree_to_json(t: Ncst) -> str:
    return json.dumps({"n": t.n, "edges": [list(e) for e in t.edges]})


def tree_from_json(text: str) -> Ncst:
    obj = json.loads(text)
    return validate_tree(obj["n"], obj["edges"])


# -- sub-structures --------------------------------------------------------

def shifted(t: Ncst, offset: int) -> frozenset[Edge]:
    return frozenset((a + offset, b + offset) for a, b in t.edges)


def subtree(t: Ncst, lo: int, hi: int) -> Ncst:
    """Edges inside ``[lo, hi]`` re-labelled to points ``0..hi-lo``."""
    return make_tree(hi - lo, [(a - lo, b - lo) for a, b in t.edges if lo <= a and b <= hi])


def inner_edges(edges: Iterable[Edge], lo: int, hi: int, exclude: Edge | None = None) -> list[Edge]:
    return [e for e in edges if lo <= e[0] and e[1] <= hi and e != exclude]


def _span_gap(edges: Iterable[Edge], a: int, b: int) -> int:
    """Largest s with [a, s] connected by the edges strictly beneath (a, b)."""
    beneath = inner_edges(edges, a, b, exclude=(a, b))
    dsu = _DSU(range(a, b + 1))
    for x, y in beneath:
        dsu.union(x, y)
    s = a
    root = dsu.find(a)
    while s + 1 <= b and dsu.find(s + 1) == root:
        s += 1
    return s


def gap_beneath(t: Ncst, e) -> int:
    e = _norm(e)
    if e not in t.edge_set:
        raise EdgeNotInTree(f"{e} is not an edge of the tree")
    return _span_gap(t.edges, *e)


def _overarching(edges: Iterable[Edge], e: Edge) -> Edge | None:
    c, d = e
    best = None
    for a, b in edges:
        if (a, b) != e and a <= c and d <= b:
            if best is None or b - a < best[1] - best[0]:
                best = (a, b)
    return best


def overarching_edge(t: Ncst, e) -> Edge | None:
    e = _norm(e)
    if e not in t.edge_set:
        raise EdgeNotInTree(f"{e} is not an edge of the tree")
    return _overarching(t.edges, e)


@dataclass(frozen=True, order=True)
class Segment:
    lo: int
    hi: int


def _minimal_segments(edges, e: Edge | None) -> list[Segment]:
    return sorted(Segment(*f) for f in edges if _overarching(edges, f) == e)


def minimal_segments(t: Ncst, e=None) -> list[Segment]:
    """Segments directly under ``e``; ``e=None`` gives the outermost ones."""
    if e is not None:
        e = _norm(e)
        if e not in t.edge_set:
            raise EdgeNotInTree(f"{e} is not an edge of the tree")
    return _minimal_segments(t.edges, e)


# -- recursive decomposition -----------------------------------------------

@dataclass(frozen=True)
class TreeDecomposition:
    pivot: Edge
    gap: int
    t_a: Ncst
    t_b: Ncst
    t_c: Ncst


def decompose_tree(t: Ncst) -> TreeDecomposition:
    if t.n == 0:
        raise EmptyTree("cannot decompose the empty tree")
    top = max(b for a, b in t.edges if a == 0)
    s = _span_gap(t.edges, 0, top)
    return TreeDecomposition(
        pivot=(0, top),
        gap=s,
        t_a=subtree(t, 0, s),
        t_b=subtree(t, s + 1, top),
        t_c=subtree(t, top, t.n),
    )


def compose_tree(t_a: Ncst, t_b: Ncst, t_c: Ncst) -> Ncst:
    s = t_a.n
    top = s + 1 + t_b.n
    edges = set(t_a.edges) | shifted(t_b, s + 1) | {(0, top)} | shifted(t_c, top)
    return make_tree(top + t_c.n, edges)


EMPTY_TREE = Ncst(0, ())


def enumerate_trees(n: int, cap: int | None = None) -> list[Ncst]:
    """Every non-crossing spanning tree on 0..n, built by recursive composition."""
    check_cap("enumeration", n, cap)
    return list(_trees(n))


def _trees(n: int) -> tuple[Ncst, ...]:
    if n in _TREE_CACHE:
        return _TREE_CACHE[n]
    if n == 0:
        out = (EMPTY_TREE,)
    else:
        acc = []
        for na in range(n):
            for nb in range(n - na):
                nc = n - 1 - na - nb
                for ta in _trees(na):
                    for tb in _trees(nb):
                        for tc in _trees(nc):
                            acc.append(compose_tree(ta, tb, tc))
        out = tuple(sorted(acc))
    _TREE_CACHE[n] = out
    return out


_TREE_CACHE: dict[int, tuple[Ncst, ...]] = {}
