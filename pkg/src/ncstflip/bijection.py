"""Bijection between 2-Dyck paths of length 3n and non-crossing spanning
trees with n edges.

A path ``U A U B D C`` maps to the tree whose pivot edge is ``(0, t)``, with
the image of ``A`` on ``[0, s]``, of ``B`` on ``[s+1, t]`` and of ``C`` on
``[t, n]``. Both directions recurse on index ranges; no intermediate strings
or trees are materialised.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fuss_dyck import DOWN, UP, DyckPath, height_profile
from .ncst import Edge, Ncst, _span_gap, make_tree, subtree


@dataclass(frozen=True)
class Excursion:
    """A first-return excursion of a path and the tree segment it maps to.

    Steps ``start+1 .. end`` (1-based) of the path rise from height ``base``
    and first return to it at ``end``; the image is the subtree ``[lo, hi]``
    whose outer edge is ``(lo, hi)``.
    """

    start: int
    end: int
    base: int
    lo: int
    hi: int


def _walk(path: DyckPath):
    heights = [0] + height_profile(path)
    edges: list[Edge] = []
    excursions: list[Excursion] = []
    # explicit stack of (lo, hi, offset) index ranges; a range is a concatenation of excursions
    stack = [(0, len(path.steps), 0)]
    while stack:
        lo, hi, offset = stack.pop()
        while lo < hi:
            base = heights[lo]
            end = lo + 1
            while heights[end] != base:
                end += 1
            up2 = max(j for j in range(lo + 1, end) if heights[j] == base + 1)
            size_a = (up2 - lo - 1) // 3
            size_b = (end - up2 - 2) // 3
            top = offset + size_a + 1 + size_b
            edges.append((offset, top))
            excursions.append(Excursion(lo, end, base, offset, top))
            stack.append((lo + 1, up2, offset))
            stack.append((up2 + 1, end - 1, offset + size_a + 1))
            lo, offset = end, top
    return edges, excursions


def path_to_tree(path: DyckPath) -> Ncst:
    edges, _ = _walk(path)
    return make_tree(path.n, edges)


def excursions(path: DyckPath) -> list[Excursion]:
    """Every first-return excursion of ``path`` with its tree segment."""
    _, exc = _walk(path)
    return sorted(exc, key=lambda x: (x.start, x.end))


def tree_to_path(t: Ncst) -> DyckPath:
    right = {p: [] for p in range(t.n + 1)}
    for a, b in t.edges:
        right[a].append(b)
    for p in right:
        right[p].sort()
    out: list[str] = []

    def emit(lo, hi):
        while lo < hi:
            top = max(b for b in right[lo] if b <= hi)
            s = _span_gap(t.edges, lo, top)
            out.append(UP)
            emit(lo, s)
            out.append(UP)
            emit(s + 1, top)
            out.append(DOWN)
            lo = top

    emit(0, t.n)
    return DyckPath("".join(out))


def check_concatenation(u: DyckPath, v: DyckPath) -> bool:
    tu, tv, tuv = path_to_tree(u), path_to_tree(v), path_to_tree(u + v)
    return subtree(tuv, 0, u.n) == tu and subtree(tuv, u.n, u.n + v.n) == tv
