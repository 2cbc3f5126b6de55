"""Canonical flip paths simulating adjacent moves, their encoding, and the
congestion census.

An adjacent move that pushes a down-step one position to the left is the
*Left* case; a *Right* move is handled by building the Left path for the
reversed pair and reversing it. A Left move is Type 1 or Type 2 depending on
whether the first descent below the moved down-step lands one or two units
lower. Type 1 is simulated by a right shift followed by flips M1 and M2;
Type 2 by flip M3, a left shift, and flip M4. Shifts recurse over minimal
segments with the flips M5, M6, M7. Flips that would re-add the edge they
remove are left out of the path.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable

from .bijection import excursions, path_to_tree, tree_to_path
from .chains import am_neighbors, fm_transition_prob
from .config import check_cap
from .errors import (
    IndexOutOfRange,
    NoPreimage,
    NotAdjacentMove,
    ShiftPreconditionViolated,
)
from .fuss_dyck import UP, DyckPath, enumerate_paths, height_profile
from .ncst import Edge, Ncst, _overarching, _span_gap, make_tree


class Direction(str, Enum):
    LEFT = "Left"
    RIGHT = "Right"


class MoveType(str, Enum):
    TYPE1 = "Type1"
    TYPE2 = "Type2"


SHIFT_TAG = {MoveType.TYPE1: "S1", MoveType.TYPE2: "S2"}
TOP_TAGS = ("M1", "M2", "M3", "M4")


@dataclass(frozen=True)
class MoveClassification:
    """Geometry of an adjacent move, normalised to the Left case.

    ``source``/``target`` are the normalised endpoints (the down-step of
    ``source`` at ``y`` moves to ``x = y - 1`` in ``target``); ``x_prime`` and
    ``y_prime`` bound the excursion that contains the move.
    """

    direction: Direction
    move_type: MoveType
    x: int
    y: int
    x_prime: int
    y_prime: int
    source: DyckPath
    target: DyckPath


@dataclass(frozen=True)
class AnnotatedStep:
    before: Ncst
    after: Ncst
    removed: Edge
    added: Edge
    tag: str
    depth: int
    encoding_tag: str
    index: int = 0

    def reversed(self) -> "AnnotatedStep":
        return AnnotatedStep(self.after, self.before, self.added, self.removed,
                             self.tag, self.depth, self.encoding_tag, self.index)


@dataclass(frozen=True)
class EncodingTriple:
    direction: Direction
    move_tag: str
    depth: int

    def astuple(self):
        return (self.direction.value, self.move_tag, self.depth)


@dataclass
class CanonicalPath:
    start: DyckPath
    end: DyckPath
    classification: MoveClassification
    steps: list[AnnotatedStep] = field(default_factory=list)
    omitted: tuple[str, ...] = ()
    shift_size: int = 0     # edges carried by the shift block

    def __len__(self) -> int:
        return len(self.steps)

    def states(self) -> list[Ncst]:
        if not self.steps:
            return [path_to_tree(self.start)]
        return [self.steps[0].before] + [s.after for s in self.steps]

    def shift_blocks(self) -> list[list[AnnotatedStep]]:
        blocks, cur = [], []
        for s in self.steps:
            if s.encoding_tag in ("S1", "S2"):
                cur.append(s)
            elif cur:
                blocks.append(cur)
                cur = []
        if cur:
            blocks.append(cur)
        return blocks


# -- classification ----------------------------------------------------------

def _swap_position(i: DyckPath, f: DyckPath) -> int:
    if i.n != f.n or i == f or f not in am_neighbors(i):
        raise NotAdjacentMove("endpoints are not joined by an adjacent move")
    return next(j for j in range(1, len(i.steps) + 1) if i.steps[j - 1] != f.steps[j - 1])


def classify_move(i: DyckPath, f: DyckPath) -> MoveClassification:
    j = _swap_position(i, f)
    if i.steps[j - 1] == UP:
        direction, src, dst = Direction.LEFT, i, f
    else:
        direction, src, dst = Direction.RIGHT, f, i
    x, y = j, j + 1
    h = [0] + height_profile(src)
    hy = h[y]
    y_prime = next(k for k in range(y + 1, len(h)) if h[k] < hy)
    move_type = MoveType.TYPE1 if h[y_prime] == hy - 1 else MoveType.TYPE2
    x_prime = max(k for k in range(x) if h[k] == h[y_prime])
    return MoveClassification(direction, move_type, x, y, x_prime, y_prime, src, dst)


# -- tree state with recorded flips --------------------------------------------

class _Recorder:
    def __init__(self, n: int, edges: Iterable[Edge]):
        self.n = n
        self.edges = set(edges)
        self.steps: list[AnnotatedStep] = []

    def tree(self) -> Ncst:
        return make_tree(self.n, self.edges)

    def flip(self, old: Edge, new: Edge, tag: str, depth: int, enc: str) -> None:
        if old == new:
            return
        if old not in self.edges or new in self.edges:
            raise RuntimeError(f"flip {old}->{new} not applicable")
        before = self.tree()
        self.edges.remove(old)
        self.edges.add(new)
        self.steps.append(AnnotatedStep(before, self.tree(), old, new, tag, depth, enc))


def _relabel(edges: set, lo: int, hi: int, by: int, keep: Edge | None = None) -> None:
    """Move every edge inside [lo, hi] (except ``keep``) by ``by`` positions."""
    inside = [e for e in edges if lo <= e[0] and e[1] <= hi and e != keep]
    for e in inside:
        edges.remove(e)
    for a, b in inside:
        edges.add((a + by, b + by))


def _segments_under(edges, s: int, t: int) -> list[Edge]:
    return sorted(e for e in edges
                  if s <= e[0] and e[1] <= t and e != (s, t) and _overarching(edges, e) == (s, t))


def _shift_right(rec: _Recorder, s: int, t: int, depth: int, enc: str) -> None:
    for p, q in reversed(_segments_under(rec.edges, s, t)):
        g = _span_gap(rec.edges, p, q)                                    # (#0)
        if q >= g + 2:
            rec.flip((p, q), (p, g + 1), "M5", depth, enc)                # (#1)
        if p <= g - 1:
            _shift_right(rec, p, g + 1, depth + 1, enc)                   # (#2)
        rec.flip((p, g + 1), (g + 1, q + 1), "M6", depth, enc)            # (#3)
        if q >= g + 2:
            _shift_right(rec, g + 1, q + 1, depth + 1, enc)               # (#4)
        if p <= g - 1:
            rec.flip((g + 1, q + 1), (p + 1, q + 1), "M7", depth, enc)    # (#5)


def _check_shift_span(edges, span: Edge) -> None:
    s, t = span
    if span not in edges:
        raise ShiftPreconditionViolated(f"{span} is not an edge")
    if t - s < 2:
        raise ShiftPreconditionViolated("nothing beneath the span to shift")


def shift_right(tree: Ncst, span, depth: int = 1, step: int = 1,
                encoding_tag: str = "S1") -> list[AnnotatedStep]:
    """Flip sequence moving the subtree ``[s, t-1]`` under ``span=(s, t)`` to ``[s+1, t]``."""
    span = tuple(span)
    _check_shift_span(tree.edge_set, span)
    if _span_gap(tree.edges, *span) != span[1] - 1:
        raise ShiftPreconditionViolated(f"the part under {span} must hang from its left end")
    rec = _Recorder(tree.n, tree.edges)
    _shift_right(rec, span[0], span[1], depth, encoding_tag)
    return [_with_index(st, step + k) for k, st in enumerate(rec.steps)]


def shift_left(tree: Ncst, span, depth: int = 1, step: int = 1,
               encoding_tag: str = "S2") -> list[AnnotatedStep]:
    """Exact reverse of :func:`shift_right`: ``[s+1, t]`` under ``span`` moves to ``[s, t-1]``."""
    span = tuple(span)
    _check_shift_span(tree.edge_set, span)
    if _span_gap(tree.edges, *span) != span[0]:
        raise ShiftPreconditionViolated(f"the part under {span} must hang from its right end")
    edges = set(tree.edges)
    _relabel(edges, span[0] + 1, span[1], -1, keep=span)
    rec = _Recorder(tree.n, edges)
    _shift_right(rec, span[0], span[1], depth, encoding_tag)
    back = [st.reversed() for st in reversed(rec.steps)]
    return [_with_index(st, step + k) for k, st in enumerate(back)]


def _with_index(st: AnnotatedStep, k: int) -> AnnotatedStep:
    return AnnotatedStep(st.before, st.after, st.removed, st.added, st.tag, st.depth,
                         st.encoding_tag, k)


# -- path construction -----------------------------------------------------------

@dataclass(frozen=True)
class _Frame:
    """Tree coordinates of the excursion carrying a Left move."""

    move_type: MoveType
    a: Edge
    e: Edge
    p: int      # left end of e (Type 1) / q (Type 2)
    g_e: int
    g_a: int


def _frame(c: MoveClassification) -> _Frame:
    src = c.source
    exc = next(x for x in excursions(src) if x.start == c.x_prime and x.end == c.y_prime)
    h = [0] + height_profile(src)
    base = h[c.x_prime]

    def last_visit(level):
        return max(k for k in range(c.x_prime, c.x) if h[k] == level)

    a = (exc.lo, exc.hi)
    if c.move_type is MoveType.TYPE1:
        u2 = last_visit(base + 1) + 1                 # 1-based index of the second up-step
        size_a1 = (u2 - c.x_prime - 2) // 3
        size_a2 = (c.x - 1 - u2) // 3
        p = exc.lo + size_a1
        g_e = p + size_a2
        e = (p, g_e + 1)
        g_a = None
    else:
        u2 = last_visit(base + 1) + 1
        u3 = last_visit(base + 2) + 1
        size_a1 = (u2 - c.x_prime - 2) // 3
        size_a2 = (u3 - u2 - 1) // 3
        size_a3 = (c.x - 1 - u3) // 3
        g_a = exc.lo + size_a1
        p = g_a + 1 + size_a2
        g_e = p + size_a3
        e = (p, g_e + 1)
    return _Frame(c.move_type, a, e, p, g_e, g_a)


def _build_left(c: MoveClassification) -> tuple[list[AnnotatedStep], tuple[str, ...], int]:
    tree = path_to_tree(c.source)
    fr = _frame(c)
    rec = _Recorder(tree.n, tree.edges)
    omitted = []
    a1, a2 = fr.a
    if fr.move_type is MoveType.TYPE1:
        p, g_e = fr.p, fr.g_e
        size = g_e - p
        if size:
            _shift_right(rec, p, g_e + 1, 1, "S1")
        if p == a1:
            omitted.append("M1")
        rec.flip((p, g_e + 1), (a1, g_e + 1), "M1", 0, "M1")
        rec.flip((a1, a2), (g_e + 1, a2), "M2", 0, "M2")
    else:
        q, g_e, g_a = fr.p, fr.g_e, fr.g_a
        size = q - g_a - 1
        rec.flip((q, g_e + 1), (g_a, q), "M3", 0, "M3")
        if size:
            for st in shift_left(rec.tree(), (g_a, q), 1, encoding_tag="S2"):
                rec.steps.append(st)
            _relabel(rec.edges, g_a + 1, q, -1, keep=(g_a, q))
        if q == g_e:
            omitted.append("M4")
        rec.flip((g_a, q), (g_a, g_e), "M4", 0, "M4")
    return rec.steps, tuple(omitted), size


def build_path(i: DyckPath, f: DyckPath) -> CanonicalPath:
    c = classify_move(i, f)
    steps, omitted, size = _build_left(c)
    if c.direction is Direction.RIGHT:
        steps = [st.reversed() for st in reversed(steps)]
    steps = [_with_index(st, k + 1) for k, st in enumerate(steps)]
    return CanonicalPath(i, f, c, steps, omitted, size)


# -- encoding ------------------------------------------------------------------------

def encode(path: CanonicalPath, k: int) -> EncodingTriple:
    if not 0 <= k < len(path.steps):
        raise IndexOutOfRange(f"step {k} outside a path of length {len(path.steps)}")
    st = path.steps[k]
    depth = st.depth if st.encoding_tag in ("S1", "S2") else 1
    return EncodingTriple(path.classification.direction, st.encoding_tag, depth)


def _flip_diff(z: Ncst, z2: Ncst) -> tuple[Edge, Edge]:
    gone = z.edge_set - z2.edge_set
    new = z2.edge_set - z.edge_set
    if z.n != z2.n or len(gone) != 1 or len(new) != 1:
        raise NoPreimage("the two trees are not one flip apart")
    return next(iter(gone)), next(iter(new))


def _move(edges: set, old: Edge, new: Edge) -> None:
    if old == new:
        return
    if old not in edges:
        raise NoPreimage(f"edge {old} missing during reconstruction")
    edges.remove(old)
    edges.add(new)


def _unwind_shift(z: Ncst, z2: Ncst, depth: int) -> tuple[set, Edge]:
    """Initial state of the depth-1 right-shift call whose run contains ``z -> z2``.

    Returns the edges of that state and the call's span edge.
    """
    removed, added = _flip_diff(z, z2)
    edges = set(z.edges)
    chain = [removed]
    for _ in range(depth):
        up = _overarching(edges, chain[-1])
        if up is None:
            raise NoPreimage("recursion depth exceeds the nesting of the moved edge")
        chain.append(up)

    # bottom level: the flip itself is M5, M6 or M7 of the segment pivot chain[0]
    (r0, r1), (n0, n1) = removed, added
    s, t = chain[1]
    if n0 == r0 and n1 < r1:
        p, q, g = r0, r1, n1 - 1                     # M5: state (#0)
    elif n1 == r1 and n0 < r0:
        g, q, p = r0 - 1, r1 - 1, n0 - 1              # M7: undo from state (#4)
        _relabel(edges, g + 2, q + 1, -1, keep=removed)
        _move(edges, removed, (p, g + 1))
        _relabel(edges, p + 1, g + 1, -1, keep=(p, g + 1))
        _move(edges, (p, g + 1), (p, q))
    elif n0 == r1:
        p, g, q = r0, r1 - 1, n1 - 1                  # M6: undo from state (#2)
        _relabel(edges, p + 1, g + 1, -1, keep=removed)
        _move(edges, removed, (p, q))
    else:
        raise NoPreimage("flip does not match any shift move")
    if not (s <= p and q < t):
        raise NoPreimage("moved edge escapes its overarching span")
    _relabel(edges, q + 1, t, -1, keep=(s, t))

    for level in range(2, depth + 1):
        c0, c1 = chain[level - 1]
        s, t = chain[level]
        gap = _span_gap(edges, s, t)
        if gap >= c1:
            p, q = c0, gap                           # inside the first recursive call
            _move(edges, (c0, c1), (p, q))
        else:
            p, g, q = gap, c0 - 1, c1 - 1            # inside the second recursive call
            _move(edges, (c0, c1), (p, g + 1))
            _relabel(edges, p + 1, g + 1, -1, keep=(p, g + 1))
            _move(edges, (p, g + 1), (p, q))
        _relabel(edges, q + 1, t, -1, keep=(s, t))
    return edges, chain[-1]


def _decode_left(z: Ncst, z2: Ncst, tag: str, depth: int) -> tuple[Ncst, Ncst]:
    n = z.n
    if tag in TOP_TAGS and depth != 1:
        raise NoPreimage("top-level moves carry depth 1")
    if tag == "S1":
        start, e0 = _unwind_shift(z, z2, depth)
        p, c = e0
        a = _overarching(start, e0)
        if a is None:
            raise NoPreimage("shifted edge has no overarching edge")
        end = set(start)
        _relabel(end, p, c - 1, 1, keep=e0)
        _move(end, e0, (a[0], c))
        _move(end, a, (c, a[1]))
        return make_tree(n, start), make_tree(n, end)
    if tag == "S2":
        after_shift, e0 = _unwind_shift(z2, z, depth)
        g_a, q = e0
        a = _overarching(after_shift, e0)
        if a is None:
            raise NoPreimage("shifted edge has no overarching edge")
        g_e = _span_gap(after_shift, *a)
        start = set(after_shift)
        _relabel(start, g_a, q - 1, 1, keep=e0)
        _move(start, e0, (q, g_e + 1))
        end = set(after_shift)
        _move(end, e0, (g_a, g_e))
        return make_tree(n, start), make_tree(n, end)

    removed, added = _flip_diff(z, z2)
    if tag == "M1":
        p, c = removed
        a = _overarching(z.edges, removed)
        if a is None or added != (a[0], c):
            raise NoPreimage("not an M1 flip")
        start = set(z.edges)
        _relabel(start, p + 1, c, -1, keep=removed)
        end = set(z2.edges)
        _move(end, a, (c, a[1]))
        return make_tree(n, start), make_tree(n, end)
    if tag == "M2":
        a1, a2 = removed
        c = added[0]
        if added[1] != a2 or (a1, c) not in z.edge_set:
            raise NoPreimage("not an M2 flip")
        p = _span_gap(z.edges, a1, c)
        start = set(z.edges)
        _move(start, (a1, c), (p, c))
        _relabel(start, p + 1, c, -1, keep=(p, c))
        return make_tree(n, start), z2
    if tag == "M3":
        q, c = removed
        g_a = added[0]
        if added[1] != q:
            raise NoPreimage("not an M3 flip")
        end = set(z2.edges)
        _relabel(end, g_a + 1, q, -1, keep=added)
        _move(end, added, (g_a, c - 1))
        return z, make_tree(n, end)
    if tag == "M4":
        g_a, q = removed
        g_e = added[1]
        if added[0] != g_a:
            raise NoPreimage("not an M4 flip")
        start = set(z.edges)
        _relabel(start, g_a, q - 1, 1, keep=removed)
        _move(start, removed, (q, g_e + 1))
        return make_tree(n, start), z2
    raise NoPreimage(f"unknown move tag {tag!r}")


def decode(z: Ncst, z2: Ncst, triple: EncodingTriple) -> tuple[DyckPath, DyckPath]:
    """Recover the adjacent move (I, F) whose canonical path uses ``z -> z2`` with ``triple``."""
    if not 1 <= triple.depth <= max(z.n, 1):
        raise NoPreimage("depth outside [1, n]")
    try:
        if triple.direction is Direction.LEFT:
            t_i, t_f = _decode_left(z, z2, triple.move_tag, triple.depth)
        else:
            t_f, t_i = _decode_left(z2, z, triple.move_tag, triple.depth)
        i, f = tree_to_path(t_i), tree_to_path(t_f)
        path = build_path(i, f)
    except (NoPreimage, NotAdjacentMove):
        raise
    except (ValueError, KeyError, StopIteration, RuntimeError) as exc:
        raise NoPreimage(f"reconstruction failed: {exc}") from None
    for k, st in enumerate(path.steps):
        if st.before == z and st.after == z2 and encode(path, k) == triple:
            return i, f
    raise NoPreimage("reconstructed pair does not route through this transition")


# -- census -------------------------------------------------------------------------------

def am_edges(n: int) -> list[tuple[DyckPath, DyckPath]]:
    out = []
    for x in enumerate_paths(n):
        for y in sorted(am_neighbors(x)):
            out.append((x, y))
    return out


@dataclass
class CongestionReport:
    n: int
    usage: dict[tuple[Ncst, Ncst], int]
    max_count: int
    bound_12n: int
    congestion: Fraction
    max_path_length: int
    paths: int
    omitted_self_loops: int
    injective: bool

    def summary(self) -> dict:
        return {
            "n": self.n,
            "max_count": self.max_count,
            "bound_12n": self.bound_12n,
            "B": str(self.congestion),
            "B_float": float(self.congestion),
            "B_over_n4": float(self.congestion) / self.n ** 4 if self.n else None,
            "max_path_length": self.max_path_length,
            "paths": self.paths,
            "omitted_self_loops": self.omitted_self_loops,
            "injective": self.injective,
        }


def congestion_census(n: int, cap: int | None = None) -> CongestionReport:
    """Route every adjacent move through its canonical path and count transition loads."""
    check_cap("census", n, cap)
    users: dict[tuple[Ncst, Ncst], set] = defaultdict(set)
    load: dict[tuple[Ncst, Ncst], Fraction] = defaultdict(Fraction)
    triples: dict[tuple, tuple] = {}
    injective = True
    p_am = Fraction(1, 6 * n - 2) if n else Fraction(0)
    longest = 0
    omitted = 0
    edges = am_edges(n)
    for i, f in edges:
        path = build_path(i, f)
        longest = max(longest, len(path))
        omitted += len(path.omitted)
        for k, st in enumerate(path.steps):
            key = (st.before, st.after)
            if (i, f) not in users[key]:
                users[key].add((i, f))
                load[key] += p_am * len(path)
            tkey = (key, encode(path, k))
            if triples.setdefault(tkey, (i, f)) != (i, f):
                injective = False
    congestion = Fraction(0)
    for key, total in load.items():
        ratio = total / fm_transition_prob(*key)
        if ratio > congestion:
            congestion = ratio
    usage = {k: len(v) for k, v in users.items()}
    return CongestionReport(
        n=n,
        usage=usage,
        max_count=max(usage.values(), default=0),
        bound_12n=12 * n,
        congestion=congestion,
        max_path_length=longest,
        paths=len(edges),
        omitted_self_loops=omitted,
        injective=injective,
    )
