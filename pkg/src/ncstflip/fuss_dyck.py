"""2-Dyck paths: validation, height profiles, first-return decomposition,
enumeration and Fuss-Catalan counting.

A path is stored as a string over ``"U"`` (+1) and ``"D"`` (-2). Step
indices in public results are 1-based, matching the usual height
convention ``height(j) = a_1 + ... + a_j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

from .config import check_cap
from .errors import (
    BadCharacter,
    EmptyPath,
    RejectLength,
    RejectNegativePrefix,
    RejectNonzeroTotal,
)

UP = "U"
DOWN = "D"
_GLYPHS = {"U": UP, "D": DOWN, "↗": UP, "↘": DOWN}
_WEIGHT = {UP: 1, DOWN: -2}


@dataclass(frozen=True, order=True)
class DyckPath:
    steps: str

    @property
    def n(self) -> int:
        return len(self.steps) // 3

    def __len__(self) -> int:
        return len(self.steps)

    def __str__(self) -> str:
        return self.steps

    def __add__(self, other: "DyckPath") -> "DyckPath":
        return DyckPath(self.steps + other.steps)

    def down_positions(self) -> frozenset[int]:
        return frozenset(i + 1 for i, c in enumerate(self.steps) if c == DOWN)


EMPTY = DyckPath("")


def validate_path(symbols) -> DyckPath:
    """Check the prefix and total conditions and return a :class:`DyckPath`.

    ``symbols`` may be a string or any iterable of ``"U"``/``"D"`` (or +1/-2).
    """
    steps = []
    for s in symbols:
        if s in (1, "+1"):
            s = UP
        elif s in (-2, "-2"):
            s = DOWN
        if s not in (UP, DOWN):
            raise BadCharacter(f"unknown step symbol {s!r}")
        steps.append(s)
    height = 0
    for j, s in enumerate(steps, start=1):
        height += _WEIGHT[s]
        if height < 0:
            raise RejectNegativePrefix(f"height {height} after step {j}")
    if height != 0:
        raise RejectNonzeroTotal(f"path ends at height {height}")
    if len(steps) % 3:
        raise RejectLength(f"length {len(steps)} is not a multiple of 3")
    return DyckPath("".join(steps))


def parse_path(text: str) -> DyckPath:
    text = text.strip()
    steps = []
    for ch in text:
        if ch.isspace():
            continue
        if ch not in _GLYPHS:
            raise BadCharacter(f"unexpected character {ch!r} in path text")
        steps.append(_GLYPHS[ch])
    return validate_path(steps)


def format_path(path: DyckPath) -> str:
    return path.steps


def height_profile(path: DyckPath) -> list[int]:
    """Heights after each step; ``profile[j-1] == height(j)``."""
    out = []
    h = 0
    for s in path.steps:
        h += _WEIGHT[s]
        out.append(h)
    return out


@dataclass(frozen=True)
class DyckDecomposition:
    a1: DyckPath
    a2: DyckPath
    b: DyckPath
    start_a1: int
    start_a2: int
    start_b: int


def decompose(path: DyckPath) -> DyckDecomposition:
    """Split ``path`` as ``U a1 U a2 D b``.

    ``start_*`` are the 1-based indices of the first step of each part; the
    structural up-steps sit at ``start_a1 - 1`` and ``start_a2 - 1``, the
    structural down-step at ``start_b - 1``.
    """
    if not path.steps:
        raise EmptyPath("cannot decompose the empty path")
    heights = [0] + height_profile(path)
    first_zero = next(j for j in range(1, len(heights)) if heights[j] == 0)
    # last visits of heights 0 and 1 strictly before the first return
    last = {0: 0, 1: None}
    for j in range(first_zero):
        if heights[j] in last:
            last[heights[j]] = j
    up1, up2 = last[0] + 1, last[1] + 1
    steps = path.steps
    return DyckDecomposition(
        a1=DyckPath(steps[up1:up2 - 1]),
        a2=DyckPath(steps[up2:first_zero - 1]),
        b=DyckPath(steps[first_zero:]),
        start_a1=up1 + 1,
        start_a2=up2 + 1,
        start_b=first_zero + 1,
    )


def compose(a1: DyckPath, a2: DyckPath, b: DyckPath) -> DyckPath:
    return DyckPath(UP + a1.steps + UP + a2.steps + DOWN + b.steps)


def fuss_catalan(k: int, n: int) -> int:
    if k < 1 or n < 0:
        raise ValueError("need k >= 1 and n >= 0")
    return comb((k + 1) * n, n) // (k * n + 1)


@lru_cache(maxsize=None)
def fuss_catalan_recurrence(k: int, n: int) -> int:
    """Sum over compositions of n-1 into k+1 parts; independent of the closed form."""
    if n == 0:
        return 1

    def parts(total, count):
        if count == 1:
            yield (total,)
            return
        for first in range(total + 1):
            for rest in parts(total - first, count - 1):
                yield (first,) + rest

    acc = 0
    for split in parts(n - 1, k + 1):
        prod = 1
        for i in split:
            prod *= fuss_catalan_recurrence(k, i)
        acc += prod
    return acc


def enumerate_paths(n: int, cap: int | None = None) -> list[DyckPath]:
    """All 2-Dyck paths of length 3n in plain string order ("D" < "U").

    This matches ``sorted()`` on :class:`DyckPath` and fixes the state
    indexing used by the transition matrices.
    """
    check_cap("enumeration", n, cap)
    out: list[DyckPath] = []
    buf: list[str] = []

    def extend(height, ups, downs):
        if ups == 2 * n and downs == n:
            out.append(DyckPath("".join(buf)))
            return
        if downs < n and height >= 2:
            buf.append(DOWN)
            extend(height - 2, ups, downs + 1)
            buf.pop()
        if ups < 2 * n:
            buf.append(UP)
            extend(height + 1, ups + 1, downs)
            buf.pop()

    extend(0, 0, 0)
    return out


def top_path(n: int) -> DyckPath:
    """2n up-steps followed by n down-steps; dominates every path of size n."""
    return DyckPath(UP * (2 * n) + DOWN * n)


def bottom_path(n: int) -> DyckPath:
    """``UUD`` repeated n times; dominated by every path of size n."""
    return DyckPath("UUD" * n)
